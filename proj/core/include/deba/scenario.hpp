#pragma once

#include "deba/mobility.hpp"
#include "deba/model.hpp"
#include "deba/optimizer.hpp"
#include "deba/radio.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace deba {

/// Scenario file or run configuration problem. `line()` is 0 when not tied to a line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line)
    {
    }

    [[nodiscard]] int line() const { return line_; }

private:
    int line_;
};

/// A file could not be read or written. The message names the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Mode { DebaP1, DebaP1P2, NoOpt, GreedyBaseline };

std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view name);

/// One row of the body sensor placement table. Positions are in centimeters.
struct SensorSpec {
    SensorKind kind = SensorKind::ECG;
    double rate_bps = 0.0;
    double x_cm = 0.0;
    double y_cm = 0.0;

    friend bool operator==(const SensorSpec&, const SensorSpec&) = default;
};

std::vector<SensorSpec> default_sensor_table();

struct Scenario {
    int n_wbans = 400;
    int sensors_per_wban = 8;
    int n_bs = 15;
    double duration = 3600.0;    // s
    double epoch_length = 1.0;   // s
    double packet_size = 1.0e6;  // bits
    double packet_rate = 6.0;    // packets/s
    Mode mode = Mode::DebaP1P2;
    std::uint64_t seed = 1;
    double energy_scaling = 1.0;

    std::vector<SensorSpec> sensor_table = default_sensor_table();
    double sensor_buffer_bits = 8.0e6;
    double sensor_energy_j = 0.5;

    double lmu_x_cm = 32.0;
    double lmu_y_cm = 68.0;
    double lmu_buffer_bits = 64.0e6;
    double lmu_energy_j = 50.0;
    double lmu_service_rate = 2.0e6; // bits/s

    RadioParams radio;
    double intra_rate = 1.0e6; // bits/s
    double inter_rate = 2.0e6; // bits/s
    ChannelModel intra_channel = ChannelModel::rayleigh_intra();
    ChannelModel inter_channel = ChannelModel::lognormal_inter();

    MobilityParams mobility;
    CostParams costs;
    Constraints constraints;
    SolverParams solver;

    [[nodiscard]] int epochs() const;

    /// Throws ConfigError naming the violated invariant.
    void validate() const;

    friend bool operator==(const Scenario&, const Scenario&);
};

/// Parses the flat `key = value` format. Unknown keys and malformed values
/// raise ConfigError with the offending line number; absent keys keep defaults.
Scenario parse_scenario(std::string_view text);

Scenario load_scenario(const std::filesystem::path& path);

/// Writes every key with round-trip precision.
std::string serialize(const Scenario& s);

void save_scenario(const Scenario& s, const std::filesystem::path& path);

} // namespace deba
