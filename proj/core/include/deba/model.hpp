#pragma once

// Domain entities of a cloud-assisted WBAN deployment and the
// quality-driven aggregation formulas evaluated over them.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace deba {

/// Raised when an argument breaks a documented precondition.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2, Vec2) = default;
};

double distance(Vec2 a, Vec2 b);
double norm(Vec2 v);

enum class SensorKind { ECG, EEG, EMG, Motion, Glucose };

std::string_view to_string(SensorKind kind);
SensorKind sensor_kind_from_string(std::string_view name);

/// Battery state shared by sensors and LMUs.
struct EnergyState {
    double initial = 0.0;  // J
    double residual = 0.0; // J
    bool alive = true;
};

/// Finite buffer in bits.
struct Buffer {
    double total = 0.0;
    double occupied = 0.0;

    [[nodiscard]] double free() const { return total - occupied; }
};

struct SensorNode {
    int id = 0;
    SensorKind kind = SensorKind::ECG;
    Vec2 position;     // body-local, meters
    double data_rate = 0.0; // bits/s
    Buffer buffer;
    EnergyState energy;
};

struct Lmu {
    int id = 0;
    Buffer buffer;
    EnergyState energy;
    double service_rate = 0.0; // bits/s processed by the aggregator
};

struct BaseStation {
    int id = 0;
    Vec2 position;
};

struct Wban {
    int id = 0;
    std::vector<SensorNode> sensors;
    Lmu lmu;
    double criticality = 0.0;
    Vec2 position; // field-level, meters
    Vec2 velocity;

    [[nodiscard]] bool critical() const { return criticality > 0.5; }
};

struct QualityWeights {
    double delay = 1.0;
    double energy = 1.0;
    double buffer = 1.0;
    double scaling = 1.0; // upper bound of the energy weight

    [[nodiscard]] double sum() const { return delay + energy + buffer; }
};

/// Throws DomainError if any weight is outside its range or non-finite.
void validate(const QualityWeights& w);

struct DelayBreakdown {
    double propagation = 0.0;
    double transmission = 0.0;
    double aggregation = 0.0;
    double queueing = 0.0;
    double total = 0.0;

    /// Builds a breakdown whose total is the sum of its components.
    static DelayBreakdown from_components(double propagation, double transmission,
                                          double aggregation, double queueing);
};

struct QosState {
    double required = 1.0; // bits per epoch
    double present = 0.0;  // bits per epoch
};

struct CostParams {
    double gamma = 1.0;
    double chunk_cost = 0.01;   // cost-units per chunk
    double chunk_size = 1.0e6;  // bits per chunk
    double price_intra = 2e-9;  // cost-units per bit
    double price_inter = 4e-9;  // cost-units per bit
    double resolution = 1.0;    // real-valued multiplier on the intra adjacency
};

void validate(const CostParams& p);

/// Share of the end-to-end delay that is not queueing; 1 for an idle link.
double delay_weight(const DelayBreakdown& d);

double energy_weight(double energy_residual, double energy_initial, double scaling);

double buffer_weight(double buffer_total, double buffer_occupied);

/// Per-WBAN aggregated traffic in bits for one epoch.
///
/// `rate_bits[i]` must already be bits per epoch. Links with
/// `connected[i] == 0` contribute nothing.
double aggregated_traffic(std::span<const std::uint8_t> connected, double base_traffic,
                          std::span<const double> rate_bits, std::span<const double> loss);

double quality_term(const QualityWeights& w, double traffic);

/// Quality-weighted traffic summed over a horizon of epochs.
double aggregation_function(std::span<const QualityWeights> weights_per_epoch,
                            std::span<const double> traffic_per_epoch);

/// Number of chunks needed to carry `volume_bits`.
std::int64_t chunk_count(double volume_bits, double chunk_size);

/// Sum over sensors of gamma * chunk_cost * k_i * f_i.
double aggregation_cost(const CostParams& params, std::span<const std::int64_t> chunk_counts,
                        std::span<const double> agg_values);

/// QoS deficit relative to requirement, scaled by the aggregation cost.
/// Epochs where present >= required contribute zero.
double qos_deficit(std::span<const QosState> qos, double cost);

} // namespace deba
