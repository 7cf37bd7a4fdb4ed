#include "deba/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace deba {

std::string_view to_string(Mode mode)
{
    switch (mode) {
    case Mode::DebaP1: return "deba-p1";
    case Mode::DebaP1P2: return "deba-p1p2";
    case Mode::NoOpt: return "no-opt";
    case Mode::GreedyBaseline: return "greedy";
    }
    return "?";
}

Mode mode_from_string(std::string_view name)
{
    for (auto m : {Mode::DebaP1, Mode::DebaP1P2, Mode::NoOpt, Mode::GreedyBaseline}) {
        if (to_string(m) == name) {
            return m;
        }
    }
    throw ConfigError("unknown mode '" + std::string(name) + "' (expected deba-p1, deba-p1p2, no-opt or greedy)");
}

std::vector<SensorSpec> default_sensor_table()
{
    return {
        {SensorKind::ECG, 71.0e3, 15, 78},     {SensorKind::Motion, 35.0e3, 20, 52},
        {SensorKind::EEG, 43.2e3, 57, 90},     {SensorKind::Glucose, 1.6e3, 44, 108},
        {SensorKind::EMG, 100.0e3, 17, 99},    {SensorKind::EMG, 100.0e3, 22, 120},
        {SensorKind::Motion, 35.0e3, 34, 0},   {SensorKind::Motion, 35.0e3, 50, 0},
    };
}

int Scenario::epochs() const
{
    return static_cast<int>(std::llround(duration / epoch_length));
}

void Scenario::validate() const
{
    auto require = [](bool ok, const char* what) {
        if (!ok) {
            throw ConfigError(what);
        }
    };
    require(n_wbans >= 1, "n_wbans must be >= 1");
    require(sensors_per_wban >= 1, "sensors_per_wban must be >= 1");
    require(n_bs >= 1, "n_bs must be >= 1");
    require(epoch_length > 0.0, "epoch_length must be positive");
    require(duration >= epoch_length, "duration must cover at least one epoch");
    require(std::abs(duration / epoch_length - std::round(duration / epoch_length)) < 1e-9,
            "duration must be a multiple of epoch_length");
    require(packet_size > 0.0 && packet_rate > 0.0, "packet_size and packet_rate must be positive");
    require(!sensor_table.empty(), "sensor table must not be empty");
    for (const auto& row : sensor_table) {
        require(row.rate_bps > 0.0, "sensor data rate must be positive");
    }
    require(sensor_buffer_bits > 0.0 && sensor_energy_j > 0.0, "sensor buffer and energy must be positive");
    require(lmu_buffer_bits > 0.0 && lmu_energy_j > 0.0 && lmu_service_rate > 0.0,
            "LMU buffer, energy and service rate must be positive");
    require(intra_rate > 0.0 && inter_rate > 0.0, "link rates must be positive");
    require(energy_scaling > 0.0, "energy_scaling must be positive");
    require(solver.max_iterations >= 1 && solver.tolerance > 0.0 && solver.step0 > 0.0 &&
                solver.c_units >= 0.0 && solver.check_every >= 1 && solver.feasibility_tol > 0.0,
            "solver parameters out of range");
    try {
        deba::validate(radio);
        deba::validate(intra_channel);
        deba::validate(inter_channel);
        deba::validate(mobility);
        deba::validate(costs);
        constraints.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    require(intra_channel.kind == FadingKind::RayleighIntra && inter_channel.kind == FadingKind::LogNormalInter,
            "channel kinds are fixed: Rayleigh intra, log-normal inter");
}

namespace {

std::string format_real(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(std::string_view v, int line, std::string_view key)
{
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size() || !std::isfinite(out)) {
        throw ConfigError("'" + std::string(key) + "': expected a number, got '" + std::string(v) + "'", line);
    }
    return out;
}

template <class Int>
Int parse_int(std::string_view v, int line, std::string_view key)
{
    Int out{};
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size()) {
        throw ConfigError("'" + std::string(key) + "': expected an integer, got '" + std::string(v) + "'", line);
    }
    return out;
}

struct Field {
    std::string key;
    std::function<void(Scenario&, std::string_view, int)> set;
    std::function<std::string(const Scenario&)> get;
};

template <class Ref>
Field real(std::string key, Ref ref)
{
    return {key,
            [ref, key](Scenario& s, std::string_view v, int line) { ref(s) = parse_real(v, line, key); },
            [ref](const Scenario& s) { return format_real(ref(s)); }};
}

template <class Ref>
Field integer(std::string key, Ref ref)
{
    return {key,
            [ref, key](Scenario& s, std::string_view v, int line) {
                using T = std::remove_reference_t<decltype(ref(s))>;
                ref(s) = parse_int<T>(v, line, key);
            },
            [ref](const Scenario& s) { return std::to_string(ref(s)); }};
}

#define DEBA_REF(expr) [](auto& s) -> auto& { return s.expr; }

const std::vector<Field>& fields()
{
    static const std::vector<Field> table = {
        integer("n_wbans", DEBA_REF(n_wbans)),
        integer("sensors_per_wban", DEBA_REF(sensors_per_wban)),
        integer("n_bs", DEBA_REF(n_bs)),
        real("duration", DEBA_REF(duration)),
        real("epoch_length", DEBA_REF(epoch_length)),
        real("packet_size", DEBA_REF(packet_size)),
        real("packet_rate", DEBA_REF(packet_rate)),
        {"mode",
         [](Scenario& s, std::string_view v, int line) {
             try {
                 s.mode = mode_from_string(v);
             } catch (const ConfigError& e) {
                 throw ConfigError(e.what(), line);
             }
         },
         [](const Scenario& s) { return std::string(to_string(s.mode)); }},
        integer("seed", DEBA_REF(seed)),
        real("energy_scaling", DEBA_REF(energy_scaling)),

        real("sensor.buffer_bits", DEBA_REF(sensor_buffer_bits)),
        real("sensor.energy_j", DEBA_REF(sensor_energy_j)),

        real("lmu.x_cm", DEBA_REF(lmu_x_cm)),
        real("lmu.y_cm", DEBA_REF(lmu_y_cm)),
        real("lmu.buffer_bits", DEBA_REF(lmu_buffer_bits)),
        real("lmu.energy_j", DEBA_REF(lmu_energy_j)),
        real("lmu.service_rate", DEBA_REF(lmu_service_rate)),

        real("radio.e_tx", DEBA_REF(radio.e_tx)),
        real("radio.e_rx", DEBA_REF(radio.e_rx)),
        real("radio.e_amp", DEBA_REF(radio.e_amp)),
        real("radio.alpha_intra_min", DEBA_REF(radio.alpha_intra.min)),
        real("radio.alpha_intra_max", DEBA_REF(radio.alpha_intra.max)),
        real("radio.alpha_inter_min", DEBA_REF(radio.alpha_inter.min)),
        real("radio.alpha_inter_max", DEBA_REF(radio.alpha_inter.max)),
        real("radio.tx_power_mobile", DEBA_REF(radio.tx_power_mobile)),
        real("radio.tx_power_static", DEBA_REF(radio.tx_power_static)),
        real("radio.intra_rate", DEBA_REF(intra_rate)),
        real("radio.inter_rate", DEBA_REF(inter_rate)),

        real("channel.intra_reference_distance", DEBA_REF(intra_channel.reference_distance)),
        real("channel.intra_kappa", DEBA_REF(intra_channel.outage_scale)),
        real("channel.inter_reference_distance", DEBA_REF(inter_channel.reference_distance)),
        real("channel.inter_kappa", DEBA_REF(inter_channel.outage_scale)),
        real("channel.inter_sigma_db", DEBA_REF(inter_channel.shadowing_sigma_db)),
        real("channel.mobile_scale", DEBA_REF(inter_channel.mobile_scale)),

        real("mobility.area_width", DEBA_REF(mobility.area_width)),
        real("mobility.area_height", DEBA_REF(mobility.area_height)),
        real("mobility.v_min", DEBA_REF(mobility.v_min)),
        real("mobility.v_max", DEBA_REF(mobility.v_max)),
        integer("mobility.group_count", DEBA_REF(mobility.group_count)),
        real("mobility.group_radius", DEBA_REF(mobility.group_radius)),
        real("mobility.update_interval", DEBA_REF(mobility.update_interval)),
        real("mobility.heading_persistence", DEBA_REF(mobility.heading_persistence)),

        real("costs.gamma", DEBA_REF(costs.gamma)),
        real("costs.chunk_cost", DEBA_REF(costs.chunk_cost)),
        real("costs.chunk_size", DEBA_REF(costs.chunk_size)),
        real("costs.price_intra", DEBA_REF(costs.price_intra)),
        real("costs.price_inter", DEBA_REF(costs.price_inter)),
        real("costs.resolution", DEBA_REF(costs.resolution)),

        real("constraints.cost_budget", DEBA_REF(constraints.cost_budget)),
        real("constraints.delay_floor", DEBA_REF(constraints.delay_floor)),
        real("constraints.energy_floor", DEBA_REF(constraints.energy_floor)),
        real("constraints.service_floor", DEBA_REF(constraints.service_floor)),

        integer("solver.max_iterations", DEBA_REF(solver.max_iterations)),
        real("solver.tolerance", DEBA_REF(solver.tolerance)),
        real("solver.step0", DEBA_REF(solver.step0)),
        real("solver.c_units", DEBA_REF(solver.c_units)),
        integer("solver.check_every", DEBA_REF(solver.check_every)),
        real("solver.feasibility_tol", DEBA_REF(solver.feasibility_tol)),
    };
    return table;
}

#undef DEBA_REF

constexpr std::string_view kSensorPrefix = "sensors.";

SensorSpec parse_sensor_row(std::string_view v, int line, std::string_view key)
{
    std::istringstream in{std::string(v)};
    std::string kind, rate, x, y, extra;
    if (!(in >> kind >> rate >> x >> y) || (in >> extra)) {
        throw ConfigError("'" + std::string(key) + "': expected '<kind> <rate_bps> <x_cm> <y_cm>'", line);
    }
    SensorSpec row;
    try {
        row.kind = sensor_kind_from_string(kind);
    } catch (const DomainError& e) {
        throw ConfigError(e.what(), line);
    }
    row.rate_bps = parse_real(rate, line, key);
    row.x_cm = parse_real(x, line, key);
    row.y_cm = parse_real(y, line, key);
    return row;
}

} // namespace

Scenario parse_scenario(std::string_view text)
{
    Scenario s;
    std::map<std::string, const Field*> index;
    for (const auto& f : fields()) {
        index.emplace(f.key, &f);
    }
    std::set<std::string> seen;
    std::map<int, SensorSpec> sensor_rows;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("expected 'key = value'", line_no);
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (!seen.insert(key).second) {
            throw ConfigError("duplicate key '" + key + "'", line_no);
        }
        if (key.starts_with(kSensorPrefix)) {
            const auto n = parse_int<int>(std::string_view(key).substr(kSensorPrefix.size()), line_no, key);
            if (n < 1) {
                throw ConfigError("sensor rows are numbered from 1", line_no);
            }
            sensor_rows[n] = parse_sensor_row(value, line_no, key);
            continue;
        }
        const auto it = index.find(key);
        if (it == index.end()) {
            throw ConfigError("unknown key '" + key + "'", line_no);
        }
        it->second->set(s, value, line_no);
    }

    if (!sensor_rows.empty()) {
        if (sensor_rows.rbegin()->first != static_cast<int>(sensor_rows.size())) {
            throw ConfigError("sensor rows must be numbered 1..N without gaps");
        }
        s.sensor_table.clear();
        for (const auto& [n, row] : sensor_rows) {
            s.sensor_table.push_back(row);
        }
    }
    s.validate();
    return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open scenario file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize(const Scenario& s)
{
    std::string out;
    for (const auto& f : fields()) {
        out += f.key + " = " + f.get(s) + "\n";
    }
    for (std::size_t i = 0; i < s.sensor_table.size(); ++i) {
        const auto& r = s.sensor_table[i];
        out += std::string(kSensorPrefix) + std::to_string(i + 1) + " = " + std::string(to_string(r.kind)) + " " +
               format_real(r.rate_bps) + " " + format_real(r.x_cm) + " " + format_real(r.y_cm) + "\n";
    }
    return out;
}

void save_scenario(const Scenario& s, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    out << serialize(s);
    if (!out) {
        throw IoError("cannot write scenario file '" + path.string() + "'");
    }
}

bool operator==(const Scenario& a, const Scenario& b)
{
    return serialize(a) == serialize(b);
}

} // namespace deba
