#include "deba/model.hpp"

#include <algorithm>
#include <cmath>

namespace deba {

double distance(Vec2 a, Vec2 b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

double norm(Vec2 v)
{
    return std::hypot(v.x, v.y);
}

std::string_view to_string(SensorKind kind)
{
    switch (kind) {
    case SensorKind::ECG: return "ECG";
    case SensorKind::EEG: return "EEG";
    case SensorKind::EMG: return "EMG";
    case SensorKind::Motion: return "Motion";
    case SensorKind::Glucose: return "Glucose";
    }
    return "?";
}

SensorKind sensor_kind_from_string(std::string_view name)
{
    for (auto k : {SensorKind::ECG, SensorKind::EEG, SensorKind::EMG, SensorKind::Motion,
                   SensorKind::Glucose}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw DomainError("unknown sensor kind '" + std::string(name) + "'");
}

void validate(const QualityWeights& w)
{
    auto in_range = [](double v, double hi) { return std::isfinite(v) && v >= 0.0 && v <= hi; };
    if (!(w.scaling > 0.0) || !std::isfinite(w.scaling)) {
        throw DomainError("quality weights: scaling factor must be positive and finite");
    }
    if (!in_range(w.delay, 1.0) || !in_range(w.buffer, 1.0) || !in_range(w.energy, w.scaling)) {
        throw DomainError("quality weights: weight outside its range");
    }
}

DelayBreakdown DelayBreakdown::from_components(double propagation, double transmission,
                                               double aggregation, double queueing)
{
    return {propagation, transmission, aggregation, queueing,
            propagation + transmission + aggregation + queueing};
}

void validate(const CostParams& p)
{
    if (!(p.gamma > 0.0 && p.chunk_cost > 0.0 && p.chunk_size > 0.0 && p.price_intra > 0.0 &&
          p.price_inter > 0.0 && p.resolution > 0.0)) {
        throw DomainError("cost parameters must all be positive");
    }
}

double delay_weight(const DelayBreakdown& d)
{
    if (d.propagation < 0.0 || d.transmission < 0.0 || d.aggregation < 0.0 || d.queueing < 0.0) {
        throw DomainError("delay_weight: negative delay component");
    }
    const double served = d.propagation + d.transmission + d.aggregation;
    const bool any = served > 0.0 || d.queueing > 0.0;
    if (d.total <= 0.0) {
        if (any) {
            throw DomainError("delay_weight: zero total with non-zero components");
        }
        return 1.0; // idle link
    }
    return std::clamp(served / d.total, 0.0, 1.0);
}

double energy_weight(double energy_residual, double energy_initial, double scaling)
{
    if (!(energy_initial > 0.0)) {
        throw DomainError("energy_weight: initial energy must be positive");
    }
    if (energy_residual < 0.0 || energy_residual > energy_initial) {
        throw DomainError("energy_weight: residual energy outside [0, initial]");
    }
    return scaling * energy_residual / energy_initial;
}

double buffer_weight(double buffer_total, double buffer_occupied)
{
    if (!(buffer_total > 0.0)) {
        throw DomainError("buffer_weight: buffer size must be positive");
    }
    if (buffer_occupied < 0.0 || buffer_occupied > buffer_total) {
        throw DomainError("buffer_weight: occupancy outside [0, total]");
    }
    return (buffer_total - buffer_occupied) / buffer_total;
}

double aggregated_traffic(std::span<const std::uint8_t> connected, double base_traffic,
                          std::span<const double> rate_bits, std::span<const double> loss)
{
    if (connected.size() != rate_bits.size() || connected.size() != loss.size()) {
        throw DomainError("aggregated_traffic: link vectors differ in length");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < connected.size(); ++i) {
        if (loss[i] < 0.0 || loss[i] > 1.0) {
            throw DomainError("aggregated_traffic: loss probability outside [0, 1]");
        }
        if (connected[i]) {
            total += base_traffic + rate_bits[i] * (1.0 - loss[i]);
        }
    }
    return total;
}

double quality_term(const QualityWeights& w, double traffic)
{
    return w.sum() * traffic;
}

double aggregation_function(std::span<const QualityWeights> weights_per_epoch,
                            std::span<const double> traffic_per_epoch)
{
    if (weights_per_epoch.size() != traffic_per_epoch.size()) {
        throw DomainError("aggregation_function: horizon length mismatch");
    }
    double total = 0.0;
    for (std::size_t t = 0; t < weights_per_epoch.size(); ++t) {
        validate(weights_per_epoch[t]);
        total += quality_term(weights_per_epoch[t], traffic_per_epoch[t]);
    }
    return total;
}

std::int64_t chunk_count(double volume_bits, double chunk_size)
{
    if (!(chunk_size > 0.0) || volume_bits < 0.0) {
        throw DomainError("chunk_count: invalid volume or chunk size");
    }
    return static_cast<std::int64_t>(std::ceil(volume_bits / chunk_size));
}

double aggregation_cost(const CostParams& params, std::span<const std::int64_t> chunk_counts,
                        std::span<const double> agg_values)
{
    if (chunk_counts.size() != agg_values.size()) {
        throw DomainError("aggregation_cost: per-sensor vectors differ in length");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < chunk_counts.size(); ++i) {
        if (chunk_counts[i] < 0) {
            throw DomainError("aggregation_cost: negative chunk count");
        }
        total += params.gamma * params.chunk_cost * static_cast<double>(chunk_counts[i]) *
                 agg_values[i];
    }
    return total;
}

double qos_deficit(std::span<const QosState> qos, double cost)
{
    double ratio = 0.0;
    for (const auto& q : qos) {
        if (!(q.required > 0.0)) {
            throw DomainError("qos_deficit: required QoS must be positive");
        }
        ratio += std::max(0.0, (q.required - q.present) / q.required);
    }
    return ratio * cost;
}

} // namespace deba
