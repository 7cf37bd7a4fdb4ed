#pragma once

// Epoch-driven network simulation: traffic generation, Phase I transfer into
// the LMU buffers, Phase II uplink to the nearest base station, battery
// drain and per-epoch metrics. A run is a pure function of its scenario.

#include "deba/optimizer.hpp"
#include "deba/scenario.hpp"

#include <optional>
#include <vector>

namespace deba {

struct EpochReport {
    int epoch = 0;
    double zeta = 0.0;
    double cost_intra = 0.0;
    double cost_inter = 0.0;
    double cost_total = 0.0;
    double objective = 0.0;
    double traffic_generated = 0.0;  // bits sensed this epoch, including overflow
    double traffic_served = 0.0;     // bits that reached a base station
    double energy_consumed = 0.0;    // J, all nodes
    double mean_aggregation_delay = 0.0; // s, over alive WBANs
    int wbans_alive = 0;
    int constraint_violations = 0;

    // Bit ledger, kept alongside the published metrics.
    double delivered_lmu = 0.0;      // bits accepted into LMU buffers
    double lost_intra = 0.0;
    double lost_inter = 0.0;
    double dropped_overflow = 0.0;   // sensor and LMU buffer overflow
    double sensor_backlog = 0.0;     // end of epoch
    double lmu_backlog = 0.0;        // end of epoch
    int invariant_violations = 0;
    int solver_iterations = 0;
};

struct RunResult {
    std::vector<EpochReport> epochs;
    /// Set when every WBAN died before the configured horizon.
    bool terminated_early = false;
};

/// Runs `scenario`; `epochs` overrides the configured horizon when given.
/// Throws ConfigError on an invalid scenario.
RunResult run(const Scenario& scenario, std::optional<int> epochs = std::nullopt);

/// Stand-in comparator: full fraction for nodes whose energy weight exceeds
/// 0.2, half otherwise. Ignores the cost budget.
AggregationDecision greedy_baseline_decision(const EpochState& s);

struct Summary {
    int epochs = 0;
    double zeta = 0.0;
    double cost_intra = 0.0;
    double cost_inter = 0.0;
    double cost_total = 0.0;
    double objective = 0.0;
    double traffic_generated = 0.0;
    double traffic_served = 0.0;
    double energy_consumed = 0.0;
    double mean_aggregation_delay = 0.0; // mean over epochs
    double mean_wbans_alive = 0.0;
    int constraint_violations = 0;
    int invariant_violations = 0;
};

/// Totals over epochs; delay and alive count are averaged. Throws DomainError on empty input.
Summary summarize(const std::vector<EpochReport>& reports);

/// Relative improvement of `candidate` over `baseline` in percent. Positive
/// means better: lower cost, delay, energy and objective, more traffic served.
struct Improvement {
    double cost = 0.0;
    double delay = 0.0;
    double energy = 0.0;
    double traffic_served = 0.0;
    double objective = 0.0;
};

Improvement improvement(const Summary& candidate, const Summary& baseline);

} // namespace deba
