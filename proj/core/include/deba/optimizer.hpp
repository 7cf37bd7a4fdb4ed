#pragma once

// Per-epoch aggregation planning: choose how much of each sensor buffer to
// push to its LMU and how much of each LMU's volume to push to its base
// station, minimizing quality-weighted traffic plus two-phase cost under
// budget, delay, energy and service-level constraints.
//
// Every quantity is linear in the decision fractions, so the problem is an
// LP over a box. solve() runs projected subgradient ascent on its
// Lagrangian dual with ergodic primal recovery; brute_force_oracle()
// enumerates a grid and checks constraints through the model formulas,
// sharing no code with the LP assembly.

#include "deba/model.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace deba {

struct AggregationDecision {
    std::vector<double> phase1_fraction; // per sensor
    std::vector<double> phase2_fraction; // per LMU

    /// Throws DomainError if any entry is outside [0, 1].
    void validate() const;
};

struct Constraints {
    double cost_budget = 1.0e3;
    double delay_floor = 0.6;
    double energy_floor = 0.05;
    double service_floor = 0.9; // eta
    /// Cleared to let non-critical WBANs fall below the service floor when both classes cannot be met.
    bool enforce_normal_service = true;

    void validate() const;
};

struct SolverParams {
    int max_iterations = 5000;
    double tolerance = 1e-4;     // relative dual gap
    double step0 = 1.0;
    double c_units = 1e-9;       // cost-units per quality-weighted bit
    double feasibility_tol = 1e-6;
    int check_every = 50;
    bool record_trace = false;
};

/// A sensor as the planner sees it at the start of an epoch.
struct SensorTerm {
    std::size_t lmu = 0;          // owning LMU / WBAN index
    double volume = 0.0;          // bits available to send
    double traffic = 0.0;         // quality-weighted traffic basis at full fraction, bits
    double loss = 0.0;            // intra-BAN outage probability this epoch
    double tx_joules_per_bit = 0.0;
    double energy_residual = 0.0;
    double energy_initial = 1.0;
    bool alive = true;
    QualityWeights weights;
};

struct LmuTerm {
    double backlog = 0.0;         // bits already queued at the LMU
    double loss = 0.0;            // inter-BAN outage probability this epoch
    double tx_joules_per_bit = 0.0;
    double rx_joules_per_bit = 0.0;
    double energy_residual = 0.0;
    double energy_initial = 1.0;
    double service_rate = 1.0;    // bits/s
    double intra_rate = 1.0;      // bits/s, shared body channel
    double inter_rate = 1.0;      // bits/s
    double propagation = 0.0;     // s
    double required = 0.0;        // bits generated in this WBAN this epoch
    bool critical = false;
    bool alive = true;
};

struct EpochState {
    std::vector<SensorTerm> sensors;
    std::vector<LmuTerm> lmus;
    CostParams costs;
    double energy_scaling = 1.0;
    double c_units = 1e-9;
    /// When false the LMUs forward everything they hold and only Phase I is planned.
    bool optimize_phase2 = true;

    [[nodiscard]] std::size_t dimension() const;
    /// Largest volume an LMU could hold after Phase I (backlog plus every sensor volume).
    [[nodiscard]] double lmu_capacity(std::size_t l) const;
    void validate() const;
};

/// Expected flows implied by a decision.
struct Flows {
    std::vector<double> sent;        // per sensor, bits leaving the sensor
    std::vector<double> lmu_in;      // per LMU, bits expected to arrive
    std::vector<double> forwarded;   // per LMU, bits sent towards the BS
    std::vector<double> delivered;   // per LMU, bits expected at the BS
};

Flows expected_flows(const AggregationDecision& d, const EpochState& s);

/// Objective of one epoch: c_units * zeta + intra cost + inter cost.
double objective(const AggregationDecision& d, const EpochState& s);

enum class ConstraintKind { CostBudget, DelayFloor, EnergyFloor, Flow, ServiceCritical, ServiceNormal };

std::string_view to_string(ConstraintKind kind);

struct ConstraintValue {
    ConstraintKind kind;
    std::size_t owner = 0;   // LMU or sensor index where applicable
    double violation = 0.0;  // dimensionless, <= 0 when satisfied
};

/// Re-checks every constraint through the model formulas.
std::vector<ConstraintValue> evaluate_constraints(const AggregationDecision& d, const EpochState& s,
                                                  const Constraints& c);

double max_violation(const std::vector<ConstraintValue>& values);
int count_violations(const std::vector<ConstraintValue>& values, double tol);

/// Sparse LP in the form: min c.z + offset s.t. A z <= b, 0 <= z <= upper.
struct LinearProgram {
    std::vector<double> cost;
    double offset = 0.0;
    std::vector<double> upper;
    std::vector<std::size_t> row_start; // CSR, size rows + 1
    std::vector<std::size_t> col;
    std::vector<double> val;
    std::vector<double> rhs;
    std::vector<ConstraintKind> kind;
    std::vector<std::size_t> owner;
    /// Set when some constraint can be decided without any variable (e.g. energy floor above the scaling).
    bool trivially_infeasible = false;

    [[nodiscard]] std::size_t rows() const { return rhs.size(); }
    [[nodiscard]] std::size_t cols() const { return cost.size(); }
};

/// Variables are ordered sensors first, then LMUs (only when Phase II is planned).
LinearProgram build_program(const EpochState& s, const Constraints& c);

struct IterationRecord {
    double dual_value = 0.0;
    double min_multiplier = 0.0;
};

struct SolveReport {
    AggregationDecision decision;
    double objective = 0.0;
    std::vector<double> multipliers; // one per LP row, original units
    double dual_bound = 0.0;
    double dual_gap = 0.0;
    bool feasible = false;
    bool converged = false;
    int iterations = 0;
    double max_violation = 0.0;
    std::vector<IterationRecord> trace;
};

/// Lagrangian dual subgradient ascent. Never throws on infeasibility; check `feasible`.
/// `warm_start` seeds the multipliers (in original units) when its size matches.
SolveReport solve(const EpochState& s, const Constraints& c, const SolverParams& params,
                  const std::vector<double>* warm_start = nullptr);

/// Exhaustive grid search; throws DomainError when the dimension exceeds 6.
SolveReport brute_force_oracle(const EpochState& s, const Constraints& c, double grid_step);

AggregationDecision full_decision(const EpochState& s, double value);

} // namespace deba
