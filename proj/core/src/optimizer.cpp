#include "deba/optimizer.hpp"

#include "deba/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace deba {

void AggregationDecision::validate() const
{
    auto ok = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!std::all_of(phase1_fraction.begin(), phase1_fraction.end(), ok) ||
        !std::all_of(phase2_fraction.begin(), phase2_fraction.end(), ok)) {
        throw DomainError("aggregation decision: fraction outside [0, 1]");
    }
}

void Constraints::validate() const
{
    if (!std::isfinite(cost_budget) || !std::isfinite(delay_floor) || !std::isfinite(energy_floor) ||
        !std::isfinite(service_floor)) {
        throw DomainError("constraints must be finite");
    }
    if (cost_budget < 0.0) {
        throw DomainError("constraints: cost budget must be non-negative");
    }
    if (!(service_floor >= 0.0 && service_floor <= 1.0)) {
        throw DomainError("constraints: service floor must lie in [0, 1]");
    }
}

std::size_t EpochState::dimension() const
{
    return sensors.size() + (optimize_phase2 ? lmus.size() : 0);
}

double EpochState::lmu_capacity(std::size_t l) const
{
    double f = lmus[l].backlog;
    for (const auto& s : sensors) {
        if (s.lmu == l) {
            f += s.volume;
        }
    }
    return f;
}

void EpochState::validate() const
{
    for (const auto& s : sensors) {
        if (s.lmu >= lmus.size()) {
            throw DomainError("epoch state: sensor refers to a missing LMU");
        }
        if (s.volume < 0.0 || s.traffic < 0.0 || !(s.loss >= 0.0 && s.loss <= 1.0) ||
            s.tx_joules_per_bit < 0.0 || !(s.energy_initial > 0.0) || s.energy_residual < 0.0) {
            throw DomainError("epoch state: invalid sensor term");
        }
    }
    for (const auto& l : lmus) {
        if (l.backlog < 0.0 || !(l.loss >= 0.0 && l.loss <= 1.0) || l.required < 0.0 ||
            !(l.energy_initial > 0.0) || l.energy_residual < 0.0 || !(l.service_rate > 0.0) ||
            !(l.intra_rate > 0.0) || !(l.inter_rate > 0.0) || l.propagation < 0.0) {
            throw DomainError("epoch state: invalid LMU term");
        }
    }
    if (!(energy_scaling > 0.0) || c_units < 0.0) {
        throw DomainError("epoch state: scaling must be positive and c_units non-negative");
    }
}

AggregationDecision full_decision(const EpochState& s, double value)
{
    AggregationDecision d;
    d.phase1_fraction.assign(s.sensors.size(), value);
    d.phase2_fraction.assign(s.optimize_phase2 ? s.lmus.size() : 0, value);
    return d;
}

std::string_view to_string(ConstraintKind kind)
{
    switch (kind) {
    case ConstraintKind::CostBudget: return "cost-budget";
    case ConstraintKind::DelayFloor: return "delay-floor";
    case ConstraintKind::EnergyFloor: return "energy-floor";
    case ConstraintKind::Flow: return "flow";
    case ConstraintKind::ServiceCritical: return "service-critical";
    case ConstraintKind::ServiceNormal: return "service-normal";
    }
    return "?";
}

namespace {

constexpr std::size_t kNoOwner = std::numeric_limits<std::size_t>::max();

void check_shape(const AggregationDecision& d, const EpochState& s)
{
    if (d.phase1_fraction.size() != s.sensors.size() ||
        d.phase2_fraction.size() != (s.optimize_phase2 ? s.lmus.size() : 0)) {
        throw DomainError("decision does not match the epoch state");
    }
}

/// Allocation-free evaluation of flows, objective and constraint violations
/// straight from the model formulas. Shared by the public checks and the
/// grid oracle; the LP assembly does not use it.
class Evaluator {
public:
    Evaluator(const EpochState& s, const Constraints& c)
        : s_(s), c_(c), sent_(s.sensors.size()), in_(s.lmus.size()), raw_in_(s.lmus.size()),
          fwd_(s.lmus.size()), capacity_(s.lmus.size())
    {
        for (std::size_t l = 0; l < s.lmus.size(); ++l) {
            capacity_[l] = s.lmu_capacity(l);
            (s.lmus[l].critical ? required_critical_ : required_normal_) +=
                s.lmus[l].alive ? s.lmus[l].required : 0.0;
        }
    }

    void flows(const double* x, const double* y)
    {
        std::fill(in_.begin(), in_.end(), 0.0);
        std::fill(raw_in_.begin(), raw_in_.end(), 0.0);
        for (std::size_t i = 0; i < s_.sensors.size(); ++i) {
            const auto& t = s_.sensors[i];
            sent_[i] = x[i] * t.volume;
            raw_in_[t.lmu] += sent_[i];
            in_[t.lmu] += sent_[i] * (1.0 - t.loss);
        }
        for (std::size_t l = 0; l < s_.lmus.size(); ++l) {
            fwd_[l] = s_.optimize_phase2 ? y[l] * capacity_[l] : s_.lmus[l].backlog + in_[l];
        }
    }

    double objective(const double* x) const
    {
        double zeta = 0.0;
        double intra = 0.0;
        double inter = 0.0;
        for (std::size_t i = 0; i < s_.sensors.size(); ++i) {
            zeta += quality_term(s_.sensors[i].weights, x[i] * s_.sensors[i].traffic);
            intra += s_.costs.resolution * sent_[i];
        }
        for (double f : fwd_) {
            inter += f;
        }
        return s_.c_units * zeta + phase1_cost(s_.costs.price_intra, intra) +
               phase2_cost(s_.costs.price_inter, inter);
    }

    template <class Sink>
    void constraints(Sink&& sink) const
    {
        const double scaling = s_.energy_scaling;
        if (c_.energy_floor > scaling) {
            sink(ConstraintKind::EnergyFloor, kNoOwner, c_.energy_floor - scaling);
        }

        double cost = 0.0;
        for (double v : sent_) {
            cost += phase1_cost(s_.costs.price_intra, s_.costs.resolution * v);
        }
        for (double f : fwd_) {
            cost += phase2_cost(s_.costs.price_inter, f);
        }
        sink(ConstraintKind::CostBudget, kNoOwner, (cost - c_.cost_budget) / std::max(c_.cost_budget, 1e-12));

        for (std::size_t i = 0; i < s_.sensors.size(); ++i) {
            const auto& t = s_.sensors[i];
            const double drain = t.tx_joules_per_bit * sent_[i];
            sink(ConstraintKind::EnergyFloor, i,
                 energy_violation(t.alive ? t.energy_residual : 0.0, t.energy_initial, drain));
        }

        double delivered_critical = 0.0;
        double delivered_normal = 0.0;
        for (std::size_t l = 0; l < s_.lmus.size(); ++l) {
            const auto& m = s_.lmus[l];
            const double drain = m.rx_joules_per_bit * raw_in_[l] + m.tx_joules_per_bit * fwd_[l];
            sink(ConstraintKind::EnergyFloor, s_.sensors.size() + l,
                 energy_violation(m.alive ? m.energy_residual : 0.0, m.energy_initial, drain));

            const double held = m.backlog + in_[l];
            if (s_.optimize_phase2) {
                sink(ConstraintKind::Flow, l, (fwd_[l] - held) / std::max(capacity_[l], 1.0));
            }
            if (m.alive) {
                const auto d = DelayBreakdown::from_components(
                    m.propagation, raw_in_[l] / m.intra_rate + fwd_[l] / m.inter_rate,
                    held / m.service_rate, std::max(0.0, held - fwd_[l]) / m.service_rate);
                sink(ConstraintKind::DelayFloor, l, c_.delay_floor - delay_weight(d));
            }
            (m.critical ? delivered_critical : delivered_normal) += fwd_[l] * (1.0 - m.loss);
        }
        if (required_critical_ > 0.0) {
            sink(ConstraintKind::ServiceCritical, kNoOwner,
                 c_.service_floor - delivered_critical / required_critical_);
        }
        if (required_normal_ > 0.0 && c_.enforce_normal_service) {
            sink(ConstraintKind::ServiceNormal, kNoOwner,
                 c_.service_floor - delivered_normal / required_normal_);
        }
    }

    double max_violation() const
    {
        double worst = -std::numeric_limits<double>::infinity();
        constraints([&](ConstraintKind, std::size_t, double v) { worst = std::max(worst, v); });
        return worst;
    }

    const std::vector<double>& sent() const { return sent_; }
    const std::vector<double>& lmu_in() const { return in_; }
    const std::vector<double>& forwarded() const { return fwd_; }

private:
    // A node at or below the floor may only stay idle.
    double energy_violation(double residual, double initial, double drain) const
    {
        const double after = s_.energy_scaling * (residual - drain) / initial;
        const double v = c_.energy_floor - after;
        return drain > 0.0 ? v : std::min(v, 0.0);
    }

    const EpochState& s_;
    const Constraints& c_;
    std::vector<double> sent_;
    std::vector<double> in_;
    std::vector<double> raw_in_;
    std::vector<double> fwd_;
    std::vector<double> capacity_;
    double required_critical_ = 0.0;
    double required_normal_ = 0.0;
};

} // namespace

Flows expected_flows(const AggregationDecision& d, const EpochState& s)
{
    check_shape(d, s);
    const Constraints unused;
    Evaluator ev(s, unused);
    ev.flows(d.phase1_fraction.data(), d.phase2_fraction.data());
    Flows f{ev.sent(), ev.lmu_in(), ev.forwarded(), {}};
    f.delivered.resize(s.lmus.size());
    for (std::size_t l = 0; l < s.lmus.size(); ++l) {
        f.delivered[l] = f.forwarded[l] * (1.0 - s.lmus[l].loss);
    }
    return f;
}

double objective(const AggregationDecision& d, const EpochState& s)
{
    const Flows f = expected_flows(d, s);
    std::vector<std::size_t> owner(s.sensors.size());
    double zeta = 0.0;
    for (std::size_t i = 0; i < s.sensors.size(); ++i) {
        owner[i] = s.sensors[i].lmu;
        zeta += quality_term(s.sensors[i].weights, d.phase1_fraction[i] * s.sensors[i].traffic);
    }
    const std::vector<std::size_t> bs_of(s.lmus.size(), 0);
    const Topology topo = Topology::star(owner, s.lmus.size(), bs_of, 1);
    const auto p1 = phase1_components(topo, f.sent, s.costs.resolution);
    const auto p2 = phase2_components(topo, f.forwarded);
    return s.c_units * zeta + total_cost(s.costs, p1.sink, p2.link);
}

std::vector<ConstraintValue> evaluate_constraints(const AggregationDecision& d, const EpochState& s,
                                                  const Constraints& c)
{
    check_shape(d, s);
    Evaluator ev(s, c);
    ev.flows(d.phase1_fraction.data(), d.phase2_fraction.data());
    std::vector<ConstraintValue> out;
    ev.constraints([&](ConstraintKind k, std::size_t owner, double v) { out.push_back({k, owner, v}); });
    return out;
}

double max_violation(const std::vector<ConstraintValue>& values)
{
    double worst = 0.0;
    for (const auto& v : values) {
        worst = std::max(worst, v.violation);
    }
    return worst;
}

int count_violations(const std::vector<ConstraintValue>& values, double tol)
{
    return static_cast<int>(
        std::count_if(values.begin(), values.end(), [tol](const ConstraintValue& v) { return v.violation > tol; }));
}

// ---------------------------------------------------------------------------
// LP assembly

namespace {

class RowBuilder {
public:
    explicit RowBuilder(LinearProgram& lp) : lp_(lp) { lp_.row_start.assign(1, 0); }

    void add(std::size_t j, double a) { terms_.emplace_back(j, a); }
    void discard() { terms_.clear(); }

    void finish(double rhs, ConstraintKind kind, std::size_t owner)
    {
        std::sort(terms_.begin(), terms_.end());
        std::size_t emitted = 0;
        for (std::size_t k = 0; k < terms_.size();) {
            const std::size_t j = terms_[k].first;
            double a = 0.0;
            for (; k < terms_.size() && terms_[k].first == j; ++k) {
                a += terms_[k].second;
            }
            if (a != 0.0) {
                lp_.col.push_back(j);
                lp_.val.push_back(a);
                ++emitted;
            }
        }
        terms_.clear();
        if (emitted == 0) {
            // Constant row: either always satisfied or never.
            if (rhs < 0.0) {
                lp_.trivially_infeasible = true;
            }
            return;
        }
        lp_.rhs.push_back(rhs);
        lp_.kind.push_back(kind);
        lp_.owner.push_back(owner);
        lp_.row_start.push_back(lp_.col.size());
    }

private:
    LinearProgram& lp_;
    std::vector<std::pair<std::size_t, double>> terms_;
};

} // namespace

LinearProgram build_program(const EpochState& s, const Constraints& c)
{
    s.validate();
    c.validate();
    const std::size_t ns = s.sensors.size();
    const std::size_t nl = s.lmus.size();
    const bool p2 = s.optimize_phase2;

    LinearProgram lp;
    lp.cost.assign(s.dimension(), 0.0);
    lp.upper.assign(s.dimension(), 1.0);
    lp.trivially_infeasible = c.energy_floor > s.energy_scaling;

    std::vector<double> capacity(nl);
    std::vector<std::vector<std::size_t>> members(nl);
    for (std::size_t l = 0; l < nl; ++l) {
        capacity[l] = s.lmu_capacity(l);
    }
    for (std::size_t i = 0; i < ns; ++i) {
        members[s.sensors[i].lmu].push_back(i);
    }

    auto floor_abs = [&](double initial) { return c.energy_floor * initial / s.energy_scaling; };

    // Box: sensor energy floors become upper bounds.
    for (std::size_t i = 0; i < ns; ++i) {
        const auto& t = s.sensors[i];
        const auto& m = s.lmus[t.lmu];
        const double residual = t.alive ? t.energy_residual : 0.0;
        const double spare = residual - floor_abs(t.energy_initial);
        const double per_fraction = t.tx_joules_per_bit * t.volume;
        if (!m.alive || (spare <= 0.0 && per_fraction > 0.0)) {
            lp.upper[i] = 0.0;
        } else if (per_fraction > 0.0) {
            lp.upper[i] = std::clamp(spare / per_fraction, 0.0, 1.0);
        }
    }
    if (p2) {
        for (std::size_t l = 0; l < nl; ++l) {
            if (!s.lmus[l].alive) {
                lp.upper[ns + l] = 0.0;
            }
        }
    }

    // fwd_l = F_l y_l (planned) or backlog_l + sum_s V_s (1 - L_s) x_s (forward-all).
    auto add_forwarded = [&](RowBuilder& row, std::size_t l, double scale, double& constant) {
        if (p2) {
            row.add(ns + l, scale * capacity[l]);
        } else {
            constant += scale * s.lmus[l].backlog;
            for (std::size_t i : members[l]) {
                row.add(i, scale * s.sensors[i].volume * (1.0 - s.sensors[i].loss));
            }
        }
    };

    // Objective.
    for (std::size_t i = 0; i < ns; ++i) {
        const auto& t = s.sensors[i];
        lp.cost[i] += s.c_units * t.weights.sum() * t.traffic + s.costs.price_intra * s.costs.resolution * t.volume;
    }
    for (std::size_t l = 0; l < nl; ++l) {
        if (p2) {
            lp.cost[ns + l] += s.costs.price_inter * capacity[l];
        } else {
            lp.offset += s.costs.price_inter * s.lmus[l].backlog;
            for (std::size_t i : members[l]) {
                lp.cost[i] += s.costs.price_inter * s.sensors[i].volume * (1.0 - s.sensors[i].loss);
            }
        }
    }

    RowBuilder row(lp);

    {
        double constant = 0.0;
        for (std::size_t i = 0; i < ns; ++i) {
            row.add(i, s.costs.price_intra * s.costs.resolution * s.sensors[i].volume);
        }
        for (std::size_t l = 0; l < nl; ++l) {
            add_forwarded(row, l, s.costs.price_inter, constant);
        }
        row.finish(c.cost_budget - constant, ConstraintKind::CostBudget, kNoOwner);
    }

    const double theta = c.delay_floor;
    for (std::size_t l = 0; l < nl; ++l) {
        const auto& m = s.lmus[l];

        // LMU energy: rx on everything sent to it, tx on everything forwarded.
        {
            double constant = 0.0;
            for (std::size_t i : members[l]) {
                row.add(i, m.rx_joules_per_bit * s.sensors[i].volume);
            }
            add_forwarded(row, l, m.tx_joules_per_bit, constant);
            const double residual = m.alive ? m.energy_residual : 0.0;
            const double spare = std::max(0.0, residual - floor_abs(m.energy_initial));
            row.finish(spare - constant, ConstraintKind::EnergyFloor, ns + l);
        }

        if (p2) {
            for (std::size_t i : members[l]) {
                row.add(i, -s.sensors[i].volume * (1.0 - s.sensors[i].loss));
            }
            row.add(ns + l, capacity[l]);
            row.finish(m.backlog, ConstraintKind::Flow, l);
        }

        // theta * queue - (1 - theta) * (prop + tran + agg) <= 0, with
        // queue = (held - fwd)/svc, tran = sent/intra + fwd/inter, agg = held/svc.
        if (m.alive) {
            double constant = theta * m.backlog / m.service_rate - (1.0 - theta) * (m.propagation + m.backlog / m.service_rate);
            for (std::size_t i : members[l]) {
                const double v = s.sensors[i].volume;
                const double in = v * (1.0 - s.sensors[i].loss);
                row.add(i, theta * in / m.service_rate - (1.0 - theta) * (v / m.intra_rate + in / m.service_rate));
            }
            add_forwarded(row, l, -theta / m.service_rate - (1.0 - theta) / m.inter_rate, constant);
            row.finish(-constant, ConstraintKind::DelayFloor, l);
        }
    }

    for (bool critical : {true, false}) {
        double required = 0.0;
        double constant = 0.0;
        for (std::size_t l = 0; l < nl; ++l) {
            const auto& m = s.lmus[l];
            if (m.critical != critical || !m.alive) {
                continue;
            }
            required += m.required;
            add_forwarded(row, l, -(1.0 - m.loss), constant);
        }
        if (required > 0.0 && (critical || c.enforce_normal_service)) {
            row.finish(-c.service_floor * required - constant,
                       critical ? ConstraintKind::ServiceCritical : ConstraintKind::ServiceNormal, kNoOwner);
        } else {
            row.discard();
        }
    }
    return lp;
}

// ---------------------------------------------------------------------------
// Dual subgradient solver

namespace {

constexpr double kInternalTol = 1e-9;
constexpr int kStallSweeps = 20;
constexpr double kStallProgress = 0.01;
constexpr double kRelaxation = 1.5;

/// Row- and cost-normalized copy of an LP with CSR and CSC views.
class ScaledProgram {
public:
    explicit ScaledProgram(const LinearProgram& lp) : lp_(lp), n_(lp.cols()), m_(lp.rows())
    {
        cost_scale_ = 0.0;
        for (double c : lp.cost) {
            cost_scale_ = std::max(cost_scale_, std::abs(c));
        }
        if (cost_scale_ == 0.0) {
            cost_scale_ = 1.0;
        }
        cost_.resize(n_);
        inv_weight_.resize(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            cost_[j] = lp.cost[j] / cost_scale_;
            inv_weight_[j] = 1.0 / std::max(std::abs(cost_[j]), 1e-3);
        }
        row_scale_.resize(m_);
        val_ = lp.val;
        rhs_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            double scale = 0.0;
            for (std::size_t k = lp.row_start[i]; k < lp.row_start[i + 1]; ++k) {
                scale = std::max(scale, std::abs(lp.val[k]));
            }
            row_scale_[i] = scale;
            for (std::size_t k = lp.row_start[i]; k < lp.row_start[i + 1]; ++k) {
                val_[k] /= scale;
            }
            rhs_[i] = lp.rhs[i] / scale;
        }
        // Column view.
        col_start_.assign(n_ + 1, 0);
        for (std::size_t j : lp.col) {
            ++col_start_[j + 1];
        }
        std::partial_sum(col_start_.begin(), col_start_.end(), col_start_.begin());
        col_row_.resize(lp.col.size());
        col_val_.resize(lp.col.size());
        std::vector<std::size_t> fill(col_start_.begin(), col_start_.end() - 1);
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t k = lp.row_start[i]; k < lp.row_start[i + 1]; ++k) {
                const std::size_t slot = fill[lp.col[k]]++;
                col_row_[slot] = i;
                col_val_[slot] = val_[k];
            }
        }
    }

    [[nodiscard]] std::size_t cols() const { return n_; }
    [[nodiscard]] std::size_t rows() const { return m_; }
    [[nodiscard]] double upper(std::size_t j) const { return lp_.upper[j]; }
    [[nodiscard]] double cost(std::size_t j) const { return cost_[j]; }
    [[nodiscard]] double rhs(std::size_t i) const { return rhs_[i]; }
    [[nodiscard]] double cost_scale() const { return cost_scale_; }
    [[nodiscard]] double row_scale(std::size_t i) const { return row_scale_[i]; }

    [[nodiscard]] double activity(std::size_t i, const std::vector<double>& z) const
    {
        double a = 0.0;
        for (std::size_t k = lp_.row_start[i]; k < lp_.row_start[i + 1]; ++k) {
            a += val_[k] * z[lp_.col[k]];
        }
        return a;
    }

    [[nodiscard]] double max_violation(const std::vector<double>& z) const
    {
        double worst = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            worst = std::max(worst, activity(i, z) - rhs_[i]);
        }
        return worst;
    }

    [[nodiscard]] double objective(const std::vector<double>& z) const
    {
        double v = lp_.offset;
        for (std::size_t j = 0; j < n_; ++j) {
            v += lp_.cost[j] * z[j];
        }
        return v;
    }

    /// r = c + A^T lambda (scaled space).
    void reduced_costs(const std::vector<double>& lambda, std::vector<double>& r) const
    {
        r = cost_;
        for (std::size_t i = 0; i < m_; ++i) {
            if (lambda[i] == 0.0) {
                continue;
            }
            for (std::size_t k = lp_.row_start[i]; k < lp_.row_start[i + 1]; ++k) {
                r[lp_.col[k]] += lambda[i] * val_[k];
            }
        }
    }

    /// Over-relaxed cyclic projections onto each violated row, clipped to the
    /// box. Distances are weighted by cost so cheap coordinates absorb most of
    /// the correction. Returns the remaining maximum violation.
    double repair(std::vector<double>& z, int sweeps) const
    {
        for (std::size_t j = 0; j < n_; ++j) {
            z[j] = std::clamp(z[j], 0.0, upper(j));
        }
        double worst = max_violation(z);
        double best = worst;
        int stalled = 0;
        // Stop early once the sweeps no longer make progress: the rows are
        // then inconsistent and more projections only burn time.
        for (int sweep = 0; sweep < sweeps && worst > kInternalTol && stalled < kStallSweeps; ++sweep) {
            for (std::size_t i = 0; i < m_; ++i) {
                double v = activity(i, z) - rhs_[i];
                for (int pass = 0; pass < 4 && v > 0.0; ++pass) {
                    double denom = 0.0;
                    for (std::size_t k = lp_.row_start[i]; k < lp_.row_start[i + 1]; ++k) {
                        if (movable(k, z)) {
                            denom += val_[k] * val_[k] * inv_weight_[lp_.col[k]];
                        }
                    }
                    if (denom == 0.0) {
                        break;
                    }
                    const double t = kRelaxation * (v + 1e-10 * std::max(1.0, std::abs(rhs_[i]))) / denom;
                    for (std::size_t k = lp_.row_start[i]; k < lp_.row_start[i + 1]; ++k) {
                        if (movable(k, z)) {
                            const std::size_t j = lp_.col[k];
                            z[j] = std::clamp(z[j] - t * val_[k] * inv_weight_[j], 0.0, upper(j));
                        }
                    }
                    v = activity(i, z) - rhs_[i];
                }
            }
            worst = max_violation(z);
            if (worst < (1.0 - kStallProgress) * best) {
                best = worst;
                stalled = 0;
            } else {
                ++stalled;
            }
        }
        return worst;
    }

    /// Feasibility-preserving coordinate moves towards lower cost.
    void polish(std::vector<double>& z, const std::vector<double>& priority) const
    {
        std::vector<double> slack(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            slack[i] = std::max(0.0, rhs_[i] - activity(i, z));
        }
        std::vector<std::size_t> order(n_);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return std::abs(priority[a]) > std::abs(priority[b]); });
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j : order) {
                const double c = cost_[j];
                if (c > 0.0 && z[j] > 0.0) {
                    double delta = z[j];
                    for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) {
                        if (col_val_[k] < 0.0) {
                            delta = std::min(delta, slack[col_row_[k]] / -col_val_[k]);
                        }
                    }
                    if (delta <= 0.0) {
                        continue;
                    }
                    z[j] -= delta;
                    for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) {
                        slack[col_row_[k]] = std::max(0.0, slack[col_row_[k]] + col_val_[k] * delta);
                    }
                } else if (c < 0.0 && z[j] < upper(j)) {
                    double delta = upper(j) - z[j];
                    for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) {
                        if (col_val_[k] > 0.0) {
                            delta = std::min(delta, slack[col_row_[k]] / col_val_[k]);
                        }
                    }
                    if (delta <= 0.0) {
                        continue;
                    }
                    z[j] += delta;
                    for (std::size_t k = col_start_[j]; k < col_start_[j + 1]; ++k) {
                        slack[col_row_[k]] = std::max(0.0, slack[col_row_[k]] - col_val_[k] * delta);
                    }
                }
            }
        }
    }

private:
    [[nodiscard]] bool movable(std::size_t k, const std::vector<double>& z) const
    {
        const std::size_t j = lp_.col[k];
        return val_[k] > 0.0 ? z[j] > 0.0 : z[j] < upper(j);
    }

    const LinearProgram& lp_;
    std::size_t n_;
    std::size_t m_;
    double cost_scale_ = 1.0;
    std::vector<double> cost_;
    std::vector<double> inv_weight_;
    std::vector<double> row_scale_;
    std::vector<double> val_;
    std::vector<double> rhs_;
    std::vector<std::size_t> col_start_;
    std::vector<std::size_t> col_row_;
    std::vector<double> col_val_;
};

AggregationDecision to_decision(const EpochState& s, const std::vector<double>& z)
{
    AggregationDecision d;
    const std::size_t ns = s.sensors.size();
    d.phase1_fraction.assign(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(ns));
    if (s.optimize_phase2) {
        d.phase2_fraction.assign(z.begin() + static_cast<std::ptrdiff_t>(ns), z.end());
    }
    for (double& v : d.phase1_fraction) {
        v = std::clamp(v, 0.0, 1.0);
    }
    for (double& v : d.phase2_fraction) {
        v = std::clamp(v, 0.0, 1.0);
    }
    return d;
}

} // namespace

SolveReport solve(const EpochState& s, const Constraints& c, const SolverParams& params,
                  const std::vector<double>* warm_start)
{
    const LinearProgram lp = build_program(s, c);
    const ScaledProgram sp(lp);
    const std::size_t n = sp.cols();
    const std::size_t m = sp.rows();

    std::vector<double> lambda(m, 0.0);
    if (warm_start != nullptr && warm_start->size() == m) {
        for (std::size_t i = 0; i < m; ++i) {
            lambda[i] = std::max(0.0, (*warm_start)[i] * sp.row_scale(i) / sp.cost_scale());
        }
    }

    SolveReport report;
    double best_dual = -std::numeric_limits<double>::infinity();
    double best_primal = std::numeric_limits<double>::infinity();
    std::vector<double> best_z;
    std::vector<double> best_lambda = lambda;

    std::vector<double> r(n);
    std::vector<double> z(n);
    std::vector<double> g(m);
    std::vector<double> zsum(n, 0.0);
    std::vector<double> candidate(n);
    double wsum = 0.0;
    int next_reset = 64;

    auto consider = [&](std::vector<double>& cand, int sweeps) {
        if (sp.repair(cand, sweeps) > kInternalTol) {
            return;
        }
        sp.polish(cand, r);
        if (sp.max_violation(cand) > kInternalTol) {
            return;
        }
        const double obj = sp.objective(cand);
        if (obj < best_primal) {
            best_primal = obj;
            best_z = cand;
        }
    };

    int k = 0;
    const int max_iter = lp.trivially_infeasible ? 0 : std::max(1, params.max_iterations);
    const int check_every = std::max(1, params.check_every);
    while (k < max_iter) {
        ++k;
        sp.reduced_costs(lambda, r);
        double dual = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            // Zero reduced cost resolves toward the larger fraction.
            z[j] = r[j] > 0.0 ? 0.0 : sp.upper(j);
            dual += r[j] * z[j];
        }
        for (std::size_t i = 0; i < m; ++i) {
            dual -= lambda[i] * sp.rhs(i);
        }
        dual = dual * sp.cost_scale() + lp.offset;
        if (dual > best_dual) {
            best_dual = dual;
            best_lambda = lambda;
        }
        if (params.record_trace) {
            const double lo = m == 0 ? 0.0 : *std::min_element(lambda.begin(), lambda.end());
            report.trace.push_back({dual, lo});
        }

        double worst = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            g[i] = sp.activity(i, z) - sp.rhs(i);
            worst = std::max(worst, g[i]);
        }
        if (worst <= kInternalTol) {
            const double obj = sp.objective(z);
            if (obj < best_primal) {
                best_primal = obj;
                best_z = z;
            }
        }

        const double step = params.step0 / std::sqrt(static_cast<double>(k));
        for (std::size_t j = 0; j < n; ++j) {
            zsum[j] += step * z[j];
        }
        wsum += step;
        for (std::size_t i = 0; i < m; ++i) {
            lambda[i] = std::max(0.0, lambda[i] + step * g[i]);
        }

        if (k % check_every == 0 || k == max_iter) {
            for (std::size_t j = 0; j < n; ++j) {
                candidate[j] = zsum[j] / wsum;
            }
            consider(candidate, 200);
            if (k >= next_reset) {
                std::fill(zsum.begin(), zsum.end(), 0.0);
                wsum = 0.0;
                next_reset *= 2;
            }
            const double gap = best_primal - best_dual;
            if (std::isfinite(best_primal) && gap <= params.tolerance * std::abs(best_primal)) {
                report.converged = true;
                break;
            }
        }
    }
    report.iterations = k;

    double residual = 0.0;
    if (best_z.empty()) {
        // Feasibility subproblem: drive the maximum violation down from several starts.
        std::vector<std::vector<double>> starts;
        if (wsum > 0.0) {
            for (std::size_t j = 0; j < n; ++j) {
                candidate[j] = zsum[j] / wsum;
            }
            starts.push_back(candidate);
        }
        std::vector<double> top(n);
        std::vector<double> mid(n);
        for (std::size_t j = 0; j < n; ++j) {
            top[j] = sp.upper(j);
            mid[j] = 0.5 * sp.upper(j);
        }
        starts.push_back(top);
        starts.push_back(mid);
        starts.emplace_back(n, 0.0);
        double least = std::numeric_limits<double>::infinity();
        std::vector<double> least_z(n, 0.0);
        for (auto& start : starts) {
            const double v = sp.repair(start, 2000);
            if (v < least) {
                least = v;
                least_z = start;
            }
        }
        if (!lp.trivially_infeasible && least <= kInternalTol) {
            consider(least_z, 0);
        }
        if (best_z.empty()) {
            best_z = least_z;
        }
        residual = least;
    }

    report.decision = to_decision(s, best_z);
    report.objective = objective(report.decision, s);
    const auto checks = evaluate_constraints(report.decision, s, c);
    report.max_violation = max_violation(checks);
    report.feasible = !lp.trivially_infeasible && std::isfinite(best_primal) && residual <= kInternalTol &&
                      report.max_violation <= params.feasibility_tol;
    report.dual_bound = best_dual;
    report.dual_gap = report.feasible ? report.objective - best_dual : std::numeric_limits<double>::infinity();
    if (!report.feasible) {
        report.converged = false;
    }
    report.multipliers.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        report.multipliers[i] = best_lambda[i] * sp.cost_scale() / sp.row_scale(i);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Grid oracle

SolveReport brute_force_oracle(const EpochState& s, const Constraints& c, double grid_step)
{
    s.validate();
    c.validate();
    const std::size_t dim = s.dimension();
    if (dim > 6) {
        throw DomainError("brute_force_oracle: decision dimension exceeds 6");
    }
    if (!(grid_step > 0.0 && grid_step <= 0.5)) {
        throw DomainError("brute_force_oracle: grid step must lie in (0, 0.5]");
    }
    const auto levels = static_cast<std::size_t>(std::ceil(1.0 / grid_step - 1e-9)) + 1;
    std::vector<double> grid(levels);
    for (std::size_t k = 0; k < levels; ++k) {
        grid[k] = std::min(1.0, static_cast<double>(k) * grid_step);
    }

    const std::size_t ns = s.sensors.size();
    Evaluator ev(s, c);
    std::vector<std::size_t> idx(dim, 0);
    std::vector<double> point(std::max<std::size_t>(dim, 1), 0.0);
    std::vector<double> best;
    double best_obj = std::numeric_limits<double>::infinity();
    double least_violation = std::numeric_limits<double>::infinity();
    std::vector<double> least;

    for (;;) {
        for (std::size_t d = 0; d < dim; ++d) {
            point[d] = grid[idx[d]];
        }
        ev.flows(point.data(), point.data() + ns);
        const double v = ev.max_violation();
        if (v <= 1e-6) {
            const double obj = ev.objective(point.data());
            if (obj < best_obj) {
                best_obj = obj;
                best = point;
            }
        } else if (best.empty() && v < least_violation) {
            least_violation = v;
            least = point;
        }
        std::size_t d = 0;
        while (d < dim && ++idx[d] == levels) {
            idx[d] = 0;
            ++d;
        }
        if (d == dim) {
            break;
        }
    }

    SolveReport report;
    report.feasible = !best.empty();
    const auto& chosen = report.feasible ? best : least;
    std::vector<double> z(chosen.begin(), chosen.begin() + static_cast<std::ptrdiff_t>(dim));
    report.decision = to_decision(s, z);
    report.objective = report.feasible ? best_obj : objective(report.decision, s);
    report.max_violation = max_violation(evaluate_constraints(report.decision, s, c));
    report.iterations = 1;
    for (std::size_t d = 0; d < dim; ++d) {
        report.iterations *= static_cast<int>(levels);
    }
    report.converged = true;
    return report;
}

} // namespace deba
