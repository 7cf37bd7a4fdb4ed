#include "deba/simulation.hpp"

#include "deba/mobility.hpp"
#include "deba/phase.hpp"
#include "deba/radio.hpp"
#include "deba/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace deba {

AggregationDecision greedy_baseline_decision(const EpochState& s)
{
    s.validate();
    auto pick = [&](double residual, double initial) {
        return energy_weight(std::min(residual, initial), initial, s.energy_scaling) > 0.2 ? 1.0 : 0.5;
    };
    AggregationDecision d;
    for (const auto& t : s.sensors) {
        d.phase1_fraction.push_back(pick(t.energy_residual, t.energy_initial));
    }
    if (s.optimize_phase2) {
        for (const auto& m : s.lmus) {
            d.phase2_fraction.push_back(pick(m.energy_residual, m.energy_initial));
        }
    }
    return d;
}

namespace {

constexpr double kSpeedOfLight = 3.0e8;

enum StreamTag : std::uint64_t { kMobility = 1, kLayout = 2, kChannel = 3, kLoss = 4 };

struct SensorRuntime {
    Vec2 body;              // body frame, m
    double rate = 0.0;      // bits/s
    double alpha = 2.0;
    double loss = 0.0;      // fixed intra-body outage
    double tx_per_bit = 0.0;
    Buffer buffer;
    EnergyState energy;
};

struct WbanRuntime {
    std::vector<SensorRuntime> sensors;
    Buffer buffer;
    EnergyState energy;
    double criticality = 0.0;
    DelayBreakdown last_delay; // idle until the first transfer
};

class Network {
public:
    explicit Network(const Scenario& sc)
        : sc_(sc), mobility_rng_(Rng(sc.seed).stream(kMobility)), channel_rng_(Rng(sc.seed).stream(kChannel)),
          loss_rng_(Rng(sc.seed).stream(kLoss))
    {
        Rng layout = Rng(sc.seed).stream(kLayout);
        for (int b = 0; b < sc.n_bs; ++b) {
            bs_.push_back({layout.uniform(0.0, sc.mobility.area_width), layout.uniform(0.0, sc.mobility.area_height)});
        }
        const Vec2 lmu_body{sc.lmu_x_cm / 100.0, sc.lmu_y_cm / 100.0};
        wbans_.resize(static_cast<std::size_t>(sc.n_wbans));
        for (auto& w : wbans_) {
            w.criticality = layout.uniform();
            w.buffer = {sc.lmu_buffer_bits, 0.0};
            w.energy = {sc.lmu_energy_j, sc.lmu_energy_j, true};
            for (int i = 0; i < sc.sensors_per_wban; ++i) {
                const auto& row = sc.sensor_table[static_cast<std::size_t>(i) % sc.sensor_table.size()];
                SensorRuntime s;
                s.body = {row.x_cm / 100.0, row.y_cm / 100.0};
                s.rate = row.rate_bps;
                s.alpha = layout.uniform(sc.radio.alpha_intra.min, sc.radio.alpha_intra.max);
                const double d = distance(s.body, lmu_body);
                s.loss = link_loss_probability(sc.intra_channel, d, s.alpha, false);
                s.tx_per_bit = tx_energy(1.0, d, sc.radio, s.alpha, sc.intra_channel.reference_distance);
                s.buffer = {sc.sensor_buffer_bits, 0.0};
                s.energy = {sc.sensor_energy_j, sc.sensor_energy_j, true};
                w.sensors.push_back(s);
            }
        }
        mobility_ = init_positions(sc.mobility, sc.n_wbans, mobility_rng_);
    }

    EpochReport advance(int epoch)
    {
        const double T = sc_.epoch_length;
        EpochReport rep;
        rep.epoch = epoch;

        mobility_ = step(sc_.mobility, std::move(mobility_), T, mobility_rng_);

        // Channel state towards the nearest base station. Draws are consumed
        // for every LMU so streams do not depend on which nodes are alive.
        const std::size_t nw = wbans_.size();
        std::vector<double> inter_loss(nw), inter_tx(nw), propagation(nw);
        for (std::size_t w = 0; w < nw; ++w) {
            const Vec2 p = mobility_.position[w];
            double d = std::numeric_limits<double>::infinity();
            for (const auto& b : bs_) {
                d = std::min(d, distance(p, b));
            }
            const double alpha = channel_rng_.uniform(sc_.radio.alpha_inter.min, sc_.radio.alpha_inter.max);
            const bool mobile = norm(mobility_.velocity[w]) > 0.0;
            inter_loss[w] = link_loss_probability(sc_.inter_channel, d, alpha, mobile, channel_rng_);
            inter_tx[w] = tx_energy(1.0, d, sc_.radio, alpha, sc_.inter_channel.reference_distance);
            propagation[w] = d / kSpeedOfLight;
        }

        // Traffic generation, capped by both the packet schedule and the sensor data rate.
        const double scheduled = sc_.packet_rate * T * sc_.packet_size;
        EpochState st;
        st.costs = sc_.costs;
        st.energy_scaling = sc_.energy_scaling;
        st.c_units = sc_.solver.c_units;
        st.optimize_phase2 = sc_.mode == Mode::DebaP1P2 || sc_.mode == Mode::GreedyBaseline;
        std::vector<int> alive_at_start(nw);
        for (std::size_t w = 0; w < nw; ++w) {
            auto& wb = wbans_[w];
            alive_at_start[w] = wb.energy.alive ? 1 : 0;
            double required = 0.0;
            double deliverable = wb.buffer.occupied;
            for (auto& s : wb.sensors) {
                const double before = s.buffer.occupied;
                double accepted = 0.0;
                if (s.energy.alive) {
                    const double g = std::min(scheduled, s.rate * T);
                    accepted = std::min(g, s.buffer.free());
                    rep.traffic_generated += g;
                    rep.dropped_overflow += g - accepted;
                    s.buffer.occupied += accepted;
                    required += g;
                }
                SensorTerm term;
                term.lmu = w;
                term.volume = s.buffer.occupied;
                const std::uint8_t link = 1;
                term.traffic = aggregated_traffic({&link, 1}, before, {&accepted, 1}, {&s.loss, 1});
                term.loss = s.loss;
                term.tx_joules_per_bit = s.tx_per_bit;
                term.energy_residual = s.energy.residual;
                term.energy_initial = s.energy.initial;
                term.alive = s.energy.alive;
                term.weights = {delay_weight(wb.last_delay),
                                energy_weight(s.energy.residual, s.energy.initial, sc_.energy_scaling),
                                buffer_weight(s.buffer.total, s.buffer.occupied), sc_.energy_scaling};
                st.sensors.push_back(term);
                deliverable += std::min(s.buffer.occupied, sendable(s.energy, s.tx_per_bit)) * (1.0 - s.loss);
            }
            LmuTerm m;
            m.backlog = wb.buffer.occupied;
            m.loss = inter_loss[w];
            m.tx_joules_per_bit = inter_tx[w];
            m.rx_joules_per_bit = rx_energy(1.0, sc_.radio);
            m.energy_residual = wb.energy.residual;
            m.energy_initial = wb.energy.initial;
            m.service_rate = sc_.lmu_service_rate;
            m.intra_rate = sc_.intra_rate;
            m.inter_rate = sc_.inter_rate;
            m.propagation = propagation[w];
            // Demand the WBAN can carry in expectation this epoch, given link loss and the
            // energy each node may spend above the floor; arrivals beyond it cannot be served.
            deliverable = std::min(deliverable, sendable(wb.energy, m.rx_joules_per_bit + m.tx_joules_per_bit));
            m.required = std::min(required, deliverable * (1.0 - inter_loss[w]));
            m.critical = wb.criticality > 0.5;
            m.alive = wb.energy.alive;
            st.lmus.push_back(m);
        }

        const AggregationDecision dec = decide(st, rep);
        rep.constraint_violations =
            count_violations(evaluate_constraints(dec, st, sc_.constraints), sc_.solver.feasibility_tol);
        for (std::size_t i = 0; i < st.sensors.size(); ++i) {
            rep.zeta += quality_term(st.sensors[i].weights, dec.phase1_fraction[i] * st.sensors[i].traffic);
        }

        // Phase I: sensors to their LMU. One loss draw per link per epoch.
        std::vector<double> sent_to(nw, 0.0), held(nw, 0.0);
        double intra_bits = 0.0;
        std::size_t k = 0;
        for (std::size_t w = 0; w < nw; ++w) {
            auto& wb = wbans_[w];
            const double rx_per_bit = st.lmus[w].rx_joules_per_bit;
            double arrived = 0.0;
            for (auto& s : wb.sensors) {
                const bool lost = loss_rng_.bernoulli(s.loss);
                const double bits = dec.phase1_fraction[k++] * s.buffer.occupied;
                // A transfer either runs on both batteries in full or not at all.
                if (bits <= 0.0 || !s.energy.alive || !wb.energy.alive ||
                    !can_afford(s.energy, s.tx_per_bit * bits) || !can_afford(wb.energy, rx_per_bit * bits)) {
                    continue;
                }
                s.buffer.occupied = std::max(0.0, s.buffer.occupied - bits);
                rep.energy_consumed += spend(s.energy, s.tx_per_bit * bits, rep);
                rep.energy_consumed += spend(wb.energy, rx_per_bit * bits, rep);
                sent_to[w] += bits;
                intra_bits += bits;
                if (lost) {
                    rep.lost_intra += bits;
                } else {
                    arrived += bits;
                }
            }
            const double accepted = std::min(arrived, wb.buffer.free());
            rep.dropped_overflow += arrived - accepted;
            rep.delivered_lmu += accepted;
            wb.buffer.occupied += accepted;
            held[w] = wb.buffer.occupied;
        }

        // Phase II: LMU to the nearest base station.
        double inter_bits = 0.0;
        double delay_sum = 0.0;
        int delay_count = 0;
        for (std::size_t w = 0; w < nw; ++w) {
            auto& wb = wbans_[w];
            const bool lost = loss_rng_.bernoulli(inter_loss[w]);
            double bits = 0.0;
            if (wb.energy.alive) {
                switch (sc_.mode) {
                case Mode::DebaP1P2:
                    bits = std::min(dec.phase2_fraction[w] * st.lmu_capacity(w), wb.buffer.occupied);
                    break;
                case Mode::GreedyBaseline:
                    bits = dec.phase2_fraction[w] * wb.buffer.occupied;
                    break;
                case Mode::DebaP1:
                case Mode::NoOpt:
                    bits = wb.buffer.occupied;
                    break;
                }
                if (!can_afford(wb.energy, inter_tx[w] * bits)) {
                    bits = 0.0;
                }
            }
            if (bits > 0.0) {
                wb.buffer.occupied = std::max(0.0, wb.buffer.occupied - bits);
                rep.energy_consumed += spend(wb.energy, inter_tx[w] * bits, rep);
                inter_bits += bits;
                (lost ? rep.lost_inter : rep.traffic_served) += bits;
            }
            if (alive_at_start[w]) {
                wb.last_delay = DelayBreakdown::from_components(
                    propagation[w], sent_to[w] / sc_.intra_rate + bits / sc_.inter_rate,
                    held[w] / sc_.lmu_service_rate, wb.buffer.occupied / sc_.lmu_service_rate);
                delay_sum += wb.last_delay.total;
                ++delay_count;
            }
        }

        rep.cost_intra = phase1_cost(sc_.costs.price_intra, sc_.costs.resolution * intra_bits);
        rep.cost_inter = phase2_cost(sc_.costs.price_inter, inter_bits);
        rep.cost_total = rep.cost_intra + rep.cost_inter;
        rep.objective = st.c_units * rep.zeta + rep.cost_total;
        rep.mean_aggregation_delay = delay_count > 0 ? delay_sum / delay_count : 0.0;
        for (const auto& wb : wbans_) {
            rep.wbans_alive += wb.energy.alive ? 1 : 0;
            rep.lmu_backlog += wb.buffer.occupied;
            for (const auto& s : wb.sensors) {
                rep.sensor_backlog += s.buffer.occupied;
            }
        }
        check_ledger(rep);
        return rep;
    }

private:
    AggregationDecision decide(EpochState& st, EpochReport& rep)
    {
        switch (sc_.mode) {
        case Mode::NoOpt:
            return full_decision(st, 1.0);
        case Mode::GreedyBaseline:
            return greedy_baseline_decision(st);
        case Mode::DebaP1:
        case Mode::DebaP1P2:
            break;
        }
        SolveReport r = solve(st, sc_.constraints, sc_.solver, &warm_);
        rep.solver_iterations += r.iterations;
        if (!r.feasible) {
            // Critical WBANs keep their service floor; the others give way.
            Constraints relaxed = sc_.constraints;
            relaxed.enforce_normal_service = false;
            SolveReport fallback = solve(st, relaxed, sc_.solver);
            rep.solver_iterations += fallback.iterations;
            if (fallback.feasible || fallback.max_violation < r.max_violation) {
                return fallback.decision;
            }
        }
        warm_ = r.multipliers;
        return r.decision;
    }

    // Bits a node can move before its energy weight reaches the floor.
    double sendable(const EnergyState& e, double joules_per_bit) const
    {
        if (!e.alive) {
            return 0.0;
        }
        const double reserve = sc_.constraints.energy_floor * e.initial / sc_.energy_scaling;
        return std::max(0.0, e.residual - reserve) / joules_per_bit;
    }

    // Drains `joules` and returns what was actually taken; flags any residual increase.
    static double spend(EnergyState& e, double joules, EpochReport& rep)
    {
        const double before = e.residual;
        e = drain(e, joules);
        if (e.residual > before) {
            ++rep.invariant_violations;
        }
        return before - e.residual;
    }

    void check_ledger(EpochReport& rep)
    {
        generated_ += rep.traffic_generated;
        delivered_ += rep.delivered_lmu;
        served_ += rep.traffic_served;
        lost_ += rep.lost_intra + rep.lost_inter;
        dropped_ += rep.dropped_overflow;
        const double scale = std::max(1.0, generated_);
        const double tol = 1e-9 * scale;
        const double accounted = rep.sensor_backlog + rep.lmu_backlog + served_ + lost_ + dropped_;
        int bad = 0;
        bad += std::abs(accounted - generated_) > tol;
        bad += served_ > delivered_ + tol;
        bad += delivered_ > generated_ + tol;
        bad += !(rep.energy_consumed >= 0.0);
        bad += rep.cost_total != rep.cost_intra + rep.cost_inter;
        rep.invariant_violations += bad;
    }

    const Scenario& sc_;
    Rng mobility_rng_;
    Rng channel_rng_;
    Rng loss_rng_;
    std::vector<Vec2> bs_;
    std::vector<WbanRuntime> wbans_;
    MobilityState mobility_;
    std::vector<double> warm_;
    double generated_ = 0.0;
    double delivered_ = 0.0;
    double served_ = 0.0;
    double lost_ = 0.0;
    double dropped_ = 0.0;
};

} // namespace

RunResult run(const Scenario& scenario, std::optional<int> epochs)
{
    scenario.validate();
    const int horizon = epochs.value_or(scenario.epochs());
    if (horizon < 1) {
        throw ConfigError("epoch override must be >= 1");
    }
    Network net(scenario);
    RunResult out;
    out.epochs.reserve(static_cast<std::size_t>(horizon));
    for (int t = 0; t < horizon; ++t) {
        out.epochs.push_back(net.advance(t));
        if (out.epochs.back().wbans_alive == 0 && t + 1 < horizon) {
            out.terminated_early = true;
            break;
        }
    }
    return out;
}

Summary summarize(const std::vector<EpochReport>& reports)
{
    if (reports.empty()) {
        throw DomainError("summarize: no epochs");
    }
    Summary s;
    s.epochs = static_cast<int>(reports.size());
    for (const auto& r : reports) {
        s.zeta += r.zeta;
        s.cost_intra += r.cost_intra;
        s.cost_inter += r.cost_inter;
        s.cost_total += r.cost_total;
        s.objective += r.objective;
        s.traffic_generated += r.traffic_generated;
        s.traffic_served += r.traffic_served;
        s.energy_consumed += r.energy_consumed;
        s.mean_aggregation_delay += r.mean_aggregation_delay;
        s.mean_wbans_alive += r.wbans_alive;
        s.constraint_violations += r.constraint_violations;
        s.invariant_violations += r.invariant_violations;
    }
    s.mean_aggregation_delay /= s.epochs;
    s.mean_wbans_alive /= s.epochs;
    return s;
}

Improvement improvement(const Summary& candidate, const Summary& baseline)
{
    auto lower = [](double c, double b) { return b != 0.0 ? 100.0 * (b - c) / b : 0.0; };
    auto higher = [](double c, double b) { return b != 0.0 ? 100.0 * (c - b) / b : 0.0; };
    return {lower(candidate.cost_total, baseline.cost_total),
            lower(candidate.mean_aggregation_delay, baseline.mean_aggregation_delay),
            lower(candidate.energy_consumed, baseline.energy_consumed),
            higher(candidate.traffic_served, baseline.traffic_served),
            lower(candidate.objective, baseline.objective)};
}

} // namespace deba
