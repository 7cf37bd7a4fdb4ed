// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.
//
//   deba_acceptance [criterion ...]   run only the listed criteria (1-8)

#include "deba/model.hpp"
#include "deba/optimizer.hpp"
#include "deba/phase.hpp"
#include "deba/report.hpp"
#include "deba/scenario.hpp"
#include "deba/simulation.hpp"
#include "instances.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using namespace deba;

const fs::path kScenarios = fs::path(DEBA_SOURCE_DIR) / "scenarios";
constexpr std::uint64_t kOracleSeed = 20261016;
constexpr int kOracleInstances = 60;
constexpr int kPairedSeeds = 10;
constexpr int kGoldenEpochs = 5;

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Stopwatch {
public:
    [[nodiscard]] double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string format(const char* spec, auto... args)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, spec, args...);
    return buf;
}

Scenario desk(Mode mode, std::uint64_t seed)
{
    Scenario s = load_scenario(kScenarios / "desk.cfg");
    s.mode = mode;
    s.seed = seed;
    return s;
}

// Criterion 1 ---------------------------------------------------------------

Outcome formulas()
{
    Stopwatch clock;
    int checked = 0;
    int failed = 0;
    std::string first;
    auto expect = [&](const char* name, double got, double want) {
        ++checked;
        const double err = want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
        if (!(err <= 1e-12)) {
            ++failed;
            if (first.empty()) {
                first = format("%s: got %.17g want %.17g", name, got, want);
            }
        }
    };

    // Delay, energy and buffer weights.
    expect("delay ratio", delay_weight({0.001, 0.004, 0.005, 0.010, 0.020}), 0.5);
    expect("delay queueing only", delay_weight(DelayBreakdown::from_components(0, 0, 0, 0.3)), 0.0);
    expect("delay no queueing", delay_weight(DelayBreakdown::from_components(0.1, 0.2, 0.3, 0)), 1.0);
    expect("energy half", energy_weight(0.25, 0.5, 1.0), 0.5);
    expect("energy full", energy_weight(0.5, 0.5, 1.3), 1.3);
    expect("energy empty", energy_weight(0.0, 0.5, 1.0), 0.0);
    expect("buffer quarter", buffer_weight(8e6, 2e6), 0.75);
    expect("buffer empty", buffer_weight(8e6, 0.0), 1.0);
    expect("buffer full", buffer_weight(8e6, 8e6), 0.0);

    // Phase I components and cost.
    const std::array<std::size_t, 1> one{0};
    const auto single = Topology::star(one, 1, one, 1);
    const std::array<double, 1> v1{1e6};
    const auto p1 = phase1_components(single, v1);
    expect("phase1 link", p1.link[0], 1e6);
    expect("phase1 sink", p1.sink[0], 1e6);
    Topology unlinked = single;
    unlinked.intra.set(0, 0, false);
    unlinked.inter.set(0, 0, false);
    expect("phase1 no link", phase1_components(unlinked, v1).total(), 0.0);
    const std::array<std::size_t, 2> shared{0, 0};
    const auto pair = Topology::star(shared, 1, one, 1);
    const std::array<double, 2> v2{1e6, 2e6};
    expect("phase1 two sensors", phase1_components(pair, v2).sink[0], 3e6);
    expect("phase1 cost", phase1_cost(2e-9, 1e6), 0.002);
    expect("phase1 cost zero", phase1_cost(2e-9, 0.0), 0.0);

    // Phase II components and cost.
    const std::array<double, 1> f{5e5};
    expect("phase2 sink", phase2_components(single, f).sink[0], 5e5);
    expect("phase2 no link", phase2_components(unlinked, f).total(), 0.0);
    expect("phase2 cost", phase2_cost(4e-9, 1e6), 0.004);
    expect("phase2 cost zero", phase2_cost(4e-9, 0.0), 0.0);
    expect("phase2 free", phase2_cost(0.0, 1e6), 0.0);

    // Total cost.
    const std::array<double, 1> intra{1e6};
    const std::array<double, 1> inter{1e6};
    expect("total one wban", total_cost(CostParams{}, intra, inter), 0.006);
    expect("total empty", total_cost(CostParams{}, {}, {}), 0.0);
    const std::vector<double> many(25, 1e6);
    expect("total additive", total_cost(CostParams{}, many, many), 25 * 0.006);

    const double t = clock.seconds();
    Outcome o;
    o.pass = failed == 0 && t < 1.0;
    o.detail = format("%d/%d formula checks exact to 1e-12, %.3f s (limit 1 s)", checked - failed, checked, t);
    if (!first.empty()) {
        o.detail += "; first failure " + first;
    }
    return o;
}

// Criteria 2 and 3 ----------------------------------------------------------

struct OracleStats {
    Outcome agreement;
    Outcome duality;
};

OracleStats oracle_comparison()
{
    Stopwatch clock;
    Rng rng(kOracleSeed);
    SolverParams params;
    params.record_trace = true;

    int feasible = 0;
    int within = 0;
    int agree = 0;
    double worst_rel = 0.0;
    std::size_t iterations = 0;
    int duality_breaks = 0;
    int negative_multipliers = 0;
    for (int i = 0; i < kOracleInstances; ++i) {
        const std::size_t n = 1 + rng.next() % 3;
        // Phase II adds a grid dimension; keep instances at three at most.
        const auto s = testing::random_instance(rng, n, n < 3 && rng.bernoulli(0.5));
        const auto c = testing::random_constraints(rng);
        const auto oracle = brute_force_oracle(s, c, 0.01);
        const auto got = solve(s, c, params);

        if (got.feasible == oracle.feasible) {
            ++agree;
        }
        if (got.feasible && oracle.feasible) {
            ++feasible;
            const double diff = std::abs(got.objective - oracle.objective);
            worst_rel = std::max(worst_rel, diff / oracle.objective);
            if (diff <= std::max(0.02 * oracle.objective, 1e-6)) {
                ++within;
            }
        }
        for (const auto& it : got.trace) {
            ++iterations;
            if (it.min_multiplier < 0.0) {
                ++negative_multipliers;
            }
            if (got.feasible && it.dual_value > got.objective + 1e-9 * std::max(1.0, std::abs(got.objective))) {
                ++duality_breaks;
            }
        }
    }
    const double t = clock.seconds();

    OracleStats out;
    out.agreement.pass = agree == kOracleInstances && within == feasible && feasible > 0 && t < 120.0;
    out.agreement.detail = format("%d instances, feasibility agreement %d/%d, objective within max(2%%, 1e-6) "
                                  "on %d/%d feasible (worst %.2f%%), %.1f s (limit 120 s)",
                                  kOracleInstances, agree, kOracleInstances, within, feasible, 100.0 * worst_rel, t);
    out.duality.pass = duality_breaks == 0 && negative_multipliers == 0 && iterations > 0;
    out.duality.detail = format("%zu recorded iterations, %d weak duality breaks, %d negative multipliers",
                                iterations, duality_breaks, negative_multipliers);
    return out;
}

// Criterion 4 ---------------------------------------------------------------

// Recomputes the bit ledger from the published reports, independently of the
// simulator's own check.
int ledger_breaks(const std::vector<EpochReport>& reports)
{
    int bad = 0;
    double generated = 0.0;
    double delivered = 0.0;
    double served = 0.0;
    double gone = 0.0;
    for (const auto& e : reports) {
        generated += e.traffic_generated;
        delivered += e.delivered_lmu;
        served += e.traffic_served;
        gone += e.lost_intra + e.lost_inter + e.dropped_overflow;
        const double tol = 1e-9 * std::max(1.0, generated);
        bad += served > delivered + tol;
        bad += delivered > generated + tol;
        bad += std::abs(served + gone + e.sensor_backlog + e.lmu_backlog - generated) > tol;
        bad += e.energy_consumed < 0.0;
        bad += e.cost_total != e.cost_intra + e.cost_inter;
        bad += e.invariant_violations;
    }
    return bad;
}

Outcome desk_invariants()
{
    Stopwatch clock;
    std::string per_mode;
    int total = 0;
    for (auto mode : {Mode::DebaP1, Mode::DebaP1P2, Mode::NoOpt, Mode::GreedyBaseline}) {
        const auto r = run(desk(mode, 1));
        const int bad = ledger_breaks(r.epochs) + (r.epochs.size() != 300 ? 1 : 0);
        total += bad;
        per_mode += format(" %s=%d", std::string(to_string(mode)).c_str(), bad);
    }
    const double t = clock.seconds();
    Outcome o;
    o.pass = total == 0 && t < 60.0;
    o.detail = format("300 epochs x 40 WBANs x 5 BSs, violations per mode:%s, %.1f s (limit 60 s)", per_mode.c_str(), t);
    return o;
}

// Criteria 5 and 6 ----------------------------------------------------------

struct Paired {
    Outcome fig3;
    Outcome claims;
};

Paired paired_runs()
{
    int cost_wins = 0;
    int delay_wins = 0;
    double served_sum = 0.0;
    double energy_sum = 0.0;
    std::string served_list;
    std::string energy_list;
    for (int seed = 1; seed <= kPairedSeeds; ++seed) {
        const auto deba = summarize(run(desk(Mode::DebaP1P2, seed)).epochs);
        const auto none = summarize(run(desk(Mode::NoOpt, seed)).epochs);
        const auto greedy = summarize(run(desk(Mode::GreedyBaseline, seed)).epochs);
        cost_wins += deba.cost_total <= none.cost_total;
        delay_wins += deba.mean_aggregation_delay <= none.mean_aggregation_delay;
        const auto imp = improvement(deba, greedy);
        served_sum += imp.traffic_served;
        energy_sum += imp.energy;
        served_list += format(" %.1f", imp.traffic_served);
        energy_list += format(" %.1f", imp.energy);
    }
    Paired p;
    p.fig3.pass = cost_wins == kPairedSeeds && delay_wins >= kPairedSeeds - 1;
    p.fig3.detail = format("deba-p1p2 vs no-opt over %d seeds: cost lower or equal %d/%d (need %d), "
                           "delay lower or equal %d/%d (need %d)",
                           kPairedSeeds, cost_wins, kPairedSeeds, kPairedSeeds, delay_wins, kPairedSeeds, kPairedSeeds - 1);
    const double served = served_sum / kPairedSeeds;
    const double energy = energy_sum / kPairedSeeds;
    p.claims.pass = served >= 3.0 && energy >= 3.0;
    p.claims.detail = format("deba-p1p2 vs greedy, mean of %d seeds: traffic served %+.2f%% (need >= 3), "
                             "energy %+.2f%% (need >= 3); served by seed [%s ], energy by seed [%s ]",
                             kPairedSeeds, served, energy, served_list.c_str(), energy_list.c_str());
    return p;
}

// Criterion 7 ---------------------------------------------------------------

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism()
{
    int identical = 0;
    int checked = 0;
    const auto dir = fs::temp_directory_path();
    for (auto mode : {Mode::DebaP1, Mode::DebaP1P2, Mode::NoOpt, Mode::GreedyBaseline}) {
        const auto a = dir / "deba_acceptance_a.csv";
        const auto b = dir / "deba_acceptance_b.csv";
        emit_csv(run(desk(mode, 7), 60).epochs, a);
        emit_csv(run(desk(mode, 7), 60).epochs, b);
        ++checked;
        identical += slurp(a) == slurp(b);
        fs::remove(a);
        fs::remove(b);
    }

    int golden_ok = 0;
    int golden_total = 0;
    auto full = load_scenario(kScenarios / "deba_table1.cfg");
    for (auto mode : {Mode::DebaP1, Mode::DebaP1P2, Mode::NoOpt, Mode::GreedyBaseline}) {
        full.mode = mode;
        const auto golden = fs::path(DEBA_GOLDEN_DIR) / ("deba_table1." + std::string(to_string(mode)) + ".csv");
        ++golden_total;
        golden_ok += fs::exists(golden) && to_csv(run(full, kGoldenEpochs).epochs) == slurp(golden);
    }
    Outcome o;
    o.pass = identical == checked && golden_ok == golden_total;
    o.detail = format("repeat runs byte-identical %d/%d modes, bundled scenario matches golden files %d/%d",
                      identical, checked, golden_ok, golden_total);
    return o;
}

// Criterion 8 ---------------------------------------------------------------

Outcome full_scale()
{
    Stopwatch clock;
    const auto sc = load_scenario(kScenarios / "deba_table1.cfg");
    const auto r = run(sc);
    const double t = clock.seconds();
    const int bad = ledger_breaks(r.epochs);
    Outcome o;
    o.pass = sc.n_wbans == 400 && sc.n_bs == 15 && static_cast<int>(r.epochs.size()) == 3600 && bad == 0 && t < 600.0;
    o.detail = format("%d WBANs, %d BSs, %zu/%d epochs, %d invariant violations, %.1f s (limit 600 s)", sc.n_wbans,
                      sc.n_bs, r.epochs.size(), sc.epochs(), bad, t);
    return o;
}

} // namespace

int main(int argc, char** argv)
{
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        only.insert(std::atoi(argv[i]));
    }
    auto wanted = [&](std::initializer_list<int> ids) {
        return only.empty() || std::any_of(ids.begin(), ids.end(), [&](int id) { return only.contains(id); });
    };

    std::map<int, Outcome> results;
    auto report = [&](int id, const Outcome& o) {
        results[id] = o;
        std::printf("criterion %d %s: %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    };

    try {
        if (wanted({1})) {
            report(1, formulas());
        }
        if (wanted({2, 3})) {
            const auto o = oracle_comparison();
            report(2, o.agreement);
            report(3, o.duality);
        }
        if (wanted({4})) {
            report(4, desk_invariants());
        }
        if (wanted({5, 6})) {
            const auto p = paired_runs();
            report(5, p.fig3);
            report(6, p.claims);
        }
        if (wanted({7})) {
            report(7, determinism());
        }
        if (wanted({8})) {
            report(8, full_scale());
        }
    } catch (const std::exception& e) {
        std::printf("acceptance aborted: %s\n", e.what());
        return 2;
    }

    const bool all = std::all_of(results.begin(), results.end(), [](const auto& kv) { return kv.second.pass; });
    std::printf("%zu criteria, %s\n", results.size(), all ? "all passed" : "some failed");
    return all ? 0 : 1;
}
