#include "cli.hpp"

#include "deba/report.hpp"
#include "deba/scenario.hpp"
#include "deba/simulation.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <cstring>
#include <ostream>

namespace deba::cli {

namespace {

std::filesystem::path companion_path(const std::filesystem::path& out, Mode mode)
{
    auto p = out;
    p.replace_filename(out.stem().string() + "." + std::string(to_string(mode)) + out.extension().string());
    return p;
}

std::string fmt(const char* spec, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

void print_summary(std::ostream& out, Mode mode, const Summary& s, const Summary* base,
                   std::optional<Mode> base_mode)
{
    struct Row {
        const char* name;
        double a;
        double b;
        double improvement;
    };
    const Improvement imp = base != nullptr ? improvement(s, *base) : Improvement{};
    const Summary& b = base != nullptr ? *base : s;
    const Row rows[] = {
        {"total cost", s.cost_total, b.cost_total, imp.cost},
        {"mean delay (s)", s.mean_aggregation_delay, b.mean_aggregation_delay, imp.delay},
        {"energy consumed (J)", s.energy_consumed, b.energy_consumed, imp.energy},
        {"traffic served (bits)", s.traffic_served, b.traffic_served, imp.traffic_served},
        {"objective", s.objective, b.objective, imp.objective},
    };
    char line[160];
    if (base != nullptr) {
        std::snprintf(line, sizeof line, "%-24s %16s %16s %12s\n", "metric", std::string(to_string(mode)).c_str(),
                      std::string(to_string(*base_mode)).c_str(), "improvement");
    } else {
        std::snprintf(line, sizeof line, "%-24s %16s\n", "metric", std::string(to_string(mode)).c_str());
    }
    out << line;
    for (const auto& r : rows) {
        if (base != nullptr) {
            std::snprintf(line, sizeof line, "%-24s %16.6g %16.6g %11.2f%%\n", r.name, r.a, r.b, r.improvement);
        } else {
            std::snprintf(line, sizeof line, "%-24s %16.6g\n", r.name, r.a);
        }
        out << line;
    }
    out << "epochs " << s.epochs << ", traffic generated " << fmt("%.6g", s.traffic_generated)
        << " bits, constraint violations " << s.constraint_violations << ", invariant violations "
        << s.invariant_violations << "\n";
}

} // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const char* env_seed)
{
    RunConfig cfg;
    CLI::App app{"Seeded WBAN data aggregation simulator", "deba-sim"};
    app.add_option("--scenario", cfg.scenario_path, "Scenario file (key = value)")->required();
    app.add_option("--mode", cfg.mode, "deba-p1 | deba-p1p2 | no-opt | greedy (default: from scenario)");
    app.add_option("--seed", cfg.seed, "RNG seed (default: DEBA_SEED, then the scenario)");
    app.add_option("--epochs", cfg.epochs, "Override the number of epochs")->check(CLI::PositiveNumber);
    app.add_option("--out", cfg.out_path, "Per-epoch CSV output path");
    app.add_option("--compare", cfg.compare_mode, "Second mode for a paired run with the same seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kConfigError;
    }

    try {
        Scenario sc = load_scenario(cfg.scenario_path);
        if (cfg.mode) {
            sc.mode = mode_from_string(*cfg.mode);
        }
        if (cfg.seed) {
            sc.seed = *cfg.seed;
        } else if (env_seed != nullptr && *env_seed != '\0') {
            const char* end = env_seed + std::strlen(env_seed);
            std::uint64_t v = 0;
            const auto [p, ec] = std::from_chars(env_seed, end, v);
            if (ec != std::errc{} || p != end) {
                throw ConfigError("DEBA_SEED is not an unsigned integer: '" + std::string(env_seed) + "'");
            }
            sc.seed = v;
        }
        std::optional<Mode> compare;
        if (cfg.compare_mode) {
            compare = mode_from_string(*cfg.compare_mode);
        }

        const RunResult primary = run(sc, cfg.epochs);
        if (!cfg.out_path.empty()) {
            emit_csv(primary.epochs, cfg.out_path);
        }
        if (primary.terminated_early) {
            err << "warning: every WBAN died after " << primary.epochs.size() << " epochs\n";
        }
        const Summary s = summarize(primary.epochs);
        if (compare) {
            Scenario other = sc;
            other.mode = *compare;
            const RunResult paired = run(other, cfg.epochs);
            if (!cfg.out_path.empty()) {
                emit_csv(paired.epochs, companion_path(cfg.out_path, *compare));
            }
            const Summary b = summarize(paired.epochs);
            print_summary(out, sc.mode, s, &b, compare);
        } else {
            print_summary(out, sc.mode, s, nullptr, std::nullopt);
        }
        return kOk;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kIoError;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const DomainError& e) {
        err << "configuration error: " << e.what() << "\n";
        return kConfigError;
    }
}

} // namespace deba::cli
