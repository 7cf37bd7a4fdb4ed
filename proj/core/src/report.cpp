#include "deba/report.hpp"

#include <cstdio>
#include <fstream>

namespace deba {

std::string csv_header()
{
    return "epoch,zeta,cost_intra,cost_inter,cost_total,objective,traffic_generated_bits,traffic_served_bits,"
           "energy_consumed_j,mean_delay_s,wbans_alive,constraint_violations";
}

namespace {

void append_real(std::string& out, double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    out += buf;
    out += ',';
}

} // namespace

std::string to_csv(const std::vector<EpochReport>& reports)
{
    std::string out = csv_header() + "\n";
    for (const auto& r : reports) {
        out += std::to_string(r.epoch) + ",";
        for (double v : {r.zeta, r.cost_intra, r.cost_inter, r.cost_total, r.objective, r.traffic_generated,
                         r.traffic_served, r.energy_consumed, r.mean_aggregation_delay}) {
            append_real(out, v);
        }
        out += std::to_string(r.wbans_alive) + "," + std::to_string(r.constraint_violations) + "\n";
    }
    return out;
}

void emit_csv(const std::vector<EpochReport>& reports, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    const std::string text = to_csv(reports);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

} // namespace deba
