// Rewrites the golden CSVs: regen <scenario> <output dir>

#include "deba/report.hpp"
#include "deba/scenario.hpp"
#include "deba/simulation.hpp"

#include <cstdio>
#include <filesystem>
#include <string>

namespace {

constexpr int kGoldenEpochs = 5;

} // namespace

int main(int argc, char** argv)
{
    if (argc != 3) {
        std::fprintf(stderr, "usage: %s <scenario> <output dir>\n", argv[0]);
        return 1;
    }
    const std::filesystem::path scenario = argv[1];
    const std::filesystem::path dir = argv[2];
    auto sc = deba::load_scenario(scenario);
    for (auto mode : {deba::Mode::DebaP1, deba::Mode::DebaP1P2, deba::Mode::NoOpt, deba::Mode::GreedyBaseline}) {
        sc.mode = mode;
        const auto path = dir / (scenario.stem().string() + "." + std::string(deba::to_string(mode)) + ".csv");
        deba::emit_csv(deba::run(sc, kGoldenEpochs).epochs, path);
        std::printf("wrote %s\n", path.c_str());
    }
    return 0;
}
