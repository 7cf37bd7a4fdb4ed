#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace deba::cli {

enum ExitCode { kOk = 0, kConfigError = 1, kIoError = 2 };

struct RunConfig {
    std::string scenario_path;
    std::optional<std::string> mode;
    std::optional<unsigned long long> seed;
    std::optional<int> epochs;
    std::string out_path;
    std::optional<std::string> compare_mode;
};

/// Full command line entry point. `env_seed` stands in for the DEBA_SEED variable.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
         const char* env_seed);

} // namespace deba::cli
