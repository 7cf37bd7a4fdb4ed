#pragma once

#include "deba/simulation.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace deba {

std::string csv_header();

/// Header plus one row per epoch, reals with 9 significant digits.
std::string to_csv(const std::vector<EpochReport>& reports);

void emit_csv(const std::vector<EpochReport>& reports, const std::filesystem::path& path);

} // namespace deba
