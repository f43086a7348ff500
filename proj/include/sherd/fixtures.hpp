#pragma once

#include <filesystem>
#include <vector>

#include "sherd/profile.hpp"

namespace sherd {

// Thickness profiles (mm, 1 mm step) of the five neighbouring sherds A4, A5,
// B10, C2 and C15 from the broken replica vessel, in that order.
const std::vector<ThicknessProfile>& reference_profiles();

// Writes `<id>.tp.json` for every reference profile into `dir` (created if
// missing) and returns the written paths.
std::vector<std::filesystem::path> write_reference_profiles(const std::filesystem::path& dir);

} // namespace sherd
