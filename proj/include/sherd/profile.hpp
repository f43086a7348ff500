#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace sherd {

// Wall-thickness samples at a fixed arc-length step, ordered base to rim.
struct ThicknessProfile {
  std::vector<double> samples; // mm
  double step = 1.0;           // mm
  std::optional<double> origin_height; // mm above the vessel base, when known
  std::string sherd_id;

  std::size_t size() const { return samples.size(); }
  bool operator==(const ThicknessProfile&) const = default;
};

// Throws ValidationError: empty, non-positive or non-finite samples, bad step.
void validate(const ThicknessProfile& profile);

ThicknessProfile reversed(ThicknessProfile profile);

// {sherd_id, step_mm, samples_mm, origin_height_mm?}
nlohmann::json to_json(const ThicknessProfile& profile);
ThicknessProfile profile_from_json(const nlohmann::json& j);

// `.json` (or `.tp.json`) is read as JSON; `.csv` / `.txt` as one value per
// line, with the id taken from the file stem and `csv_step` as the step.
ThicknessProfile load_profile(const std::filesystem::path& path, double csv_step = 1.0);
// Writes JSON with sorted keys and 4-decimal floats, or CSV for `.csv`.
void save_profile(const ThicknessProfile& profile, const std::filesystem::path& path);

// Every `*.tp.json` / `*.csv` profile in `dir`, sorted by file name.
std::vector<ThicknessProfile> load_profile_dir(const std::filesystem::path& dir,
                                               double csv_step = 1.0);

} // namespace sherd
