#include "sherd/profile.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sherd/errors.hpp"
#include "sherd/json_format.hpp"

namespace sherd {

void validate(const ThicknessProfile& profile) {
  if (!(profile.step > 0.0) || !std::isfinite(profile.step))
    throw ValidationError("profile '" + profile.sherd_id + "': step must be positive");
  if (profile.samples.empty())
    throw ValidationError("profile '" + profile.sherd_id + "' has no samples");
  for (std::size_t i = 0; i < profile.samples.size(); ++i) {
    const double v = profile.samples[i];
    if (!(v > 0.0) || !std::isfinite(v))
      throw ValidationError("profile '" + profile.sherd_id + "': sample " + std::to_string(i) +
                            " is not a positive finite thickness");
  }
}

ThicknessProfile reversed(ThicknessProfile profile) {
  std::reverse(profile.samples.begin(), profile.samples.end());
  profile.origin_height.reset();
  return profile;
}

nlohmann::json to_json(const ThicknessProfile& profile) {
  nlohmann::json j;
  j["sherd_id"] = profile.sherd_id;
  j["step_mm"] = profile.step;
  j["samples_mm"] = profile.samples;
  if (profile.origin_height) j["origin_height_mm"] = *profile.origin_height;
  return j;
}

ThicknessProfile profile_from_json(const nlohmann::json& j) {
  ThicknessProfile p;
  try {
    p.sherd_id = j.at("sherd_id").get<std::string>();
    p.step = j.at("step_mm").get<double>();
    p.samples = j.at("samples_mm").get<std::vector<double>>();
    if (j.contains("origin_height_mm") && !j["origin_height_mm"].is_null())
      p.origin_height = j["origin_height_mm"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed profile document: ") + e.what());
  }
  validate(p);
  return p;
}

namespace {

std::string lower_ext(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

std::string profile_stem(const std::filesystem::path& path) {
  auto stem = path.stem().string();
  if (stem.size() > 3 && stem.ends_with(".tp")) stem.resize(stem.size() - 3);
  return stem;
}

ThicknessProfile parse_csv(const std::string& text, std::string id, double step) {
  ThicknessProfile p;
  p.sherd_id = std::move(id);
  p.step = step;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t");
    const std::string_view tok(line.data() + first, last - first + 1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      throw ParseError("bad thickness value '" + std::string(tok) + "'", line_no);
    p.samples.push_back(v);
  }
  validate(p);
  return p;
}

} // namespace

ThicknessProfile load_profile(const std::filesystem::path& path, double csv_step) {
  const auto ext = lower_ext(path);
  if (ext == ".csv" || ext == ".txt") {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str(), profile_stem(path), csv_step);
  }
  return profile_from_json(read_json_file(path));
}

void save_profile(const ThicknessProfile& profile, const std::filesystem::path& path) {
  validate(profile);
  if (lower_ext(path) == ".csv") {
    std::string text;
    char buf[32];
    for (double v : profile.samples) {
      std::snprintf(buf, sizeof buf, "%.4f\n", round4(v));
      text += buf;
    }
    write_text_file(path, text);
    return;
  }
  write_text_file(path, dump_fixed(to_json(profile)));
}

std::vector<ThicknessProfile> load_profile_dir(const std::filesystem::path& dir, double csv_step) {
  if (!std::filesystem::is_directory(dir)) throw IoError("'" + dir.string() + "' is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    if (name.ends_with(".tp.json") || lower_ext(entry.path()) == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<ThicknessProfile> out;
  for (const auto& f : files) out.push_back(load_profile(f, csv_step));
  return out;
}

} // namespace sherd
