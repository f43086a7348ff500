#include "sherd/fixtures.hpp"

#include <utility>

namespace sherd {

namespace {

// Values as measured on the 3D models, base to rim.
const std::vector<std::pair<const char*, std::vector<double>>> kTable = {
  {"A4",
   {
      5.44, 5.56, 5.41, 5.44, 5.28, 5.34, 5.34, 5.46, 5.56, 5.36,
      5.34, 6.33, 5.38, 5.44, 5.4, 5.4, 5.33, 5.26, 5.06, 4.99,
      5.12, 5.8, 6.07, 5.98, 5.91, 5.88, 5.8, 5.7, 5.56, 5.56,
      5.46, 5.37, 5.31, 5.37, 5.5, 5.57, 5.61, 5.36, 5.21, 5.14,
      5.16, 5.86, 6.04, 6.01, 6.13, 6.18, 6.16, 6.16, 6.18, 6.16,
      6.2, 6.26, 6.34, 6.74, 6.94, 7.08, 7.13, 7.23, 7.56, 7.58,
      7.62,
   }},
  {"A5",
   {
      5.94, 5.94, 5.86, 5.8, 5.74, 5.73, 5.62, 5.46, 5.42, 5.38,
      5.32, 5.23, 5.13, 5.01, 4.97, 4.83, 4.77, 4.81, 4.88, 4.95,
      5.01, 5.12, 5.24, 5.22, 5.14, 5.1, 5.11, 5.18, 5.32, 5.3,
      5.28, 5.3, 5.32, 5.28, 5.34, 5.21, 5.24, 5.27, 5.25, 5.26,
      5.28, 5.2, 5.06, 5.01, 5.08, 5.52, 5.83, 6.07, 5.99, 5.96,
      5.86, 5.66, 5.54, 5.39, 5.33, 5.32, 5.32,
   }},
  {"B10",
   {
      5.81, 5.74, 5.72, 5.68, 5.62, 5.63, 5.54, 5.53, 5.38, 5.3,
      5.24, 5.26, 5.24, 5.22, 5.21, 5.15, 5.1, 5.08, 4.86, 4.81,
      4.9, 4.94, 5.02, 5.08, 5.19, 5.28, 5.26, 5.16, 5.16, 5.16,
      5.28, 5.3, 5.33, 5.33, 5.36, 5.23,
   }},
  {"C2",
   {
      4.94, 4.98, 4.96, 5.02, 5.07, 5.22, 5.23, 5.2, 5.13, 5.15,
      5.21, 5.32, 5.32, 5.34, 5.46, 5.39, 5.31,
   }},
  {"C15",
   {
      5.26, 5.2, 5.22, 5.21, 5.1, 4.96, 4.9, 5.02, 5.6, 5.72,
      5.86, 5.86, 5.86, 5.72, 5.7,
   }},
};

} // namespace

const std::vector<ThicknessProfile>& reference_profiles() {
  static const std::vector<ThicknessProfile> profiles = [] {
    std::vector<ThicknessProfile> out;
    for (const auto& [id, samples] : kTable) {
      ThicknessProfile p;
      p.sherd_id = id;
      p.step = 1.0;
      p.samples = samples;
      out.push_back(std::move(p));
    }
    return out;
  }();
  return profiles;
}

std::vector<std::filesystem::path> write_reference_profiles(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const auto& p : reference_profiles()) {
    auto path = dir / (p.sherd_id + ".tp.json");
    save_profile(p, path);
    written.push_back(std::move(path));
  }
  return written;
}

} // namespace sherd
