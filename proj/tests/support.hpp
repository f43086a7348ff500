#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "sherd/mesh.hpp"
#include "sherd/vessel.hpp"

namespace sherd::test {

class TempDir {
public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "sherd-test-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

inline VesselSpec cylinder_spec(double height = 100.0, double radius = 55.0, double thickness = 5.0) {
  VesselSpec s;
  s.height = height;
  s.outer_radius = PiecewiseLinear::constant(radius, 0.0, height);
  s.thickness = PiecewiseLinear::constant(thickness, 0.0, height);
  return s;
}

inline double centroid_azimuth(const Vec3& c) {
  double theta = std::atan2(c.y(), c.x()) * 180.0 / std::numbers::pi;
  return theta < 0.0 ? theta + 360.0 : theta;
}

// Wall triangles of a synth_vessel mesh whose centroid satisfies `keep(theta, z)`.
template <class Keep>
TriMesh cut_sherd(const TriMesh& vessel, Keep keep, const std::string& name = "sherd") {
  std::vector<std::size_t> ids;
  for (std::size_t t = 0; t < vessel.triangles.size(); ++t) {
    if (is_base_triangle(vessel, t)) continue;
    const Vec3 c = triangle_centroid(vessel, t);
    if (keep(centroid_azimuth(c), c.z())) ids.push_back(t);
  }
  return submesh(vessel, ids, name);
}

inline TriMesh box_sherd(const TriMesh& vessel, double theta0, double theta1, double h0, double h1) {
  return cut_sherd(vessel, [&](double th, double z) {
    return th >= theta0 && th < theta1 && z >= h0 && z < h1;
  });
}

inline RigidTransform make_pose(const Vec3& axis, double angle, const Vec3& t) {
  RigidTransform p;
  p.rotation = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
  p.translation = t;
  return p;
}

} // namespace sherd::test
