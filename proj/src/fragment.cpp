#include "sherd/fragment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "sherd/errors.hpp"
#include "sherd/rng.hpp"
#include "sherd/vessel.hpp"

namespace sherd {

std::string zone_label(double theta0, double h0) {
  static constexpr char kZones[] = "ABCDEFGH";
  const int zone = std::clamp(static_cast<int>(std::floor(theta0 / 45.0 + 1e-9)), 0, 7);
  const int ring = static_cast<int>(std::floor(h0 / 5.0 + 1e-9)) + 1;
  return std::string(1, kZones[zone]) + std::to_string(ring);
}

void check_tiling(const FragmentSpec& spec, double height) {
  constexpr double eps = 1e-9;
  if (spec.pieces.empty()) throw SpecError("fragment spec has no pieces");
  double area = 0.0;
  for (std::size_t i = 0; i < spec.pieces.size(); ++i) {
    const auto& p = spec.pieces[i];
    if (!(p.theta1 > p.theta0) || !(p.h1 > p.h0))
      throw SpecError("piece " + std::to_string(i) + " has zero area");
    if (p.theta0 < -eps || p.theta1 > 360.0 + eps || p.h0 < -eps || p.h1 > height + eps)
      throw SpecError("piece " + std::to_string(i) + " lies outside the vessel wall");
    area += (p.theta1 - p.theta0) * (p.h1 - p.h0);
    for (std::size_t j = 0; j < i; ++j) {
      const auto& q = spec.pieces[j];
      const double dt = std::min(p.theta1, q.theta1) - std::max(p.theta0, q.theta0);
      const double dh = std::min(p.h1, q.h1) - std::max(p.h0, q.h0);
      if (dt > eps && dh > eps)
        throw SpecError("pieces " + std::to_string(j) + " and " + std::to_string(i) + " overlap");
    }
  }
  if (std::abs(area - 360.0 * height) > 1e-6 * 360.0 * height)
    throw SpecError("pieces do not cover the vessel wall");
}

FragmentSpec zone_tiling(double height) {
  FragmentSpec spec;
  for (int z = 0; z < 8; ++z) spec.pieces.push_back({45.0 * z, 45.0 * (z + 1), 0.0, height});
  return spec;
}

FragmentSpec random_tiling(double height, int count, std::uint64_t seed) {
  if (count < 1 || count > 24) throw SpecError("random_tiling supports 1..24 pieces");
  Rng rng(seed);
  const int columns = (count + 1) / 2;
  constexpr int kUnits = 72; // 5 degree units
  std::vector<int> widths(columns, 6);
  for (int spare = kUnits - 6 * columns; spare > 0; --spare) ++widths[rng.below(columns)];

  FragmentSpec spec;
  int start = 0;
  const long hmax = std::lround(height);
  for (int c = 0; c < columns; ++c) {
    const double t0 = 5.0 * start;
    const double t1 = 5.0 * (start + widths[c]);
    start += widths[c];
    const bool split = c < count - columns;
    if (split) {
      const long lo = std::max<long>(1, std::lround(0.25 * height));
      const long hi = std::min<long>(hmax - 1, std::lround(0.75 * height));
      const double cut = static_cast<double>(lo + static_cast<long>(rng.below(hi - lo + 1)));
      spec.pieces.push_back({t0, t1, 0.0, cut});
      spec.pieces.push_back({t0, t1, cut, height});
    } else {
      spec.pieces.push_back({t0, t1, 0.0, height});
    }
  }
  return spec;
}

namespace {

RigidTransform draw_pose(Rng& rng) {
  // Shoemake's uniform unit quaternion.
  const double u1 = rng.uniform(), u2 = rng.uniform(), u3 = rng.uniform();
  const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
  const double tau = 2.0 * std::numbers::pi;
  Eigen::Quaterniond q(b * std::cos(tau * u3), a * std::sin(tau * u2), a * std::cos(tau * u2),
                       b * std::sin(tau * u3));
  RigidTransform t;
  t.rotation = q.normalized().toRotationMatrix();
  for (int k = 0; k < 3; ++k) t.translation[k] = rng.uniform(-500.0, 500.0);
  return t;
}

} // namespace

RigidTransform random_pose(std::uint64_t seed) {
  Rng rng(seed);
  return draw_pose(rng);
}

std::vector<Sherd> fragment_vessel(const TriMesh& mesh, const FragmentSpec& spec,
                                   std::uint64_t rng_seed) {
  double height = 0.0;
  for (const auto& v : mesh.vertices) height = std::max(height, v.z());
  check_tiling(spec, height);

  std::vector<std::vector<std::size_t>> cells(spec.pieces.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    if (is_base_triangle(mesh, t)) continue;
    const Vec3 c = triangle_centroid(mesh, t);
    double theta = std::atan2(c.y(), c.x()) * 180.0 / std::numbers::pi;
    if (theta < 0.0) theta += 360.0;
    bool placed = false;
    for (std::size_t i = 0; i < spec.pieces.size() && !placed; ++i) {
      const auto& p = spec.pieces[i];
      if (theta >= p.theta0 && theta < p.theta1 && c.z() >= p.h0 && c.z() < p.h1) {
        cells[i].push_back(t);
        placed = true;
      }
    }
    if (!placed) throw SpecError("wall triangle " + std::to_string(t) + " falls outside every piece");
  }

  Rng rng(rng_seed);
  std::map<std::string, int> label_uses;
  std::vector<Sherd> out;
  out.reserve(spec.pieces.size());
  for (std::size_t i = 0; i < spec.pieces.size(); ++i) {
    const auto& p = spec.pieces[i];
    if (cells[i].empty())
      throw SpecError("piece " + std::to_string(i) + " is narrower than the mesh resolution");
    Sherd s;
    s.truth.label = zone_label(p.theta0, p.h0);
    if (int uses = label_uses[s.truth.label]++; uses > 0)
      s.truth.label += "-" + std::to_string(uses + 1);
    s.truth.h0 = p.h0;
    s.truth.h1 = p.h1;
    s.truth.theta0 = p.theta0;
    s.truth.theta1 = p.theta1;
    if (spec.repose) s.truth.pose = draw_pose(rng);
    s.mesh = transformed(submesh(mesh, cells[i], s.truth.label), s.truth.pose);
    out.push_back(std::move(s));
  }
  return out;
}

} // namespace sherd
