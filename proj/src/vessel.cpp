#include "sherd/vessel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sherd/errors.hpp"

namespace sherd {

PiecewiseLinear::PiecewiseLinear(std::vector<std::pair<double, double>> points)
    : points_(std::move(points)) {
  if (points_.empty()) throw SpecError("piecewise-linear curve needs at least one control point");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].first) || !std::isfinite(points_[i].second))
      throw SpecError("non-finite control point");
    if (i > 0 && !(points_[i].first > points_[i - 1].first))
      throw SpecError("control points must be strictly increasing in h");
  }
}

PiecewiseLinear PiecewiseLinear::constant(double value, double h0, double h1) {
  return PiecewiseLinear({{h0, value}, {h1, value}});
}

PiecewiseLinear PiecewiseLinear::sampled(const std::function<double(double)>& fn, double h0,
                                         double h1, std::size_t count) {
  if (count < 2) throw SpecError("sampled curve needs at least two control points");
  std::vector<std::pair<double, double>> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double h = h0 + (h1 - h0) * static_cast<double>(i) / static_cast<double>(count - 1);
    pts.emplace_back(h, fn(h));
  }
  return PiecewiseLinear(std::move(pts));
}

double PiecewiseLinear::operator()(double h) const {
  if (points_.empty()) return 0.0;
  if (h <= points_.front().first) return points_.front().second;
  if (h >= points_.back().first) return points_.back().second;
  auto it = std::upper_bound(points_.begin(), points_.end(), h,
                             [](double v, const auto& p) { return v < p.first; });
  const auto& [h1, v1] = *it;
  const auto& [h0, v0] = *(it - 1);
  const double w = (h - h0) / (h1 - h0);
  return v0 + w * (v1 - v0);
}

namespace {

// Both curves are piecewise linear, so their difference attains its minimum
// at a breakpoint of either one.
std::vector<double> breakpoints(const VesselSpec& spec) {
  std::vector<double> hs{0.0, spec.height};
  for (const auto& [h, v] : spec.outer_radius.points()) hs.push_back(h);
  for (const auto& [h, v] : spec.thickness.points()) hs.push_back(h);
  std::erase_if(hs, [&](double h) { return h < 0.0 || h > spec.height; });
  std::sort(hs.begin(), hs.end());
  return hs;
}

} // namespace

void check_spec(const VesselSpec& spec) {
  if (!(spec.height > 0.0) || !std::isfinite(spec.height)) throw SpecError("height must be positive");
  if (spec.outer_radius.points().empty() || spec.thickness.points().empty())
    throw SpecError("outer radius and thickness curves are required");
  if (spec.angular_resolution < 3) throw SpecError("angular_resolution must be at least 3");
  if (!(spec.vertical_resolution > 0.0)) throw SpecError("vertical_resolution must be positive");
  for (double h : breakpoints(spec)) {
    const double t = spec.thickness(h);
    const double r = spec.outer_radius(h);
    if (!(t > 0.0)) throw SpecError("thickness must be positive (h = " + std::to_string(h) + ")");
    if (!(r > t)) throw SpecError("inner radius must stay positive (h = " + std::to_string(h) + ")");
  }
}

std::vector<double> ring_heights(const VesselSpec& spec) {
  const auto rings = std::max<long>(1, std::lround(spec.height * spec.vertical_resolution));
  std::vector<double> hs;
  for (long k = 0; k <= rings; ++k)
    hs.push_back(spec.height * static_cast<double>(k) / static_cast<double>(rings));
  for (double h : breakpoints(spec)) hs.push_back(h);
  std::sort(hs.begin(), hs.end());
  std::vector<double> out;
  for (double h : hs) {
    if (out.empty() || h - out.back() > 1e-6) out.push_back(h);
  }
  out.back() = spec.height;
  return out;
}

TriMesh synth_vessel(const VesselSpec& spec) {
  check_spec(spec);
  const auto zs = ring_heights(spec);
  const auto n = static_cast<std::uint32_t>(spec.angular_resolution);
  const auto rings = static_cast<std::uint32_t>(zs.size());

  TriMesh mesh;
  mesh.name = "vessel";
  mesh.vertices.reserve(2 * rings * n + 2);

  std::vector<double> cos_t(n), sin_t(n);
  for (std::uint32_t j = 0; j < n; ++j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / n;
    cos_t[j] = std::cos(theta);
    sin_t[j] = std::sin(theta);
  }
  for (int shell = 0; shell < 2; ++shell) {
    for (double z : zs) {
      const double r = shell == 0 ? spec.outer_radius(z) : spec.outer_radius(z) - spec.thickness(z);
      for (std::uint32_t j = 0; j < n; ++j) mesh.vertices.emplace_back(r * cos_t[j], r * sin_t[j], z);
    }
  }
  // Separate centre vertices keep the underside and the floor two distinct
  // sheets, so every non-rim edge has exactly two triangles.
  const std::uint32_t bottom = static_cast<std::uint32_t>(mesh.vertices.size());
  mesh.vertices.emplace_back(0.0, 0.0, 0.0);
  const std::uint32_t floor = bottom + 1;
  mesh.vertices.emplace_back(0.0, 0.0, 0.0);

  auto outer = [&](std::uint32_t k, std::uint32_t j) { return k * n + j % n; };
  auto inner = [&](std::uint32_t k, std::uint32_t j) { return (rings + k) * n + j % n; };

  mesh.triangles.reserve(4 * (rings - 1) * n + 2 * n);
  for (std::uint32_t k = 0; k + 1 < rings; ++k) {
    for (std::uint32_t j = 0; j < n; ++j) {
      const auto a = outer(k, j), b = outer(k, j + 1), c = outer(k + 1, j + 1), d = outer(k + 1, j);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  }
  for (std::uint32_t k = 0; k + 1 < rings; ++k) {
    for (std::uint32_t j = 0; j < n; ++j) {
      const auto a = inner(k, j), b = inner(k, j + 1), c = inner(k + 1, j + 1), d = inner(k + 1, j);
      mesh.triangles.push_back({a, c, b});
      mesh.triangles.push_back({a, d, c});
    }
  }
  // Base at z = 0: underside fan on the outer ring facing -z, floor fan on
  // the inner ring facing +z.
  for (std::uint32_t j = 0; j < n; ++j) {
    mesh.triangles.push_back({bottom, outer(0, j + 1), outer(0, j)});
    mesh.triangles.push_back({floor, inner(0, j), inner(0, j + 1)});
  }
  return mesh;
}

bool is_base_triangle(const TriMesh& mesh, std::size_t t) {
  const auto& tri = mesh.triangles[t];
  return std::all_of(tri.begin(), tri.end(),
                     [&](std::uint32_t v) { return std::abs(mesh.vertices[v].z()) <= 1e-9; });
}

} // namespace sherd
