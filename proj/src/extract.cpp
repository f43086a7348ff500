#include "sherd/extract.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sherd/errors.hpp"
#include "sherd/section.hpp"

namespace sherd {

Vec3 meridian_direction(const VesselAxis& axis, double azimuth_deg) {
  const Vec3& d = axis.direction;
  const Vec3 ref0 = std::abs(d.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 ref = (ref0 - ref0.dot(d) * d).normalized();
  const Vec3 ortho = d.cross(ref);
  const double a = azimuth_deg * std::numbers::pi / 180.0;
  return std::cos(a) * ref + std::sin(a) * ortho;
}

double curve_length(const MeridianCurve& curve) {
  double len = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) len += (curve[i] - curve[i - 1]).norm();
  return len;
}

namespace {

double mean_radius(const MeridianCurve& c) {
  double s = 0.0;
  for (const auto& p : c) s += p.x();
  return c.empty() ? 0.0 : s / static_cast<double>(c.size());
}

MeridianCurve dedupe(MeridianCurve c) {
  MeridianCurve out;
  out.reserve(c.size());
  for (const auto& p : c) {
    if (out.empty() || (p - out.back()).norm() > 1e-12) out.push_back(p);
  }
  return out;
}

} // namespace

std::optional<MeridianSection> meridian_section(const TriMesh& mesh, const VesselAxis& axis,
                                                double azimuth_deg) {
  const Vec3 radial = meridian_direction(axis, azimuth_deg);
  const Vec3 normal = axis.direction.cross(radial);
  const Vec3 origin = axis.point;
  auto chains = slice_mesh(mesh, origin, normal, [&](const Vec3& a, const Vec3& b) {
    return (0.5 * (a + b) - origin).dot(radial) > 0.0;
  });

  auto to_curve = [&](const std::vector<Vec3>& pts) {
    MeridianCurve c;
    c.reserve(pts.size());
    for (const auto& p : pts) c.emplace_back((p - origin).dot(radial), (p - origin).dot(axis.direction));
    return dedupe(std::move(c));
  };

  MeridianCurve first, second;
  std::vector<MeridianCurve> rest;
  if (chains.size() >= 2) {
    std::stable_sort(chains.begin(), chains.end(),
                     [](const Polyline3& a, const Polyline3& b) { return a.length() > b.length(); });
    first = to_curve(chains[0].points);
    second = to_curve(chains[1].points);
    for (std::size_t i = 2; i < chains.size(); ++i) {
      auto c = to_curve(chains[i].points);
      if (c.size() >= 2) rest.push_back(std::move(c));
    }
  } else if (chains.size() == 1 && chains[0].closed) {
    auto loop = to_curve(chains[0].points);
    if (loop.size() < 4) return std::nullopt;
    const auto [lo, hi] = std::minmax_element(loop.begin(), loop.end(),
                                              [](const auto& a, const auto& b) { return a.y() < b.y(); });
    auto i0 = static_cast<std::size_t>(lo - loop.begin());
    auto i1 = static_cast<std::size_t>(hi - loop.begin());
    if (i0 > i1) std::swap(i0, i1);
    first.assign(loop.begin() + static_cast<long>(i0), loop.begin() + static_cast<long>(i1) + 1);
    second.assign(loop.begin() + static_cast<long>(i1), loop.end());
    second.insert(second.end(), loop.begin(), loop.begin() + static_cast<long>(i0) + 1);
  } else {
    return std::nullopt;
  }
  if (first.size() < 2 || second.size() < 2) return std::nullopt;
  const double r1 = mean_radius(first), r2 = mean_radius(second);
  if (std::abs(r1 - r2) < 1e-9) return std::nullopt;

  MeridianSection section;
  section.outer = r1 > r2 ? std::move(first) : std::move(second);
  section.inner.push_back(r1 > r2 ? std::move(second) : std::move(first));
  for (auto& c : rest) section.inner.push_back(std::move(c));
  if (section.outer.front().y() > section.outer.back().y())
    std::reverse(section.outer.begin(), section.outer.end());
  return section;
}

ProfilePlane select_profile_plane(const TriMesh& mesh, const VesselAxis& axis, int n_candidates,
                                  double min_span) {
  if (n_candidates < 1) throw DegenerateGeometry("need at least one candidate azimuth");
  ProfilePlane best{axis, 0.0, 0.0};
  for (int k = 0; k < n_candidates; ++k) {
    const double az = 360.0 * k / n_candidates;
    const auto section = meridian_section(mesh, axis, az);
    if (!section) continue;
    const double span = curve_length(section->outer);
    if (span > best.arc_span + 1e-6) {
      best.azimuth = az;
      best.arc_span = span;
    }
  }
  if (!(best.arc_span > min_span))
    throw DegenerateGeometry("no meridian plane cuts the sherd in a curve longer than " +
                             std::to_string(min_span) + " mm");
  return best;
}

namespace {

class ArcLength {
public:
  explicit ArcLength(const MeridianCurve& c) : curve_(c), cum_(c.size(), 0.0) {
    for (std::size_t i = 1; i < c.size(); ++i) cum_[i] = cum_[i - 1] + (c[i] - c[i - 1]).norm();
  }
  double total() const { return cum_.back(); }

  Eigen::Vector2d at(double s) const {
    s = std::clamp(s, 0.0, total());
    auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
    std::size_t i = it == cum_.end() ? cum_.size() - 1 : static_cast<std::size_t>(it - cum_.begin());
    if (i == 0) i = 1;
    const double seg = cum_[i] - cum_[i - 1];
    const double w = seg > 0.0 ? (s - cum_[i - 1]) / seg : 0.0;
    return curve_[i - 1] + w * (curve_[i] - curve_[i - 1]);
  }

private:
  const MeridianCurve& curve_;
  std::vector<double> cum_;
};

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

std::optional<double> first_hit(const Eigen::Vector2d& origin, const Eigen::Vector2d& dir,
                                const MeridianCurve& curve) {
  std::optional<double> best;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const Eigen::Vector2d a = curve[i - 1], e = curve[i] - curve[i - 1];
    const double denom = cross2(dir, e);
    if (std::abs(denom) < 1e-15) continue;
    const Eigen::Vector2d ao = a - origin;
    const double t = cross2(ao, e) / denom;
    const double u = cross2(ao, dir) / denom;
    if (t > 1e-9 && u >= -1e-12 && u <= 1.0 + 1e-12 && (!best || t < *best)) best = t;
  }
  return best;
}

} // namespace

ProfileExtraction extract_profile_detailed(const TriMesh& mesh, const ProfilePlane& plane,
                                           double step, std::string sherd_id) {
  if (!(step > 0.0)) throw ValidationError("step must be positive");
  auto section = meridian_section(mesh, plane.axis, plane.azimuth);
  if (!section) throw DegenerateGeometry("cannot separate inner and outer wall curves");
  const auto& outer = section->outer;
  auto inners = section->inner;

  // Let rays that graze an inner curve's end still register: the two
  // surfaces end on the same fracture line only up to rounding.
  const double ext = 0.1 * step;
  for (auto& inner : inners) {
    const Eigen::Vector2d d0 = (inner[0] - inner[1]).normalized();
    const Eigen::Vector2d d1 = (inner.back() - inner[inner.size() - 2]).normalized();
    inner.insert(inner.begin(), inner[0] + ext * d0);
    inner.push_back(inner.back() + ext * d1);
  }
  const MeridianCurve& inner = inners.front();

  const ArcLength arc(outer);
  const double length = arc.total();
  const auto stations = static_cast<std::size_t>(std::floor(length / step + 1e-9)) + 1;

  Eigen::Vector2d inner_mean = Eigen::Vector2d::Zero(), outer_mean = Eigen::Vector2d::Zero();
  for (const auto& p : inner) inner_mean += p;
  for (const auto& p : outer) outer_mean += p;
  inner_mean /= static_cast<double>(inner.size());
  outer_mean /= static_cast<double>(outer.size());
  const Eigen::Vector2d chord = outer.back() - outer.front();
  const double side = Eigen::Vector2d(-chord.y(), chord.x()).dot(inner_mean - outer_mean) >= 0.0 ? 1.0 : -1.0;

  std::vector<std::optional<double>> hits(stations);
  const double half = 0.5 * step;
  for (std::size_t k = 0; k < stations; ++k) {
    const double s = static_cast<double>(k) * step;
    const Eigen::Vector2d p = arc.at(s);
    Eigen::Vector2d tangent = arc.at(s + half) - arc.at(s - half);
    if (tangent.norm() == 0.0) continue;
    tangent.normalize();
    const Eigen::Vector2d normal = side * Eigen::Vector2d(-tangent.y(), tangent.x());
    for (const auto& curve : inners) {
      const auto t = first_hit(p, normal, curve);
      if (t && (!hits[k] || *t < *hits[k])) hits[k] = t;
    }
  }

  std::size_t first = 0;
  while (first < stations && !hits[first]) ++first;
  if (first == stations) throw DegenerateGeometry("no station reaches the inner wall");
  std::size_t last = stations - 1;
  while (!hits[last]) --last;

  ProfileExtraction out;
  out.stations = stations;
  out.trimmed_front = first;
  out.trimmed_back = stations - 1 - last;
  out.start_height = arc.at(static_cast<double>(first) * step).y();
  out.profile.step = step;
  out.profile.sherd_id = sherd_id.empty() ? mesh.name : std::move(sherd_id);
  for (std::size_t k = first; k <= last; ++k) {
    if (!hits[k]) throw GapError("no inner wall hit at interior station " + std::to_string(k), k);
    out.profile.samples.push_back(*hits[k]);
  }
  return out;
}

ThicknessProfile extract_profile(const TriMesh& mesh, const ProfilePlane& plane, double step,
                                 std::string sherd_id) {
  return extract_profile_detailed(mesh, plane, step, std::move(sherd_id)).profile;
}

} // namespace sherd
