#include "sherd/axis.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <Eigen/Dense>

#include "sherd/errors.hpp"
#include "sherd/section.hpp"

namespace sherd {

double VesselAxis::distance_to(const Vec3& p) const {
  const Vec3 v = p - point;
  return (v - v.dot(direction) * direction).norm();
}

double axis_angle(const Vec3& a, const Vec3& b) {
  const double c = std::abs(a.normalized().dot(b.normalized()));
  const double s = a.normalized().cross(b.normalized()).norm();
  return std::atan2(s, c);
}

std::optional<Circle2> fit_circle(const std::vector<Eigen::Vector2d>& points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  if (n < 3) return std::nullopt;
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(n);

  // Algebraic (Kasa) fit: x^2 + y^2 + D x + E y + F = 0.
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector2d q = points[static_cast<std::size_t>(i)] - mean;
    a(i, 0) = q.x();
    a(i, 1) = q.y();
    a(i, 2) = 1.0;
    b(i) = -q.squaredNorm();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) return std::nullopt;
  const Eigen::Vector3d sol = qr.solve(b);
  Eigen::Vector2d c(-0.5 * sol(0), -0.5 * sol(1));
  const double r2 = c.squaredNorm() - sol(2);
  if (!(r2 > 0.0) || !std::isfinite(r2)) return std::nullopt;
  double r = std::sqrt(r2);

  // Geometric refinement.
  for (int it = 0; it < 30; ++it) {
    Eigen::MatrixXd j(n, 3);
    Eigen::VectorXd res(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Vector2d q = points[static_cast<std::size_t>(i)] - mean - c;
      const double d = q.norm();
      if (d == 0.0) return std::nullopt;
      j(i, 0) = -q.x() / d;
      j(i, 1) = -q.y() / d;
      j(i, 2) = -1.0;
      res(i) = d - r;
    }
    const Eigen::Vector3d delta = j.colPivHouseholderQr().solve(-res);
    if (!delta.allFinite()) return std::nullopt;
    c += delta.head<2>();
    r += delta(2);
    if (delta.norm() < 1e-13 * std::max(1.0, r)) break;
  }
  double ss = 0.0;
  for (const auto& p : points) {
    const double e = (p - mean - c).norm() - r;
    ss += e * e;
  }
  return Circle2{c + mean, r, std::sqrt(ss / static_cast<double>(n))};
}

namespace {

constexpr double kMaxRadius = 1e4; // mm; flatter arcs are treated as planar
constexpr std::size_t kMinArcPoints = 5;

Vec3 any_perpendicular(const Vec3& d) {
  const Vec3 ref = std::abs(d.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  return (ref - ref.dot(d) * d).normalized();
}

Vec3 curvature_direction(const TriMesh& mesh) {
  struct EdgeHash {
    std::size_t operator()(const std::pair<std::uint32_t, std::uint32_t>& e) const noexcept {
      return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(e.first) << 32) | e.second);
    }
  };
  std::unordered_map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>, EdgeHash> faces;
  faces.reserve(mesh.triangles.size() * 2);
  for (std::uint32_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const auto a = tri[k], b = tri[(k + 1) % 3];
      faces[std::minmax(a, b)].push_back(t);
    }
  }
  std::vector<Vec3> normals(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) normals[t] = triangle_normal(mesh, t);

  Eigen::Matrix3d tensor = Eigen::Matrix3d::Zero();
  double bending = 0.0, edge_total = 0.0;
  for (const auto& [edge, tris] : faces) {
    const Vec3 e = mesh.vertices[edge.second] - mesh.vertices[edge.first];
    const double len = e.norm();
    edge_total += len;
    if (tris.size() != 2) continue;
    const double c = std::clamp(normals[tris[0]].dot(normals[tris[1]]), -1.0, 1.0);
    const double beta = std::acos(c);
    const Vec3 u = e / len;
    tensor += beta * len * (u * u.transpose());
    bending += beta * len;
  }
  if (edge_total == 0.0 || bending < 1e-6 * edge_total)
    throw DegenerateGeometry("sherd surface is flat; no ring curvature to estimate an axis from");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(tensor);
  return eig.eigenvectors().col(2).normalized();
}

struct RingArc {
  Vec3 center;
  double radius;
  double weight;
  std::vector<Vec3> points;
};

std::vector<RingArc> fit_rings(const TriMesh& mesh, const Vec3& point, const Vec3& dir,
                               double smin, double smax) {
  const Vec3 e1 = any_perpendicular(dir);
  const Vec3 e2 = dir.cross(e1);
  const double span = smax - smin;
  const int slices = std::clamp(static_cast<int>(span / 2.0), 8, 40);
  std::vector<RingArc> arcs;
  for (int k = 0; k < slices; ++k) {
    const double s = smin + span * (0.05 + 0.9 * (k + 0.5) / slices);
    const Vec3 origin = point + s * dir;
    for (auto& chain : slice_mesh(mesh, origin, dir)) {
      if (chain.points.size() < kMinArcPoints) continue;
      std::vector<Eigen::Vector2d> pts;
      pts.reserve(chain.points.size());
      for (const auto& p : chain.points) pts.emplace_back((p - origin).dot(e1), (p - origin).dot(e2));
      auto circle = fit_circle(pts);
      if (!circle || circle->radius > kMaxRadius) continue;
      const Vec3 c = origin + circle->center.x() * e1 + circle->center.y() * e2;
      arcs.push_back({c, circle->radius, chain.length(), std::move(chain.points)});
    }
  }
  return arcs;
}

} // namespace

VesselAxis estimate_axis(const TriMesh& mesh, const AxisOptions& options) {
  if (mesh.triangles.empty()) throw DegenerateGeometry("mesh has no triangles");
  Vec3 dir = curvature_direction(mesh);
  Vec3 centroid = Vec3::Zero();
  for (const auto& v : mesh.vertices) centroid += v;
  centroid /= static_cast<double>(mesh.vertices.size());
  Vec3 point = centroid;

  auto height_range = [&](const Vec3& p, const Vec3& d) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& v : mesh.vertices) {
      const double s = (v - p).dot(d);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    return std::pair{lo, hi};
  };

  std::vector<RingArc> arcs;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const auto [smin, smax] = height_range(point, dir);
    if (!(smax - smin > 1e-6)) throw DegenerateGeometry("sherd has no extent along the axis");
    arcs = fit_rings(mesh, point, dir, smin, smax);
    if (arcs.size() < 3) throw DegenerateGeometry("too few ring arcs could be fitted");

    double wsum = 0.0;
    Vec3 mean = Vec3::Zero();
    for (const auto& a : arcs) {
      mean += a.weight * a.center;
      wsum += a.weight;
    }
    mean /= wsum;
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& a : arcs) {
      const Vec3 q = a.center - mean;
      cov += a.weight * (q * q.transpose());
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    Vec3 new_dir = eig.eigenvectors().col(2).normalized();
    if (new_dir.dot(dir) < 0.0) new_dir = -new_dir;

    // Centre-line change measured at both ends of the sherd.
    auto dist_to_line = [&](const Vec3& q) {
      const Vec3 v = q - mean;
      return (v - v.dot(new_dir) * new_dir).norm();
    };
    const double change =
        std::max(dist_to_line(point + smin * dir), dist_to_line(point + smax * dir));
    point = mean;
    dir = new_dir;
    if (change < options.tolerance) break;
  }

  VesselAxis axis;
  axis.direction = dir;
  axis.point = point;

  // Ring residual: spread of each arc's distance to the final axis.
  double ss = 0.0;
  std::size_t count = 0;
  for (const auto& a : arcs) {
    double mean_r = 0.0;
    for (const auto& p : a.points) mean_r += axis.distance_to(p);
    mean_r /= static_cast<double>(a.points.size());
    for (const auto& p : a.points) {
      const double e = axis.distance_to(p) - mean_r;
      ss += e * e;
    }
    count += a.points.size();
  }
  axis.fit_rms = std::sqrt(ss / static_cast<double>(std::max<std::size_t>(count, 1)));
  if (!(axis.fit_rms <= options.max_rms))
    throw DegenerateGeometry("ring residual " + std::to_string(axis.fit_rms) +
                             " mm exceeds the " + std::to_string(options.max_rms) + " mm limit");

  if (options.up_hint) {
    if (axis.direction.dot(*options.up_hint) < 0.0) axis.direction = -axis.direction;
  } else {
    // Least-squares slope of radial distance against height.
    double sh = 0.0, sr = 0.0, shh = 0.0, shr = 0.0;
    const double n = static_cast<double>(mesh.vertices.size());
    for (const auto& v : mesh.vertices) {
      const double h = axis.height_of(v), r = axis.distance_to(v);
      sh += h;
      sr += r;
      shh += h * h;
      shr += h * r;
    }
    const double denom = n * shh - sh * sh;
    const double slope = denom > 0.0 ? (n * shr - sh * sr) / denom : 0.0;
    if (slope < 0.0) axis.direction = -axis.direction;
  }
  axis.point = point + (centroid - point).dot(axis.direction) * axis.direction;
  return axis;
}

} // namespace sherd
