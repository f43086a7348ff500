#pragma once

#include <optional>

#include "sherd/mesh.hpp"

namespace sherd {

struct VesselAxis {
  Vec3 point = Vec3::Zero();        // mm, on the axis
  Vec3 direction = Vec3::UnitZ();   // unit, pointing base -> rim
  double fit_rms = 0.0;             // mm

  double distance_to(const Vec3& p) const;
  double height_of(const Vec3& p) const { return (p - point).dot(direction); }
};

struct AxisOptions {
  // Orients the result so that direction . up_hint > 0. Without a hint the
  // axis points towards the side where the wall is farther from the axis,
  // i.e. the vessel is assumed to widen from base to rim.
  std::optional<Vec3> up_hint;
  int max_iterations = 50;
  double tolerance = 1e-4;  // mm, centre-line change that ends the iteration
  double max_rms = 1.0;     // mm, above this the sherd is rejected
};

// Rotation axis of the vessel a wall sherd came from.
//
// The initial direction is the minimum-curvature direction of the surface,
// taken from the edge-based curvature tensor summed over the mesh (edges
// parallel to the axis carry the circumferential bending). It is refined by
// alternating (a) least-squares circle fits on slices perpendicular to the
// current direction, one circle per connected section arc, and (b) a
// least-squares line through the circle centres.
//
// Throws DegenerateGeometry for near-flat sherds, arcs too small to fit,
// or a final ring residual above `max_rms`.
VesselAxis estimate_axis(const TriMesh& mesh, const AxisOptions& options = {});

// Unsigned angle between two axis directions, radians.
double axis_angle(const Vec3& a, const Vec3& b);

// Circle through 2D points in the least-squares geometric sense (algebraic
// fit refined by Gauss-Newton). Returns nullopt when the points are (nearly)
// collinear or the system is singular.
struct Circle2 {
  Eigen::Vector2d center;
  double radius = 0.0;
  double rms = 0.0;
};
std::optional<Circle2> fit_circle(const std::vector<Eigen::Vector2d>& points);

} // namespace sherd
