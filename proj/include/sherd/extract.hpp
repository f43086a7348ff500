#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sherd/axis.hpp"
#include "sherd/mesh.hpp"
#include "sherd/profile.hpp"

namespace sherd {

struct ProfilePlane {
  VesselAxis axis;
  double azimuth = 0.0;  // degrees around the axis
  double arc_span = 0.0; // mm, length of the outer section curve
};

// Unit radial direction of the meridian half-plane at `azimuth_deg`.
// Azimuth 0 is the world x-axis projected perpendicular to the axis (world y
// when the axis is nearly parallel to x); angles increase counter-clockwise
// looking down the axis direction.
Vec3 meridian_direction(const VesselAxis& axis, double azimuth_deg);

// A section curve in meridian coordinates: x = distance from the axis,
// y = height along the axis.
using MeridianCurve = std::vector<Eigen::Vector2d>;

struct MeridianSection {
  MeridianCurve outer;              // ordered base -> rim
  std::vector<MeridianCurve> inner; // every other curve, longest first
};

double curve_length(const MeridianCurve& curve);

// Outer and inner wall curves where the meridian half-plane cuts the mesh,
// or nullopt when the two surfaces cannot be told apart. Of the two longest
// section curves the one farther from the axis (mean radial distance) is the
// outer one; a single closed loop is split at its lowest and highest points.
// Holes in the inner wall leave several inner curves; all of them are kept so
// that extraction can tell a hole from a broken edge.
std::optional<MeridianSection> meridian_section(const TriMesh& mesh, const VesselAxis& axis,
                                                double azimuth_deg);

// Scans `n_candidates` equally spaced azimuths and keeps the plane with the
// longest outer curve. Spans within 1e-6 mm count as ties and the smaller
// azimuth wins. Throws DegenerateGeometry when no curve exceeds `min_span`.
ProfilePlane select_profile_plane(const TriMesh& mesh, const VesselAxis& axis,
                                  int n_candidates = 360, double min_span = 2.0);

struct ProfileExtraction {
  ThicknessProfile profile;
  std::size_t stations = 0;      // stations along the outer curve
  std::size_t trimmed_front = 0; // leading stations without an inner hit
  std::size_t trimmed_back = 0;
  double start_height = 0.0;     // height of the first kept station along the axis
};

// Samples wall thickness every `step` mm of outer-curve arc length, measured
// along the inward normal of the outer curve to the first inner-curve hit.
// Stations without a hit are trimmed from the ends; an interior miss raises
// GapError with the station index. Throws DegenerateGeometry when the
// surfaces cannot be separated.
ProfileExtraction extract_profile_detailed(const TriMesh& mesh, const ProfilePlane& plane,
                                           double step = 1.0, std::string sherd_id = {});
ThicknessProfile extract_profile(const TriMesh& mesh, const ProfilePlane& plane,
                                 double step = 1.0, std::string sherd_id = {});

} // namespace sherd
