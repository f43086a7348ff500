#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "sherd/mesh.hpp"

namespace sherd {

// Piecewise-linear curve over height. Control points must be strictly
// increasing in h; evaluation clamps outside the control range.
class PiecewiseLinear {
public:
  PiecewiseLinear() = default;
  explicit PiecewiseLinear(std::vector<std::pair<double, double>> points);

  static PiecewiseLinear constant(double value, double h0, double h1);
  // Samples `fn` at `count` evenly spaced heights over [h0, h1].
  static PiecewiseLinear sampled(const std::function<double(double)>& fn, double h0, double h1,
                                 std::size_t count);

  double operator()(double h) const;
  const std::vector<std::pair<double, double>>& points() const { return points_; }

private:
  std::vector<std::pair<double, double>> points_;
};

struct VesselSpec {
  double height = 100.0;          // mm
  PiecewiseLinear outer_radius;   // mm, over [0, height]
  PiecewiseLinear thickness;      // mm, over [0, height]
  int angular_resolution = 360;   // segments per ring
  double vertical_resolution = 2; // rings per mm
};

// Throws SpecError if any invariant of VesselSpec is violated.
void check_spec(const VesselSpec& spec);

// Heights of the mesh rings: a uniform grid at `vertical_resolution` merged
// with every control-point height of both curves, so the walls reproduce the
// piecewise-linear curves exactly.
std::vector<double> ring_heights(const VesselSpec& spec);

// Surface of revolution about the z-axis with its base at z = 0: outer shell
// at outer_radius(h), inner shell at outer_radius(h) - thickness(h), and a
// zero-thickness base at z = 0 made of two disks (underside facing -z, floor
// facing +z). The rim is left open, every other edge is shared by exactly two
// triangles. Vertex j of every ring sits
// at azimuth j * 360 / angular_resolution degrees; shells face out of the
// wall material (outer shell away from the axis, inner shell towards it).
TriMesh synth_vessel(const VesselSpec& spec);

// True for triangles lying entirely in the z = 0 base plane.
bool is_base_triangle(const TriMesh& mesh, std::size_t t);

} // namespace sherd
