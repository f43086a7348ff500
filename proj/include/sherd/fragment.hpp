#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sherd/mesh.hpp"

namespace sherd {

// One fracture cell: [theta0, theta1) degrees x [h0, h1) mm on the vessel wall.
struct FragmentPiece {
  double theta0 = 0.0;
  double theta1 = 360.0;
  double h0 = 0.0;
  double h1 = 0.0;
};

struct FragmentSpec {
  std::vector<FragmentPiece> pieces;
  // Apply a seeded random rigid motion to every sherd.
  bool repose = true;
};

struct GroundTruth {
  std::string label; // zone letter (A-H per 45 deg) + 5 mm contour index
  double h0 = 0.0, h1 = 0.0;
  double theta0 = 0.0, theta1 = 0.0;
  RigidTransform pose; // vessel frame -> sherd frame

  // The vessel axis (+z through the origin) expressed in the sherd frame.
  Vec3 axis_point() const { return pose.apply(Vec3::Zero()); }
  Vec3 axis_direction() const { return pose.apply_direction(Vec3::UnitZ()); }
};

struct Sherd {
  TriMesh mesh;
  GroundTruth truth;
};

// Zone label for the cell starting at (theta0, h0), e.g. "C8".
std::string zone_label(double theta0, double h0);

// Throws SpecError unless the pieces tile [0, 360) x [0, height) exactly.
void check_tiling(const FragmentSpec& spec, double height);

// Eight 45 degree zones, one height band.
FragmentSpec zone_tiling(double height);

// Column-and-band tiling with `count` cells (1..24); columns are at least
// 30 degrees wide, cut positions fall on 5 degree / 1 mm grids.
FragmentSpec random_tiling(double height, int count, std::uint64_t seed);

// Uniformly random rotation, translation uniform in [-500, 500] mm per axis.
RigidTransform random_pose(std::uint64_t seed);

// Splits the wall of a synth_vessel mesh into sherds (base excluded).
// Triangles are assigned by centroid, so every wall triangle lands in
// exactly one sherd. Throws SpecError for non-tiling cuts or empty cells.
std::vector<Sherd> fragment_vessel(const TriMesh& mesh, const FragmentSpec& spec,
                                   std::uint64_t rng_seed);

} // namespace sherd
