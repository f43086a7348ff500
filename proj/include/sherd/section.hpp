#pragma once

#include <functional>
#include <vector>

#include "sherd/mesh.hpp"

namespace sherd {

struct Polyline3 {
  std::vector<Vec3> points;
  bool closed = false;

  double length() const;
};

// Keeps or drops an individual section segment.
using SegmentFilter = std::function<bool(const Vec3&, const Vec3&)>;

// Intersects `mesh` with the plane through `origin` with normal `normal` and
// chains the section segments into polylines by mesh connectivity.
// Vertices lying exactly on the plane are treated as being on the positive
// side, which keeps chaining well defined when the plane passes through
// vertices or along edges. Output order is deterministic (triangle order).
std::vector<Polyline3> slice_mesh(const TriMesh& mesh, const Vec3& origin, const Vec3& normal,
                                  const SegmentFilter& keep = {});

} // namespace sherd
