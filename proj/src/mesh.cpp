#include "sherd/mesh.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>

#include "sherd/errors.hpp"

namespace sherd {

namespace {

Vec3 edge_cross(const TriMesh& mesh, std::size_t t) {
  const auto& tri = mesh.triangles[t];
  const Vec3& a = mesh.vertices[tri[0]];
  return (mesh.vertices[tri[1]] - a).cross(mesh.vertices[tri[2]] - a);
}

} // namespace

double triangle_area(const TriMesh& mesh, std::size_t t) {
  return 0.5 * edge_cross(mesh, t).norm();
}

Vec3 triangle_normal(const TriMesh& mesh, std::size_t t) {
  return edge_cross(mesh, t).normalized();
}

Vec3 triangle_centroid(const TriMesh& mesh, std::size_t t) {
  const auto& tri = mesh.triangles[t];
  return (mesh.vertices[tri[0]] + mesh.vertices[tri[1]] + mesh.vertices[tri[2]]) / 3.0;
}

void validate(const TriMesh& mesh) {
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    if (!mesh.vertices[i].allFinite())
      throw ValidationError("vertex " + std::to_string(i) + " has a non-finite coordinate");
  }
  const auto n = mesh.vertices.size();
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (auto idx : tri) {
      if (idx >= n)
        throw ValidationError("triangle " + std::to_string(t) + " references vertex " +
                              std::to_string(idx) + " but the mesh has " + std::to_string(n));
    }
    if (!(triangle_area(mesh, t) > kDegenerateArea))
      throw ValidationError("triangle " + std::to_string(t) + " is degenerate");
  }
}

RigidTransform RigidTransform::inverse() const {
  RigidTransform inv;
  inv.rotation = rotation.transpose();
  inv.translation = -(inv.rotation * translation);
  return inv;
}

TriMesh transformed(const TriMesh& mesh, const RigidTransform& t) {
  TriMesh out = mesh;
  for (auto& v : out.vertices) v = t.apply(v);
  return out;
}

TriMesh submesh(const TriMesh& mesh, const std::vector<std::size_t>& triangle_ids,
                std::string name) {
  TriMesh out;
  out.name = std::move(name);
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> remap(mesh.vertices.size(), kUnset);
  out.triangles.reserve(triangle_ids.size());
  for (auto t : triangle_ids) {
    Triangle tri{};
    for (int k = 0; k < 3; ++k) {
      auto src = mesh.triangles[t][k];
      if (remap[src] == kUnset) {
        remap[src] = static_cast<std::uint32_t>(out.vertices.size());
        out.vertices.push_back(mesh.vertices[src]);
      }
      tri[k] = remap[src];
    }
    out.triangles.push_back(tri);
  }
  return out;
}

} // namespace sherd
