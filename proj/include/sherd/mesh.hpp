#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace sherd {

using Vec3 = Eigen::Vector3d;
using Triangle = std::array<std::uint32_t, 3>;

// Indexed triangle mesh, millimetre units.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
  std::string name;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_triangles() const { return triangles.size(); }
};

inline constexpr double kDegenerateArea = 1e-9; // mm^2

double triangle_area(const TriMesh& mesh, std::size_t t);
Vec3 triangle_normal(const TriMesh& mesh, std::size_t t); // unit, right-handed
Vec3 triangle_centroid(const TriMesh& mesh, std::size_t t);

// Throws ValidationError naming the first offending vertex or triangle.
void validate(const TriMesh& mesh);

// Rigid motion x -> rotation * x + translation.
struct RigidTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  Vec3 apply_direction(const Vec3& d) const { return rotation * d; }
  RigidTransform inverse() const;
};

TriMesh transformed(const TriMesh& mesh, const RigidTransform& t);

// Copy of `mesh` restricted to the listed triangles, with unused vertices
// dropped and indices compacted (vertex order follows first use).
TriMesh submesh(const TriMesh& mesh, const std::vector<std::size_t>& triangle_ids,
                std::string name);

} // namespace sherd
