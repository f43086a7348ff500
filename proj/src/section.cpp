#include "sherd/section.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <utility>

namespace sherd {

double Polyline3::length() const {
  double len = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) len += (points[i] - points[i - 1]).norm();
  if (closed && points.size() > 1) len += (points.front() - points.back()).norm();
  return len;
}

namespace {

// Crossing point identity: an edge (a < b), or a vertex lying on the plane
// encoded as (v, v).
using CrossKey = std::pair<std::uint32_t, std::uint32_t>;

struct CrossKeyHash {
  std::size_t operator()(const CrossKey& k) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(k.first) << 32) | k.second);
  }
};

struct Segment {
  CrossKey a, b;
};

} // namespace

std::vector<Polyline3> slice_mesh(const TriMesh& mesh, const Vec3& origin, const Vec3& normal,
                                  const SegmentFilter& keep) {
  std::vector<double> dist(mesh.vertices.size());
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
    dist[i] = (mesh.vertices[i] - origin).dot(normal);

  std::unordered_map<CrossKey, Vec3, CrossKeyHash> points;
  auto crossing = [&](std::uint32_t p, std::uint32_t q) -> CrossKey {
    const std::uint32_t pos = dist[p] >= 0.0 ? p : q;
    if (dist[pos] == 0.0) {
      CrossKey key{pos, pos};
      points.emplace(key, mesh.vertices[pos]);
      return key;
    }
    const auto lo = std::min(p, q), hi = std::max(p, q);
    CrossKey key{lo, hi};
    if (!points.contains(key)) {
      const double t = dist[lo] / (dist[lo] - dist[hi]);
      points.emplace(key, mesh.vertices[lo] + t * (mesh.vertices[hi] - mesh.vertices[lo]));
    }
    return key;
  };

  std::vector<Segment> segments;
  std::set<std::pair<CrossKey, CrossKey>> seen;
  for (const auto& tri : mesh.triangles) {
    const bool s0 = dist[tri[0]] >= 0.0, s1 = dist[tri[1]] >= 0.0, s2 = dist[tri[2]] >= 0.0;
    if (s0 == s1 && s1 == s2) continue;
    CrossKey ends[2];
    int n = 0;
    if (s0 != s1) ends[n++] = crossing(tri[0], tri[1]);
    if (s1 != s2) ends[n++] = crossing(tri[1], tri[2]);
    if (s2 != s0) ends[n++] = crossing(tri[2], tri[0]);
    if (n != 2 || ends[0] == ends[1]) continue;
    auto norm_pair = std::minmax(ends[0], ends[1]);
    if (!seen.insert({norm_pair.first, norm_pair.second}).second) continue;
    if (keep && !keep(points.at(ends[0]), points.at(ends[1]))) continue;
    segments.push_back({ends[0], ends[1]});
  }

  std::unordered_map<CrossKey, std::vector<std::size_t>, CrossKeyHash> incident;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    incident[segments[s].a].push_back(s);
    incident[segments[s].b].push_back(s);
  }

  std::vector<bool> used(segments.size(), false);
  auto walk = [&](CrossKey start) {
    Polyline3 line;
    line.points.push_back(points.at(start));
    CrossKey at = start;
    for (;;) {
      std::size_t next = segments.size();
      for (auto s : incident[at]) {
        if (!used[s]) {
          next = s;
          break;
        }
      }
      if (next == segments.size()) break;
      used[next] = true;
      at = segments[next].a == at ? segments[next].b : segments[next].a;
      if (at == start) {
        line.closed = true;
        break;
      }
      line.points.push_back(points.at(at));
    }
    return line;
  };

  std::vector<Polyline3> out;
  // Open chains first, starting from dangling ends.
  for (std::size_t s = 0; s < segments.size(); ++s) {
    for (const auto& end : {segments[s].a, segments[s].b}) {
      if (!used[s] && incident[end].size() == 1) out.push_back(walk(end));
    }
  }
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (!used[s]) out.push_back(walk(segments[s].a));
  }
  return out;
}

} // namespace sherd
