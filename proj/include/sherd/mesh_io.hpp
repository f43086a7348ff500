#pragma once

#include <filesystem>
#include <optional>
#include <string_view>

#include "sherd/mesh.hpp"

namespace sherd {

enum class MeshFormat { Ply, Obj };

// Picks the format from the file extension (.ply / .obj, case-insensitive).
std::optional<MeshFormat> mesh_format_from_path(const std::filesystem::path& path);

// Reads ASCII or binary little-endian PLY, or ASCII OBJ. Polygons with more
// than three corners are fan-triangulated; colour, normals and any other
// attributes are skipped. Throws ParseError, ValidationError or IoError.
TriMesh load_mesh(const std::filesystem::path& path, MeshFormat format);
TriMesh load_mesh(const std::filesystem::path& path);

// Parsers over an in-memory buffer; `name` becomes TriMesh::name.
TriMesh parse_ply(std::string_view data, std::string name = {});
TriMesh parse_obj(std::string_view data, std::string name = {});

struct SaveOptions {
  // PLY only: binary little-endian with float64 coordinates when true,
  // otherwise ASCII with round-trip precision.
  bool ply_binary = true;
};

// Throws ValidationError for an invalid or triangle-free mesh, IoError when
// the file cannot be written.
void save_mesh(const TriMesh& mesh, const std::filesystem::path& path, MeshFormat format,
               const SaveOptions& options = {});
void save_mesh(const TriMesh& mesh, const std::filesystem::path& path);

} // namespace sherd
