#include "sherd/mesh_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sherd/errors.hpp"

namespace sherd {

static_assert(std::endian::native == std::endian::little,
              "binary PLY I/O assumes a little-endian host");

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

bool parse_long(std::string_view s, long long& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

// Line cursor with 1-based line numbers.
class LineReader {
public:
  explicit LineReader(std::string_view data) : data_(data) {}

  bool next(std::string_view& line) {
    if (pos_ >= data_.size()) return false;
    auto end = data_.find('\n', pos_);
    if (end == std::string_view::npos) end = data_.size();
    line = data_.substr(pos_, end - pos_);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos_ = end + 1;
    ++line_no_;
    return true;
  }
  std::size_t line_no() const { return line_no_; }
  std::size_t offset() const { return std::min(pos_, data_.size()); }

private:
  std::string_view data_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

// --- PLY ---------------------------------------------------------------------

enum class Scalar { Int8, UInt8, Int16, UInt16, Int32, UInt32, Float32, Float64 };

std::optional<Scalar> scalar_from_name(std::string_view n) {
  if (n == "char" || n == "int8") return Scalar::Int8;
  if (n == "uchar" || n == "uint8") return Scalar::UInt8;
  if (n == "short" || n == "int16") return Scalar::Int16;
  if (n == "ushort" || n == "uint16") return Scalar::UInt16;
  if (n == "int" || n == "int32") return Scalar::Int32;
  if (n == "uint" || n == "uint32") return Scalar::UInt32;
  if (n == "float" || n == "float32") return Scalar::Float32;
  if (n == "double" || n == "float64") return Scalar::Float64;
  return std::nullopt;
}

std::size_t scalar_size(Scalar s) {
  switch (s) {
  case Scalar::Int8:
  case Scalar::UInt8: return 1;
  case Scalar::Int16:
  case Scalar::UInt16: return 2;
  case Scalar::Int32:
  case Scalar::UInt32:
  case Scalar::Float32: return 4;
  case Scalar::Float64: return 8;
  }
  return 0;
}

struct PlyProperty {
  std::string name;
  Scalar type = Scalar::Float32;
  bool is_list = false;
  Scalar count_type = Scalar::UInt8;
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> properties;
};

class BinaryCursor {
public:
  BinaryCursor(std::string_view data, std::size_t pos) : data_(data), pos_(pos) {}

  double read(Scalar s) {
    const auto n = scalar_size(s);
    if (pos_ + n > data_.size()) throw ParseError("unexpected end of binary PLY data", pos_);
    const char* p = data_.data() + pos_;
    pos_ += n;
    switch (s) {
    case Scalar::Int8: return static_cast<double>(load<std::int8_t>(p));
    case Scalar::UInt8: return static_cast<double>(load<std::uint8_t>(p));
    case Scalar::Int16: return static_cast<double>(load<std::int16_t>(p));
    case Scalar::UInt16: return static_cast<double>(load<std::uint16_t>(p));
    case Scalar::Int32: return static_cast<double>(load<std::int32_t>(p));
    case Scalar::UInt32: return static_cast<double>(load<std::uint32_t>(p));
    case Scalar::Float32: return static_cast<double>(load<float>(p));
    case Scalar::Float64: return load<double>(p);
    }
    return 0.0;
  }
  std::size_t pos() const { return pos_; }

private:
  template <typename T> static T load(const char* p) {
    T v;
    std::memcpy(&v, p, sizeof(T));
    return v;
  }
  std::string_view data_;
  std::size_t pos_;
};

void fan_triangulate(const std::vector<long long>& poly, TriMesh& mesh) {
  for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
    mesh.triangles.push_back({static_cast<std::uint32_t>(poly[0]),
                              static_cast<std::uint32_t>(poly[k]),
                              static_cast<std::uint32_t>(poly[k + 1])});
  }
}

bool is_face_index_list(const PlyProperty& p) {
  return p.is_list && (p.name == "vertex_indices" || p.name == "vertex_index");
}

} // namespace

TriMesh parse_ply(std::string_view data, std::string name) {
  LineReader reader(data);
  std::string_view line;
  if (!reader.next(line) || line != "ply") throw ParseError("missing 'ply' magic", 1);

  enum class Encoding { Ascii, BinaryLE } encoding = Encoding::Ascii;
  bool have_format = false;
  std::vector<PlyElement> elements;
  bool header_done = false;
  while (reader.next(line)) {
    auto tok = split_ws(line);
    if (tok.empty()) continue;
    const auto ln = reader.line_no();
    if (tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "format") {
      if (tok.size() < 3) throw ParseError("malformed format line", ln);
      if (tok[1] == "ascii") encoding = Encoding::Ascii;
      else if (tok[1] == "binary_little_endian") encoding = Encoding::BinaryLE;
      else throw ParseError("unsupported PLY encoding '" + std::string(tok[1]) + "'", ln);
      have_format = true;
    } else if (tok[0] == "element") {
      long long count = 0;
      if (tok.size() != 3 || !parse_long(tok[2], count) || count < 0)
        throw ParseError("malformed element line", ln);
      elements.push_back({std::string(tok[1]), static_cast<std::size_t>(count), {}});
    } else if (tok[0] == "property") {
      if (elements.empty()) throw ParseError("property before any element", ln);
      PlyProperty prop;
      if (tok.size() == 5 && tok[1] == "list") {
        auto ct = scalar_from_name(tok[2]);
        auto vt = scalar_from_name(tok[3]);
        if (!ct || !vt) throw ParseError("unknown list property type", ln);
        prop.is_list = true;
        prop.count_type = *ct;
        prop.type = *vt;
        prop.name = std::string(tok[4]);
      } else if (tok.size() == 3) {
        auto t = scalar_from_name(tok[1]);
        if (!t) throw ParseError("unknown property type '" + std::string(tok[1]) + "'", ln);
        prop.type = *t;
        prop.name = std::string(tok[2]);
      } else {
        throw ParseError("malformed property line", ln);
      }
      elements.back().properties.push_back(prop);
    } else if (tok[0] == "end_header") {
      header_done = true;
      break;
    } else {
      throw ParseError("unexpected header keyword '" + std::string(tok[0]) + "'", ln);
    }
  }
  if (!header_done) throw ParseError("missing end_header", reader.line_no());
  if (!have_format) throw ParseError("missing format line", reader.line_no());

  TriMesh mesh;
  mesh.name = std::move(name);

  if (encoding == Encoding::Ascii) {
    for (const auto& el : elements) {
      int ix = -1, iy = -1, iz = -1;
      for (std::size_t k = 0; k < el.properties.size(); ++k) {
        const auto& p = el.properties[k];
        if (p.name == "x") ix = static_cast<int>(k);
        if (p.name == "y") iy = static_cast<int>(k);
        if (p.name == "z") iz = static_cast<int>(k);
      }
      const bool is_vertex = el.name == "vertex";
      const bool is_face = el.name == "face";
      if (is_vertex && (ix < 0 || iy < 0 || iz < 0))
        throw ParseError("vertex element lacks x/y/z", reader.line_no());
      for (std::size_t r = 0; r < el.count; ++r) {
        std::string_view row;
        do {
          if (!reader.next(row)) throw ParseError("unexpected end of file in element '" + el.name + "'", reader.line_no());
        } while (split_ws(row).empty());
        const auto ln = reader.line_no();
        auto tok = split_ws(row);
        std::size_t cursor = 0;
        Vec3 v = Vec3::Zero();
        std::vector<long long> poly;
        for (std::size_t k = 0; k < el.properties.size(); ++k) {
          const auto& p = el.properties[k];
          if (p.is_list) {
            long long cnt = 0;
            if (cursor >= tok.size() || !parse_long(tok[cursor], cnt) || cnt < 0)
              throw ParseError("bad list count", ln);
            ++cursor;
            if (cursor + static_cast<std::size_t>(cnt) > tok.size())
              throw ParseError("list shorter than its count", ln);
            for (long long c = 0; c < cnt; ++c) {
              if (is_face && is_face_index_list(p)) {
                long long idx = 0;
                if (!parse_long(tok[cursor], idx)) throw ParseError("bad face index", ln);
                if (idx < 0) throw ParseError("negative face index", ln);
                poly.push_back(idx);
              }
              ++cursor;
            }
          } else {
            if (cursor >= tok.size()) throw ParseError("too few values in row", ln);
            double value = 0;
            if (!parse_double(tok[cursor], value)) {
              long long iv = 0;
              if (!parse_long(tok[cursor], iv)) throw ParseError("bad numeric value", ln);
              value = static_cast<double>(iv);
            }
            if (is_vertex) {
              if (static_cast<int>(k) == ix) v.x() = value;
              if (static_cast<int>(k) == iy) v.y() = value;
              if (static_cast<int>(k) == iz) v.z() = value;
            }
            ++cursor;
          }
        }
        if (cursor != tok.size()) throw ParseError("too many values in row", ln);
        if (is_vertex) mesh.vertices.push_back(v);
        if (is_face) {
          if (poly.size() < 3) throw ParseError("face with fewer than 3 vertices", ln);
          fan_triangulate(poly, mesh);
        }
      }
    }
  } else {
    BinaryCursor cur(data, reader.offset());
    for (const auto& el : elements) {
      const bool is_vertex = el.name == "vertex";
      const bool is_face = el.name == "face";
      if (is_vertex) {
        bool has_x = false, has_y = false, has_z = false;
        for (const auto& p : el.properties) {
          has_x |= p.name == "x";
          has_y |= p.name == "y";
          has_z |= p.name == "z";
        }
        if (!(has_x && has_y && has_z)) throw ParseError("vertex element lacks x/y/z", cur.pos());
      }
      for (std::size_t r = 0; r < el.count; ++r) {
        Vec3 v = Vec3::Zero();
        std::vector<long long> poly;
        const auto row_start = cur.pos();
        for (const auto& p : el.properties) {
          if (p.is_list) {
            const double cnt = cur.read(p.count_type);
            if (cnt < 0) throw ParseError("negative list count", row_start);
            for (long long c = 0; c < static_cast<long long>(cnt); ++c) {
              const double idx = cur.read(p.type);
              if (is_face && is_face_index_list(p)) {
                if (idx < 0) throw ParseError("negative face index", row_start);
                poly.push_back(static_cast<long long>(idx));
              }
            }
          } else {
            const double value = cur.read(p.type);
            if (is_vertex) {
              if (p.name == "x") v.x() = value;
              if (p.name == "y") v.y() = value;
              if (p.name == "z") v.z() = value;
            }
          }
        }
        if (is_vertex) mesh.vertices.push_back(v);
        if (is_face) {
          if (poly.size() < 3) throw ParseError("face with fewer than 3 vertices", row_start);
          fan_triangulate(poly, mesh);
        }
      }
    }
  }
  validate(mesh);
  return mesh;
}

TriMesh parse_obj(std::string_view data, std::string name) {
  TriMesh mesh;
  mesh.name = std::move(name);
  LineReader reader(data);
  std::string_view line;
  std::vector<std::pair<std::vector<long long>, std::size_t>> faces;
  while (reader.next(line)) {
    auto tok = split_ws(line);
    if (tok.empty() || tok[0].front() == '#') continue;
    const auto ln = reader.line_no();
    if (tok[0] == "v") {
      if (tok.size() < 4 || tok.size() > 5) throw ParseError("vertex record needs x y z", ln);
      Vec3 v;
      for (int k = 0; k < 3; ++k) {
        if (!parse_double(tok[k + 1], v[k])) throw ParseError("bad vertex coordinate", ln);
      }
      mesh.vertices.push_back(v);
    } else if (tok[0] == "f") {
      if (tok.size() < 4) throw ParseError("face record needs at least 3 vertices", ln);
      std::vector<long long> poly;
      for (std::size_t k = 1; k < tok.size(); ++k) {
        auto ref = tok[k].substr(0, tok[k].find('/'));
        long long idx = 0;
        if (!parse_long(ref, idx)) throw ParseError("bad face index '" + std::string(tok[k]) + "'", ln);
        if (idx == 0) throw ParseError("face index 0 is invalid (OBJ indices are 1-based)", ln);
        // Negative indices count back from the most recent vertex.
        const long long resolved =
            idx > 0 ? idx - 1 : static_cast<long long>(mesh.vertices.size()) + idx;
        if (resolved < 0) throw ParseError("relative face index before first vertex", ln);
        poly.push_back(resolved);
      }
      faces.emplace_back(std::move(poly), ln);
    }
    // vt, vn, g, o, s, usemtl, mtllib and others carry no geometry.
  }
  for (const auto& [poly, ln] : faces) fan_triangulate(poly, mesh);
  validate(mesh);
  return mesh;
}

std::optional<MeshFormat> mesh_format_from_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".ply") return MeshFormat::Ply;
  if (ext == ".obj") return MeshFormat::Obj;
  return std::nullopt;
}

TriMesh load_mesh(const std::filesystem::path& path, MeshFormat format) {
  const auto data = read_file(path);
  auto name = path.stem().string();
  return format == MeshFormat::Ply ? parse_ply(data, std::move(name))
                                   : parse_obj(data, std::move(name));
}

TriMesh load_mesh(const std::filesystem::path& path) {
  auto fmt = mesh_format_from_path(path);
  if (!fmt) throw IoError("cannot infer mesh format from '" + path.string() + "'");
  return load_mesh(path, *fmt);
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T> void append_raw(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

} // namespace

void save_mesh(const TriMesh& mesh, const std::filesystem::path& path, MeshFormat format,
               const SaveOptions& options) {
  if (mesh.triangles.empty()) throw ValidationError("mesh has no triangles to write");
  validate(mesh);

  std::string out;
  if (format == MeshFormat::Ply) {
    out += "ply\n";
    out += options.ply_binary ? "format binary_little_endian 1.0\n" : "format ascii 1.0\n";
    if (!mesh.name.empty()) out += "comment " + mesh.name + "\n";
    out += "element vertex " + std::to_string(mesh.vertices.size()) + "\n";
    out += "property double x\nproperty double y\nproperty double z\n";
    out += "element face " + std::to_string(mesh.triangles.size()) + "\n";
    out += "property list uchar int vertex_indices\nend_header\n";
    if (options.ply_binary) {
      out.reserve(out.size() + mesh.vertices.size() * 24 + mesh.triangles.size() * 13);
      for (const auto& v : mesh.vertices) {
        append_raw(out, v.x());
        append_raw(out, v.y());
        append_raw(out, v.z());
      }
      for (const auto& t : mesh.triangles) {
        append_raw(out, std::uint8_t{3});
        for (auto i : t) append_raw(out, static_cast<std::int32_t>(i));
      }
    } else {
      for (const auto& v : mesh.vertices)
        out += format_g17(v.x()) + " " + format_g17(v.y()) + " " + format_g17(v.z()) + "\n";
      for (const auto& t : mesh.triangles)
        out += "3 " + std::to_string(t[0]) + " " + std::to_string(t[1]) + " " +
               std::to_string(t[2]) + "\n";
    }
  } else {
    if (!mesh.name.empty()) out += "# " + mesh.name + "\n";
    for (const auto& v : mesh.vertices)
      out += "v " + format_g17(v.x()) + " " + format_g17(v.y()) + " " + format_g17(v.z()) + "\n";
    for (const auto& t : mesh.triangles)
      out += "f " + std::to_string(t[0] + 1) + " " + std::to_string(t[1] + 1) + " " +
             std::to_string(t[2] + 1) + "\n";
  }
  write_file(path, out);
}

void save_mesh(const TriMesh& mesh, const std::filesystem::path& path) {
  auto fmt = mesh_format_from_path(path);
  if (!fmt) throw IoError("cannot infer mesh format from '" + path.string() + "'");
  save_mesh(mesh, path, *fmt);
}

} // namespace sherd
