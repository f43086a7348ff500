#include "sherd/json_format.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sherd/errors.hpp"

namespace sherd {

namespace {

void emit(const nlohmann::json& j, int indent, int depth, std::string& out) {
  auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
  case nlohmann::json::value_t::object: {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += '{';
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) { // std::map: sorted keys
      if (!first) out += ',';
      first = false;
      newline(depth + 1);
      out += nlohmann::json(it.key()).dump();
      out += indent < 0 ? ":" : ": ";
      emit(it.value(), indent, depth + 1, out);
    }
    newline(depth);
    out += '}';
    return;
  }
  case nlohmann::json::value_t::array: {
    if (j.empty()) {
      out += "[]";
      return;
    }
    out += '[';
    bool first = true;
    for (const auto& v : j) {
      if (!first) out += ',';
      first = false;
      newline(depth + 1);
      emit(v, indent, depth + 1, out);
    }
    newline(depth);
    out += ']';
    return;
  }
  case nlohmann::json::value_t::number_float: {
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
      out += "null";
      return;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", round4(v));
    std::string s = buf;
    if (s == "-0.0000") s = "0.0000";
    out += s;
    return;
  }
  default:
    out += j.dump();
  }
}

} // namespace

double round4(double v) {
  const double r = std::round(v * 1e4) / 1e4;
  return r == 0.0 ? 0.0 : r;
}

std::string dump_fixed(const nlohmann::json& j, int indent) {
  std::string out;
  emit(j, indent, 0, out);
  out += '\n';
  return out;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("invalid JSON in '" + path.string() + "': " + e.what(), e.byte);
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

} // namespace sherd
