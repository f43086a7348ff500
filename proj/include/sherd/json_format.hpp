#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

namespace sherd {

// Deterministic JSON text: object keys sorted, floating-point numbers printed
// with exactly four decimals, integers verbatim. Output ends with a newline.
std::string dump_fixed(const nlohmann::json& j, int indent = 2);

double round4(double v);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace sherd
