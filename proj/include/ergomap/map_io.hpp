#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ergomap/pwa_map.hpp"

namespace ergomap {

// "pwamap v1": header line, then one `num/den num/den` node per line.
// Lines starting with '#' and blank lines are skipped when reading.

std::string serialize_map(const PwaMap& f);
PwaMap parse_map(std::string_view text);

PwaMap read_map_file(const std::filesystem::path& path);
void write_map_file(const std::filesystem::path& path, const PwaMap& f);

/// Writes `content` to `path`, or to stdout when path is "-".
void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

}  // namespace ergomap
