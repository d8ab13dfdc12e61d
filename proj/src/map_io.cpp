#include "ergomap/map_io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "ergomap/errors.hpp"

namespace ergomap {

namespace {

constexpr std::string_view kHeader = "pwamap v1";

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string serialize_map(const PwaMap& f) {
  std::string out(kHeader);
  out += '\n';
  for (const auto& n : f.nodes()) {
    out += n.x.str();
    out += ' ';
    out += n.y.str();
    out += '\n';
  }
  return out;
}

PwaMap parse_map(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  std::vector<Node> nodes;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (!header) {
      if (t != kHeader) throw ParseError("line " + std::to_string(lineno) + ": expected 'pwamap v1'");
      header = true;
      continue;
    }
    std::istringstream fields{std::string(t)};
    std::string xs, ys, extra;
    if (!(fields >> xs >> ys) || (fields >> extra)) {
      throw ParseError("line " + std::to_string(lineno) + ": expected '<x> <y>'");
    }
    try {
      nodes.push_back({Rational::parse(xs), Rational::parse(ys)});
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!header) throw ParseError("missing 'pwamap v1' header");
  try {
    return PwaMap(std::move(nodes));
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid map: ") + e.what());
  }
}

std::string read_text(const std::filesystem::path& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

PwaMap read_map_file(const std::filesystem::path& path) { return parse_map(read_text(path)); }

void write_map_file(const std::filesystem::path& path, const PwaMap& f) { write_text(path, serialize_map(f)); }

}  // namespace ergomap
