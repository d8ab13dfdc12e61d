#include "ergomap/svg.hpp"

#include <cstdio>
#include <sstream>

namespace ergomap {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const PwaMap& f, const SvgOverlays& ov) {
  const double pad = 20.0;
  const double side = ov.size;
  const double total = side + 2 * pad;
  auto px = [&](const Rational& x) { return fmt(pad + x.to_double() * side); };
  auto py = [&](const Rational& y) { return fmt(pad + (1.0 - y.to_double()) * side); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(total) << "\" height=\"" << fmt(total)
     << "\" viewBox=\"0 0 " << fmt(total) << ' ' << fmt(total) << "\">\n";
  if (!ov.title.empty()) os << "<title>" << escape(ov.title) << "</title>\n";
  os << "<rect x=\"" << fmt(pad) << "\" y=\"" << fmt(pad) << "\" width=\"" << fmt(side) << "\" height=\""
     << fmt(side) << "\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (const auto& p : ov.partition) {
    os << "<line x1=\"" << px(p) << "\" y1=\"" << fmt(pad) << "\" x2=\"" << px(p) << "\" y2=\"" << fmt(pad + side)
       << "\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>\n";
    os << "<line x1=\"" << fmt(pad) << "\" y1=\"" << py(p) << "\" x2=\"" << fmt(pad + side) << "\" y2=\"" << py(p)
       << "\" stroke=\"#bbbbbb\" stroke-width=\"0.5\"/>\n";
  }
  for (const auto& b : ov.boxes) {
    os << "<rect x=\"" << px(b.lo()) << "\" y=\"" << py(b.hi()) << "\" width=\"" << fmt(b.length().to_double() * side)
       << "\" height=\"" << fmt(b.length().to_double() * side)
       << "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" stroke-dasharray=\"4 2\"/>\n";
  }
  if (ov.diagonal) {
    os << "<line x1=\"" << fmt(pad) << "\" y1=\"" << fmt(pad + side) << "\" x2=\"" << fmt(pad + side) << "\" y2=\""
       << fmt(pad) << "\" stroke=\"#888888\" stroke-width=\"0.75\" stroke-dasharray=\"3 3\"/>\n";
  }
  os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.25\" points=\"";
  bool first = true;
  for (const auto& n : f.nodes()) {
    os << (first ? "" : " ") << px(n.x) << ',' << py(n.y);
    first = false;
  }
  os << "\"/>\n</svg>\n";
  return os.str();
}

}  // namespace ergomap
