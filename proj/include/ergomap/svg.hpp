#pragma once

#include <string>
#include <vector>

#include "ergomap/interval.hpp"
#include "ergomap/pwa_map.hpp"

namespace ergomap {

struct SvgOverlays {
  bool diagonal = false;
  /// Vertical and horizontal grid lines at these points.
  std::vector<Rational> partition;
  /// Drawn as squares J x J.
  std::vector<Interval> boxes;
  std::string title;
  int size = 480;
};

/// Unit-square plot of the graph of f. Output depends only on the inputs.
std::string render_svg(const PwaMap& f, const SvgOverlays& overlays = {});

}  // namespace ergomap
