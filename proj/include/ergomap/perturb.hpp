#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "ergomap/interval.hpp"
#include "ergomap/markov.hpp"
#include "ergomap/pwa_map.hpp"

namespace ergomap {

enum class WindowMode { regular, boundary_left, boundary_right };

struct WindowSpec {
  Interval window;
  int fold = 1;
  WindowMode mode = WindowMode::regular;
};

/// m alternately reflected, horizontally compressed copies of f|[a,b]
/// glued into f. Boundary modes keep only the interior endpoint fixed.
/// Throws DomainError for bad windows and ContinuityError for an even
/// fold in regular mode with f(a) != f(b).
PwaMap regular_window(const PwaMap& f, const WindowSpec& spec);

/// Replaces f on `window` by the graph through `h` (nodes spanning exactly
/// the window). Throws EquivalenceError with a witness slab when h is not
/// λ-equivalent to f|window and ContinuityError on an endpoint mismatch.
PwaMap window_with(const PwaMap& f, const Interval& window, const std::vector<Node>& h);

/// eps / max|slope|: any window shorter than this has oscillation < eps.
Rational safe_window_delta(const PwaMap& f, const Rational& eps);

/// max f - min f over the window.
Rational oscillation(const PwaMap& f, const Interval& window);

/// Throws BudgetError when the iteration cap is hit before the result is leo.
PwaMap leoize(const PwaMap& f, const Rational& eps, int max_steps = 64);

struct MarkovizeOptions {
  OrbitCaps caps{};
  int max_windows = 64;
  /// Depth of the local preimage search for eventually periodic endpoints.
  int max_depth = 48;
  std::size_t piece_cap = 4096;
};

struct NotAchieved {
  std::string reason;
  /// Critical points whose orbits were still open when the search stopped.
  std::vector<Rational> unresolved;
};

using MarkovizeResult = std::variant<PwaMap, NotAchieved>;

/// Pins every non-eventually-periodic critical orbit onto an eventually
/// periodic one with small 3-lap windows. Requires a leo f.
MarkovizeResult markovize(const PwaMap& f, const Rational& eps, const MarkovizeOptions& opt = {});

struct HorseshoeResult {
  PwaMap map;
  Interval window;
  Rational fixed_point;
  int fold;
  /// Certified lower bound for the topological entropy.
  double entropy_bound;
  /// "spectral-radius" or "covering".
  std::string certificate;
};

/// Smallest interior fixed point where the graph crosses the diagonal.
std::optional<Rational> transverse_fixed_point(const PwaMap& f);

HorseshoeResult horseshoe(const PwaMap& f, int n, const Rational& eps);

}  // namespace ergomap
