#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ergomap/interval.hpp"
#include "ergomap/pwa_map.hpp"

namespace ergomap {

/// {x : f^k(x) = x}, exact. Intervals appear where an affine piece of f^k
/// lies on the diagonal.
IntervalSet fixed_set(const PwaMap& f, int k, std::size_t node_cap = default_node_cap());

enum class Verdict { not_transitive, transitive_not_mixing, mixing_not_leo, leo };

std::string to_string(Verdict v);

/// The collection of f^2-invariant intervals on which f^2 is mixing,
/// with the induced permutation and the resulting classification.
struct StructureReport {
  std::vector<Interval> components;
  /// permutation[i] = k  iff  f(components[i]) = components[k].
  std::vector<std::size_t> permutation;
  /// Fix(f^2).
  IntervalSet fixed_set;
  /// Positive-length pieces of [0,1] not covered by any component.
  std::vector<Interval> gaps;
  /// The order-reversing alternative of the monotone-order property.
  bool order_reversing = false;
  Verdict verdict = Verdict::not_transitive;
};

/// Requires a Lebesgue-preserving f; throws StructureError when f is not
/// preserving or one of the consistency checks fails.
StructureReport transitivity_components(const PwaMap& f);

Verdict classify(const PwaMap& f);

/// f^{-2}(v) ∩ (0,1) is non-empty.
bool second_preimage_meets_interior(const PwaMap& f, const Rational& v);

struct PeriodicPoint {
  /// A single point, or an interval of points sharing `period`.
  Interval where;
  int period;
};

/// Periodic points whose least period divides k.
std::vector<PeriodicPoint> periodic_points(const PwaMap& f, int k, int period_cap = 20,
                                           std::size_t node_cap = default_node_cap());

/// Plain-text report: intervals as exact rationals and the verdict.
std::string format_report(const StructureReport& r);

}  // namespace ergomap
