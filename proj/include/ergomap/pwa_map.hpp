#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ergomap/interval.hpp"
#include "ergomap/rational.hpp"

namespace ergomap {

struct Node {
  Rational x;
  Rational y;
  friend bool operator==(const Node&, const Node&) = default;
};

/// Affine piece f(x) = slope * x + intercept on `domain`.
struct Branch {
  Interval domain;
  Rational slope;
  Rational intercept;

  Rational at(const Rational& x) const { return slope * x + intercept; }
  Rational value_lo() const { return min(at(domain.lo()), at(domain.hi())); }
  Rational value_hi() const { return max(at(domain.lo()), at(domain.hi())); }
};

/// Global node cap for compose/iterate. Defaults to 10^6 and can be
/// overridden with the ERGOMAP_NODE_CAP environment variable.
std::size_t default_node_cap();

/// Continuous piecewise-affine self-map of [0,1] given as the
/// connect-the-dots interpolation of its nodes. Immutable.
class PwaMap {
 public:
  /// Validates: at least two nodes, x strictly increasing from 0 to 1,
  /// every y in [0,1]. Throws DomainError otherwise.
  explicit PwaMap(std::vector<Node> nodes);

  static PwaMap identity();
  static PwaMap flip();
  static PwaMap tent();

  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

  Rational operator()(const Rational& x) const { return eval(x); }
  Rational eval(const Rational& x) const;

  /// One branch per pair of consecutive nodes.
  std::vector<Branch> segments() const;
  /// Maximal affine pieces (collinear segments merged).
  std::vector<Branch> branches() const;
  /// Domains of the maximal monotone pieces.
  std::vector<Interval> laps() const;

  /// Same function with collinear interior nodes removed.
  PwaMap normalized() const;
  /// Points where the derivative jumps, plus 0 and 1.
  std::vector<Rational> critical_points() const;

  bool has_constant_piece() const;
  Rational max_abs_slope() const;
  Rational min_abs_slope() const;
  /// Every |slope| > 1.
  bool expanding() const;

  /// Index of the segment containing x (the left one at interior nodes).
  std::size_t segment_index(const Rational& x) const;

  friend bool operator==(const PwaMap&, const PwaMap&) = default;

 private:
  std::vector<Node> nodes_;
};

/// Same function after normalization (node-wise comparison of merged forms).
bool same_function(const PwaMap& f, const PwaMap& g);

/// f∘g. Throws SizeError when the unnormalized node count exceeds `node_cap`.
PwaMap compose(const PwaMap& f, const PwaMap& g, std::size_t node_cap = default_node_cap());
/// f^n for n >= 1.
PwaMap iterate(const PwaMap& f, int n, std::size_t node_cap = default_node_cap());

Interval image_interval(const PwaMap& f, const Interval& j);
/// Exact f^{-1}(S), branch by branch.
IntervalSet preimage_set(const PwaMap& f, const IntervalSet& s);

/// Reciprocal-slope mass sitting over one range slab.
struct SlabSum {
  Interval slab;
  Rational sum;
};

/// For the graph through `nodes`, the sum of 1/|slope| over the segments
/// covering each open slab between consecutive `cuts` (cuts sorted, unique).
/// Constant segments are ignored here.
std::vector<SlabSum> slab_sums(std::span<const Node> nodes, std::span<const Rational> cuts);

struct LebesgueReport {
  enum class Failure { none, constant_piece, slab_sum };
  bool preserving = false;
  Failure failure = Failure::none;
  /// For slab failures: the first slab whose sum differs from 1 and that sum.
  /// For constant pieces: the domain of the piece and sum 0.
  std::optional<SlabSum> witness;
};

LebesgueReport verify_lebesgue(const PwaMap& f);

/// sup |f - g|, evaluated on the merged breakpoints.
Rational uniform_distance(const PwaMap& f, const PwaMap& g);

enum class LapSign { increasing, decreasing };

/// The full-lap map determined by (sign, alpha_0, ..., alpha_{m-1}).
/// Throws InvalidTuple unless every alpha > 0 and they sum to 1.
PwaMap from_full_laps(LapSign sign, std::span<const Rational> alphas);

/// Nodes of f restricted to `window` (endpoints included).
std::vector<Node> restrict_nodes(const PwaMap& f, const Interval& window);

}  // namespace ergomap
