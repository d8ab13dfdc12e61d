#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ergomap/interval.hpp"
#include "ergomap/pwa_map.hpp"

namespace ergomap {

/// Piecewise-affine observable on [0,1]; values are unrestricted.
class PwaFunction {
 public:
  /// Nodes with x strictly increasing from 0 to 1.
  explicit PwaFunction(std::vector<Node> nodes);
  static PwaFunction identity();
  static PwaFunction constant(const Rational& c);
  /// Hat of height 1 centred at c with half-width w, clipped to [0,1].
  static PwaFunction hat(const Rational& c, const Rational& w);

  const std::vector<Node>& nodes() const { return nodes_; }
  Rational eval(const Rational& x) const;
  Rational operator()(const Rational& x) const { return eval(x); }
  /// Exact ∫_0^1.
  Rational integral() const;

 private:
  std::vector<Node> nodes_;
};

/// Hats at k/2^d for d = 1..depth and odd k, half-width 2^-d.
std::vector<PwaFunction> dyadic_hats(int depth);

constexpr std::size_t kDefaultPartsCap = 100'000;

/// λ(f^{-n}(A) ∩ B) - λ(A)λ(B), exact. Throws SizeError when the iterated
/// preimage has more than `parts_cap` parts.
Rational correlation(const PwaMap& f, const IntervalSet& A, const IntervalSet& B, int n,
                     std::size_t parts_cap = kDefaultPartsCap);

/// corr_j for j = 0..N-1.
std::vector<Rational> correlations(const PwaMap& f, const IntervalSet& A, const IntervalSet& B, int N,
                                   std::size_t parts_cap = kDefaultPartsCap);

struct MixingScore {
  int horizon = 0;
  double ergodic_score = 0.0;
  double weak_score = 0.0;
  std::vector<double> strong_tail;
};

MixingScore mixing_scores(const PwaMap& f, const IntervalSet& A, const IntervalSet& B, int N,
                          std::size_t parts_cap = kDefaultPartsCap);

/// (1/N) Σ_{k<N} obs(f^k x).
Rational birkhoff(const PwaMap& f, const PwaFunction& obs, const Rational& x, long N);

/// Σ_i u_i(x) v_i(y).
struct ProductObservable {
  std::vector<std::pair<PwaFunction, PwaFunction>> terms;
  Rational eval(const Rational& x, const Rational& y) const;
  /// ∫∫ over the unit square, from the factor integrals.
  Rational baseline() const;
};

struct PairAverage {
  Rational average;
  Rational baseline;
};

PairAverage birkhoff_pair(const PwaMap& f, const ProductObservable& obs, const Rational& x, const Rational& y,
                          long N);

struct NotWithinCap {
  int cap;
};

using LeoTime = std::variant<int, NotWithinCap>;

/// Least n <= cap with f^n(J) = [0,1].
LeoTime leo_time(const PwaMap& f, const Interval& J, int cap = 64);

std::string correlation_csv_header();
/// One row per j: map-id, setA, setB, j, corr, |corr|.
std::string correlation_csv_rows(const std::string& map_id, const IntervalSet& A, const IntervalSet& B,
                                 const std::vector<Rational>& corr);

}  // namespace ergomap
