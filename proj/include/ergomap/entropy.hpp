#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ergomap/interval.hpp"
#include "ergomap/pwa_map.hpp"

namespace ergomap {

struct EntropyTerm {
  Rational weight;  // branch length
  Rational slope;   // |slope|
};

struct EntropyValue {
  std::vector<EntropyTerm> terms;
  double value = 0.0;  // nats
};

/// Σ len·log|slope| over the maximal affine branches.
/// Throws NotPreservingError unless f preserves Lebesgue measure.
EntropyValue rohlin_entropy(const PwaMap& f);

/// (1-η)log(1/(1-η)) + η log((m-1)/η).
double two_slope_entropy(const Rational& eta, int m);

/// Smallest η with |two_slope_entropy(η, m) - c| <= 1e-12. Accepts
/// 0 < c <= log m; throws RangeError otherwise.
Rational solve_eta(double c, int m);

/// Least M-compatible denominator: lcm over range slabs of the
/// denominators of the normalized component lengths.
long two_slope_denominator(const PwaMap& f);

/// The two-slope map H[η, M] built slab by slab from the components of f.
PwaMap build_two_slope(const PwaMap& f, const Rational& eta, long M);

/// Replaces every |slope| = 1 piece by short 3-fold windows (moves f by < eps).
PwaMap make_expanding(const PwaMap& f, const Rational& eps);

/// Markov map with every |slope| > 1 and entropy c ± 1e-9 within eps of f.
PwaMap set_entropy(const PwaMap& f, double c, const Rational& eps);

struct EntropyStage {
  int fold;
  std::vector<Interval> windows;
  double entropy;
};

struct EntropyTower {
  PwaMap map;
  std::vector<EntropyStage> stages;
};

/// n nested rounds of m_k-fold windows, each round raising the entropy
/// above k. Windows of round k+1 lie inside windows of round k.
EntropyTower entropy_stage(const PwaMap& f, int n, const Rational& eps);

std::string entropy_csv_header();
/// map-id, value-nats, term count, slope set.
std::string entropy_csv_row(const std::string& map_id, const EntropyValue& e);

}  // namespace ergomap
