#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ergomap/interval.hpp"
#include "ergomap/pwa_map.hpp"

namespace ergomap {

struct OrbitCaps {
  std::size_t orbit_cap = 10'000;
  /// Abort an orbit once a point needs more than this many bits.
  std::size_t bit_cap = 2048;
};

/// Forward orbit of x until the first repeat. `closed` is false when a
/// cap stopped the iteration first.
struct Orbit {
  std::vector<Rational> points;
  bool closed = false;
  std::string stop_reason;
};

Orbit forward_orbit(const PwaMap& f, const Rational& x, const OrbitCaps& caps = {});

/// Markov partition P_f = {0 = x_0 < ... < x_N = 1} with its transition
/// data. Cells A_i = [x_i, x_{i+1}].
class MarkovSystem {
 public:
  MarkovSystem(std::vector<Rational> points, std::vector<std::vector<std::uint8_t>> adjacency,
               std::vector<std::vector<Rational>> stoch, std::vector<Rational> pvec, bool expanding);

  const std::vector<Rational>& points() const { return points_; }
  std::size_t cell_count() const { return points_.size() - 1; }
  Interval cell(std::size_t i) const { return Interval(points_[i], points_[i + 1]); }
  std::vector<Interval> cells() const;
  const std::vector<std::vector<std::uint8_t>>& adjacency() const { return adjacency_; }
  /// p_ij = λ(A_j) / λ(f(A_i)) when f(A_i) ⊇ A_j, else 0.
  const std::vector<std::vector<Rational>>& stoch() const { return stoch_; }
  /// p_i = λ(A_i).
  const std::vector<Rational>& pvec() const { return pvec_; }
  /// Built from a map with every |slope| > 1.
  bool expanding() const { return expanding_; }

  /// Index of x in points(), if present.
  std::optional<std::size_t> index_of(const Rational& x) const;
  /// Lowest index of a cell containing x.
  std::size_t cell_of(const Rational& x) const;

 private:
  std::vector<Rational> points_;
  std::vector<std::vector<std::uint8_t>> adjacency_;
  std::vector<std::vector<Rational>> stoch_;
  std::vector<Rational> pvec_;
  bool expanding_;
};

struct NotMarkovWithinBound {
  Rational point;
  std::vector<Rational> orbit_prefix;
  std::string reason;
};

using MarkovResult = std::variant<MarkovSystem, NotMarkovWithinBound>;

/// Iterates every critical point (derivative jumps and both endpoints)
/// with exact cycle detection and builds the system when all close.
MarkovResult markov_partition(const PwaMap& f, const OrbitCaps& caps = {});

/// Builds the system on a given forward-invariant point set containing
/// every critical point. Throws DomainError when the set is not suitable.
MarkovSystem markov_system_from_points(const PwaMap& f, std::vector<Rational> points);

/// P ∪ f^{-1}(P), applied `levels` times.
std::vector<Rational> refine_points(const PwaMap& f, std::span<const Rational> points, int levels = 1);

struct MixingFlags {
  bool irreducible = false;
  bool aperiodic = false;
  bool strongly_mixing = false;
  /// gcd of cycle lengths over the recurrent classes.
  int period = 0;
  /// False when the system is not expanding, where irreducible+aperiodic
  /// does not certify strong mixing.
  bool certified = false;
};

MixingFlags mixing_flags(const MarkovSystem& ms);

struct ItinerarySeq {
  std::vector<std::size_t> symbols;
  bool ambiguous = false;
};

ItinerarySeq itinerary(const PwaMap& f, const MarkovSystem& ms, const Rational& x, std::size_t n);

struct PowerIterationOptions {
  int max_iterations = 200;
  double tolerance = 1e-12;
};

/// Spectral radius of a nonnegative 0-1 matrix by power iteration on A + I.
double spectral_radius(const std::vector<std::vector<std::uint8_t>>& adjacency,
                       const PowerIterationOptions& opt = {});
/// log of the spectral radius of the transition graph (0 for nilpotent).
double top_entropy(const MarkovSystem& ms, const PowerIterationOptions& opt = {});

struct CombinatorialType {
  /// f(x_i) = x_{arrow[i]}.
  std::vector<std::size_t> arrow;
  friend bool operator==(const CombinatorialType&, const CombinatorialType&) = default;
};

CombinatorialType combinatorial_type(const PwaMap& f, const MarkovSystem& ms);
CombinatorialType combinatorial_type(const PwaMap& f, std::span<const Rational> points);

/// Product formula μ(C_w) = λ(A_{w0}) Π λ(A_{wj}) / λ(f(A_{w(j-1)})).
Rational cylinder_measure(const MarkovSystem& ms, std::span<const std::size_t> word);
/// Exact λ{x : f^j(x) ∈ A_{wj}, j < |w|}.
Rational cylinder_preimage_measure(const PwaMap& f, const MarkovSystem& ms, std::span<const std::size_t> word);

enum class Conjugacy { conjugate, not_conjugate, undecided };
std::string to_string(Conjugacy c);

struct ConjugacyResult {
  Conjugacy verdict = Conjugacy::undecided;
  /// h restricted to the matched partition points, (x in P_f, h(x) in P_g).
  std::vector<std::pair<Rational, Rational>> node_map;
  std::string reason;
};

/// Decides conjugacy of two expanding Markov maps by comparing their
/// combinatorial types on the orbits of turning points and endpoints.
/// `refine_levels` extends node_map through that many preimage levels.
ConjugacyResult conjugacy_check(const PwaMap& f, const PwaMap& g, int refine_levels = 0,
                                const OrbitCaps& caps = {});

/// Text dump: N, N rows of P, one row of p, N adjacency rows.
std::string format_matrices(const MarkovSystem& ms);

}  // namespace ergomap
