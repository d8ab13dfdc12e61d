#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "ergomap/pwa_map.hpp"
#include "ergomap/rational.hpp"

namespace fx {

using ergomap::Interval;
using ergomap::IntervalSet;
using ergomap::Node;
using ergomap::PwaMap;
using ergomap::Rational;

inline Rational q(long n, long d = 1) { return Rational(n, d); }

inline PwaMap T() { return PwaMap::tent(); }
inline PwaMap F() { return PwaMap({{q(0), q(0)}, {q(3, 10), q(1)}, {q(4, 5), q(0)}, {q(1), q(1)}}); }
inline PwaMap H2() {
  return PwaMap({{q(0), q(1, 2)}, {q(1, 4), q(1)}, {q(1, 2), q(1, 2)}, {q(3, 4), q(0)}, {q(1), q(1, 2)}});
}
inline PwaMap D() {
  return PwaMap({{q(0), q(1, 2)}, {q(1, 4), q(0)}, {q(1, 2), q(1, 2)}, {q(3, 4), q(1)}, {q(1), q(1, 2)}});
}
// Slope 2 up to 1, then slope -1 down to 1/2: (1/2,1) is covered once with weight 1/2.
inline PwaMap bad() { return PwaMap({{q(0), q(0)}, {q(1, 2), q(1)}, {q(1), q(1, 2)}}); }

inline Interval iv(const Rational& a, const Rational& b) { return Interval(a, b); }

// λ{x : f(x) <= y}, straight from the node list. Independent of slab_sums.
inline Rational sublevel_measure(const PwaMap& f, const Rational& y) {
  Rational total(0);
  const auto& n = f.nodes();
  for (std::size_t i = 0; i + 1 < n.size(); ++i) {
    const Rational &x0 = n[i].x, &x1 = n[i + 1].x, &y0 = n[i].y, &y1 = n[i + 1].y;
    const Rational w = x1 - x0;
    if (y0 <= y && y1 <= y) {
      total += w;
    } else if (y0 > y && y1 > y) {
      continue;
    } else {
      // exactly one endpoint above y: the crossing splits the segment
      const Rational t = (y - y0) / (y1 - y0);  // fraction from x0 to the crossing
      total += (y0 <= y) ? w * t : w * (Rational(1) - t);
    }
  }
  return total;
}

// Brute-force preservation oracle: λ(f^{-1}[0,y]) = y at every node value,
// every midpoint between sorted node values and a few fixed probes.
inline bool preserving_oracle(const PwaMap& f) {
  std::vector<Rational> ys{q(0), q(1)};
  for (const auto& nd : f.nodes()) ys.push_back(nd.y);
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  std::vector<Rational> probes = ys;
  for (std::size_t i = 0; i + 1 < ys.size(); ++i) probes.push_back((ys[i] + ys[i + 1]) / q(2));
  for (long k = 1; k < 7; ++k) probes.push_back(q(k, 7));
  for (const auto& y : probes) {
    if (sublevel_measure(f, y) != y) return false;
  }
  return true;
}

// Seeded random full-lap map; raw engine output only, so runs reproduce
// across standard libraries.
inline PwaMap random_full_lap_map(std::mt19937_64& rng, int max_laps = 5, long den = 12) {
  const int laps = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_laps));
  std::vector<long> w(static_cast<std::size_t>(laps));
  long total = 0;
  for (auto& x : w) {
    x = 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(den));
    total += x;
  }
  std::vector<Rational> alphas;
  for (long x : w) alphas.emplace_back(x, total);
  const auto sign = rng() % 2 == 0 ? ergomap::LapSign::increasing : ergomap::LapSign::decreasing;
  return ergomap::from_full_laps(sign, alphas);
}

inline Rational random_unit_rational(std::mt19937_64& rng, long den) {
  return Rational(static_cast<long>(rng() % static_cast<std::uint64_t>(den + 1)), den);
}

// Random nondegenerate window inside [0,1].
inline Interval random_window(std::mt19937_64& rng, long den = 64) {
  Rational a = random_unit_rational(rng, den), b = random_unit_rational(rng, den);
  while (a == b) b = random_unit_rational(rng, den);
  if (b < a) std::swap(a, b);
  return Interval(a, b);
}

}  // namespace fx
