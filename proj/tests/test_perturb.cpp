#include <doctest.h>

#include <cmath>
#include <random>
#include <variant>

#include "ergomap/errors.hpp"
#include "ergomap/markov.hpp"
#include "ergomap/perturb.hpp"
#include "ergomap/structure.hpp"
#include "fixtures.hpp"

using namespace ergomap;
using fx::q;

namespace {

// Pointwise definition of the m-fold window: copy j covers
// [a + j(b-a)/m, a + (j+1)(b-a)/m] and is direct for even j+offset.
Rational window_oracle(const PwaMap& f, const Interval& w, int m, int offset, const Rational& x) {
  if (!w.contains(x)) return f(x);
  const Rational L = w.length();
  const Rational u = (x - w.lo()) * Rational(m) / L;
  long j = 0;
  while (Rational(j + 1) <= u && j + 1 < m) ++j;
  const Rational frac = u - Rational(j);
  const bool direct = (j + offset) % 2 == 0;
  return direct ? f(w.lo() + frac * L) : f(w.hi() - frac * L);
}

}  // namespace

TEST_CASE("regular window fixtures") {
  const PwaMap z = regular_window(PwaMap::identity(), {Interval::unit(), 3});
  CHECK(z == PwaMap({{q(0), q(0)}, {q(1, 3), q(1)}, {q(2, 3), q(0)}, {q(1), q(1)}}));
  CHECK(same_function(regular_window(fx::F(), {Interval(q(1, 5), q(3, 5)), 1}), fx::F()));

  const Interval w(q(0), q(1, 2));
  const PwaMap g = regular_window(fx::T(), {w, 3});
  CHECK(verify_lebesgue(g).preserving);
  CHECK(fx::preserving_oracle(g));
  for (long k = 0; k <= 120; ++k) CHECK(g(q(k, 120)) == window_oracle(fx::T(), w, 3, 0, q(k, 120)));

  CHECK_THROWS_AS(regular_window(fx::T(), {Interval(q(0), q(1, 4)), 2}), ContinuityError);
}

TEST_CASE("boundary windows keep the interior endpoint") {
  const Interval w(q(0), q(1, 4));
  for (int m : {2, 3, 4}) {
    const PwaMap g = regular_window(fx::T(), {w, m, WindowMode::boundary_left});
    CHECK(verify_lebesgue(g).preserving);
    CHECK(g(q(1, 4)) == fx::T()(q(1, 4)));
    const int offset = (m - 1) % 2;
    for (long k = 0; k <= 64; ++k) CHECK(g(q(k, 256)) == window_oracle(fx::T(), w, m, offset, q(k, 256)));
  }
  const PwaMap r = regular_window(fx::T(), {Interval(q(3, 4), q(1)), 2, WindowMode::boundary_right});
  CHECK(verify_lebesgue(r).preserving);
  CHECK(r(q(3, 4)) == fx::T()(q(3, 4)));
}

TEST_CASE("window_with") {
  const Interval w(q(0), q(1, 2));
  const PwaMap five = regular_window(fx::F(), {Interval(q(1, 10), q(1, 2)), 5});
  CHECK(same_function(window_with(fx::F(), Interval(q(1, 10), q(1, 2)),
                                  restrict_nodes(five, Interval(q(1, 10), q(1, 2)))),
                      five));
  // the reflected copy of F over the whole square has the same slab sums
  const std::vector<Node> refl{{q(0), q(1)}, {q(1, 5), q(0)}, {q(7, 10), q(1)}, {q(1), q(0)}};
  const PwaMap fr = window_with(fx::F(), Interval::unit(), refl);
  CHECK(fr == PwaMap(refl));
  CHECK(verify_lebesgue(fr).preserving);
  const std::vector<Node> h{{q(0), q(0)}, {q(1, 4), q(1, 2)}, {q(1, 2), q(1)}};
  CHECK(window_with(fx::T(), w, h) == fx::T());
  const std::vector<Node> bad{{q(0), q(0)}, {q(1, 6), q(1, 2)}, {q(1, 2), q(1)}};
  CHECK_THROWS_AS(window_with(fx::T(), w, bad), EquivalenceError);
  const std::vector<Node> jump{{q(0), q(0)}, {q(1, 2), q(1, 2)}};
  CHECK_THROWS_AS(window_with(fx::T(), w, jump), Error);
}

TEST_CASE("safe window delta") {
  CHECK(safe_window_delta(fx::T(), q(1, 10)) == q(1, 20));
  CHECK(safe_window_delta(PwaMap::identity(), q(1, 7)) == q(1, 7));
  std::mt19937_64 rng(7);
  const Rational eps = q(1, 10);
  for (int i = 0; i < 50; ++i) {
    const PwaMap f = fx::random_full_lap_map(rng);
    const Rational d = safe_window_delta(f, eps);
    const Rational a = fx::random_unit_rational(rng, 50) * (Rational(1) - d);
    const Interval w(a, a + d * q(99, 100));
    CHECK(uniform_distance(f, regular_window(f, {w, 3})) < eps);
    CHECK(oscillation(f, w) < eps);
  }
}

TEST_CASE("leoize") {
  CHECK(leoize(fx::T(), q(1, 10)) == fx::T());
  for (const auto& f : {fx::H2(), fx::D()}) {
    const PwaMap g = leoize(f, q(1, 4));
    CHECK(classify(g) == Verdict::leo);
    CHECK(uniform_distance(f, g) < q(1, 4));
    CHECK(verify_lebesgue(g).preserving);
    CHECK(transitivity_components(g).components.size() == 1);
  }
}

TEST_CASE("markovize") {
  auto t = markovize(fx::T(), q(1, 10));
  REQUIRE(std::holds_alternative<PwaMap>(t));
  CHECK(std::get<PwaMap>(t) == fx::T());
  auto f = markovize(fx::F(), q(1, 10));
  REQUIRE(std::holds_alternative<PwaMap>(f));
  CHECK(std::holds_alternative<MarkovSystem>(markov_partition(std::get<PwaMap>(f))));
  CHECK(uniform_distance(std::get<PwaMap>(f), fx::F()) < q(1, 10));
}

TEST_CASE("horseshoe") {
  const auto h = horseshoe(fx::T(), 5, q(1, 10));
  CHECK(h.entropy_bound >= std::log(5.0) - 1e-6);
  CHECK(uniform_distance(h.map, fx::T()) < q(1, 10));
  CHECK(verify_lebesgue(h.map).preserving);
  CHECK(h.fixed_point == q(2, 3));
  auto ms = markov_partition(h.map);
  REQUIRE(std::holds_alternative<MarkovSystem>(ms));
  CHECK(top_entropy(std::get<MarkovSystem>(ms)) >= std::log(5.0) - 1e-6);

  const auto flip = horseshoe(PwaMap::flip(), 2, q(1, 10));
  CHECK(flip.fixed_point == q(1, 2));
  CHECK(flip.entropy_bound >= std::log(2.0) - 1e-6);
  CHECK(uniform_distance(flip.map, PwaMap::flip()) < q(1, 10));

  CHECK(horseshoe(fx::T(), 2, q(1, 10)).entropy_bound >= std::log(2.0) - 1e-6);
}
