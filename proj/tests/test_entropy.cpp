#include <doctest.h>

#include <cmath>
#include <set>
#include <variant>

#include "ergomap/entropy.hpp"
#include "ergomap/errors.hpp"
#include "ergomap/markov.hpp"
#include "ergomap/structure.hpp"
#include "fixtures.hpp"

using namespace ergomap;
using fx::q;

namespace {

std::set<Rational> slope_set(const PwaMap& f) {
  std::set<Rational> s;
  for (const auto& b : f.branches()) s.insert(b.slope.abs());
  return s;
}

double e27(double eta, int m) { return (1 - eta) * std::log(1 / (1 - eta)) + eta * std::log((m - 1) / eta); }

}  // namespace

TEST_CASE("rohlin entropy closed forms") {
  CHECK(std::abs(rohlin_entropy(fx::T()).value - std::log(2.0)) < 1e-12);
  const double fv = 0.3 * std::log(10.0 / 3.0) + 0.5 * std::log(2.0) + 0.2 * std::log(5.0);
  CHECK(std::abs(rohlin_entropy(fx::F()).value - fv) < 1e-12);
  CHECK(rohlin_entropy(PwaMap::identity()).value == 0.0);
  const std::vector<Rational> thirds{q(1, 3), q(1, 3), q(1, 3)};
  CHECK(std::abs(rohlin_entropy(from_full_laps(LapSign::decreasing, thirds)).value - std::log(3.0)) < 1e-12);
  CHECK_THROWS_AS(rohlin_entropy(fx::bad()), NotPreservingError);
  CHECK(rohlin_entropy(fx::T()).terms.size() == 2);
}

TEST_CASE("two-slope formula") {
  CHECK(std::abs(two_slope_entropy(q(3, 20), 3) - e27(0.15, 3)) < 1e-12);
  CHECK(std::abs(two_slope_entropy(q(3, 20), 3) - 0.5267) < 1e-4);
  CHECK(two_slope_entropy(q(1, 1000000), 3) < 1e-4);
  for (long k = 1; k < 10; ++k) {
    const double h = (1 - k / 10.0) * std::log(1 / (1 - k / 10.0)) + (k / 10.0) * std::log(10.0 / k);
    CHECK(std::abs(two_slope_entropy(q(k, 10), 2) - h) < 1e-12);
  }
}

TEST_CASE("solve_eta") {
  const Rational e = solve_eta(0.5, 3);
  CHECK(std::abs(two_slope_entropy(e, 3) - 0.5) <= 1e-9);
  CHECK(std::abs(e.to_double() - 0.1395) < 1e-3);
  const double fig = two_slope_entropy(q(3, 20), 3);
  CHECK(std::abs(two_slope_entropy(solve_eta(fig, 3), 3) - fig) <= 1e-9);
  const Rational hi = solve_eta(std::log(2.0) + 0.01, 3);
  CHECK(std::abs(two_slope_entropy(hi, 3) - std::log(2.0) - 0.01) <= 1e-9);
  CHECK(std::abs(hi.to_double() - 0.2323) < 1e-3);
  CHECK_THROWS_AS(solve_eta(0.0, 3), RangeError);
  CHECK_THROWS_AS(solve_eta(std::log(3.0) + 0.01, 3), RangeError);
}

TEST_CASE("build_two_slope on the full-lap fixture") {
  const PwaMap h = build_two_slope(fx::F(), q(3, 20), 20);
  CHECK(verify_lebesgue(h).preserving);
  CHECK(fx::preserving_oracle(h));
  CHECK(slope_set(h) == (std::set<Rational>{q(20, 17), q(40, 3)}));
  CHECK(std::abs(rohlin_entropy(h).value - two_slope_entropy(q(3, 20), 3)) < 1e-12);
  // not bounded a priori, but it shrinks as the grid refines
  Rational prev(2);
  for (long M : {20L, 40L, 80L, 160L}) {
    const Rational d = uniform_distance(build_two_slope(fx::F(), q(1, 20), M), fx::F());
    CHECK(d < prev);
    prev = d;
  }
  CHECK(two_slope_denominator(fx::F()) == 10);
  CHECK_THROWS_AS(build_two_slope(fx::F(), q(3, 20), 7), DivisibilityError);
}

TEST_CASE("build_two_slope on the tent") {
  const PwaMap h = build_two_slope(fx::T(), q(1, 4), 2);
  CHECK(verify_lebesgue(h).preserving);
  CHECK(slope_set(h) == (std::set<Rational>{q(4, 3), q(4)}));
  const double expect = 0.75 * std::log(4.0 / 3.0) + 0.25 * std::log(4.0);
  CHECK(std::abs(rohlin_entropy(h).value - expect) < 1e-12);
  CHECK(std::abs(rohlin_entropy(h).value - two_slope_entropy(q(1, 4), 2)) < 1e-12);
}

TEST_CASE("entropy targeting through two-slope maps") {
  for (double c : {0.1, 0.3, 0.5, 0.65}) {
    const Rational eta = solve_eta(c, 3);
    const PwaMap h = build_two_slope(fx::F(), eta, 20);
    CHECK(verify_lebesgue(h).preserving);
    CHECK(std::abs(rohlin_entropy(h).value - c) <= 1e-9);
  }
}

TEST_CASE("set_entropy") {
  const PwaMap g = set_entropy(fx::T(), 1.0, q(1, 4));
  CHECK(std::abs(rohlin_entropy(g).value - 1.0) <= 1e-9);
  CHECK(uniform_distance(g, fx::T()) < q(1, 4));
  CHECK(verify_lebesgue(g).preserving);
  CHECK(std::holds_alternative<MarkovSystem>(markov_partition(g)));
  CHECK(g.expanding());

  const PwaMap low = set_entropy(fx::T(), 0.3, q(1, 2));
  CHECK(std::abs(rohlin_entropy(low).value - 0.3) <= 1e-9);
  CHECK(uniform_distance(low, fx::T()) < q(1, 2));
}

TEST_CASE("entropy stages") {
  const auto one = entropy_stage(fx::T(), 1, q(1, 4));
  CHECK(rohlin_entropy(one.map).value > 1.0);
  const auto two = entropy_stage(fx::T(), 2, q(1, 4));
  CHECK(rohlin_entropy(two.map).value > 2.0);
  CHECK(verify_lebesgue(two.map).preserving);
  CHECK(uniform_distance(two.map, fx::T()) < q(1, 4));
  REQUIRE(two.stages.size() == 2);
  for (const auto& inner : two.stages[1].windows) {
    bool inside = false;
    for (const auto& outer : two.stages[0].windows) inside |= outer.contains(inner);
    CHECK(inside);
  }
}

TEST_CASE("entropy csv") {
  CHECK(entropy_csv_header() == "map-id,value-nats,terms,slopes\n");
  const std::string row = entropy_csv_row("T", rohlin_entropy(fx::T()));
  CHECK(row.rfind("T,", 0) == 0);
  CHECK(row.find("2/1") != std::string::npos);
}
