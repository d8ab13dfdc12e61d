#include <doctest.h>

#include <cmath>
#include <functional>
#include <variant>
#include <vector>

#include "ergomap/errors.hpp"
#include "ergomap/markov.hpp"
#include "ergomap/perturb.hpp"
#include "ergomap/structure.hpp"
#include "fixtures.hpp"

using namespace ergomap;
using fx::q;

namespace {

IntervalSet points(std::initializer_list<Rational> xs) {
  std::vector<Interval> v;
  for (const auto& x : xs) v.push_back(Interval::point(x));
  return IntervalSet(v);
}

MarkovSystem system_of(const PwaMap& f) {
  auto r = markov_partition(f);
  REQUIRE(std::holds_alternative<MarkovSystem>(r));
  return std::get<MarkovSystem>(r);
}

}  // namespace

TEST_CASE("fixed sets") {
  CHECK(fixed_set(fx::T(), 1) == points({q(0), q(2, 3)}));
  CHECK(fixed_set(fx::T(), 2) == points({q(0), q(2, 5), q(2, 3), q(4, 5)}));
  CHECK(fixed_set(PwaMap::identity(), 1) == IntervalSet{Interval::unit()});
}

TEST_CASE("periodic points") {
  auto p1 = periodic_points(fx::T(), 1);
  REQUIRE(p1.size() == 2);
  CHECK(p1[0].where == Interval::point(q(0)));
  CHECK(p1[1].where == Interval::point(q(2, 3)));
  auto p2 = periodic_points(fx::T(), 2);
  REQUIRE(p2.size() == 4);
  int period2 = 0;
  for (const auto& p : p2) {
    if (p.period == 2) {
      ++period2;
      CHECK((p.where == Interval::point(q(2, 5)) || p.where == Interval::point(q(4, 5))));
    }
  }
  CHECK(period2 == 2);
  auto pid = periodic_points(PwaMap::identity(), 1);
  REQUIRE(pid.size() == 1);
  CHECK(pid[0].where == Interval::unit());
}

TEST_CASE("transitivity components and classification") {
  const auto t = transitivity_components(fx::T());
  CHECK(t.components == std::vector<Interval>{Interval::unit()});
  CHECK(t.permutation == std::vector<std::size_t>{0});
  CHECK(t.verdict == Verdict::leo);

  const auto h = transitivity_components(fx::H2());
  CHECK(h.components == (std::vector<Interval>{Interval(q(0), q(1, 2)), Interval(q(1, 2), q(1))}));
  CHECK(h.permutation == (std::vector<std::size_t>{1, 0}));
  CHECK(h.order_reversing);
  CHECK(h.verdict == Verdict::transitive_not_mixing);

  const auto d = transitivity_components(fx::D());
  CHECK(d.components == (std::vector<Interval>{Interval(q(0), q(1, 2)), Interval(q(1, 2), q(1))}));
  CHECK(d.permutation == (std::vector<std::size_t>{0, 1}));
  CHECK(d.verdict == Verdict::not_transitive);

  CHECK(classify(fx::F()) == Verdict::leo);
  CHECK(second_preimage_meets_interior(fx::T(), q(0)));
  CHECK(second_preimage_meets_interior(fx::T(), q(1)));
  CHECK_THROWS_AS(transitivity_components(fx::bad()), StructureError);
}

TEST_CASE("markov partition of the tent") {
  const auto ms = system_of(fx::T());
  CHECK(ms.points() == (std::vector<Rational>{q(0), q(1, 2), q(1)}));
  const std::vector<std::vector<Rational>> P{{q(1, 2), q(1, 2)}, {q(1, 2), q(1, 2)}};
  CHECK(ms.stoch() == P);
  CHECK(ms.pvec() == (std::vector<Rational>{q(1, 2), q(1, 2)}));
  for (std::size_t j = 0; j < 2; ++j) {
    Rational s(0);
    for (std::size_t i = 0; i < 2; ++i) s += ms.pvec()[i] * ms.stoch()[i][j];
    CHECK(s == ms.pvec()[j]);
  }
  CHECK(std::abs(top_entropy(ms) - std::log(2.0)) < 1e-9);
}

TEST_CASE("non-closing critical orbit") {
  const std::vector<Rational> a{q(2, 5), q(3, 5)};
  OrbitCaps tiny;
  tiny.orbit_cap = 3;
  // 2/5 -> 1 -> 0 closes at once
  CHECK(std::holds_alternative<MarkovSystem>(markov_partition(from_full_laps(LapSign::increasing, a))));
  // 1/3 -> 1 -> 2/3 -> 0 -> 1/3 needs more than three steps
  auto r = markov_partition(PwaMap({{q(0), q(1, 3)}, {q(1, 3), q(1)}, {q(2, 3), q(0)}, {q(1), q(2, 3)}}), tiny);
  CHECK(std::holds_alternative<NotMarkovWithinBound>(r));
}

TEST_CASE("mixing flags") {
  const auto t = mixing_flags(system_of(fx::T()));
  CHECK(t.irreducible);
  CHECK(t.aperiodic);
  CHECK(t.strongly_mixing);
  const auto h = mixing_flags(system_of(fx::H2()));
  CHECK(h.irreducible);
  CHECK_FALSE(h.aperiodic);
  CHECK(h.period == 2);
  const auto d = mixing_flags(system_of(fx::D()));
  CHECK_FALSE(d.irreducible);
}

TEST_CASE("itineraries") {
  const auto ms = system_of(fx::T());
  const auto a = itinerary(fx::T(), ms, q(1, 3), 4);
  CHECK(a.symbols == (std::vector<std::size_t>{0, 1, 1, 1}));
  CHECK_FALSE(a.ambiguous);
  CHECK(itinerary(fx::T(), ms, q(1, 2), 2).ambiguous);
  CHECK(itinerary(fx::T(), ms, q(0), 5).symbols == std::vector<std::size_t>(5, 0));
}

TEST_CASE("spectral radius") {
  CHECK(std::abs(spectral_radius({{1, 1}, {1, 1}}) - 2.0) < 1e-9);
  CHECK(std::abs(spectral_radius({{1, 0}, {0, 1}}) - 1.0) < 1e-9);
  CHECK(std::abs(std::log(spectral_radius({{1, 0}, {0, 1}}))) < 1e-9);
}

TEST_CASE("combinatorial types") {
  const auto t = combinatorial_type(fx::T(), system_of(fx::T()));
  CHECK(t.arrow == (std::vector<std::size_t>{0, 2, 0}));
  const std::vector<Rational> a{q(2, 7), q(5, 7)};
  const PwaMap g = from_full_laps(LapSign::increasing, a);
  const std::vector<Rational> pg{q(0), q(2, 7), q(1)};
  CHECK(combinatorial_type(g, pg).arrow == (std::vector<std::size_t>{0, 2, 0}));
  const PwaMap z = regular_window(PwaMap::identity(), {Interval::unit(), 3});
  const std::vector<Rational> pz{q(0), q(1, 3), q(2, 3), q(1)};
  CHECK(combinatorial_type(z, pz).arrow == (std::vector<std::size_t>{0, 3, 0, 3}));
}

TEST_CASE("conjugacy") {
  const std::vector<Rational> a{q(2, 5), q(3, 5)};
  const PwaMap g = from_full_laps(LapSign::increasing, a);
  const auto c = conjugacy_check(fx::T(), g);
  CHECK(c.verdict == Conjugacy::conjugate);
  bool has_peak = false;
  for (const auto& [x, y] : c.node_map) has_peak |= (x == q(1, 2) && y == q(2, 5));
  CHECK(has_peak);
  const PwaMap z = regular_window(PwaMap::identity(), {Interval::unit(), 3});
  CHECK(conjugacy_check(fx::T(), z).verdict == Conjugacy::not_conjugate);
  const auto self = conjugacy_check(fx::F(), fx::F());
  CHECK(self.verdict == Conjugacy::conjugate);
  for (const auto& [x, y] : self.node_map) CHECK(x == y);
}

// Cylinder product formula against exact preimage measure, every word up to length 4.
TEST_CASE("cylinder measures") {
  for (const auto& f : {fx::T(), fx::F(), fx::H2()}) {
    const auto ms = system_of(f);
    const std::size_t n = ms.cell_count();
    std::vector<std::size_t> word;
    std::function<void()> walk = [&] {
      if (!word.empty()) CHECK(cylinder_measure(ms, word) == cylinder_preimage_measure(f, ms, word));
      if (word.size() == 4) return;
      for (std::size_t s = 0; s < n; ++s) {
        word.push_back(s);
        walk();
        word.pop_back();
      }
    };
    walk();
  }
  const auto ms = system_of(fx::T());
  const std::vector<std::size_t> w{0, 1, 1};
  CHECK(cylinder_measure(ms, w) == q(1, 8));
}
