#include <doctest.h>

#include <cmath>
#include <vector>

#include "ergomap/errors.hpp"
#include "ergomap/map_io.hpp"
#include "ergomap/pwa_map.hpp"
#include "fixtures.hpp"

using namespace ergomap;
using fx::q;

TEST_CASE("rational parse and print") {
  CHECK(Rational::parse("3/6") == q(1, 2));
  CHECK(Rational::parse("-4") == q(-4));
  CHECK(q(0).str() == "0/1");
  CHECK(q(2, 4).str() == "1/2");
  CHECK_THROWS_AS(Rational::parse("1/0"), ParseError);
  CHECK_THROWS_AS(Rational::parse("abc"), ParseError);
  CHECK(dyadic_below(q(1, 3)) == q(1, 4));
  CHECK(dyadic_below(q(1, 4)) == q(1, 8));
}

TEST_CASE("interval set algebra") {
  IntervalSet a{Interval(q(0), q(1, 4)), Interval(q(1, 4), q(1, 2))};
  CHECK(a.size() == 1);
  CHECK(a.measure() == q(1, 2));
  CHECK(a.complement() == IntervalSet{Interval(q(1, 2), q(1))});
  IntervalSet b{Interval(q(1, 3), q(2, 3))};
  CHECK(a.intersect(b).measure() == q(1, 6));
  CHECK(a.unite(b).measure() == q(2, 3));
}

TEST_CASE("evaluation") {
  CHECK(fx::T().eval(q(1, 4)) == q(1, 2));
  CHECK(fx::T().eval(q(1, 2)) == q(1));
  CHECK(fx::F().eval(q(3, 20)) == q(1, 2));
  CHECK_THROWS_AS(PwaMap({{q(0), q(0)}, {q(1, 2), q(2)}, {q(1), q(0)}}), DomainError);
  CHECK_THROWS_AS(PwaMap({{q(0), q(0)}, {q(1, 2), q(1)}}), DomainError);
}

TEST_CASE("from_full_laps") {
  const std::vector<Rational> half{q(1, 2), q(1, 2)};
  CHECK(from_full_laps(LapSign::increasing, half) == fx::T());
  const std::vector<Rational> f{q(3, 10), q(1, 2), q(1, 5)};
  CHECK(from_full_laps(LapSign::increasing, f) == fx::F());
  const std::vector<Rational> thirds{q(1, 3), q(1, 3), q(1, 3)};
  CHECK(from_full_laps(LapSign::decreasing, thirds) ==
        PwaMap({{q(0), q(1)}, {q(1, 3), q(0)}, {q(2, 3), q(1)}, {q(1), q(0)}}));
  const std::vector<Rational> bad{q(1, 2), q(1, 3)};
  CHECK_THROWS_AS(from_full_laps(LapSign::increasing, bad), InvalidTuple);
}

TEST_CASE("composition and iteration against pointwise evaluation") {
  const PwaMap t2 = compose(fx::T(), fx::T());
  CHECK(t2.laps().size() == 4);
  for (const auto& b : t2.branches()) CHECK(b.slope.abs() == q(4));
  CHECK(same_function(compose(PwaMap::identity(), fx::F()), fx::F()));
  CHECK(same_function(compose(fx::F(), PwaMap::identity()), fx::F()));
  CHECK(same_function(iterate(fx::T(), 2), t2));
  CHECK(same_function(iterate(fx::F(), 1), fx::F()));

  const PwaMap t3 = iterate(fx::T(), 3);
  CHECK(t3.laps().size() == 8);
  for (const auto& b : t3.branches()) CHECK(b.slope.abs() == q(8));
  const PwaMap f3 = iterate(fx::F(), 3);
  for (long k = 0; k <= 97; ++k) {
    const Rational x = q(k, 97);
    CHECK(t3(x) == fx::T()(fx::T()(fx::T()(x))));
    CHECK(f3(x) == fx::F()(fx::F()(fx::F()(x))));
  }
  CHECK_THROWS_AS(iterate(fx::T(), 12, 100), SizeError);
}

TEST_CASE("images and preimages") {
  CHECK(image_interval(fx::T(), Interval(q(0), q(1, 8))) == Interval(q(0), q(1, 4)));
  CHECK(image_interval(fx::T(), Interval(q(1, 4), q(3, 4))) == Interval(q(1, 2), q(1)));
  for (const auto& f : {fx::T(), fx::F(), fx::H2(), fx::D()}) {
    CHECK(image_interval(f, Interval::unit()) == Interval::unit());
    CHECK(preimage_set(f, IntervalSet{Interval::unit()}) == IntervalSet{Interval::unit()});
  }
  CHECK(preimage_set(fx::T(), IntervalSet{Interval(q(0), q(1, 2))}) ==
        (IntervalSet{Interval(q(0), q(1, 4)), Interval(q(3, 4), q(1))}));
  CHECK(preimage_set(fx::T(), IntervalSet{Interval(q(1, 3), q(2, 3))}).measure() == q(1, 3));
}

TEST_CASE("lebesgue verification") {
  for (const auto& f : {fx::T(), fx::F(), fx::H2(), fx::D(), PwaMap::identity(), PwaMap::flip()}) {
    CHECK(verify_lebesgue(f).preserving);
    CHECK(fx::preserving_oracle(f));
  }
  const auto r = verify_lebesgue(fx::bad());
  CHECK_FALSE(r.preserving);
  CHECK_FALSE(fx::preserving_oracle(fx::bad()));
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->slab == Interval(q(0), q(1, 2)));
  CHECK(r.witness->sum == q(1, 2));

  const auto flat = verify_lebesgue(PwaMap({{q(0), q(0)}, {q(1, 2), q(1)}, {q(3, 4), q(1)}, {q(1), q(0)}}));
  CHECK_FALSE(flat.preserving);
  CHECK(flat.failure == LebesgueReport::Failure::constant_piece);
}

TEST_CASE("uniform distance") {
  CHECK(uniform_distance(fx::F(), fx::F()) == q(0));
  // |T - id| is 1/2 at x = 1/2 but reaches 1 at x = 1
  CHECK(uniform_distance(fx::T(), PwaMap::identity()) == q(1));
  CHECK(uniform_distance(PwaMap::identity(), PwaMap::flip()) == q(1));
}

TEST_CASE("map file round trip") {
  for (const auto& f : {fx::T(), fx::F(), fx::H2(), fx::D()}) {
    const std::string s = serialize_map(f);
    CHECK(parse_map(s) == f);
    CHECK(serialize_map(parse_map(s)) == s);
  }
  CHECK(parse_map("# comment\npwamap v1\n\n0 0\n1/2 1\n1 0\n") == fx::T());
  CHECK_THROWS_AS(parse_map("pwamap v2\n0 0\n1 1\n"), ParseError);
  CHECK_THROWS_AS(parse_map("pwamap v1\n0 0\n1/2\n1 1\n"), ParseError);
}
