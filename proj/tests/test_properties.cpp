#include <doctest.h>

#include <random>

#include "ergomap/entropy.hpp"
#include "ergomap/map_io.hpp"
#include "ergomap/perturb.hpp"
#include "ergomap/stats.hpp"
#include "ergomap/svg.hpp"
#include "fixtures.hpp"

using namespace ergomap;
using fx::q;

TEST_CASE("random regular windows preserve Lebesgue measure") {
  std::mt19937_64 rng(20240917);
  for (int i = 0; i < 200; ++i) {
    const PwaMap f = fx::random_full_lap_map(rng);
    const int m = 1 + 2 * static_cast<int>(rng() % 4);
    const Interval w = fx::random_window(rng);
    const PwaMap g = regular_window(f, {w, m});
    CHECK(verify_lebesgue(g).preserving);
    CHECK(fx::preserving_oracle(g));
    // off the window nothing moves
    CHECK(g(w.lo()) == f(w.lo()));
    CHECK(g(w.hi()) == f(w.hi()));
    CHECK(parse_map(serialize_map(g)) == g);
  }
}

TEST_CASE("random two-slope maps preserve Lebesgue measure") {
  std::mt19937_64 rng(99);
  int built = 0;
  for (int i = 0; i < 20; ++i) {
    const PwaMap f = fx::random_full_lap_map(rng, 4, 6);
    if (f.laps().size() < 2) continue;
    const long M = two_slope_denominator(f) * 2;
    const Rational eta = q(1 + static_cast<long>(rng() % 9), 20);
    const PwaMap h = build_two_slope(f, eta, M);
    CHECK(verify_lebesgue(h).preserving);
    CHECK(fx::preserving_oracle(h));
    CHECK(parse_map(serialize_map(h)) == h);
    ++built;
  }
  CHECK(built > 5);
}

TEST_CASE("preimages preserve measure on random sets") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    const PwaMap f = fx::random_full_lap_map(rng);
    const IntervalSet s{fx::random_window(rng), fx::random_window(rng)};
    CHECK(preimage_set(f, s).measure() == s.measure());
  }
}

TEST_CASE("svg rendering is a pure function of its inputs") {
  const std::string a = render_svg(fx::T());
  CHECK(a == render_svg(fx::T()));
  CHECK(a.find("points=\"20.000,500.000 260.000,20.000 500.000,500.000\"") != std::string::npos);
  SvgOverlays ov;
  ov.boxes = {Interval(q(0), q(1, 2)), Interval(q(1, 2), q(1))};
  ov.diagonal = true;
  const std::string d = render_svg(fx::D(), ov);
  std::size_t dashed = 0;
  for (std::size_t p = d.find("stroke-dasharray=\"4 2\""); p != std::string::npos;
       p = d.find("stroke-dasharray=\"4 2\"", p + 1))
    ++dashed;
  CHECK(dashed == 2);
}
