#include "ergomap/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <variant>

#include "ergomap/errors.hpp"
#include "ergomap/markov.hpp"
#include "ergomap/perturb.hpp"
#include "ergomap/structure.hpp"

namespace ergomap {

namespace {

// One monotone piece of f over one range slab.
struct Component {
  std::size_t slab;
  bool increasing;
  Rational unit_len;  // length / slab height = 1/|slope|
};

struct SlabLayout {
  std::vector<Rational> ys;                    // slab cuts
  std::vector<Component> order;                // components in x order
  std::vector<std::vector<std::size_t>> per;   // per slab: indices into order, x order
};

SlabLayout slab_layout(const PwaMap& f) {
  const PwaMap g = f.normalized();
  SlabLayout L;
  for (const auto& n : g.nodes()) L.ys.push_back(n.y);
  L.ys.push_back(Rational(0));
  L.ys.push_back(Rational(1));
  std::sort(L.ys.begin(), L.ys.end());
  L.ys.erase(std::unique(L.ys.begin(), L.ys.end()), L.ys.end());
  L.per.resize(L.ys.size() - 1);
  for (const auto& seg : g.segments()) {
    if (seg.slope.is_zero()) throw NotPreservingError("constant piece on " + seg.domain.str());
    const Rational y0 = seg.at(seg.domain.lo()), y1 = seg.at(seg.domain.hi());
    const bool inc = y1 > y0;
    const auto lo = static_cast<std::size_t>(std::lower_bound(L.ys.begin(), L.ys.end(), min(y0, y1)) - L.ys.begin());
    const auto hi = static_cast<std::size_t>(std::lower_bound(L.ys.begin(), L.ys.end(), max(y0, y1)) - L.ys.begin());
    const Rational unit = seg.slope.abs().inverse();
    if (inc) {
      for (std::size_t j = lo; j < hi; ++j) L.order.push_back({j, true, unit});
    } else {
      for (std::size_t j = hi; j-- > lo;) L.order.push_back({j, false, unit});
    }
  }
  for (std::size_t k = 0; k < L.order.size(); ++k) L.per[L.order[k].slab].push_back(k);
  return L;
}

long denominator_of(const Rational& r) {
  const mpz_class d = r.denominator();
  if (!d.fits_slong_p()) throw ConstructionError("denominator " + d.get_str() + " too large");
  return d.get_si();
}

PwaMap assemble(std::vector<Node> nodes) {
  std::vector<Node> out;
  for (auto& n : nodes) {
    if (!out.empty() && out.back().x == n.x) continue;
    out.push_back(std::move(n));
  }
  return PwaMap(std::move(out)).normalized();
}

long floor_long(const Rational& q) {
  const mpz_class z = q.numerator() / q.denominator();
  return z.get_si();
}

Rational pow2_inv(int k) {
  Rational r(1);
  for (int i = 0; i < k; ++i) r /= Rational(2);
  return r;
}

}  // namespace

EntropyValue rohlin_entropy(const PwaMap& f) {
  if (!verify_lebesgue(f).preserving) throw NotPreservingError("Rohlin formula needs a Lebesgue-preserving map");
  EntropyValue e;
  double v = 0.0;
  for (const auto& b : f.branches()) {
    const Rational s = b.slope.abs();
    if (s.is_zero()) throw NotPreservingError("zero slope on " + b.domain.str());
    e.terms.push_back({b.domain.length(), s});
    v += b.domain.length().to_double() * s.log();
  }
  e.value = v;
  return e;
}

double two_slope_entropy(const Rational& eta, int m) {
  if (m < 2) throw DomainError("two-slope entropy needs m >= 2");
  if (eta.sign() <= 0 || eta >= Rational(1)) throw RangeError("eta must lie in (0,1), got " + eta.str());
  const Rational one(1);
  return (one - eta).to_double() * (one - eta).inverse().log() + eta.to_double() * (Rational(m - 1) / eta).log();
}

Rational solve_eta(double c, int m) {
  if (m < 3) throw DomainError("solve_eta needs m >= 3");
  const double top = std::log(static_cast<double>(m));
  if (!(c > 0.0) || c > top) {
    throw RangeError("target " + std::to_string(c) + " outside (0, log " + std::to_string(m) + "]");
  }
  // Increasing on (0, (m-1)/m], where it reaches log m.
  Rational lo(0), hi(m - 1, m);
  if (std::abs(two_slope_entropy(hi, m) - c) <= 1e-12) return hi;
  for (int it = 0; it < 400; ++it) {
    const Rational mid = (lo + hi) / Rational(2);
    const double v = two_slope_entropy(mid, m);
    if (std::abs(v - c) <= 1e-12) return mid;
    (v < c ? lo : hi) = mid;
  }
  return (lo + hi) / Rational(2);
}

long two_slope_denominator(const PwaMap& f) {
  const SlabLayout L = slab_layout(f);
  long q = 1;
  for (const auto& c : L.order) q = std::lcm(q, denominator_of(c.unit_len));
  return q;
}

PwaMap build_two_slope(const PwaMap& f, const Rational& eta, long M) {
  if (eta.sign() <= 0 || eta >= Rational(1)) throw RangeError("eta must lie in (0,1), got " + eta.str());
  if (M < 1) throw DomainError("M must be positive");
  if (!verify_lebesgue(f).preserving) throw NotPreservingError("two-slope construction needs a preserving map");
  const SlabLayout L = slab_layout(f);
  const Rational one(1);
  const Rational Mr(M);

  // Per component: numerator p_i, prefix q_i, slab denominator q.
  struct Data {
    long p, prefix, q;
    int m;
  };
  std::vector<Data> data(L.order.size());
  for (std::size_t j = 0; j < L.per.size(); ++j) {
    const auto& comps = L.per[j];
    const Interval slab(L.ys[j], L.ys[j + 1]);
    if (comps.size() < 2) {
      throw ConstructionError("slab " + slab.str() + " has " + std::to_string(comps.size()) +
                              " preimage component(s); need at least 2");
    }
    long q = 1;
    for (auto k : comps) q = std::lcm(q, denominator_of(L.order[k].unit_len));
    if (M % q != 0) {
      throw DivisibilityError("M = " + std::to_string(M) + " is not divisible by q = " + std::to_string(q) +
                              " on slab " + slab.str());
    }
    long prefix = 0;
    for (auto k : comps) {
      const Rational pq = L.order[k].unit_len * Rational(q);
      const long p = pq.numerator().get_si();
      data[k] = {p, prefix, q, static_cast<int>(comps.size())};
      prefix += p;
    }
  }

  std::vector<Node> nodes;
  Rational x0(0);
  for (std::size_t k = 0; k < L.order.size(); ++k) {
    const Component& c = L.order[k];
    const Data& d = data[k];
    const Rational r = eta / (Mr * Rational(d.m - 1));
    const Rational s = (one - eta) / Mr;
    const Rational gamma = Rational(d.p) * s + Rational(d.q - d.p) * r;
    const long periods = M / d.q;
    const Rational beta = Rational(periods) * gamma;
    // h on [0, beta], increasing from 0 to 1.
    std::vector<Node> h{{Rational(0), Rational(0)}};
    for (long l = 0; l < periods; ++l) {
      const Rational base = Rational(l) * gamma;
      const Rational v0(l * d.q, M);
      h.push_back({base + Rational(d.prefix) * r, v0 + Rational(d.prefix, M)});
      h.push_back({base + Rational(d.prefix) * r + Rational(d.p) * s, v0 + Rational(d.prefix + d.p, M)});
      h.push_back({base + gamma, Rational((l + 1) * d.q, M)});
    }
    const Rational lo = L.ys[c.slab];
    const Rational height = L.ys[c.slab + 1] - lo;
    const Rational width = height * beta;
    auto place = [&](const Node& n) { return Node{x0 + height * n.x, lo + height * n.y}; };
    if (c.increasing) {
      for (const auto& n : h) nodes.push_back(place(n));
    } else {
      for (auto it = h.rbegin(); it != h.rend(); ++it) nodes.push_back(place({beta - it->x, it->y}));
    }
    x0 += width;
  }
  if (x0 != one) throw ConstructionError("component widths sum to " + x0.str());
  return assemble(std::move(nodes));
}

PwaMap make_expanding(const PwaMap& f, const Rational& eps) {
  PwaMap g = f.normalized();
  const auto segs = g.segments();
  for (const auto& s : segs) {
    if (s.slope.abs() != Rational(1)) continue;
    // Chunks with oscillation below eps.
    const Rational q = s.domain.length() / eps;
    const long n = floor_long(q) + 1;
    const Rational step = s.domain.length() / Rational(n);
    for (long i = 0; i < n; ++i) {
      const Interval w(s.domain.lo() + step * Rational(i), s.domain.lo() + step * Rational(i + 1));
      g = regular_window(g, {w, 3, WindowMode::regular});
    }
  }
  return g;
}

namespace {

struct Lowered {
  PwaMap map;
  bool ok;
  std::string reason;
};

// Two-slope lowering to entropy < c within `budget`, then Markov-ization.
Lowered lower_entropy(const PwaMap& g, double c, const Rational& budget) {
  const long q = two_slope_denominator(g);
  const int nodes_cap = 20000;
  for (long k = 1; q * k * static_cast<long>(g.size()) * 3 <= nodes_cap * 4; k *= 2) {
    const long M = q * k;
    for (int j = 1; j <= 40; ++j) {
      const Rational eta = pow2_inv(j);
      const PwaMap H = build_two_slope(g, eta, M);
      if (H.size() > static_cast<std::size_t>(nodes_cap)) break;
      if (!(rohlin_entropy(H).value < c)) continue;
      if (!(uniform_distance(g, H) < budget / Rational(2))) {
        // Smaller eta only helps once the staircase is fine enough.
        if (j > 12) break;
        continue;
      }
      PwaMap L = H;
      if (classify(L) != Verdict::leo) L = leoize(L, budget / Rational(8));
      auto mk = markovize(L, budget / Rational(8));
      if (const auto* na = std::get_if<NotAchieved>(&mk)) return {g, false, na->reason};
      PwaMap out = std::get<PwaMap>(mk);
      if (rohlin_entropy(out).value < c && out.expanding()) return {out, true, {}};
    }
  }
  return {g, false, "no two-slope parameters reached the target"};
}

PwaMap window_with_split(const PwaMap& g, const Interval& w, int m, const Rational& t) {
  const Rational A = g.eval(w.lo()), B = g.eval(w.hi());
  const Rational L = w.length();
  const Rational first = t * L;
  const Rational rest = (Rational(1) - t) * L / Rational(m - 1);
  std::vector<Node> h{{w.lo(), A}};
  Rational x = w.lo() + first;
  for (int i = 1; i < m; ++i) {
    h.push_back({x, i % 2 == 1 ? B : A});
    x += rest;
  }
  h.push_back({w.hi(), B});
  return window_with(g, w, h);
}

}  // namespace

PwaMap set_entropy(const PwaMap& f, double c, const Rational& eps) {
  if (!(c > 0.0) || !std::isfinite(c)) throw RangeError("target entropy must be positive and finite");
  if (eps.sign() <= 0) throw DomainError("eps must be positive");
  if (!verify_lebesgue(f).preserving) throw NotPreservingError("set_entropy needs a Lebesgue-preserving map");
  PwaMap g = f.normalized();
  if (!g.expanding()) g = make_expanding(g, eps / Rational(4));
  double h = rohlin_entropy(g).value;
  const bool markov = std::holds_alternative<MarkovSystem>(markov_partition(g));
  if (!(markov && h < c + 1e-12)) {
    const Rational spent = uniform_distance(f, g);
    const Lowered low = lower_entropy(g, c, (eps - spent) / Rational(2));
    if (!low.ok) throw BudgetError("set_entropy: lowering failed: " + low.reason);
    g = low.map;
    h = rohlin_entropy(g).value;
  }
  const double d = c - h;
  if (std::abs(d) <= 1e-10) return g;

  // Largest partition cell whose oscillation fits the remaining budget.
  const Rational remaining = eps - uniform_distance(f, g);
  const auto mr = markov_partition(g);
  const auto& ms = std::get<MarkovSystem>(mr);
  std::optional<Interval> cell;
  std::vector<Rational> pts = ms.points();
  int extra = -1;
  for (int level = 0; level < 24 && extra < 3; ++level) {
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const Interval a(pts[i], pts[i + 1]);
      if (oscillation(g, a) < remaining && (!cell || a.length() > cell->length())) cell = a;
    }
    if (cell) ++extra;
    if (pts.size() > 200000) break;
    pts = refine_points(g, pts, 1);
  }
  if (!cell) throw BudgetError("set_entropy: no partition cell fits the remaining budget");
  const double len = cell->length().to_double();
  int m = 3;
  while (len * std::log(static_cast<double>(m)) <= d + 1e-9) m += 2;

  // Increment len*phi(t) is decreasing in t on [1/m, 1].
  Rational lo(1, m), hi(1);
  PwaMap best = window_with_split(g, *cell, m, lo);
  for (int it = 0; it < 200; ++it) {
    const Rational mid = (lo + hi) / Rational(2);
    PwaMap cand = window_with_split(g, *cell, m, mid);
    const double v = rohlin_entropy(cand).value;
    best = cand;
    if (std::abs(v - c) <= 1e-11) break;
    (v > c ? lo : hi) = mid;
  }
  if (!(std::abs(rohlin_entropy(best).value - c) <= 1e-9)) throw BudgetError("set_entropy: tuning did not converge");
  if (!(uniform_distance(f, best) < eps)) throw BudgetError("set_entropy: result left the eps ball");
  return best;
}

EntropyTower entropy_stage(const PwaMap& f, int n, const Rational& eps) {
  if (n < 1) throw DomainError("entropy_stage needs n >= 1");
  if (eps.sign() <= 0) throw DomainError("eps must be positive");
  PwaMap g = f.normalized();
  double h = rohlin_entropy(g).value;
  const Rational half = eps / Rational(2);
  std::vector<Interval> windows;
  for (const auto& s : g.segments()) {
    const Rational q = s.slope.abs() * s.domain.length() / half;
    const long k = floor_long(q) + 1;
    const Rational step = s.domain.length() / Rational(k);
    for (long i = 0; i < k; ++i) {
      windows.emplace_back(s.domain.lo() + step * Rational(i), s.domain.lo() + step * Rational(i + 1));
    }
  }
  EntropyTower tower{g, {}};
  for (int k = 1; k <= n; ++k) {
    int m = 3;
    while (h + std::log(static_cast<double>(m)) <= static_cast<double>(k)) m += 2;
    if (windows.size() * static_cast<std::size_t>(m) > default_node_cap()) {
      throw SizeError("stage " + std::to_string(k) + " needs " + std::to_string(windows.size() * m) + " laps");
    }
    std::vector<Interval> next;
    for (const auto& w : windows) {
      g = regular_window(g, {w, m, WindowMode::regular});
      const Rational width = w.length() / Rational(m);
      for (int j = 0; j < m; ++j) {
        next.emplace_back(w.lo() + width * Rational(j), w.lo() + width * Rational(j + 1));
      }
    }
    h = rohlin_entropy(g).value;
    tower.stages.push_back({m, windows, h});
    windows = std::move(next);
  }
  for (std::size_t k = 1; k < tower.stages.size(); ++k) {
    const auto& outer = tower.stages[k - 1].windows;
    for (const auto& w : tower.stages[k].windows) {
      auto it = std::upper_bound(outer.begin(), outer.end(), w.lo(),
                                 [](const Rational& x, const Interval& o) { return x < o.lo(); });
      if (it == outer.begin() || !std::prev(it)->contains(w)) {
        throw Error("window " + w.str() + " of stage " + std::to_string(k + 1) + " is not nested");
      }
    }
  }
  if (!(uniform_distance(f, g) < eps)) throw BudgetError("entropy_stage: result left the eps ball");
  tower.map = g;
  return tower;
}

std::string entropy_csv_header() { return "map-id,value-nats,terms,slopes\n"; }

std::string entropy_csv_row(const std::string& map_id, const EntropyValue& e) {
  std::set<Rational> slopes;
  for (const auto& t : e.terms) slopes.insert(t.slope);
  std::ostringstream os;
  os.precision(12);
  os << map_id << ',' << e.value << ',' << e.terms.size() << ',';
  bool first = true;
  for (const auto& s : slopes) {
    os << (first ? "" : ";") << s;
    first = false;
  }
  os << '\n';
  return os.str();
}

}  // namespace ergomap
