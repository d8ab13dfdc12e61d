#include "ergomap/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "ergomap/errors.hpp"
#include "ergomap/structure.hpp"

namespace ergomap {

namespace {

// f with its graph over `window` replaced by `inner` (which spans the window).
PwaMap splice(const PwaMap& f, const Interval& window, const std::vector<Node>& inner) {
  std::vector<Node> out;
  for (const auto& n : f.nodes()) {
    if (n.x < window.lo()) out.push_back(n);
  }
  out.insert(out.end(), inner.begin(), inner.end());
  for (const auto& n : f.nodes()) {
    if (n.x > window.hi()) out.push_back(n);
  }
  return PwaMap(std::move(out)).normalized();
}

Rational pow2_inv(int k) {
  Rational r(1);
  for (int i = 0; i < k; ++i) r /= Rational(2);
  return r;
}

// Length of constant segments per level.
std::map<Rational, Rational> flat_mass(const std::vector<Node>& nodes) {
  std::map<Rational, Rational> out;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (nodes[i].y == nodes[i + 1].y) out[nodes[i].y] += nodes[i + 1].x - nodes[i].x;
  }
  return out;
}

void check_window(const Interval& w) {
  if (w.degenerate()) throw DomainError("window " + w.str() + " is degenerate");
}

}  // namespace

PwaMap regular_window(const PwaMap& f, const WindowSpec& spec) {
  const Interval& w = spec.window;
  check_window(w);
  const int m = spec.fold;
  if (m < 1) throw DomainError("fold must be positive");
  if (spec.mode == WindowMode::boundary_left && w.lo() != Rational(0)) {
    throw DomainError("boundary-left window " + w.str() + " does not touch 0");
  }
  if (spec.mode == WindowMode::boundary_right && w.hi() != Rational(1)) {
    throw DomainError("boundary-right window " + w.str() + " does not touch 1");
  }
  if (m == 1) return f;
  const Rational fa = f.eval(w.lo()), fb = f.eval(w.hi());
  if (spec.mode == WindowMode::regular && m % 2 == 0 && fa != fb) {
    throw ContinuityError("even fold " + std::to_string(m) + " needs f(a) = f(b), got " + fa.str() + " and " +
                          fb.str());
  }
  // Copy j is a direct copy iff j + offset is even; boundary-left anchors
  // the last copy at b instead of the first at a.
  const int offset = spec.mode == WindowMode::boundary_left ? (m - 1) % 2 : 0;
  const std::vector<Node> inner = restrict_nodes(f, w);
  const Rational len = w.length();
  const Rational width = len / Rational(m);
  std::vector<Node> out;
  out.reserve(inner.size() * static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const Rational base = w.lo() + width * Rational(j);
    const bool direct = (j + offset) % 2 == 0;
    const std::size_t k0 = j == 0 ? 0 : 1;
    for (std::size_t k = k0; k < inner.size(); ++k) {
      const Node& n = direct ? inner[k] : inner[inner.size() - 1 - k];
      const Rational t = (n.x - w.lo()) / Rational(m);
      out.push_back({direct ? base + t : base + width - t, n.y});
    }
  }
  out.back().x = w.hi();
  return splice(f, w, out);
}

PwaMap window_with(const PwaMap& f, const Interval& window, const std::vector<Node>& h) {
  check_window(window);
  if (h.size() < 2 || h.front().x != window.lo() || h.back().x != window.hi()) {
    throw DomainError("replacement must span exactly " + window.str());
  }
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    if (!(h[i].x < h[i + 1].x)) throw DomainError("replacement nodes must have increasing x");
  }
  if (window.lo() > Rational(0) && h.front().y != f.eval(window.lo())) {
    throw ContinuityError("h(a) = " + h.front().y.str() + " but f(a) = " + f.eval(window.lo()).str());
  }
  if (window.hi() < Rational(1) && h.back().y != f.eval(window.hi())) {
    throw ContinuityError("h(b) = " + h.back().y.str() + " but f(b) = " + f.eval(window.hi()).str());
  }
  const std::vector<Node> fw = restrict_nodes(f, window);
  std::vector<Rational> cuts;
  for (const auto& n : fw) cuts.push_back(n.y);
  for (const auto& n : h) cuts.push_back(n.y);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const auto sf = slab_sums(fw, cuts);
  const auto sh = slab_sums(h, cuts);
  for (std::size_t i = 0; i < sf.size(); ++i) {
    if (sf[i].sum != sh[i].sum) {
      throw EquivalenceError("not λ-equivalent on slab " + sf[i].slab.str() + ": f gives " + sf[i].sum.str() +
                             ", h gives " + sh[i].sum.str());
    }
  }
  if (flat_mass(fw) != flat_mass(h)) throw EquivalenceError("not λ-equivalent: constant pieces differ");
  return splice(f, window, h);
}

Rational safe_window_delta(const PwaMap& f, const Rational& eps) {
  if (eps.sign() <= 0) throw DomainError("eps must be positive");
  const Rational s = f.max_abs_slope();
  return s.is_zero() ? eps : eps / s;
}

Rational oscillation(const PwaMap& f, const Interval& window) {
  Rational lo = f.eval(window.lo()), hi = lo;
  for (const auto& n : restrict_nodes(f, window)) {
    lo = min(lo, n.y);
    hi = max(hi, n.y);
  }
  return hi - lo;
}

PwaMap leoize(const PwaMap& f, const Rational& eps, int max_steps) {
  if (eps.sign() <= 0) throw DomainError("eps must be positive");
  if (!verify_lebesgue(f).preserving) throw NotPreservingError("leoize needs a Lebesgue-preserving map");
  PwaMap g = f;
  int k = 1;
  for (int step = 0;; ++step) {
    const StructureReport rep = transitivity_components(g);
    if (rep.verdict == Verdict::leo) break;
    if (step >= max_steps) throw BudgetError("leoize: step cap reached with " +
                                             std::to_string(rep.components.size()) + " components");
    const Rational budget = eps * pow2_inv(k++);
    const Rational delta = safe_window_delta(g, budget);

    if (!rep.gaps.empty()) {
      // Fold the whole gap in short 3-fold chunks.
      const Interval gap = rep.gaps.front();
      const mpz_class pieces = (gap.length() / delta).numerator() / (gap.length() / delta).denominator() + 1;
      const long n = pieces.get_si();
      const Rational step_len = gap.length() / Rational(n);
      for (long i = 0; i < n; ++i) {
        const Interval chunk(gap.lo() + step_len * Rational(i), gap.lo() + step_len * Rational(i + 1));
        g = regular_window(g, {chunk, 3, WindowMode::regular});
      }
      continue;
    }

    std::optional<std::size_t> pair;
    for (std::size_t i = 0; i + 1 < rep.components.size(); ++i) {
      if (rep.components[i].hi() == rep.components[i + 1].lo()) {
        pair = i;
        break;
      }
    }
    if (pair) {
      const Interval& left = rep.components[*pair];
      const Interval& right = rep.components[*pair + 1];
      const Rational b = left.hi();
      const Rational w =
          dyadic_below(min(delta / Rational(2), min(left.length() / Rational(2), right.length() / Rational(2))));
      g = regular_window(g, {Interval(b - w, b + w), 3, WindowMode::regular});
      continue;
    }

    if (rep.components.size() == 1 && rep.components[0] == Interval::unit()) {
      // Mixing but an endpoint has no second preimage in (0,1).
      const Rational w = dyadic_below(min(delta, Rational(1, 4)));
      if (!second_preimage_meets_interior(g, Rational(0)) || !second_preimage_meets_interior(g, Rational(1))) {
        g = regular_window(g, {Interval(Rational(0), w), 2, WindowMode::boundary_left});
        g = regular_window(g, {Interval(Rational(1) - w, Rational(1)), 2, WindowMode::boundary_right});
        continue;
      }
    }
    throw BudgetError("leoize: no admissible perturbation for the current structure");
  }
  if (!(uniform_distance(f, g) < eps)) throw BudgetError("leoize: result left the eps ball");
  return g;
}

namespace {

struct LocalPiece {
  Rational lo, hi;  // domain
  Rational a, b;    // g^d(x) = a x + b
};

bool meets_open(const std::vector<Rational>& sorted, const Rational& lo, const Rational& hi) {
  auto it = std::upper_bound(sorted.begin(), sorted.end(), lo);
  return it != sorted.end() && *it < hi;
}

// Forward orbit of x until it lands in `known`, or nullopt after `limit` steps.
std::optional<std::vector<Rational>> orbit_to_known(const PwaMap& g, Rational x, const std::vector<Rational>& known,
                                                    int limit) {
  std::vector<Rational> out;
  for (int i = 0; i <= limit; ++i) {
    out.push_back(x);
    if (std::binary_search(known.begin(), known.end(), x)) return out;
    x = g.eval(x);
  }
  return std::nullopt;
}

struct Endpoints {
  Rational u, v;
};

// Eventually periodic endpoints u < x < v inside I, found as points of
// g^{-d}(known) near x, such that no relevant orbit enters (u, v).
std::optional<Endpoints> find_endpoints(const PwaMap& g, const Interval& I, const Rational& x,
                                        const std::vector<Rational>& known, const MarkovizeOptions& opt) {
  const auto segs = g.segments();
  std::vector<Rational> seg_lo;
  for (const auto& s : segs) seg_lo.push_back(s.domain.lo());

  std::optional<Rational> best_l, best_r;
  std::vector<LocalPiece> pieces{{I.lo(), I.hi(), Rational(1), Rational(0)}};
  for (int d = 0; d <= opt.max_depth; ++d) {
    for (const auto& p : pieces) {
      const Rational y0 = p.a * p.lo + p.b, y1 = p.a * p.hi + p.b;
      const Rational ylo = min(y0, y1), yhi = max(y0, y1);
      for (auto it = std::lower_bound(known.begin(), known.end(), ylo); it != known.end() && *it <= yhi; ++it) {
        const Rational c = (*it - p.b) / p.a;
        if (c < x && (!best_l || c > *best_l)) best_l = c;
        if (c > x && (!best_r || c < *best_r)) best_r = c;
      }
    }
    if (best_l && best_r) {
      const Rational& u = *best_l;
      const Rational& v = *best_r;
      bool ok = !meets_open(known, u, v);
      for (const Rational* e : {&u, &v}) {
        if (!ok) break;
        const auto orb = orbit_to_known(g, *e, known, opt.max_depth + 1);
        if (!orb) {
          ok = false;
          break;
        }
        for (std::size_t i = 1; i < orb->size(); ++i) {
          if (u < (*orb)[i] && (*orb)[i] < v) ok = false;
        }
      }
      if (ok) return Endpoints{u, v};
    }
    if (d == opt.max_depth) break;
    std::vector<LocalPiece> next;
    for (const auto& p : pieces) {
      const Rational y0 = p.a * p.lo + p.b, y1 = p.a * p.hi + p.b;
      const Rational ylo = min(y0, y1), yhi = max(y0, y1);
      if (ylo == yhi) continue;
      auto it = std::upper_bound(seg_lo.begin(), seg_lo.end(), ylo);
      std::size_t si = static_cast<std::size_t>(it - seg_lo.begin()) - 1;
      for (; si < segs.size() && segs[si].domain.lo() < yhi; ++si) {
        const Rational sl = max(ylo, segs[si].domain.lo()), sh = min(yhi, segs[si].domain.hi());
        if (!(sl < sh)) continue;
        const Rational x0 = (sl - p.b) / p.a, x1 = (sh - p.b) / p.a;
        next.push_back({min(x0, x1), max(x0, x1), segs[si].slope * p.a, segs[si].slope * p.b + segs[si].intercept});
      }
      if (next.size() > opt.piece_cap) break;
    }
    if (next.size() > opt.piece_cap) break;
    pieces = std::move(next);
  }
  return std::nullopt;
}

}  // namespace

MarkovizeResult markovize(const PwaMap& f, const Rational& eps, const MarkovizeOptions& opt) {
  if (eps.sign() <= 0) throw DomainError("eps must be positive");
  if (!verify_lebesgue(f).preserving) throw NotPreservingError("markovize needs a Lebesgue-preserving map");
  if (classify(f) != Verdict::leo) throw StructureError("markovize needs a leo map");
  PwaMap g = f.normalized();
  for (int windows = 0;; ++windows) {
    std::vector<Rational> known, open;
    for (const auto& c : g.critical_points()) {
      Orbit orb = forward_orbit(g, c, opt.caps);
      if (orb.closed) {
        known.insert(known.end(), orb.points.begin(), orb.points.end());
      } else {
        open.push_back(c);
      }
    }
    if (open.empty()) break;
    if (windows >= opt.max_windows) return NotAchieved{"window cap reached", open};
    const IntervalSet fix = fixed_set(g, 1);
    for (const auto& p : fix.parts()) {
      if (p.degenerate()) known.push_back(p.lo());
    }
    std::sort(known.begin(), known.end());
    known.erase(std::unique(known.begin(), known.end()), known.end());

    // First point of the open orbit that is not a node of g.
    const auto& nodes = g.nodes();
    auto is_node = [&](const Rational& x) {
      return std::binary_search(nodes.begin(), nodes.end(), Node{x, Rational(0)},
                                [](const Node& a, const Node& b) { return a.x < b.x; });
    };
    Rational xs = open.front();
    bool found = false;
    for (std::size_t i = 0; i < opt.caps.orbit_cap; ++i) {
      xs = g.eval(xs);
      if (!is_node(xs)) {
        found = true;
        break;
      }
    }
    if (!found) return NotAchieved{"orbit of " + open.front().str() + " never leaves the node set", open};

    const Branch seg = g.segments()[g.segment_index(xs)];
    const Rational budget = eps * pow2_inv(windows + 1);
    const Rational radius = budget / (seg.slope.abs() * Rational(4));
    const Interval I(max(seg.domain.lo(), xs - radius), min(seg.domain.hi(), xs + radius));
    const auto ends = find_endpoints(g, I, xs, known, opt);
    if (!ends) {
      return NotAchieved{"no eventually periodic window endpoints near " + xs.str() + " (orbit of " +
                             open.front().str() + ")",
                         open};
    }
    const Rational A = g.eval(ends->u), B = g.eval(ends->v);
    const Rational z2 = (xs + ends->v) / Rational(2);
    g = window_with(g, Interval(ends->u, ends->v), {{ends->u, A}, {xs, B}, {z2, A}, {ends->v, B}});
  }
  if (!(uniform_distance(f, g) < eps)) return NotAchieved{"result left the eps ball", {}};
  if (classify(g) != Verdict::leo) return NotAchieved{"result is not leo", {}};
  if (!std::holds_alternative<MarkovSystem>(markov_partition(g, opt.caps))) {
    return NotAchieved{"Markov detection failed on the result", {}};
  }
  return g;
}

std::optional<Rational> transverse_fixed_point(const PwaMap& f) {
  const auto segs = f.normalized().segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Branch& s = segs[i];
    if (s.slope == Rational(1)) continue;
    const Rational x = s.intercept / (Rational(1) - s.slope);
    if (!s.domain.contains(x) || x == Rational(0) || x == Rational(1)) continue;
    Rational sl = s.slope, sr = s.slope;
    if (x == s.domain.lo()) {
      sl = segs[i - 1].slope;
    } else if (x == s.domain.hi()) {
      sr = segs[i + 1].slope;
    }
    if (((sl - Rational(1)) * (sr - Rational(1))).sign() > 0) return x;
  }
  return std::nullopt;
}

HorseshoeResult horseshoe(const PwaMap& f, int n, const Rational& eps) {
  if (n < 2) throw DomainError("horseshoe needs n >= 2");
  if (eps.sign() <= 0) throw DomainError("eps must be positive");
  const auto b = transverse_fixed_point(f);
  if (!b) throw DomainError("no transverse interior fixed point");
  // Regular windows need an odd fold to keep both endpoints.
  const int m = (n + 2) % 2 == 1 ? n + 2 : n + 3;
  Rational gap_l(1), gap_r(1);
  const PwaMap fn = f.normalized();
  for (const auto& nd : fn.nodes()) {
    if (nd.x < *b) gap_l = *b - nd.x;
    if (nd.x > *b) {
      gap_r = nd.x - *b;
      break;
    }
  }
  const Rational w = dyadic_below(min(safe_window_delta(f, eps) / Rational(2), min(gap_l, gap_r)));
  const Interval window(*b - w, *b + w);
  PwaMap g = regular_window(f, {window, m, WindowMode::regular});

  // Laps of g over the window that cover it.
  int covering = 0;
  for (const auto& lap : g.laps()) {
    const auto part = lap.intersect(window);
    if (!part || part->degenerate()) continue;
    if (image_interval(g, *part).contains(window)) ++covering;
  }
  HorseshoeResult res{g, window, *b, m, covering > 0 ? std::log(static_cast<double>(covering)) : 0.0, "covering"};
  if (const auto mr = markov_partition(g); std::holds_alternative<MarkovSystem>(mr)) {
    const double h = top_entropy(std::get<MarkovSystem>(mr));
    if (h >= res.entropy_bound - 1e-9) {
      res.entropy_bound = h;
      res.certificate = "spectral-radius";
    }
  }
  return res;
}

}  // namespace ergomap
