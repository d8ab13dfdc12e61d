#include "ergomap/markov.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "ergomap/errors.hpp"

namespace ergomap {

namespace {

void sort_unique(std::vector<Rational>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<Rational> turning_points_and_ends(const PwaMap& f) {
  std::vector<Rational> out{Rational(0), Rational(1)};
  const auto laps = f.laps();
  for (std::size_t i = 0; i + 1 < laps.size(); ++i) out.push_back(laps[i].hi());
  sort_unique(out);
  return out;
}

// Union of the forward orbits of `seeds`, or the first seed whose orbit
// does not close.
std::variant<std::vector<Rational>, NotMarkovWithinBound> orbit_closure(const PwaMap& f,
                                                                       const std::vector<Rational>& seeds,
                                                                       const OrbitCaps& caps) {
  std::vector<Rational> all;
  std::unordered_set<Rational, RationalHash> seen;
  for (const auto& s : seeds) {
    if (seen.count(s)) continue;
    Orbit orb = forward_orbit(f, s, caps);
    if (!orb.closed) return NotMarkovWithinBound{s, std::move(orb.points), orb.stop_reason};
    for (auto& p : orb.points) {
      if (seen.insert(p).second) all.push_back(std::move(p));
    }
  }
  sort_unique(all);
  return all;
}

}  // namespace

Orbit forward_orbit(const PwaMap& f, const Rational& x, const OrbitCaps& caps) {
  Orbit orb;
  std::unordered_set<Rational, RationalHash> seen;
  Rational cur = x;
  while (true) {
    if (!seen.insert(cur).second) {
      orb.closed = true;
      return orb;
    }
    orb.points.push_back(cur);
    if (orb.points.size() > caps.orbit_cap) {
      orb.stop_reason = "orbit cap " + std::to_string(caps.orbit_cap) + " reached";
      return orb;
    }
    if (cur.height_bits() > caps.bit_cap) {
      orb.stop_reason = "denominator growth beyond " + std::to_string(caps.bit_cap) + " bits";
      return orb;
    }
    cur = f.eval(cur);
  }
}

MarkovSystem::MarkovSystem(std::vector<Rational> points, std::vector<std::vector<std::uint8_t>> adjacency,
                           std::vector<std::vector<Rational>> stoch, std::vector<Rational> pvec, bool expanding)
    : points_(std::move(points)),
      adjacency_(std::move(adjacency)),
      stoch_(std::move(stoch)),
      pvec_(std::move(pvec)),
      expanding_(expanding) {}

std::vector<Interval> MarkovSystem::cells() const {
  std::vector<Interval> out;
  for (std::size_t i = 0; i < cell_count(); ++i) out.push_back(cell(i));
  return out;
}

std::optional<std::size_t> MarkovSystem::index_of(const Rational& x) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), x);
  if (it == points_.end() || *it != x) return std::nullopt;
  return static_cast<std::size_t>(it - points_.begin());
}

std::size_t MarkovSystem::cell_of(const Rational& x) const {
  if (x < Rational(0) || x > Rational(1)) throw DomainError("point outside [0,1]: " + x.str());
  auto it = std::lower_bound(points_.begin(), points_.end(), x);
  const auto k = static_cast<std::size_t>(it - points_.begin());
  if (k == 0) return 0;
  return k - 1;
}

MarkovSystem markov_system_from_points(const PwaMap& f, std::vector<Rational> points) {
  sort_unique(points);
  if (points.size() < 2 || points.front() != Rational(0) || points.back() != Rational(1)) {
    throw DomainError("partition must contain 0 and 1");
  }
  for (const auto& c : f.critical_points()) {
    if (!std::binary_search(points.begin(), points.end(), c)) {
      throw DomainError("partition misses critical point " + c.str());
    }
  }
  std::vector<std::size_t> image_index(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Rational y = f.eval(points[i]);
    auto it = std::lower_bound(points.begin(), points.end(), y);
    if (it == points.end() || *it != y) throw DomainError("partition not forward invariant at " + points[i].str());
    image_index[i] = static_cast<std::size_t>(it - points.begin());
  }
  const std::size_t n = points.size() - 1;
  std::vector<Rational> pvec(n);
  for (std::size_t i = 0; i < n; ++i) pvec[i] = points[i + 1] - points[i];
  std::vector<std::vector<std::uint8_t>> adj(n, std::vector<std::uint8_t>(n, 0));
  std::vector<std::vector<Rational>> stoch(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = std::min(image_index[i], image_index[i + 1]);
    const std::size_t b = std::max(image_index[i], image_index[i + 1]);
    if (a == b) throw DomainError("constant piece on cell " + Interval(points[i], points[i + 1]).str());
    const Rational img_len = points[b] - points[a];
    for (std::size_t j = a; j < b; ++j) {
      adj[i][j] = 1;
      stoch[i][j] = pvec[j] / img_len;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    Rational s(0);
    for (std::size_t i = 0; i < n; ++i) s += pvec[i] * stoch[i][j];
    if (s != pvec[j]) throw DomainError("pP != p: map is not Lebesgue preserving");
  }
  return MarkovSystem(std::move(points), std::move(adj), std::move(stoch), std::move(pvec), f.expanding());
}

MarkovResult markov_partition(const PwaMap& f, const OrbitCaps& caps) {
  auto closure = orbit_closure(f, f.critical_points(), caps);
  if (auto* fail = std::get_if<NotMarkovWithinBound>(&closure)) return std::move(*fail);
  return markov_system_from_points(f, std::move(std::get<std::vector<Rational>>(closure)));
}

std::vector<Rational> refine_points(const PwaMap& f, std::span<const Rational> points, int levels) {
  std::vector<Rational> cur(points.begin(), points.end());
  sort_unique(cur);
  for (int l = 0; l < levels; ++l) {
    std::vector<Interval> pts;
    for (const auto& p : cur) pts.push_back(Interval::point(p));
    const IntervalSet pre = preimage_set(f, IntervalSet(std::move(pts)));
    std::vector<Rational> next = cur;
    for (const auto& part : pre.parts()) {
      if (!part.degenerate()) throw DomainError("preimage of a point has positive length");
      next.push_back(part.lo());
    }
    sort_unique(next);
    cur = std::move(next);
  }
  return cur;
}

MixingFlags mixing_flags(const MarkovSystem& ms) {
  const auto& adj = ms.adjacency();
  const std::size_t n = adj.size();
  // Tarjan, recursive; partitions here are small.
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  int counter = 0, ncomp = 0;
  std::function<void(std::size_t)> strong = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w = 0; w < n; ++w) {
      if (!adj[v][w]) continue;
      if (index[w] < 0) {
        strong(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      while (true) {
        const std::size_t w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = ncomp;
        if (w == v) break;
      }
      ++ncomp;
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] < 0) strong(v);
  }

  MixingFlags flags;
  int period = 0;
  for (int c = 0; c < ncomp; ++c) {
    std::vector<long> level(n, -1);
    std::size_t root = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (comp[v] == c) {
        root = v;
        break;
      }
    }
    level[root] = 0;
    std::vector<std::size_t> queue{root};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const std::size_t v = queue[qi];
      for (std::size_t w = 0; w < n; ++w) {
        if (adj[v][w] && comp[w] == c && level[w] < 0) {
          level[w] = level[v] + 1;
          queue.push_back(w);
        }
      }
    }
    long g = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (comp[v] != c) continue;
      for (std::size_t w = 0; w < n; ++w) {
        if (adj[v][w] && comp[w] == c) g = std::gcd(g, std::labs(level[v] + 1 - level[w]));
      }
    }
    // g == 0 means no cycle through this class (a transient singleton).
    if (g > 0) period = std::gcd(period, static_cast<int>(g));
  }
  flags.period = period;
  flags.irreducible = ncomp == 1 && period > 0;
  flags.aperiodic = period == 1;
  flags.strongly_mixing = flags.irreducible && flags.aperiodic;
  flags.certified = ms.expanding();
  return flags;
}

ItinerarySeq itinerary(const PwaMap& f, const MarkovSystem& ms, const Rational& x, std::size_t n) {
  ItinerarySeq seq;
  Rational cur = x;
  const auto& pts = ms.points();
  for (std::size_t i = 0; i < n; ++i) {
    seq.symbols.push_back(ms.cell_of(cur));
    if (cur > pts.front() && cur < pts.back() && ms.index_of(cur)) seq.ambiguous = true;
    cur = f.eval(cur);
  }
  return seq;
}

double spectral_radius(const std::vector<std::vector<std::uint8_t>>& adjacency, const PowerIterationOptions& opt) {
  const std::size_t n = adjacency.size();
  if (n == 0) return 0.0;
  std::vector<double> x(n, 1.0 / static_cast<double>(n)), y(n);
  double mu = 0.0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = x[i];
      for (std::size_t j = 0; j < n; ++j) {
        if (adjacency[i][j]) s += x[j];
      }
      y[i] = s;
    }
    const double total = std::accumulate(y.begin(), y.end(), 0.0);
    const double next = total;  // sum(x) == 1
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / total;
    const bool done = it > 0 && std::abs(next - mu) <= opt.tolerance * next;
    mu = next;
    if (done) break;
  }
  return mu - 1.0;
}

double top_entropy(const MarkovSystem& ms, const PowerIterationOptions& opt) {
  const double rho = spectral_radius(ms.adjacency(), opt);
  return rho > 1.0 ? std::log(rho) : 0.0;
}

CombinatorialType combinatorial_type(const PwaMap& f, std::span<const Rational> points) {
  if (!f.expanding()) throw ExpandingRequired("combinatorial type needs every |slope| > 1");
  CombinatorialType t;
  for (const auto& x : points) {
    const Rational y = f.eval(x);
    auto it = std::lower_bound(points.begin(), points.end(), y);
    if (it == points.end() || *it != y) throw DomainError("f(" + x.str() + ") = " + y.str() + " is not a partition point");
    t.arrow.push_back(static_cast<std::size_t>(it - points.begin()));
  }
  return t;
}

CombinatorialType combinatorial_type(const PwaMap& f, const MarkovSystem& ms) {
  return combinatorial_type(f, std::span<const Rational>(ms.points()));
}

Rational cylinder_measure(const MarkovSystem& ms, std::span<const std::size_t> word) {
  if (word.empty()) return Rational(1);
  Rational mu = ms.pvec().at(word[0]);
  for (std::size_t j = 1; j < word.size(); ++j) mu *= ms.stoch().at(word[j - 1]).at(word[j]);
  return mu;
}

Rational cylinder_preimage_measure(const PwaMap& f, const MarkovSystem& ms, std::span<const std::size_t> word) {
  if (word.empty()) return Rational(1);
  IntervalSet s{ms.cell(word.back())};
  for (std::size_t j = word.size() - 1; j-- > 0;) {
    s = preimage_set(f, s).intersect(ms.cell(word[j]));
  }
  return s.measure();
}

std::string to_string(Conjugacy c) {
  switch (c) {
    case Conjugacy::conjugate: return "conjugate";
    case Conjugacy::not_conjugate: return "not-conjugate";
    case Conjugacy::undecided: return "undecided";
  }
  return "?";
}

ConjugacyResult conjugacy_check(const PwaMap& f, const PwaMap& g, int refine_levels, const OrbitCaps& caps) {
  if (!f.expanding() || !g.expanding()) throw ExpandingRequired("conjugacy check needs expanding maps");
  ConjugacyResult res;
  auto pf = orbit_closure(f, turning_points_and_ends(f), caps);
  auto pg = orbit_closure(g, turning_points_and_ends(g), caps);
  for (auto* side : {&pf, &pg}) {
    if (auto* fail = std::get_if<NotMarkovWithinBound>(side)) {
      res.verdict = Conjugacy::undecided;
      res.reason = "orbit of " + fail->point.str() + " does not close: " + fail->reason;
      return res;
    }
  }
  const auto& xf = std::get<std::vector<Rational>>(pf);
  const auto& xg = std::get<std::vector<Rational>>(pg);
  if (xf.size() != xg.size()) {
    res.verdict = Conjugacy::not_conjugate;
    res.reason = "turning-orbit sets differ in size (" + std::to_string(xf.size()) + " vs " +
                 std::to_string(xg.size()) + ")";
    return res;
  }
  if (combinatorial_type(f, xf) != combinatorial_type(g, xg)) {
    res.verdict = Conjugacy::not_conjugate;
    res.reason = "combinatorial types differ";
    return res;
  }
  const auto rf = refine_points(f, xf, refine_levels);
  const auto rg = refine_points(g, xg, refine_levels);
  if (rf.size() != rg.size()) {
    res.verdict = Conjugacy::undecided;
    res.reason = "refinements differ in size";
    return res;
  }
  res.verdict = Conjugacy::conjugate;
  for (std::size_t i = 0; i < rf.size(); ++i) res.node_map.emplace_back(rf[i], rg[i]);
  return res;
}

std::string format_matrices(const MarkovSystem& ms) {
  std::ostringstream os;
  const std::size_t n = ms.cell_count();
  os << n << '\n';
  for (const auto& row : ms.stoch()) {
    for (std::size_t j = 0; j < n; ++j) os << (j ? " " : "") << row[j];
    os << '\n';
  }
  for (std::size_t j = 0; j < n; ++j) os << (j ? " " : "") << ms.pvec()[j];
  os << '\n';
  for (const auto& row : ms.adjacency()) {
    for (std::size_t j = 0; j < n; ++j) os << (j ? " " : "") << static_cast<int>(row[j]);
    os << '\n';
  }
  return os.str();
}

}  // namespace ergomap
