#include "ergomap/pwa_map.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "ergomap/errors.hpp"

namespace ergomap {

namespace {

const Rational kZero(0);
const Rational kOne(1);

bool collinear(const Node& a, const Node& b, const Node& c) {
  return (b.y - a.y) * (c.x - b.x) == (c.y - b.y) * (b.x - a.x);
}

Rational slope_of(const Node& a, const Node& b) { return (b.y - a.y) / (b.x - a.x); }

Branch branch_between(const Node& a, const Node& b) {
  Rational s = slope_of(a, b);
  Rational c = a.y - s * a.x;
  return Branch{Interval(a.x, b.x), std::move(s), std::move(c)};
}

// Interpolated value on the segment a-b at x.
Rational lerp(const Node& a, const Node& b, const Rational& x) {
  return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
}

}  // namespace

std::size_t default_node_cap() {
  if (const char* env = std::getenv("ERGOMAP_NODE_CAP")) {
    try {
      const long long v = std::stoll(env);
      if (v > 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return 1'000'000;
}

PwaMap::PwaMap(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw DomainError("a map needs at least two nodes");
  if (nodes_.front().x != kZero || nodes_.back().x != kOne) {
    throw DomainError("first node must have x = 0/1 and last x = 1/1");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (i > 0 && !(nodes_[i - 1].x < nodes_[i].x)) {
      throw DomainError("node x values must be strictly increasing (at " + nodes_[i].x.str() + ")");
    }
    if (nodes_[i].y < kZero || nodes_[i].y > kOne) {
      throw DomainError("node value outside [0,1]: " + nodes_[i].y.str());
    }
  }
}

PwaMap PwaMap::identity() { return PwaMap({{kZero, kZero}, {kOne, kOne}}); }
PwaMap PwaMap::flip() { return PwaMap({{kZero, kOne}, {kOne, kZero}}); }
PwaMap PwaMap::tent() { return PwaMap({{kZero, kZero}, {Rational(1, 2), kOne}, {kOne, kZero}}); }

std::size_t PwaMap::segment_index(const Rational& x) const {
  if (x < kZero || x > kOne) throw DomainError("point outside [0,1]: " + x.str());
  auto it = std::lower_bound(nodes_.begin() + 1, nodes_.end(), x,
                             [](const Node& n, const Rational& v) { return n.x < v; });
  if (it == nodes_.end()) --it;
  return static_cast<std::size_t>(it - nodes_.begin()) - 1;
}

Rational PwaMap::eval(const Rational& x) const {
  const std::size_t i = segment_index(x);
  const Node& a = nodes_[i];
  const Node& b = nodes_[i + 1];
  if (x == a.x) return a.y;
  if (x == b.x) return b.y;
  return lerp(a, b, x);
}

std::vector<Branch> PwaMap::segments() const {
  std::vector<Branch> out;
  out.reserve(nodes_.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) out.push_back(branch_between(nodes_[i], nodes_[i + 1]));
  return out;
}

std::vector<Branch> PwaMap::branches() const { return normalized().segments(); }

std::vector<Interval> PwaMap::laps() const {
  std::vector<Interval> out;
  Rational start = kZero;
  int dir = 0;
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    const int d = (nodes_[i + 1].y - nodes_[i].y).sign();
    if (d == 0) continue;
    if (dir != 0 && d != dir) {
      out.emplace_back(start, nodes_[i].x);
      start = nodes_[i].x;
    }
    dir = d;
  }
  out.emplace_back(start, kOne);
  return out;
}

PwaMap PwaMap::normalized() const {
  std::vector<Node> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) {
    while (out.size() >= 2 && collinear(out[out.size() - 2], out.back(), n)) out.pop_back();
    out.push_back(n);
  }
  return PwaMap(std::move(out));
}

std::vector<Rational> PwaMap::critical_points() const {
  std::vector<Rational> out;
  const PwaMap g = normalized();
  for (const auto& n : g.nodes()) out.push_back(n.x);
  return out;
}

bool PwaMap::has_constant_piece() const {
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    if (nodes_[i].y == nodes_[i + 1].y) return true;
  }
  return false;
}

Rational PwaMap::max_abs_slope() const {
  Rational m(0);
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) m = max(m, slope_of(nodes_[i], nodes_[i + 1]).abs());
  return m;
}

Rational PwaMap::min_abs_slope() const {
  Rational m = slope_of(nodes_[0], nodes_[1]).abs();
  for (std::size_t i = 1; i + 1 < nodes_.size(); ++i) m = min(m, slope_of(nodes_[i], nodes_[i + 1]).abs());
  return m;
}

bool PwaMap::expanding() const { return min_abs_slope() > kOne; }

bool same_function(const PwaMap& f, const PwaMap& g) { return f.normalized() == g.normalized(); }

PwaMap compose(const PwaMap& f, const PwaMap& g, std::size_t node_cap) {
  const auto& fn = f.nodes();
  const auto& gn = g.nodes();
  std::vector<Rational> xs;
  xs.reserve(gn.size());
  auto push = [&](Rational x) {
    xs.push_back(std::move(x));
    if (xs.size() > node_cap) {
      throw SizeError("composition exceeds node cap " + std::to_string(node_cap));
    }
  };
  push(gn.front().x);
  for (std::size_t i = 0; i + 1 < gn.size(); ++i) {
    const Node& a = gn[i];
    const Node& b = gn[i + 1];
    if (a.y != b.y) {
      const Rational& lo = min(a.y, b.y);
      const Rational& hi = max(a.y, b.y);
      auto first = std::upper_bound(fn.begin(), fn.end(), lo,
                                    [](const Rational& v, const Node& n) { return v < n.x; });
      auto last = std::lower_bound(fn.begin(), fn.end(), hi,
                                   [](const Node& n, const Rational& v) { return n.x < v; });
      const Rational dx = b.x - a.x;
      const Rational dy = b.y - a.y;
      if (a.y < b.y) {
        for (auto it = first; it < last; ++it) push(a.x + (it->x - a.y) * dx / dy);
      } else {
        for (auto it = last; it > first;) {
          --it;
          push(a.x + (it->x - a.y) * dx / dy);
        }
      }
    }
    push(b.x);
  }
  std::vector<Node> out;
  out.reserve(xs.size());
  for (auto& x : xs) {
    Rational y = f.eval(g.eval(x));
    if (out.size() >= 2 && collinear(out[out.size() - 2], out.back(), Node{x, y})) out.pop_back();
    out.push_back(Node{std::move(x), std::move(y)});
  }
  return PwaMap(std::move(out));
}

PwaMap iterate(const PwaMap& f, int n, std::size_t node_cap) {
  if (n < 1) throw DomainError("iterate needs n >= 1");
  PwaMap acc = f.normalized();
  for (int k = 1; k < n; ++k) acc = compose(f, acc, node_cap);
  return acc;
}

Interval image_interval(const PwaMap& f, const Interval& j) {
  Rational lo = f.eval(j.lo());
  Rational hi = lo;
  auto widen = [&](const Rational& v) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  };
  widen(f.eval(j.hi()));
  for (const auto& n : f.nodes()) {
    if (j.contains_interior(n.x)) widen(n.y);
  }
  return Interval(lo, hi);
}

IntervalSet preimage_set(const PwaMap& f, const IntervalSet& s) {
  std::vector<Interval> out;
  const auto& parts = s.parts();
  const auto& nodes = f.nodes();
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const Node& a = nodes[i];
    const Node& b = nodes[i + 1];
    const Rational lo = min(a.y, b.y);
    const Rational hi = max(a.y, b.y);
    auto it = std::lower_bound(parts.begin(), parts.end(), lo,
                               [](const Interval& p, const Rational& v) { return p.hi() < v; });
    for (; it != parts.end() && it->lo() <= hi; ++it) {
      if (a.y == b.y) {
        out.emplace_back(a.x, b.x);
        break;
      }
      const Rational c = max(it->lo(), lo);
      const Rational d = min(it->hi(), hi);
      // solve a.y + t (b.y - a.y) = v for t in [0,1]
      const Rational dx = b.x - a.x;
      const Rational dy = b.y - a.y;
      Rational xc = a.x + (c - a.y) * dx / dy;
      Rational xd = a.x + (d - a.y) * dx / dy;
      if (xc > xd) std::swap(xc, xd);
      out.emplace_back(std::move(xc), std::move(xd));
    }
  }
  return IntervalSet(std::move(out));
}

std::vector<SlabSum> slab_sums(std::span<const Node> nodes, std::span<const Rational> cuts) {
  std::vector<SlabSum> out;
  if (cuts.size() < 2) return out;
  std::vector<Rational> diff(cuts.size(), Rational(0));
  auto index_of = [&](const Rational& v) {
    auto it = std::lower_bound(cuts.begin(), cuts.end(), v);
    if (it == cuts.end() || *it != v) throw DomainError("slab cut set misses node value " + v.str());
    return static_cast<std::size_t>(it - cuts.begin());
  };
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const Node& a = nodes[i];
    const Node& b = nodes[i + 1];
    if (a.y == b.y) continue;
    const Rational recip = ((b.x - a.x) / (b.y - a.y)).abs();
    const std::size_t lo = index_of(min(a.y, b.y));
    const std::size_t hi = index_of(max(a.y, b.y));
    diff[lo] += recip;
    diff[hi] -= recip;
  }
  Rational running(0);
  out.reserve(cuts.size() - 1);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    running += diff[k];
    out.push_back(SlabSum{Interval(cuts[k], cuts[k + 1]), running});
  }
  return out;
}

LebesgueReport verify_lebesgue(const PwaMap& f) {
  LebesgueReport report;
  const auto& nodes = f.nodes();
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (nodes[i].y == nodes[i + 1].y) {
      report.failure = LebesgueReport::Failure::constant_piece;
      report.witness = SlabSum{Interval(nodes[i].x, nodes[i + 1].x), Rational(0)};
      return report;
    }
  }
  std::vector<Rational> cuts{kZero, kOne};
  for (const auto& n : nodes) cuts.push_back(n.y);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (auto& slab : slab_sums(nodes, cuts)) {
    if (slab.sum != kOne) {
      report.failure = LebesgueReport::Failure::slab_sum;
      report.witness = std::move(slab);
      return report;
    }
  }
  report.preserving = true;
  return report;
}

Rational uniform_distance(const PwaMap& f, const PwaMap& g) {
  const auto& fn = f.nodes();
  const auto& gn = g.nodes();
  Rational best(0);
  std::size_t i = 0, j = 0;
  while (i < fn.size() || j < gn.size()) {
    Rational x;
    if (j == gn.size() || (i < fn.size() && fn[i].x <= gn[j].x)) {
      x = fn[i].x;
    } else {
      x = gn[j].x;
    }
    best = max(best, (f.eval(x) - g.eval(x)).abs());
    if (i < fn.size() && fn[i].x == x) ++i;
    if (j < gn.size() && gn[j].x == x) ++j;
  }
  return best;
}

PwaMap from_full_laps(LapSign sign, std::span<const Rational> alphas) {
  if (alphas.empty()) throw InvalidTuple("full-lap tuple needs at least one alpha");
  Rational total(0);
  for (const auto& a : alphas) {
    if (a.sign() <= 0) throw InvalidTuple("full-lap tuple entry not positive: " + a.str());
    total += a;
  }
  if (total != kOne) throw InvalidTuple("full-lap tuple sums to " + total.str() + ", not 1");
  std::vector<Node> nodes;
  Rational x(0);
  bool up = sign == LapSign::increasing;
  nodes.push_back({x, up ? kZero : kOne});
  for (const auto& a : alphas) {
    x += a;
    nodes.push_back({x, up ? kOne : kZero});
    up = !up;
  }
  nodes.back().x = kOne;
  return PwaMap(std::move(nodes));
}

std::vector<Node> restrict_nodes(const PwaMap& f, const Interval& window) {
  std::vector<Node> out;
  out.push_back({window.lo(), f.eval(window.lo())});
  for (const auto& n : f.nodes()) {
    if (window.contains_interior(n.x)) out.push_back(n);
  }
  if (!window.degenerate()) out.push_back({window.hi(), f.eval(window.hi())});
  return out;
}

}  // namespace ergomap
