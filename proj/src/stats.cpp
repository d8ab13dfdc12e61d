#include "ergomap/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ergomap/errors.hpp"

namespace ergomap {

PwaFunction::PwaFunction(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw DomainError("observable needs at least two nodes");
  if (nodes_.front().x != Rational(0) || nodes_.back().x != Rational(1)) {
    throw DomainError("observable nodes must span [0,1]");
  }
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    if (!(nodes_[i].x < nodes_[i + 1].x)) throw DomainError("observable x values must increase");
  }
}

PwaFunction PwaFunction::identity() { return PwaFunction({{Rational(0), Rational(0)}, {Rational(1), Rational(1)}}); }

PwaFunction PwaFunction::constant(const Rational& c) { return PwaFunction({{Rational(0), c}, {Rational(1), c}}); }

PwaFunction PwaFunction::hat(const Rational& c, const Rational& w) {
  if (w.sign() <= 0) throw DomainError("hat half-width must be positive");
  std::vector<Node> n;
  const Rational zero(0), one(1);
  auto value = [&](const Rational& x) {
    const Rational d = (x - c).abs();
    return d >= w ? zero : one - d / w;
  };
  std::vector<Rational> xs{zero, one, c};
  if (c - w > zero) xs.push_back(c - w);
  if (c + w < one) xs.push_back(c + w);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  for (const auto& x : xs) {
    if (x >= zero && x <= one) n.push_back({x, value(x)});
  }
  return PwaFunction(std::move(n));
}

Rational PwaFunction::eval(const Rational& x) const {
  if (x < Rational(0) || x > Rational(1)) throw DomainError("observable argument outside [0,1]");
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x, [](const Node& n, const Rational& v) { return n.x < v; });
  if (it->x == x) return it->y;
  const Node& b = *it;
  const Node& a = *std::prev(it);
  return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
}

Rational PwaFunction::integral() const {
  Rational s(0);
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    s += (nodes_[i + 1].x - nodes_[i].x) * (nodes_[i].y + nodes_[i + 1].y) / Rational(2);
  }
  return s;
}

std::vector<PwaFunction> dyadic_hats(int depth) {
  std::vector<PwaFunction> out;
  for (int d = 1; d <= depth; ++d) {
    const long den = 1L << d;
    for (long k = 1; k < den; k += 2) out.push_back(PwaFunction::hat(Rational(k, den), Rational(1, den)));
  }
  return out;
}

namespace {

// Points carry no measure and their preimages stay null, so they are dropped.
IntervalSet step_back(const PwaMap& f, const IntervalSet& s) { return preimage_set(f, s).without_points(); }

void check_cap(const IntervalSet& s, std::size_t cap, int j) {
  if (s.size() > cap) {
    throw SizeError("preimage at step " + std::to_string(j) + " has " + std::to_string(s.size()) +
                    " parts (cap " + std::to_string(cap) + "); use a smaller n");
  }
}

}  // namespace

Rational correlation(const PwaMap& f, const IntervalSet& A, const IntervalSet& B, int n, std::size_t parts_cap) {
  if (n < 0) throw DomainError("n must be nonnegative");
  IntervalSet s = A.without_points();
  for (int j = 1; j <= n; ++j) {
    s = step_back(f, s);
    check_cap(s, parts_cap, j);
  }
  return s.intersect(B).measure() - A.measure() * B.measure();
}

std::vector<Rational> correlations(const PwaMap& f, const IntervalSet& A, const IntervalSet& B, int N,
                                   std::size_t parts_cap) {
  if (N < 0) throw DomainError("N must be nonnegative");
  std::vector<Rational> out;
  const Rational base = A.measure() * B.measure();
  IntervalSet s = A.without_points();
  for (int j = 0; j < N; ++j) {
    if (j > 0) {
      s = step_back(f, s);
      check_cap(s, parts_cap, j);
    }
    out.push_back(s.intersect(B).measure() - base);
  }
  return out;
}

MixingScore mixing_scores(const PwaMap& f, const IntervalSet& A, const IntervalSet& B, int N, std::size_t parts_cap) {
  if (N < 1) throw DomainError("horizon must be positive");
  const auto corr = correlations(f, A, B, N, parts_cap);
  Rational sum(0), abs_sum(0);
  MixingScore sc;
  sc.horizon = N;
  for (const auto& c : corr) {
    sum += c;
    abs_sum += c.abs();
    sc.strong_tail.push_back(c.abs().to_double());
  }
  sc.ergodic_score = (sum / Rational(N)).abs().to_double();
  sc.weak_score = (abs_sum / Rational(N)).to_double();
  return sc;
}

Rational birkhoff(const PwaMap& f, const PwaFunction& obs, const Rational& x, long N) {
  if (N < 1) throw DomainError("N must be positive");
  Rational s(0), cur = x;
  for (long k = 0; k < N; ++k) {
    s += obs(cur);
    cur = f(cur);
  }
  return s / Rational(N);
}

Rational ProductObservable::eval(const Rational& x, const Rational& y) const {
  Rational s(0);
  for (const auto& [u, v] : terms) s += u(x) * v(y);
  return s;
}

Rational ProductObservable::baseline() const {
  Rational s(0);
  for (const auto& [u, v] : terms) s += u.integral() * v.integral();
  return s;
}

PairAverage birkhoff_pair(const PwaMap& f, const ProductObservable& obs, const Rational& x, const Rational& y,
                          long N) {
  if (N < 1) throw DomainError("N must be positive");
  Rational s(0), a = x, b = y;
  for (long k = 0; k < N; ++k) {
    s += obs.eval(a, b);
    a = f(a);
    b = f(b);
  }
  return {s / Rational(N), obs.baseline()};
}

LeoTime leo_time(const PwaMap& f, const Interval& J, int cap) {
  if (J.degenerate()) throw DomainError("leo_time needs a nondegenerate interval");
  Interval cur = J;
  for (int n = 0; n <= cap; ++n) {
    if (cur == Interval::unit()) return n;
    cur = image_interval(f, cur);
  }
  return NotWithinCap{cap};
}

std::string correlation_csv_header() { return "map-id,setA,setB,j,corr,|corr|\n"; }

std::string correlation_csv_rows(const std::string& map_id, const IntervalSet& A, const IntervalSet& B,
                                 const std::vector<Rational>& corr) {
  std::ostringstream os;
  os.precision(12);
  for (std::size_t j = 0; j < corr.size(); ++j) {
    os << map_id << ",\"" << A.str() << "\",\"" << B.str() << "\"," << j << ',' << corr[j] << ','
       << corr[j].abs().to_double() << '\n';
  }
  return os.str();
}

}  // namespace ergomap
