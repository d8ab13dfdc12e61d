#include "ergomap/interval.hpp"

#include <algorithm>

#include "ergomap/errors.hpp"

namespace ergomap {

Interval::Interval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_ > hi_) throw DomainError("interval with lo > hi: [" + lo_.str() + ", " + hi_.str() + "]");
  if (lo_ < Rational(0) || hi_ > Rational(1)) throw DomainError("interval outside [0,1]: " + str());
}

std::optional<Interval> Interval::intersect(const Interval& o) const {
  Rational lo = max(lo_, o.lo_);
  Rational hi = min(hi_, o.hi_);
  if (lo > hi) return std::nullopt;
  return Interval(std::move(lo), std::move(hi));
}

IntervalSet::IntervalSet(std::vector<Interval> parts) {
  std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) {
    return a.lo() < b.lo() || (a.lo() == b.lo() && a.hi() < b.hi());
  });
  for (auto& p : parts) {
    if (!parts_.empty() && p.lo() <= parts_.back().hi()) {
      if (p.hi() > parts_.back().hi()) parts_.back() = Interval(parts_.back().lo(), p.hi());
    } else {
      parts_.push_back(std::move(p));
    }
  }
}

Rational IntervalSet::measure() const {
  Rational m(0);
  for (const auto& p : parts_) m += p.length();
  return m;
}

bool IntervalSet::contains(const Rational& x) const {
  auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                             [](const Rational& v, const Interval& p) { return v < p.lo(); });
  if (it == parts_.begin()) return false;
  return std::prev(it)->contains(x);
}

bool IntervalSet::meets_open(const Rational& lo, const Rational& hi) const {
  for (const auto& p : parts_) {
    if (p.lo() >= hi) break;
    if (p.hi() > lo) return true;
  }
  return false;
}

IntervalSet IntervalSet::unite(const IntervalSet& o) const {
  std::vector<Interval> all = parts_;
  all.insert(all.end(), o.parts_.begin(), o.parts_.end());
  return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::intersect(const IntervalSet& o) const {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < parts_.size() && j < o.parts_.size()) {
    if (auto x = parts_[i].intersect(o.parts_[j])) out.push_back(*x);
    if (parts_[i].hi() < o.parts_[j].hi()) {
      ++i;
    } else {
      ++j;
    }
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::intersect(const Interval& iv) const { return intersect(IntervalSet{iv}); }

IntervalSet IntervalSet::complement() const {
  std::vector<Interval> out;
  Rational cursor(0);
  for (const auto& p : parts_) {
    if (p.lo() > cursor) out.emplace_back(cursor, p.lo());
    cursor = max(cursor, p.hi());
  }
  if (cursor < Rational(1)) out.emplace_back(cursor, Rational(1));
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::without_points() const {
  std::vector<Interval> out;
  for (const auto& p : parts_) {
    if (!p.degenerate()) out.push_back(p);
  }
  return IntervalSet(std::move(out));
}

std::string IntervalSet::str() const {
  std::string s = "{";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) s += ", ";
    s += parts_[i].str();
  }
  return s + "}";
}

}  // namespace ergomap
