#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ergomap/rational.hpp"

namespace ergomap {

/// Closed interval [lo, hi] inside [0, 1]. Degenerate intervals (points)
/// are allowed.
class Interval {
 public:
  Interval(Rational lo, Rational hi);
  static Interval unit() { return Interval(Rational(0), Rational(1)); }
  static Interval point(const Rational& x) { return Interval(x, x); }

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  Rational length() const { return hi_ - lo_; }
  Rational midpoint() const { return (lo_ + hi_) / Rational(2); }
  bool degenerate() const { return lo_ == hi_; }

  bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
  bool contains_interior(const Rational& x) const { return lo_ < x && x < hi_; }
  bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
  std::optional<Interval> intersect(const Interval& o) const;

  std::string str() const { return "[" + lo_.str() + ", " + hi_.str() + "]"; }

  friend bool operator==(const Interval&, const Interval&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Interval& i) { return os << i.str(); }

 private:
  Rational lo_, hi_;
};

/// Finite union of closed intervals in [0, 1], stored sorted with
/// overlapping or touching parts merged. Points are kept as degenerate
/// parts so preimages of single values stay representable.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<Interval> parts);
  IntervalSet(std::initializer_list<Interval> parts) : IntervalSet(std::vector<Interval>(parts)) {}

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  std::size_t size() const { return parts_.size(); }

  /// Exact Lebesgue measure.
  Rational measure() const;
  bool contains(const Rational& x) const;
  /// Whether some point of the set lies in the open interval (lo, hi).
  bool meets_open(const Rational& lo, const Rational& hi) const;

  IntervalSet unite(const IntervalSet& o) const;
  IntervalSet intersect(const IntervalSet& o) const;
  IntervalSet intersect(const Interval& i) const;
  /// Closure of [0,1] minus the set, restricted to positive-length parts.
  IntervalSet complement() const;
  /// Drops degenerate parts.
  IntervalSet without_points() const;

  std::string str() const;
  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;
  friend std::ostream& operator<<(std::ostream& os, const IntervalSet& s) { return os << s.str(); }

 private:
  std::vector<Interval> parts_;
};

}  // namespace ergomap
