#include "ergomap/structure.hpp"

#include <algorithm>
#include <sstream>

#include "ergomap/errors.hpp"

namespace ergomap {

namespace {

struct OpenPiece {
  Rational lo, hi;
};

// Components of (0,1) minus the fixed set.
std::vector<OpenPiece> complement_pieces(const IntervalSet& fixed) {
  std::vector<OpenPiece> out;
  Rational cursor(0);
  for (const auto& p : fixed.parts()) {
    if (p.lo() > cursor) out.push_back({cursor, p.lo()});
    cursor = max(cursor, p.hi());
  }
  if (cursor < Rational(1)) out.push_back({cursor, Rational(1)});
  return out;
}

}  // namespace

IntervalSet fixed_set(const PwaMap& f, int k, std::size_t node_cap) {
  const PwaMap g = iterate(f, k, node_cap);
  std::vector<Interval> parts;
  for (const auto& b : g.segments()) {
    if (b.slope == Rational(1)) {
      if (b.intercept.is_zero()) parts.push_back(b.domain);
      continue;
    }
    const Rational x = b.intercept / (Rational(1) - b.slope);
    if (b.domain.contains(x)) parts.push_back(Interval::point(x));
  }
  return IntervalSet(std::move(parts));
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::not_transitive: return "not-transitive";
    case Verdict::transitive_not_mixing: return "transitive-not-mixing";
    case Verdict::mixing_not_leo: return "mixing-not-leo";
    case Verdict::leo: return "leo";
  }
  return "?";
}

bool second_preimage_meets_interior(const PwaMap& f, const Rational& v) {
  const IntervalSet pre2 = preimage_set(f, preimage_set(f, IntervalSet{Interval::point(v)}));
  return pre2.meets_open(Rational(0), Rational(1));
}

StructureReport transitivity_components(const PwaMap& f) {
  if (const auto lr = verify_lebesgue(f); !lr.preserving) {
    throw StructureError("map is not Lebesgue preserving (witness " + lr.witness->slab.str() + ", sum " +
                         lr.witness->sum.str() + ")");
  }
  StructureReport rep;
  const PwaMap f2 = iterate(f, 2);
  rep.fixed_set = fixed_set(f, 2);

  // Group consecutive complement pieces, joined across isolated fixed
  // points, into minimal f^2-invariant intervals.
  const auto pieces = complement_pieces(rep.fixed_set);
  std::size_t i = 0;
  while (i < pieces.size()) {
    const Rational lo = pieces[i].lo;
    bool closed = false;
    for (std::size_t j = i; j < pieces.size(); ++j) {
      if (j > i && pieces[j].lo != pieces[j - 1].hi) break;
      const Interval k(lo, pieces[j].hi);
      if (image_interval(f2, k) == k) {
        rep.components.push_back(k);
        i = j + 1;
        closed = true;
        break;
      }
    }
    if (!closed) {
      throw StructureError("no f^2-invariant interval closes the chain starting at " + lo.str());
    }
  }

  std::vector<Interval> covered(rep.components.begin(), rep.components.end());
  const IntervalSet uncovered = IntervalSet(covered).complement();
  for (const auto& g : uncovered.parts()) {
    if (!g.degenerate()) rep.gaps.push_back(g);
  }
  // Points outside the components are fixed by f^2.
  for (const auto& g : rep.gaps) {
    if (rep.fixed_set.intersect(g) != IntervalSet{g}) {
      throw StructureError("gap " + g.str() + " is not pointwise fixed by f^2");
    }
  }

  const std::size_t n = rep.components.size();
  rep.permutation.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    const Interval img = image_interval(f, rep.components[a]);
    auto it = std::find(rep.components.begin(), rep.components.end(), img);
    if (it == rep.components.end()) {
      throw StructureError("f" + rep.components[a].str() + " = " + img.str() + " is not a component");
    }
    rep.permutation[a] = static_cast<std::size_t>(it - rep.components.begin());
    const IntervalSet back = preimage_set(f, IntervalSet{img}).without_points();
    if (back != IntervalSet{rep.components[a]}) {
      throw StructureError("f^-1(f(J)) != J for J = " + rep.components[a].str());
    }
  }

  if (n >= 2) {
    bool increasing = true, decreasing = true;
    for (std::size_t a = 0; a + 1 < n; ++a) {
      if (rep.permutation[a] > rep.permutation[a + 1]) increasing = false;
      if (rep.permutation[a] < rep.permutation[a + 1]) decreasing = false;
    }
    if (!increasing && !decreasing) throw StructureError("component permutation is neither monotone order");
    rep.order_reversing = decreasing;
    if (increasing) {
      for (std::size_t a = 0; a < n; ++a) {
        if (rep.permutation[a] != a) throw StructureError("order-preserving permutation is not the identity");
      }
    } else {
      const IntervalSet fix1 = fixed_set(f, 1);
      std::size_t self_mapped = 0;
      for (std::size_t a = 0; a < n; ++a) {
        const auto& c = rep.components[a];
        const bool meets = fix1.meets_open(c.lo(), c.hi());
        if ((rep.permutation[a] == a) != meets) {
          throw StructureError("invariant component does not match interior fixed points at " + c.str());
        }
        self_mapped += rep.permutation[a] == a ? 1 : 0;
      }
      if (self_mapped > 1) throw StructureError("more than one self-mapped component under order reversal");
    }
  }

  if (n == 1 && rep.components[0] == Interval::unit()) {
    const bool leo = second_preimage_meets_interior(f, Rational(0)) &&
                     second_preimage_meets_interior(f, Rational(1));
    rep.verdict = leo ? Verdict::leo : Verdict::mixing_not_leo;
  } else if (n == 2 && rep.gaps.empty() && rep.permutation[0] == 1) {
    rep.verdict = Verdict::transitive_not_mixing;
  } else {
    rep.verdict = Verdict::not_transitive;
  }
  return rep;
}

Verdict classify(const PwaMap& f) { return transitivity_components(f).verdict; }

std::vector<PeriodicPoint> periodic_points(const PwaMap& f, int k, int period_cap, std::size_t node_cap) {
  if (k < 1) throw DomainError("period must be positive");
  if (k > period_cap) {
    throw SizeError("period " + std::to_string(k) + " exceeds cap " + std::to_string(period_cap));
  }
  std::vector<PeriodicPoint> out;
  const IntervalSet fix = fixed_set(f, k, node_cap);
  for (const auto& part : fix.parts()) {
    if (part.degenerate()) {
      Rational x = f.eval(part.lo());
      int period = 1;
      while (x != part.lo()) {
        x = f.eval(x);
        ++period;
      }
      out.push_back({part, period});
      continue;
    }
    int period = k;
    for (int d = 1; d < k; ++d) {
      if (k % d != 0) continue;
      if (fixed_set(f, d, node_cap).intersect(part) == IntervalSet{part}) {
        period = d;
        break;
      }
    }
    out.push_back({part, period});
  }
  return out;
}

std::string format_report(const StructureReport& r) {
  std::ostringstream os;
  os << "verdict " << to_string(r.verdict) << '\n';
  os << "components " << r.components.size() << '\n';
  for (std::size_t i = 0; i < r.components.size(); ++i) {
    os << "J" << i << ' ' << r.components[i].lo() << ' ' << r.components[i].hi() << " -> J"
       << r.permutation[i] << '\n';
  }
  os << "order " << (r.components.size() < 2 ? "single" : (r.order_reversing ? "reversing" : "preserving"))
     << '\n';
  os << "gaps " << r.gaps.size() << '\n';
  for (const auto& g : r.gaps) os << "gap " << g.lo() << ' ' << g.hi() << '\n';
  os << "fix2 " << r.fixed_set.size() << '\n';
  for (const auto& p : r.fixed_set.parts()) os << "fix " << p.lo() << ' ' << p.hi() << '\n';
  return os.str();
}

}  // namespace ergomap
