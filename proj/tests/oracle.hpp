#pragma once

// Brute-force reference implementations and hand-rolled generators for the
// property tests. Nothing here shares code paths with the library beyond the
// number types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "sumprod/geometry.hpp"
#include "sumprod/incidence.hpp"
#include "sumprod/set_core.hpp"

namespace oracle {

using sumprod::Count;
using sumprod::FiniteComplexSet;
using sumprod::GaussianRational;
using sumprod::Rational;
using Z = GaussianRational;

inline std::vector<Z> elems(const FiniteComplexSet& a) { return a.elements(); }

inline bool has(const std::vector<Z>& v, const Z& z) {
  for (const auto& x : v) {
    if (x == z) return true;
  }
  return false;
}

/// Linear-scan dedup, no sorting or hashing.
inline std::vector<Z> distinct(const std::vector<Z>& v) {
  std::vector<Z> out;
  for (const auto& x : v) {
    if (!has(out, x)) out.push_back(x);
  }
  return out;
}

enum class Op { Sum, Diff, Prod, Ratio };

inline Z apply(Op op, const Z& a, const Z& b) {
  switch (op) {
    case Op::Sum: return a + b;
    case Op::Diff: return a - b;
    case Op::Prod: return a * b;
    case Op::Ratio: return a / b;
  }
  return a;
}

inline std::vector<Z> image(const FiniteComplexSet& a, const FiniteComplexSet& b, Op op) {
  std::vector<Z> out;
  for (const auto& x : a) {
    for (const auto& y : b) out.push_back(apply(op, x, y));
  }
  return distinct(out);
}

inline Count count_of(const FiniteComplexSet& a, const FiniteComplexSet& b, Op op, const Z& v) {
  Count n = 0;
  for (const auto& x : a) {
    for (const auto& y : b) n += apply(op, x, y) == v ? 1 : 0;
  }
  return n;
}

/// Quadruples a1 - b1 = a2 - b2.
inline std::uint64_t additive_energy(const FiniteComplexSet& a, const FiniteComplexSet& b) {
  std::uint64_t e = 0;
  for (const auto& a1 : a)
    for (const auto& b1 : b)
      for (const auto& a2 : a)
        for (const auto& b2 : b) e += (a1 - b1 == a2 - b2) ? 1 : 0;
  return e;
}

/// Quadruples a1 a4 = a2 a3.
inline std::uint64_t multiplicative_energy(const FiniteComplexSet& a) {
  std::uint64_t e = 0;
  for (const auto& a1 : a)
    for (const auto& a2 : a)
      for (const auto& a3 : a)
        for (const auto& a4 : a) e += (a1 * a4 == a2 * a3) ? 1 : 0;
  return e;
}

/// Sextuples a1 - a2 = a3 - a4 = a5 - a6.
inline std::uint64_t cubic_energy(const FiniteComplexSet& a) {
  std::uint64_t e = 0;
  for (const auto& a1 : a)
    for (const auto& a2 : a) {
      const Z d = a1 - a2;
      std::uint64_t k = 0;
      for (const auto& a3 : a)
        for (const auto& a4 : a) k += (a3 - a4 == d) ? 1 : 0;
      e += k * k;
    }
  return e;
}

inline std::vector<Z> slice(const FiniteComplexSet& a, const Z& d) {
  std::vector<Z> out;
  for (const auto& x : a) {
    for (const auto& y : a) {
      if (x + d == y) out.push_back(x);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generators

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::int64_t between(std::int64_t lo, std::int64_t hi) { return rng_.between(lo, hi); }
  std::uint64_t below(std::uint64_t n) { return rng_.below(n); }

  Rational rational(std::int64_t range, std::int64_t max_den) {
    const auto p = between(-range, range);
    const auto q = between(1, max_den);
    return Rational(p, q);
  }

  Z gaussian(std::int64_t range, std::int64_t max_den) {
    Rational re = rational(range, max_den);
    Rational im = rational(range, max_den);
    return {re, im};
  }

  /// n distinct nonzero Gaussian rationals (fewer if the range is exhausted).
  FiniteComplexSet set(std::size_t n, std::int64_t range = 6, std::int64_t max_den = 2) {
    std::vector<Z> v;
    for (int tries = 0; v.size() < n && tries < 1000; ++tries) {
      Z z = gaussian(range, max_den);
      if (!z.is_zero() && !has(v, z)) v.push_back(std::move(z));
    }
    return FiniteComplexSet(std::move(v));
  }

  /// Small integers only, so coincidences (and large energies) are common.
  FiniteComplexSet dense_set(std::size_t n) {
    std::vector<Z> v;
    for (int tries = 0; v.size() < n && tries < 1000; ++tries) {
      const auto re = between(1, 6);
      const auto im = between(0, 2);
      Z z{Rational(re), Rational(im)};
      if (!has(v, z)) v.push_back(std::move(z));
    }
    return FiniteComplexSet(std::move(v));
  }

 private:
  sumprod::Rng rng_;
};

// ---------------------------------------------------------------------------
// Geometry

using sumprod::geom::PlanarPoint;

inline Rational cross3(const PlanarPoint& a, const PlanarPoint& b, const PlanarPoint& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

/// Clips a convex polygon to the closed left side of the directed line a->b.
inline std::vector<PlanarPoint> clip(const std::vector<PlanarPoint>& poly, const PlanarPoint& a, const PlanarPoint& b) {
  std::vector<PlanarPoint> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const PlanarPoint& p = poly[i];
    const PlanarPoint& q = poly[(i + 1) % poly.size()];
    const Rational sp = cross3(a, b, p);
    const Rational sq = cross3(a, b, q);
    if (sp.sign() >= 0) out.push_back(p);
    if ((sp.sign() > 0 && sq.sign() < 0) || (sp.sign() < 0 && sq.sign() > 0)) {
      const Rational t = sp / (sp - sq);
      out.push_back({p.x + (q.x - p.x) * t, p.y + (q.y - p.y) * t});
    }
  }
  return out;
}

inline Rational twice_area(const std::vector<PlanarPoint>& poly) {
  Rational s(0);
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const PlanarPoint& p = poly[i];
    const PlanarPoint& q = poly[(i + 1) % poly.size()];
    s += p.x * q.y - q.x * p.y;
  }
  return s;
}

/// Interiors of two counter-clockwise convex polygons meet iff their
/// intersection has positive area.
inline bool open_polygons_meet(const std::vector<PlanarPoint>& a, const std::vector<PlanarPoint>& b) {
  std::vector<PlanarPoint> poly = a;
  for (std::size_t i = 0; i < b.size() && !poly.empty(); ++i) poly = clip(poly, b[i], b[(i + 1) % b.size()]);
  return poly.size() >= 3 && twice_area(poly).sign() > 0;
}

/// Lens membership via the inverse map w -> w/(1-w) back into the wedge.
inline bool lens_contains(const Z& l1, const Z& l2, const Rational& eps, const Z& z) {
  const Z w = (z - l1) / (l2 - l1);
  if (w == Z(1)) return false;
  const Z u = w / (Z(1) - w);
  return u.re().sign() > 0 && sumprod::abs(u.im()) < eps * u.re();
}

/// Cycle property: every non-tree pair is at least as long as the longest
/// tree edge on the path between its endpoints.
inline bool is_minimum_spanning_tree(const sumprod::geom::SpanningTree& t) {
  const std::size_t n = t.vertices.size();
  if (t.edges.size() + 1 != n) return false;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);
  for (std::size_t e = 0; e < t.edges.size(); ++e) {
    adj[t.edges[e].first].push_back({t.edges[e].second, e});
    adj[t.edges[e].second].push_back({t.edges[e].first, e});
  }
  auto d2 = [&](std::size_t i, std::size_t j) { return sumprod::geom::dist_sq(t.vertices[i], t.vertices[j]); };
  for (std::size_t s = 0; s < n; ++s) {
    // Longest edge on the tree path from s to every vertex.
    std::vector<std::optional<Rational>> longest(n);
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    longest[s] = Rational(0);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (auto [w, e] : adj[v]) {
        if (seen[w]) continue;
        seen[w] = true;
        longest[w] = std::max(*longest[v], d2(v, w));
        stack.push_back(w);
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (!seen[v]) return false;
      if (v != s && d2(s, v) < *longest[v]) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Incidences

using sumprod::incidence::LineC;
using sumprod::incidence::Point2;

inline bool on_line(const Point2& p, const LineC& l) {
  if (l.is_vertical()) return p.x == l.intercept();
  return p.y - l.intercept() == l.slope() * p.x;
}

inline Count incidences(const std::vector<Point2>& pts, const std::vector<LineC>& lines) {
  Count n = 0;
  for (const auto& p : pts)
    for (const auto& l : lines) n += on_line(p, l) ? 1 : 0;
  return n;
}

inline double to_double(const Rational& r) { return r.get().get_d(); }

}  // namespace oracle
