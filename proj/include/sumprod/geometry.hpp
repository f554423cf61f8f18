#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sumprod/set_core.hpp"

namespace sumprod::geom {

/// A complex number viewed as a point of R^2.
struct PlanarPoint {
  Rational x;
  Rational y;

  static PlanarPoint of(const GaussianRational& z) { return {z.re(), z.im()}; }
  GaussianRational complex() const { return {x, y}; }

  friend bool operator==(const PlanarPoint&, const PlanarPoint&) = default;
  friend std::strong_ordering operator<=>(const PlanarPoint&, const PlanarPoint&) = default;
  PlanarPoint operator+(const PlanarPoint& o) const { return {x + o.x, y + o.y}; }
  PlanarPoint operator-(const PlanarPoint& o) const { return {x - o.x, y - o.y}; }
  std::string str() const { return "(" + x.str() + ", " + y.str() + ")"; }
};

Rational dot(const PlanarPoint& u, const PlanarPoint& v);
Rational cross(const PlanarPoint& u, const PlanarPoint& v);
Rational dist_sq(const PlanarPoint& a, const PlanarPoint& b);
/// Sign of cross(b - a, c - a).
int orientation(const PlanarPoint& a, const PlanarPoint& b, const PlanarPoint& c);

/// re(u) > 0 and |im(u)| < eps re(u).
bool in_wedge(const GaussianRational& u, const Rational& eps);

/// u / (1 + u). Throws PoleAtMinusOne.
GaussianRational mobius_point(const GaussianRational& u);

/// Open lens l1 + (l2 - l1) M_eps, where M_eps is the intersection of the open
/// discs centred (1/2, +-1/(2 eps)) with radius^2 = 1/4 + 1/(4 eps^2).
class Meniscus {
 public:
  /// Throws DegenerateEdge when l1 == l2 and BadParams when eps <= 0.
  Meniscus(GaussianRational l1, GaussianRational l2, Rational eps);

  bool contains(const GaussianRational& z) const;
  const GaussianRational& l1() const noexcept { return l1_; }
  const GaussianRational& l2() const noexcept { return l2_; }
  const Rational& epsilon() const noexcept { return eps_; }

 private:
  GaussianRational l1_;
  GaussianRational l2_;
  Rational eps_;
};

bool meniscus_contains(const Meniscus& m, const GaussianRational& z);

struct Rhombus {
  PlanarPoint v_major_1;
  PlanarPoint v_major_2;
  PlanarPoint v_minor_1;
  PlanarPoint v_minor_2;

  /// Vertices in convex (counter-clockwise) order.
  std::array<PlanarPoint, 4> polygon() const;
  bool contains_strictly(const PlanarPoint& p) const;
};

/// Major diagonal l1 l2, minor vertices m +- (eps/2) rot90(l2 - l1). Throws
/// DegenerateEdge.
Rhombus rhombus_of_edge(const GaussianRational& l1, const GaussianRational& l2, const Rational& eps);

/// Separating-axis test over edge normals of two convex polygons. Touching
/// boundaries count as disjoint since the polygons are open.
bool open_convex_disjoint(std::span<const PlanarPoint> a, std::span<const PlanarPoint> b);
bool rhombi_disjoint(const Rhombus& a, const Rhombus& b);

/// Points of the lens boundary l1 + (l2 - l1) w, w = u/(1+u) with
/// u = s(1 +- i eps) and s = k/(n+1-k) for k = 1..n, so 2n points in all.
std::vector<GaussianRational> meniscus_boundary_samples(const Meniscus& m, std::size_t samples);

struct ContainmentSample {
  bool inside = true;
  std::size_t checked = 0;
  /// No samples requested, so the check says nothing.
  bool vacuous = false;
  std::vector<GaussianRational> outside;
};

/// Sampled check that the lens boundary lies in the open rhombus.
ContainmentSample meniscus_inside_rhombus(const Meniscus& m, const Rhombus& r, std::size_t samples);

/// Open segments share a point. Shared endpoints alone do not count.
bool segments_cross(const PlanarPoint& p1, const PlanarPoint& p2, const PlanarPoint& q1, const PlanarPoint& q2);

/// (u x v)^2 <= k^2 (u.v)^2 with k = 2 eps/(1 - eps^2), i.e. tan of the angle
/// between the segment directions is at most k. Requires 0 < eps < 1.
bool tangent_within(const PlanarPoint& u, const PlanarPoint& v, const Rational& eps);

struct SpanningTree {
  std::vector<PlanarPoint> vertices;
  /// (i, j) with i < j, in the order Kruskal accepted them.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<Rational> edge_length_sq;
};

/// Kruskal over exact squared lengths, ties broken by (length^2, i, j).
/// Throws DuplicatePoints, BadParams for fewer than 2 points.
SpanningTree euclidean_mst(std::vector<PlanarPoint> points);

struct CrossingViolation {
  std::size_t edge_a = 0;
  std::size_t edge_b = 0;
  bool tie = false;
};

struct AngleViolation {
  std::size_t vertex = 0;
  std::size_t edge_a = 0;
  std::size_t edge_b = 0;
  bool tie = false;
};

struct DiscViolation {
  std::size_t edge = 0;
  std::size_t vertex = 0;
  bool tie = false;
};

struct MstReport {
  std::size_t edge_pairs_checked = 0;
  std::size_t angle_pairs_checked = 0;
  std::size_t disc_checks = 0;
  std::vector<CrossingViolation> crossings;
  std::vector<AngleViolation> angles;
  std::vector<DiscViolation> discs;

  /// Violations flagged as ties are reported but do not fail.
  bool passes() const;
};

MstReport verify_mst_properties(const SpanningTree& tree);

/// (y1 + y2)/(x1 + x2), checked against l1 + (l2 - l1) u/(1+u) with
/// u = x2/x1. Throws ZeroDenominator, IdentityViolation on mismatch.
GaussianRational sum_image(const GaussianRational& x1, const GaussianRational& y1, const GaussianRational& x2,
                           const GaussianRational& y2);

enum class VertexSet { AllRatios, PopularRatio, PopularProduct };
VertexSet parse_vertex_set(const std::string& name);
std::string to_string(VertexSet v);

struct ImageViolation {
  std::size_t edge = 0;
  GaussianRational x1, y1, x2, y2;
  GaussianRational image;
};

struct ClaimReport {
  Rational epsilon;
  VertexSet vertex_set = VertexSet::AllRatios;
  std::size_t set_size = 0;
  SpanningTree tree;
  MstReport mst;
  std::size_t rhombus_pairs_checked = 0;
  std::vector<std::pair<std::size_t, std::size_t>> rhombus_overlaps;
  std::size_t containment_samples = 0;
  /// Edges whose sampled lens boundary left the rhombus.
  std::vector<std::size_t> containment_failures;
  std::size_t realisations = 0;
  std::vector<ImageViolation> images_outside;
  /// Vector sums (x1+x2, y1+y2) hit more than once.
  std::vector<std::pair<GaussianRational, GaussianRational>> repeated_sums;
  std::size_t sumset_size = 0;
  /// sum over tree edges of n(l1) n(l2)
  BigInt pair_count_sum;
  bool count_holds = false;

  bool holds() const;
};

/// Throws SectorViolation when A is outside the eps-sector, BadParams when
/// the ratio set has fewer than 2 points.
ClaimReport verify_claim(const FiniteComplexSet& a, const Rational& eps,
                         VertexSet vertices = VertexSet::AllRatios, std::size_t samples_per_edge = 8);

nlohmann::ordered_json to_json(const ClaimReport& report);

}  // namespace sumprod::geom
