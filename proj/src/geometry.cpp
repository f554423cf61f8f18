#include "sumprod/geometry.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "sumprod/incidence.hpp"

namespace sumprod::geom {

Rational dot(const PlanarPoint& u, const PlanarPoint& v) { return u.x * v.x + u.y * v.y; }

Rational cross(const PlanarPoint& u, const PlanarPoint& v) { return u.x * v.y - u.y * v.x; }

Rational dist_sq(const PlanarPoint& a, const PlanarPoint& b) {
  const PlanarPoint d = b - a;
  return dot(d, d);
}

int orientation(const PlanarPoint& a, const PlanarPoint& b, const PlanarPoint& c) {
  return cross(b - a, c - a).sign();
}

bool in_wedge(const GaussianRational& u, const Rational& eps) {
  return u.re().sign() > 0 && abs(u.im()) < eps * u.re();
}

GaussianRational mobius_point(const GaussianRational& u) {
  const GaussianRational denom = GaussianRational(1) + u;
  if (denom.is_zero()) throw Error(ErrorCode::PoleAtMinusOne, "u = -1 is the pole of u/(1+u)");
  return u / denom;
}

// ---------------------------------------------------------------------------

Meniscus::Meniscus(GaussianRational l1, GaussianRational l2, Rational eps)
    : l1_(std::move(l1)), l2_(std::move(l2)), eps_(std::move(eps)) {
  if (l1_ == l2_) throw Error(ErrorCode::DegenerateEdge, "meniscus endpoints coincide");
  if (eps_.sign() <= 0) throw Error(ErrorCode::BadParams, "epsilon must be positive");
}

bool Meniscus::contains(const GaussianRational& z) const {
  const GaussianRational w = (z - l1_) / (l2_ - l1_);
  const Rational& a = w.re();
  const Rational& b = w.im();
  // Inside both discs: a^2 - a + b^2 -+ b/eps < 0 for each sign.
  return a * a - a + b * b + abs(b) / eps_ < Rational(0);
}

bool meniscus_contains(const Meniscus& m, const GaussianRational& z) { return m.contains(z); }

std::array<PlanarPoint, 4> Rhombus::polygon() const { return {v_major_1, v_minor_2, v_major_2, v_minor_1}; }

bool Rhombus::contains_strictly(const PlanarPoint& p) const {
  const auto poly = polygon();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (orientation(poly[i], poly[(i + 1) % poly.size()], p) <= 0) return false;
  }
  return true;
}

Rhombus rhombus_of_edge(const GaussianRational& l1, const GaussianRational& l2, const Rational& eps) {
  if (l1 == l2) throw Error(ErrorCode::DegenerateEdge, "rhombus endpoints coincide");
  const PlanarPoint a = PlanarPoint::of(l1);
  const PlanarPoint b = PlanarPoint::of(l2);
  const PlanarPoint d = b - a;
  const Rational half(1, 2);
  const PlanarPoint mid{(a.x + b.x) * half, (a.y + b.y) * half};
  const Rational s = eps * half;
  const PlanarPoint offset{-d.y * s, d.x * s};
  return {a, b, mid + offset, mid - offset};
}

bool open_convex_disjoint(std::span<const PlanarPoint> a, std::span<const PlanarPoint> b) {
  auto separated_by_edges_of = [&](std::span<const PlanarPoint> poly) {
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const PlanarPoint e = poly[(i + 1) % poly.size()] - poly[i];
      const PlanarPoint normal{-e.y, e.x};
      auto project = [&](std::span<const PlanarPoint> pts) {
        Rational lo = dot(normal, pts[0]);
        Rational hi = lo;
        for (const auto& p : pts.subspan(1)) {
          Rational v = dot(normal, p);
          if (v < lo) lo = v;
          if (v > hi) hi = std::move(v);
        }
        return std::pair{lo, hi};
      };
      const auto [alo, ahi] = project(a);
      const auto [blo, bhi] = project(b);
      if (ahi <= blo || bhi <= alo) return true;
    }
    return false;
  };
  return separated_by_edges_of(a) || separated_by_edges_of(b);
}

bool rhombi_disjoint(const Rhombus& a, const Rhombus& b) {
  const auto pa = a.polygon();
  const auto pb = b.polygon();
  return open_convex_disjoint(pa, pb);
}

std::vector<GaussianRational> meniscus_boundary_samples(const Meniscus& m, std::size_t samples) {
  std::vector<GaussianRational> out;
  out.reserve(2 * samples);
  const GaussianRational span = m.l2() - m.l1();
  for (std::size_t k = 1; k <= samples; ++k) {
    const Rational s(static_cast<long>(k), static_cast<long>(samples + 1 - k));
    for (int sign : {1, -1}) {
      const GaussianRational u(s, s * m.epsilon() * Rational(sign));
      out.push_back(m.l1() + span * mobius_point(u));
    }
  }
  return out;
}

ContainmentSample meniscus_inside_rhombus(const Meniscus& m, const Rhombus& r, std::size_t samples) {
  ContainmentSample out;
  out.vacuous = samples == 0;
  for (auto& z : meniscus_boundary_samples(m, samples)) {
    ++out.checked;
    if (!r.contains_strictly(PlanarPoint::of(z))) {
      out.inside = false;
      out.outside.push_back(std::move(z));
    }
  }
  return out;
}

bool segments_cross(const PlanarPoint& p1, const PlanarPoint& p2, const PlanarPoint& q1, const PlanarPoint& q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 != 0 || o2 != 0) return false;
  // Collinear: compare the open parameter intervals along p1 -> p2.
  const PlanarPoint d = p2 - p1;
  const Rational tp = dot(d, d);
  Rational t1 = dot(q1 - p1, d);
  Rational t2 = dot(q2 - p1, d);
  if (t2 < t1) std::swap(t1, t2);
  const Rational lo = std::max(Rational(0), t1);
  const Rational hi = std::min(tp, t2);
  return lo < hi;
}

bool tangent_within(const PlanarPoint& u, const PlanarPoint& v, const Rational& eps) {
  if (eps.sign() <= 0 || eps >= Rational(1)) throw Error(ErrorCode::BadParams, "tangent bound needs 0 < eps < 1");
  const Rational k = Rational(2) * eps / (Rational(1) - eps * eps);
  const Rational c = cross(u, v);
  const Rational d = dot(u, v);
  return c * c <= k * k * d * d;
}

// ---------------------------------------------------------------------------

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

SpanningTree euclidean_mst(std::vector<PlanarPoint> points) {
  if (points.size() < 2) throw Error(ErrorCode::BadParams, "spanning tree needs at least 2 points");
  {
    std::vector<PlanarPoint> sorted = points;
    std::sort(sorted.begin(), sorted.end());
    if (auto it = std::adjacent_find(sorted.begin(), sorted.end()); it != sorted.end()) {
      throw Error(ErrorCode::DuplicatePoints, "duplicate point " + it->str());
    }
  }
  struct Candidate {
    Rational len_sq;
    std::size_t i;
    std::size_t j;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(points.size() * (points.size() - 1) / 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) candidates.push_back({dist_sq(points[i], points[j]), i, j});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (auto c = a.len_sq <=> b.len_sq; c != 0) return c < 0;
    return std::pair{a.i, a.j} < std::pair{b.i, b.j};
  });

  SpanningTree tree;
  DisjointSets components(points.size());
  for (auto& c : candidates) {
    if (!components.unite(c.i, c.j)) continue;
    tree.edges.emplace_back(c.i, c.j);
    tree.edge_length_sq.push_back(std::move(c.len_sq));
    if (tree.edges.size() + 1 == points.size()) break;
  }
  tree.vertices = std::move(points);
  return tree;
}

bool MstReport::passes() const {
  auto untied = [](const auto& v) { return std::none_of(v.begin(), v.end(), [](const auto& x) { return !x.tie; }); };
  return untied(crossings) && untied(angles) && untied(discs);
}

MstReport verify_mst_properties(const SpanningTree& tree) {
  MstReport r;
  const auto& V = tree.vertices;
  const auto& E = tree.edges;
  for (std::size_t a = 0; a < E.size(); ++a) {
    for (std::size_t b = a + 1; b < E.size(); ++b) {
      ++r.edge_pairs_checked;
      if (segments_cross(V[E[a].first], V[E[a].second], V[E[b].first], V[E[b].second])) {
        r.crossings.push_back({a, b, tree.edge_length_sq[a] == tree.edge_length_sq[b]});
      }
    }
  }

  std::vector<std::vector<std::size_t>> incident(V.size());
  for (std::size_t e = 0; e < E.size(); ++e) {
    incident[E[e].first].push_back(e);
    incident[E[e].second].push_back(e);
  }
  auto other = [&](std::size_t e, std::size_t v) { return E[e].first == v ? E[e].second : E[e].first; };
  for (std::size_t v = 0; v < V.size(); ++v) {
    const auto& inc = incident[v];
    for (std::size_t i = 0; i < inc.size(); ++i) {
      for (std::size_t j = i + 1; j < inc.size(); ++j) {
        ++r.angle_pairs_checked;
        const PlanarPoint u = V[other(inc[i], v)] - V[v];
        const PlanarPoint w = V[other(inc[j], v)] - V[v];
        const Rational d = dot(u, w);
        const Rational uu = dot(u, u);
        const Rational ww = dot(w, w);
        if (d.sign() <= 0 || Rational(4) * d * d <= uu * ww) continue;
        const Rational third = dist_sq(V[other(inc[i], v)], V[other(inc[j], v)]);
        r.angles.push_back({v, inc[i], inc[j], third == std::max(uu, ww)});
      }
    }
  }

  for (std::size_t e = 0; e < E.size(); ++e) {
    const PlanarPoint& a = V[E[e].first];
    const PlanarPoint& b = V[E[e].second];
    for (std::size_t c = 0; c < V.size(); ++c) {
      if (c == E[e].first || c == E[e].second) continue;
      ++r.disc_checks;
      if (dot(V[c] - a, V[c] - b).sign() < 0) {
        const bool tie = dist_sq(V[c], a) == tree.edge_length_sq[e] || dist_sq(V[c], b) == tree.edge_length_sq[e];
        r.discs.push_back({e, c, tie});
      }
    }
  }
  return r;
}

GaussianRational sum_image(const GaussianRational& x1, const GaussianRational& y1, const GaussianRational& x2,
                           const GaussianRational& y2) {
  const GaussianRational denom = x1 + x2;
  if (denom.is_zero() || x1.is_zero() || x2.is_zero()) {
    throw Error(ErrorCode::ZeroDenominator, "sum image needs x1, x2, x1 + x2 nonzero");
  }
  const GaussianRational image = (y1 + y2) / denom;
  const GaussianRational l1 = y1 / x1;
  const GaussianRational l2 = y2 / x2;
  const GaussianRational u = x2 / x1;
  if (image != l1 + (l2 - l1) * mobius_point(u)) {
    throw Error(ErrorCode::IdentityViolation, "sum image disagrees with l1 + (l2 - l1) u/(1+u)");
  }
  return image;
}

VertexSet parse_vertex_set(const std::string& name) {
  if (name == "all") return VertexSet::AllRatios;
  if (name == "popular" || name == "popular-ratio") return VertexSet::PopularRatio;
  if (name == "popular-product") return VertexSet::PopularProduct;
  throw Error(ErrorCode::ParseError, "unknown vertex set '" + name + "'");
}

std::string to_string(VertexSet v) {
  switch (v) {
    case VertexSet::AllRatios: return "all";
    case VertexSet::PopularRatio: return "popular-ratio";
    case VertexSet::PopularProduct: return "popular-product";
  }
  return "all";
}

// ---------------------------------------------------------------------------

bool ClaimReport::holds() const {
  return mst.passes() && rhombus_overlaps.empty() && containment_failures.empty() && images_outside.empty() &&
         repeated_sums.empty() && count_holds;
}

ClaimReport verify_claim(const FiniteComplexSet& a, const Rational& eps, VertexSet vertices,
                         std::size_t samples_per_edge) {
  if (eps.sign() <= 0) throw Error(ErrorCode::BadParams, "epsilon must be positive");
  if (!sector_check(a, eps)) throw Error(ErrorCode::SectorViolation, "set is not inside the epsilon-sector");

  std::vector<GaussianRational> slopes;
  switch (vertices) {
    case VertexSet::AllRatios: slopes = ratio_set(a, a).elements(); break;
    case VertexSet::PopularRatio: slopes = incidence::popular_lines_ratio(a).slopes; break;
    case VertexSet::PopularProduct: slopes = incidence::popular_lines(a).slopes; break;
  }
  if (vertices == VertexSet::AllRatios && slopes.size() < 2) {
    throw Error(ErrorCode::BadParams, "claim needs |A:A| >= 2");
  }

  ClaimReport r;
  r.epsilon = eps;
  r.vertex_set = vertices;
  r.set_size = a.size();
  r.sumset_size = sumset(a, a).size();
  r.pair_count_sum = 0;
  if (slopes.size() < 2) {
    for (const auto& l : slopes) r.tree.vertices.push_back(PlanarPoint::of(l));
    r.count_holds = true;
    return r;
  }

  std::vector<PlanarPoint> points;
  points.reserve(slopes.size());
  for (const auto& l : slopes) points.push_back(PlanarPoint::of(l));
  r.tree = euclidean_mst(std::move(points));
  r.mst = verify_mst_properties(r.tree);

  // x in A with l x in A, for every vertex l.
  std::vector<std::vector<GaussianRational>> abscissae(slopes.size());
  for (std::size_t v = 0; v < slopes.size(); ++v) {
    for (const auto& x : a) {
      if (a.contains(slopes[v] * x)) abscissae[v].push_back(x);
    }
  }

  const auto& E = r.tree.edges;
  std::vector<Rhombus> rhombi;
  rhombi.reserve(E.size());
  std::vector<std::pair<GaussianRational, GaussianRational>> sums;
  for (std::size_t e = 0; e < E.size(); ++e) {
    const auto [i, j] = E[e];
    const GaussianRational& l1 = slopes[i];
    const GaussianRational& l2 = slopes[j];
    const Meniscus m(l1, l2, eps);
    rhombi.push_back(rhombus_of_edge(l1, l2, eps));
    const ContainmentSample sample = meniscus_inside_rhombus(m, rhombi.back(), samples_per_edge);
    r.containment_samples += sample.checked;
    if (!sample.inside) r.containment_failures.push_back(e);

    r.pair_count_sum += BigInt(static_cast<unsigned long>(abscissae[i].size())) *
                        static_cast<unsigned long>(abscissae[j].size());
    for (const auto& x1 : abscissae[i]) {
      const GaussianRational y1 = l1 * x1;
      for (const auto& x2 : abscissae[j]) {
        const GaussianRational y2 = l2 * x2;
        ++r.realisations;
        GaussianRational image = sum_image(x1, y1, x2, y2);
        if (!m.contains(image)) r.images_outside.push_back({e, x1, y1, x2, y2, std::move(image)});
        sums.emplace_back(x1 + x2, y1 + y2);
      }
    }
  }

  for (std::size_t p = 0; p < rhombi.size(); ++p) {
    for (std::size_t q = p + 1; q < rhombi.size(); ++q) {
      ++r.rhombus_pairs_checked;
      if (!rhombi_disjoint(rhombi[p], rhombi[q])) r.rhombus_overlaps.emplace_back(p, q);
    }
  }

  std::sort(sums.begin(), sums.end());
  for (std::size_t k = 1; k < sums.size(); ++k) {
    if (sums[k] == sums[k - 1] && (r.repeated_sums.empty() || r.repeated_sums.back() != sums[k])) {
      r.repeated_sums.push_back(sums[k]);
    }
  }

  const BigInt s = BigInt(static_cast<unsigned long>(r.sumset_size));
  r.count_holds = BigInt(s * s) >= r.pair_count_sum;
  return r;
}

nlohmann::ordered_json to_json(const ClaimReport& r) {
  using nlohmann::ordered_json;
  const auto& V = r.tree.vertices;
  const auto& E = r.tree.edges;
  auto edge = [&](std::size_t e) { return ordered_json::array({V[E[e].first].str(), V[E[e].second].str()}); };

  ordered_json edges = ordered_json::array();
  for (std::size_t e = 0; e < E.size(); ++e) edges.push_back(edge(e));

  ordered_json crossings = ordered_json::array();
  for (const auto& c : r.mst.crossings) crossings.push_back({{"edges", {edge(c.edge_a), edge(c.edge_b)}}, {"tie", c.tie}});
  ordered_json angles = ordered_json::array();
  for (const auto& a : r.mst.angles) {
    angles.push_back({{"vertex", V[a.vertex].str()}, {"edges", {edge(a.edge_a), edge(a.edge_b)}}, {"tie", a.tie}});
  }
  ordered_json discs = ordered_json::array();
  for (const auto& d : r.mst.discs) discs.push_back({{"edge", edge(d.edge)}, {"vertex", V[d.vertex].str()}, {"tie", d.tie}});

  ordered_json overlaps = ordered_json::array();
  for (const auto& [p, q] : r.rhombus_overlaps) overlaps.push_back({edge(p), edge(q)});
  ordered_json containment = ordered_json::array();
  for (std::size_t e : r.containment_failures) containment.push_back(edge(e));
  ordered_json images = ordered_json::array();
  for (const auto& v : r.images_outside) {
    images.push_back({{"edge", edge(v.edge)},
                      {"x1", v.x1.str()},
                      {"y1", v.y1.str()},
                      {"x2", v.x2.str()},
                      {"y2", v.y2.str()},
                      {"image", v.image.str()}});
  }
  ordered_json repeated = ordered_json::array();
  for (const auto& [x, y] : r.repeated_sums) repeated.push_back({x.str(), y.str()});

  ordered_json j;
  j["epsilon"] = r.epsilon.str();
  j["vertex_set"] = to_string(r.vertex_set);
  j["set_size"] = std::to_string(r.set_size);
  j["vertex_count"] = std::to_string(V.size());
  j["edge_count"] = std::to_string(E.size());
  j["edges"] = std::move(edges);
  j["edge_pairs_checked"] = std::to_string(r.mst.edge_pairs_checked);
  j["crossings"] = std::move(crossings);
  j["angle_pairs_checked"] = std::to_string(r.mst.angle_pairs_checked);
  j["angle_violations"] = std::move(angles);
  j["disc_checks"] = std::to_string(r.mst.disc_checks);
  j["disc_violations"] = std::move(discs);
  j["rhombus_pairs_checked"] = std::to_string(r.rhombus_pairs_checked);
  j["rhombus_overlaps"] = std::move(overlaps);
  j["containment_samples"] = std::to_string(r.containment_samples);
  j["containment_failures"] = std::move(containment);
  j["realisations"] = std::to_string(r.realisations);
  j["images_outside"] = std::move(images);
  j["repeated_sums"] = std::move(repeated);
  j["sumset_size"] = std::to_string(r.sumset_size);
  j["pair_count_sum"] = r.pair_count_sum.get_str();
  j["count_holds"] = r.count_holds;
  j["holds"] = r.holds();
  return j;
}

}  // namespace sumprod::geom
