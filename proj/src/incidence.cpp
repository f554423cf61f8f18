#include "sumprod/incidence.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "sumprod/numeric.hpp"

namespace sumprod::incidence {

namespace {

std::size_t mix(std::size_t a, std::size_t b) { return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)); }

BigInt big(std::size_t v) { return BigInt(static_cast<unsigned long>(v)); }

}  // namespace

std::size_t Point2::hash() const noexcept { return mix(x.hash(), y.hash()); }

std::string Point2::str() const { return "(" + x.str() + ", " + y.str() + ")"; }

LineC LineC::with_slope(GaussianRational slope, GaussianRational intercept) {
  return LineC(false, std::move(slope), std::move(intercept));
}

LineC LineC::vertical(GaussianRational x) { return LineC(true, GaussianRational(0), std::move(x)); }

LineC LineC::through(const GaussianRational& slope, const Point2& p) { return with_slope(slope, p.y - slope * p.x); }

bool LineC::contains(const Point2& p) const {
  if (vertical_) return p.x == intercept_;
  return p.y == slope_ * p.x + intercept_;
}

std::optional<Point2> LineC::intersect(const LineC& other) const {
  if (vertical_ && other.vertical_) return std::nullopt;
  if (vertical_) return Point2{intercept_, other.slope_ * intercept_ + other.intercept_};
  if (other.vertical_) return other.intersect(*this);
  if (slope_ == other.slope_) return std::nullopt;
  const GaussianRational x = (other.intercept_ - intercept_) / (slope_ - other.slope_);
  return Point2{x, slope_ * x + intercept_};
}

std::size_t LineC::hash() const noexcept { return mix(mix(vertical_ ? 1 : 2, slope_.hash()), intercept_.hash()); }

std::string LineC::str() const {
  if (vertical_) return "x = " + intercept_.str();
  return "y = (" + slope_.str() + ")x + (" + intercept_.str() + ")";
}

// ---------------------------------------------------------------------------

namespace {

struct LineIndex {
  std::unordered_map<GaussianRational, std::unordered_map<GaussianRational, std::vector<std::size_t>>> by_slope;
  std::unordered_map<GaussianRational, std::vector<std::size_t>> verticals;

  explicit LineIndex(std::span<const LineC> lines) {
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const LineC& l = lines[i];
      if (l.is_vertical()) {
        verticals[l.intercept()].push_back(i);
      } else {
        by_slope[l.slope()][l.intercept()].push_back(i);
      }
    }
  }

  template <typename F>
  void for_each_through(const Point2& p, F&& visit) const {
    if (auto it = verticals.find(p.x); it != verticals.end()) {
      for (std::size_t i : it->second) visit(i);
    }
    for (const auto& [slope, intercepts] : by_slope) {
      if (auto it = intercepts.find(p.y - slope * p.x); it != intercepts.end()) {
        for (std::size_t i : it->second) visit(i);
      }
    }
  }
};

void count_range(const LineIndex& index, std::span<const Point2> points, std::size_t begin, std::size_t end,
                 std::vector<Count>& per_point, std::vector<Count>& per_line) {
  for (std::size_t p = begin; p < end; ++p) {
    index.for_each_through(points[p], [&](std::size_t l) {
      ++per_point[p];
      ++per_line[l];
    });
  }
}

}  // namespace

IncidenceCounts incidences(std::span<const Point2> points, std::span<const LineC> lines, unsigned partitions) {
  IncidenceCounts out;
  out.per_point.assign(points.size(), 0);
  out.per_line.assign(lines.size(), 0);
  const LineIndex index(lines);

  partitions = std::max(1u, std::min<unsigned>(partitions, static_cast<unsigned>(std::max<std::size_t>(1, points.size()))));
  if (partitions == 1) {
    count_range(index, points, 0, points.size(), out.per_point, out.per_line);
  } else {
    std::vector<std::vector<Count>> line_tallies(partitions, std::vector<Count>(lines.size(), 0));
    std::vector<std::thread> workers;
    const std::size_t chunk = (points.size() + partitions - 1) / partitions;
    for (unsigned k = 0; k < partitions; ++k) {
      const std::size_t begin = std::min(points.size(), k * chunk);
      const std::size_t end = std::min(points.size(), begin + chunk);
      workers.emplace_back([&, k, begin, end] { count_range(index, points, begin, end, out.per_point, line_tallies[k]); });
    }
    for (auto& w : workers) w.join();
    for (const auto& tally : line_tallies) {
      for (std::size_t l = 0; l < lines.size(); ++l) out.per_line[l] += tally[l];
    }
  }
  for (Count c : out.per_point) out.total += c;
  return out;
}

IncidenceCounts incidences_naive(std::span<const Point2> points, std::span<const LineC> lines) {
  IncidenceCounts out;
  out.per_point.assign(points.size(), 0);
  out.per_line.assign(lines.size(), 0);
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t l = 0; l < lines.size(); ++l) {
      if (lines[l].contains(points[p])) {
        ++out.per_point[p];
        ++out.per_line[l];
        ++out.total;
      }
    }
  }
  return out;
}

std::vector<Point2> rich_points(std::span<const Point2> points, std::span<const LineC> lines, Count t) {
  if (t < 1) throw Error(ErrorCode::BadParams, "richness threshold must be >= 1");
  const IncidenceCounts counts = incidences(points, lines);
  std::vector<Point2> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (counts.per_point[i] >= t) out.push_back(points[i]);
  }
  return out;
}

std::vector<LineC> rich_lines(std::span<const Point2> points, std::span<const LineC> lines, Count t) {
  if (t < 1) throw Error(ErrorCode::BadParams, "richness threshold must be >= 1");
  const IncidenceCounts counts = incidences(points, lines);
  std::vector<LineC> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (counts.per_line[i] >= t) out.push_back(lines[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------

WeightedLineFamily::WeightedLineFamily(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.line < b.line; });
  for (auto& e : entries) {
    if (e.weight < 1) throw Error(ErrorCode::BadParams, "line weights must be >= 1");
    if (!entries_.empty() && entries_.back().line == e.line) {
      entries_.back().weight += e.weight;
    } else {
      entries_.push_back(std::move(e));
    }
  }
  build_index();
}

void WeightedLineFamily::build_index() {
  total_ = 0;
  by_slope_.clear();
  verticals_.clear();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const LineC& l = entries_[i].line;
    total_ += entries_[i].weight;
    if (l.is_vertical()) {
      verticals_.emplace(l.intercept(), i);
    } else {
      by_slope_[l.slope()].emplace(l.intercept(), i);
    }
  }
}

Count WeightedLineFamily::max_weight() const noexcept {
  Count m = 0;
  for (const auto& e : entries_) m = std::max(m, e.weight);
  return m;
}

Count WeightedLineFamily::weight_of(const LineC& line) const {
  if (line.is_vertical()) {
    auto it = verticals_.find(line.intercept());
    return it == verticals_.end() ? 0 : entries_[it->second].weight;
  }
  auto s = by_slope_.find(line.slope());
  if (s == by_slope_.end()) return 0;
  auto it = s->second.find(line.intercept());
  return it == s->second.end() ? 0 : entries_[it->second].weight;
}

std::vector<std::size_t> WeightedLineFamily::indices_through(const Point2& p) const {
  std::vector<std::size_t> out;
  if (auto it = verticals_.find(p.x); it != verticals_.end()) out.push_back(it->second);
  for (const auto& [slope, intercepts] : by_slope_) {
    if (auto it = intercepts.find(p.y - slope * p.x); it != intercepts.end()) out.push_back(it->second);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t WeightedLineFamily::lines_through(const Point2& p) const { return indices_through(p).size(); }

Count WeightedLineFamily::weight_through(const Point2& p) const {
  Count m = 0;
  for (std::size_t i : indices_through(p)) m += entries_[i].weight;
  return m;
}

Count weighted_incidences(std::span<const Point2> points, const WeightedLineFamily& family) {
  Count total = 0;
  for (const auto& p : points) total += family.weight_through(p);
  return total;
}

WeightedLineFamily translated_family(std::span<const GaussianRational> slopes, std::span<const Point2> q) {
  if (slopes.empty() || q.empty()) throw Error(ErrorCode::BadParams, "translated family needs slopes and points");
  const FiniteComplexSet distinct_slopes(std::vector<GaussianRational>(slopes.begin(), slopes.end()));
  std::vector<Point2> points(q.begin(), q.end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  std::unordered_map<LineC, Count, LineHash> tally;
  for (const auto& s : distinct_slopes) {
    for (const auto& p : points) ++tally[LineC::through(s, p)];
  }
  std::vector<WeightedLineFamily::Entry> entries;
  entries.reserve(tally.size());
  for (auto& [line, weight] : tally) entries.push_back({line, weight});
  WeightedLineFamily family(std::move(entries));
  family.pair_bound_ = static_cast<Count>(distinct_slopes.size()) * points.size();
  return family;
}

WeightedLineFamily cap_weights(const WeightedLineFamily& family, Count cap) {
  if (cap < 1) throw Error(ErrorCode::BadParams, "weight cap must be >= 1");
  WeightedLineFamily out = family;
  for (auto& e : out.entries_) e.weight = std::min(e.weight, cap);
  out.cap_ = cap;
  out.build_index();
  if (out.pair_bound_ && out.total_ > *out.pair_bound_) {
    throw Error(ErrorCode::IdentityViolation, "capped weight exceeds |L||Q|");
  }
  return out;
}

std::vector<std::pair<Point2, Count>> intersection_points(const WeightedLineFamily& family) {
  if (family.size() < 2) throw Error(ErrorCode::BadParams, "intersections need at least 2 lines");
  std::unordered_set<Point2, Point2Hash> points;
  const auto& entries = family.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      if (auto x = entries[i].line.intersect(entries[j].line)) points.insert(std::move(*x));
    }
  }
  std::vector<std::pair<Point2, Count>> out;
  out.reserve(points.size());
  for (const auto& p : points) out.emplace_back(p, family.weight_through(p));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void require_popular_preconditions(const FiniteComplexSet& a) {
  if (a.size() < 2) throw Error(ErrorCode::BadParams, "popular lines need |A| >= 2");
  if (a.contains(GaussianRational(0))) throw Error(ErrorCode::ZeroElement, "popular lines need 0 not in A");
}

Count dyadic_ceiling(Count n) {
  Count N = 1;
  while (N < n) N *= 2;
  return N;
}

std::vector<DyadicClass> dyadic_classes(const RepCountMap& counts) {
  std::map<Count, DyadicClass> classes;
  for (const auto& [l, n] : counts) {
    DyadicClass& c = classes[dyadic_ceiling(n)];
    c.slopes.push_back(l);
    c.energy_contribution += BigInt(static_cast<unsigned long>(n)) * static_cast<unsigned long>(n);
  }
  std::vector<DyadicClass> out;
  for (auto& [N, c] : classes) {
    c.N = N;
    c.size_times_n_sq = big(c.slopes.size()) * static_cast<unsigned long>(N) * static_cast<unsigned long>(N);
    out.push_back(std::move(c));
  }
  return out;
}

bool meets_pigeonhole(const DyadicClass& c, std::size_t set_size, const BigInt& energy) {
  return times_log2_at_least(BigInt(2 * c.size_times_n_sq), set_size, energy);
}

PopularLineSelection select_from(const DyadicClass& c, const BigInt& energy, std::vector<DyadicClass> classes,
                                 bool bound_holds) {
  PopularLineSelection sel;
  sel.N = c.N;
  sel.slopes = c.slopes;
  sel.energy_contribution = c.energy_contribution;
  sel.multiplicative_energy = energy;
  sel.pigeonhole_bound_holds = bound_holds;
  sel.classes = std::move(classes);
  return sel;
}

}  // namespace

RepCountMap ratio_counts(const FiniteComplexSet& a) {
  if (a.contains(GaussianRational(0))) throw Error(ErrorCode::ZeroElement, "ratio counts need 0 not in A");
  return representation_counts(a, a, SetOp::Ratio);
}

PopularLineSelection popular_lines(const FiniteComplexSet& a) {
  require_popular_preconditions(a);
  const RepCountMap counts = ratio_counts(a);
  BigInt energy = 0;
  for (const auto& [l, n] : counts) energy += BigInt(static_cast<unsigned long>(n)) * static_cast<unsigned long>(n);
  std::vector<DyadicClass> classes = dyadic_classes(counts);
  std::size_t best = 0;
  for (std::size_t i = 1; i < classes.size(); ++i) {
    if (classes[i].size_times_n_sq > classes[best].size_times_n_sq) best = i;
  }
  const bool holds = meets_pigeonhole(classes[best], a.size(), energy);
  const DyadicClass chosen = classes[best];
  return select_from(chosen, energy, std::move(classes), holds);
}

RatioPopularLines popular_lines_ratio(const FiniteComplexSet& a) {
  require_popular_preconditions(a);
  const RepCountMap counts = ratio_counts(a);
  RatioPopularLines out;
  const BigInt n_sq = big(a.size()) * big(a.size());
  out.threshold = Rational(n_sq, 2 * big(counts.size()));
  for (const auto& [l, n] : counts) {
    if (BigInt(2 * big(counts.size()) * static_cast<unsigned long>(n)) >= n_sq) {
      out.slopes.push_back(l);
      out.supported_points += n;
      out.max_points_per_line = std::max(out.max_points_per_line, n);
    }
  }
  return out;
}

NBoundSelection select_popular_with_N_bound(const FiniteComplexSet& a, const Rational& constant) {
  require_popular_preconditions(a);
  if (constant.sign() <= 0) throw Error(ErrorCode::BadParams, "N-bound constant must be positive");
  const RepCountMap counts = ratio_counts(a);
  BigInt energy = 0;
  for (const auto& [l, n] : counts) energy += BigInt(static_cast<unsigned long>(n)) * static_cast<unsigned long>(n);
  std::vector<DyadicClass> classes = dyadic_classes(counts);

  const BigInt diffs = big(difference_set(a, a).size());
  const BigInt prods = big(product_set(a, a).size());
  const BigInt n = big(a.size());
  NBoundSelection out;
  out.constant = constant;
  out.scale = Rational(BigInt(diffs * diffs * prods), BigInt(n * n * n));
  const Rational limit = constant * out.scale;

  std::optional<std::size_t> best;
  std::optional<Rational> smallest;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (!meets_pigeonhole(classes[i], a.size(), energy)) continue;
    const Rational needed = Rational(classes[i].N) / out.scale;
    if (!smallest || needed < *smallest) smallest = needed;
    if (Rational(classes[i].N) > limit) continue;
    if (!best || classes[i].size_times_n_sq > classes[*best].size_times_n_sq) best = i;
  }
  if (!smallest) throw Error(ErrorCode::IdentityViolation, "no dyadic class meets the pigeonhole bound");
  out.smallest_admissible_constant = *smallest;
  if (!best) {
    throw Error(ErrorCode::NoAdmissibleClass, "constant " + constant.str() + " too small; needs at least " +
                                                  smallest->str());
  }
  const DyadicClass chosen = classes[*best];
  out.selection = select_from(chosen, energy, std::move(classes), true);
  return out;
}

std::vector<Point2> points_on_lines(const FiniteComplexSet& a, std::span<const GaussianRational> slopes) {
  const FiniteComplexSet wanted(std::vector<GaussianRational>(slopes.begin(), slopes.end()));
  std::vector<Point2> out;
  for (const auto& x : a) {
    if (x.is_zero()) continue;
    for (const auto& y : a) {
      if (wanted.contains(y / x)) out.push_back({x, y});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

std::vector<LineC> elekes_family(const FiniteComplexSet& a) {
  if (a.contains(GaussianRational(0))) throw Error(ErrorCode::ZeroElement, "Elekes family needs 0 not in A");
  const FiniteComplexSet diffs = difference_set(a, a);
  std::vector<LineC> lines;
  lines.reserve(diffs.size() * a.size());
  for (const auto& d : diffs) {
    for (const auto& denom : a) {
      const GaussianRational inv = GaussianRational(1) / denom;
      lines.push_back(LineC::with_slope(inv, d * inv));
    }
  }
  std::sort(lines.begin(), lines.end());
  const std::size_t expected = lines.size();
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  if (lines.size() != expected) throw Error(ErrorCode::IdentityViolation, "Elekes lines are not distinct");
  return lines;
}

ElekesContainment verify_elekes_containment(const FiniteComplexSet& a, Count t) {
  if (t < 1) throw Error(ErrorCode::BadParams, "richness threshold must be >= 1");
  const std::vector<LineC> lines = elekes_family(a);
  std::vector<WeightedLineFamily::Entry> entries;
  entries.reserve(lines.size());
  for (const auto& l : lines) entries.push_back({l, 1});
  const WeightedLineFamily family(std::move(entries));

  ElekesContainment out;
  out.t = t;
  for (const auto& [l, n] : ratio_counts(a)) {
    if (n < t) continue;
    ++out.rich_ratios;
    for (const auto& x : a) {
      const Point2 p{x, l};
      ++out.points_checked;
      const std::size_t k = family.lines_through(p);
      if (k < n || k < t) out.violations.push_back(p);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

TailRow tail_row(Count t, Count count, const BigInt& radicand) {
  BigInt t3;
  mpz_ui_pow_ui(t3.get_mpz_t(), t, 3);
  TailRow row;
  row.t = t;
  row.count = count;
  row.bound_quantity = sqrt_over_decimal(radicand, t3);
  row.ratio = over_sqrt_decimal(BigInt(BigInt(static_cast<unsigned long>(count)) * t3), radicand);
  return row;
}

}  // namespace

RichSumReport rich_sum_report(std::span<const Point2> p_in, std::span<const Point2> q_in,
                              std::span<const GaussianRational> slopes_in, Count t) {
  if (t < 1) throw Error(ErrorCode::BadParams, "richness threshold must be >= 1");
  std::vector<Point2> p(p_in.begin(), p_in.end());
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  std::vector<Point2> q(q_in.begin(), q_in.end());
  std::sort(q.begin(), q.end());
  q.erase(std::unique(q.begin(), q.end()), q.end());
  const FiniteComplexSet slopes(std::vector<GaussianRational>(slopes_in.begin(), slopes_in.end()));
  if (p.empty() || slopes.empty()) throw Error(ErrorCode::BadParams, "rich-sum report needs points and slopes");
  if (q.size() < p.size()) throw Error(ErrorCode::BadParams, "rich-sum report needs |Q| >= |P|");

  std::unordered_map<GaussianRational, Count> per_slope;
  for (const auto& pt : p) {
    if (pt.x.is_zero()) throw Error(ErrorCode::BadParams, "P point " + pt.str() + " has x = 0");
    GaussianRational l = pt.y / pt.x;
    if (!slopes.contains(l)) throw Error(ErrorCode::BadParams, "P point " + pt.str() + " is off the slope set");
    ++per_slope[l];
  }

  RichSumReport r;
  r.p_size = p.size();
  r.q_size = q.size();
  r.slope_count = slopes.size();
  r.t = t;
  for (const auto& [l, c] : per_slope) r.max_points_per_line = std::max(r.max_points_per_line, c);
  const Count cap = r.max_points_per_line;

  const WeightedLineFamily family = cap_weights(translated_family(slopes.elements(), q), cap);
  r.family_size = family.size();
  r.total_weight = family.total_weight();
  r.pair_bound = *family.pair_bound();

  std::unordered_map<Point2, Count, Point2Hash> reps;
  reps.reserve(p.size() * q.size());
  for (const auto& a : p) {
    for (const auto& b : q) ++reps[a + b];
  }
  r.sum_count = reps.size();

  Count at_least_t = 0;
  for (const auto& [x, n] : reps) {
    const std::vector<std::size_t> through = family.indices_through(x);
    Count m = 0;
    for (std::size_t i : through) m += family.entries()[i].weight;
    r.max_lines_through_sum = std::max(r.max_lines_through_sum, through.size());
    if (n > m) r.multiplicity_violations.push_back(x);
    if (through.size() > slopes.size()) r.line_count_violations.push_back(x);
    if (n > cap && through.size() < 2) r.heavy_single_line_violations.push_back(x);
    if (n >= t) ++at_least_t;
  }
  std::sort(r.multiplicity_violations.begin(), r.multiplicity_violations.end());
  std::sort(r.line_count_violations.begin(), r.line_count_violations.end());
  std::sort(r.heavy_single_line_violations.begin(), r.heavy_single_line_violations.end());

  // |L|^3 |Q|^5 under the square root.
  BigInt l3, q5;
  mpz_ui_pow_ui(l3.get_mpz_t(), slopes.size(), 3);
  mpz_ui_pow_ui(q5.get_mpz_t(), q.size(), 5);
  const BigInt radicand = l3 * q5;
  r.at_t = tail_row(t, at_least_t, radicand);
  for (Count s = cap; s >= 1 && s <= p.size(); s *= 2) {
    Count c = 0;
    for (const auto& [x, n] : reps) c += (n >= s) ? 1 : 0;
    r.sweep.push_back(tail_row(s, c, radicand));
  }
  return r;
}

std::vector<WeightRow> weight_distribution_report(const WeightedLineFamily& family, std::size_t q_size, Count t) {
  if (t < 1) throw Error(ErrorCode::BadParams, "weight threshold must be >= 1");
  if (q_size < 1) throw Error(ErrorCode::BadParams, "weight report needs |Q| >= 1");
  const BigInt q_sq = big(q_size) * big(q_size);
  const Count top = family.max_weight();
  std::vector<WeightRow> rows;
  for (Count s = t;; s *= 2) {
    WeightRow row;
    row.t = s;
    for (const auto& e : family.entries()) {
      if (e.weight >= s) {
        ++row.count;
        row.weight += e.weight;
      }
    }
    const BigInt s_big(static_cast<unsigned long>(s));
    row.count_bound = to_decimal(Rational(q_sq, BigInt(s_big * s_big * s_big)));
    row.count_ratio = to_decimal(Rational(BigInt(BigInt(static_cast<unsigned long>(row.count)) * s_big * s_big * s_big), q_sq));
    row.weight_bound = to_decimal(Rational(q_sq, BigInt(s_big * s_big)));
    row.weight_ratio = to_decimal(Rational(BigInt(BigInt(static_cast<unsigned long>(row.weight)) * s_big * s_big), q_sq));
    if (!rows.empty()) {
      const WeightRow& prev = rows.back();
      if (prev.count > 0 && row.count > 0) {
        row.count_exponent = log2_ratio_decimal(BigInt(static_cast<unsigned long>(row.count)),
                                                BigInt(static_cast<unsigned long>(prev.count)));
      }
      if (prev.weight > 0 && row.weight > 0) {
        row.weight_exponent = log2_ratio_decimal(BigInt(static_cast<unsigned long>(row.weight)),
                                                 BigInt(static_cast<unsigned long>(prev.weight)));
      }
    }
    rows.push_back(std::move(row));
    if (s > top / 2) break;
  }
  return rows;
}

std::string tail_csv(const std::vector<TailRow>& rows) {
  std::ostringstream out;
  out << "t,count,bound_quantity,ratio\n";
  for (const auto& r : rows) out << r.t << ',' << r.count << ',' << r.bound_quantity << ',' << r.ratio << '\n';
  return out.str();
}

std::string weight_csv(const std::vector<WeightRow>& rows) {
  std::ostringstream out;
  out << "t,count,bound_quantity,ratio,weight,weight_bound,weight_ratio,count_exponent,weight_exponent\n";
  for (const auto& r : rows) {
    out << r.t << ',' << r.count << ',' << r.count_bound << ',' << r.count_ratio << ',' << r.weight << ','
        << r.weight_bound << ',' << r.weight_ratio << ',' << r.count_exponent << ',' << r.weight_exponent << '\n';
  }
  return out.str();
}

nlohmann::ordered_json to_json(const RichSumReport& r) {
  auto points = [](const std::vector<Point2>& v) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& p : v) arr.push_back({p.x.str(), p.y.str()});
    return arr;
  };
  auto row = [](const TailRow& t) {
    return nlohmann::ordered_json{{"t", std::to_string(t.t)},
                                  {"count", std::to_string(t.count)},
                                  {"bound_quantity", t.bound_quantity},
                                  {"ratio", t.ratio}};
  };
  nlohmann::ordered_json j;
  j["p_size"] = std::to_string(r.p_size);
  j["q_size"] = std::to_string(r.q_size);
  j["slope_count"] = std::to_string(r.slope_count);
  j["family_size"] = std::to_string(r.family_size);
  j["max_points_per_line"] = std::to_string(r.max_points_per_line);
  j["total_weight"] = std::to_string(r.total_weight);
  j["pair_bound"] = std::to_string(r.pair_bound);
  j["sum_count"] = std::to_string(r.sum_count);
  j["max_lines_through_sum"] = std::to_string(r.max_lines_through_sum);
  j["multiplicity_violations"] = points(r.multiplicity_violations);
  j["line_count_violations"] = points(r.line_count_violations);
  j["heavy_single_line_violations"] = points(r.heavy_single_line_violations);
  j["at_t"] = row(r.at_t);
  nlohmann::ordered_json sweep = nlohmann::ordered_json::array();
  for (const auto& s : r.sweep) sweep.push_back(row(s));
  j["sweep"] = std::move(sweep);
  j["contracts_hold"] = r.contracts_hold();
  return j;
}

// ---------------------------------------------------------------------------

WeightedLineFamily read_family(std::istream& in) {
  std::vector<WeightedLineFamily::Entry> entries;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string s; fields >> s;) tok.push_back(s);
    if (tok.empty()) continue;
    try {
      auto weight_of = [&](const std::string& s) {
        const Rational w = Rational::parse(s);
        if (!w.is_integer() || w.sign() <= 0 || !w.numerator().fits_ulong_p()) fail("weight must be a positive integer");
        return static_cast<Count>(w.numerator().get_ui());
      };
      if (tok[0] == "V") {
        if (tok.size() != 4) fail("expected 'V x_re x_im weight'");
        entries.push_back({LineC::vertical({Rational::parse(tok[1]), Rational::parse(tok[2])}), weight_of(tok[3])});
      } else {
        if (tok.size() != 5) fail("expected 'slope_re slope_im intercept_re intercept_im weight'");
        entries.push_back({LineC::with_slope({Rational::parse(tok[0]), Rational::parse(tok[1])},
                                             {Rational::parse(tok[2]), Rational::parse(tok[3])}),
                           weight_of(tok[4])});
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ParseError) throw;
      fail(e.what());
    }
  }
  return WeightedLineFamily(std::move(entries));
}

void write_family(std::ostream& out, const WeightedLineFamily& family) {
  for (const auto& e : family.entries()) {
    const LineC& l = e.line;
    if (l.is_vertical()) {
      out << "V " << l.intercept().re() << ' ' << l.intercept().im() << ' ' << e.weight << '\n';
    } else {
      out << l.slope().re() << ' ' << l.slope().im() << ' ' << l.intercept().re() << ' ' << l.intercept().im() << ' '
          << e.weight << '\n';
    }
  }
}

}  // namespace sumprod::incidence
