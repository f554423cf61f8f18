#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "sumprod/set_core.hpp"

namespace sumprod::incidence {

/// A point of C^2.
struct Point2 {
  GaussianRational x;
  GaussianRational y;

  friend bool operator==(const Point2&, const Point2&) = default;
  friend std::strong_ordering operator<=>(const Point2&, const Point2&) = default;
  Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
  Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
  Point2 operator-() const { return {-x, -y}; }
  std::size_t hash() const noexcept;
  std::string str() const;
};

struct Point2Hash {
  std::size_t operator()(const Point2& p) const noexcept { return p.hash(); }
};

/// Line in C^2, either y = slope*x + intercept or the vertical x = c. The
/// representation is canonical, so equality is line equality.
class LineC {
 public:
  static LineC with_slope(GaussianRational slope, GaussianRational intercept);
  static LineC vertical(GaussianRational x);
  /// The line of the given slope through p.
  static LineC through(const GaussianRational& slope, const Point2& p);
  /// y = slope*x
  static LineC origin(const GaussianRational& slope) { return with_slope(slope, GaussianRational(0)); }

  bool is_vertical() const noexcept { return vertical_; }
  /// Meaningless (zero) for vertical lines.
  const GaussianRational& slope() const noexcept { return slope_; }
  /// The intercept, or the constant x of a vertical line.
  const GaussianRational& intercept() const noexcept { return intercept_; }

  bool contains(const Point2& p) const;
  /// Single intersection point; nullopt for parallel or identical lines.
  std::optional<Point2> intersect(const LineC& other) const;

  friend bool operator==(const LineC&, const LineC&) = default;
  /// Non-vertical lines first, then (slope, intercept).
  friend std::strong_ordering operator<=>(const LineC& a, const LineC& b) {
    if (a.vertical_ != b.vertical_) return a.vertical_ ? std::strong_ordering::greater : std::strong_ordering::less;
    if (auto c = a.slope_ <=> b.slope_; c != 0) return c;
    return a.intercept_ <=> b.intercept_;
  }

  std::size_t hash() const noexcept;
  std::string str() const;

 private:
  LineC(bool vertical, GaussianRational slope, GaussianRational intercept)
      : vertical_(vertical), slope_(std::move(slope)), intercept_(std::move(intercept)) {}

  bool vertical_ = false;
  GaussianRational slope_;
  GaussianRational intercept_;
};

struct LineHash {
  std::size_t operator()(const LineC& l) const noexcept { return l.hash(); }
};

// ---------------------------------------------------------------------------
// Plain incidences

struct IncidenceCounts {
  Count total = 0;
  std::vector<Count> per_point;
  std::vector<Count> per_line;
};

/// Hashed count: lines are grouped by slope and each point looks up the
/// intercept it would need. Points are split into `partitions` contiguous
/// chunks counted on separate threads; the merge is exact addition.
IncidenceCounts incidences(std::span<const Point2> points, std::span<const LineC> lines, unsigned partitions = 1);

/// O(|P||L|) double loop, used as the oracle for the hashed path.
IncidenceCounts incidences_naive(std::span<const Point2> points, std::span<const LineC> lines);

/// Points incident to at least t lines (t >= 1).
std::vector<Point2> rich_points(std::span<const Point2> points, std::span<const LineC> lines, Count t);
/// Lines incident to at least t points (t >= 1).
std::vector<LineC> rich_lines(std::span<const Point2> points, std::span<const LineC> lines, Count t);

// ---------------------------------------------------------------------------
// Weighted families

class WeightedLineFamily {
 public:
  struct Entry {
    LineC line;
    Count weight;
  };

  WeightedLineFamily() = default;
  /// Weights must be >= 1; repeated lines have their weights added.
  explicit WeightedLineFamily(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  Count total_weight() const noexcept { return total_; }
  Count max_weight() const noexcept;
  std::optional<Count> cap() const noexcept { return cap_; }
  /// |L||Q| for translated families.
  std::optional<Count> pair_bound() const noexcept { return pair_bound_; }

  /// 0 when the line is not in the family.
  Count weight_of(const LineC& line) const;
  /// Number of family lines through p.
  std::size_t lines_through(const Point2& p) const;
  /// m(p): total weight of the family lines through p.
  Count weight_through(const Point2& p) const;
  /// Indices into entries() of the lines through p.
  std::vector<std::size_t> indices_through(const Point2& p) const;

 private:
  friend WeightedLineFamily cap_weights(const WeightedLineFamily& family, Count cap);
  friend WeightedLineFamily translated_family(std::span<const GaussianRational> slopes, std::span<const Point2> q);

  void build_index();

  std::vector<Entry> entries_;
  Count total_ = 0;
  std::optional<Count> cap_;
  std::optional<Count> pair_bound_;
  // slope -> intercept -> entry index; verticals keyed by their x.
  std::unordered_map<GaussianRational, std::unordered_map<GaussianRational, std::size_t>> by_slope_;
  std::unordered_map<GaussianRational, std::size_t> verticals_;
};

/// sum over incident pairs (p, l) of m(l).
Count weighted_incidences(std::span<const Point2> points, const WeightedLineFamily& family);

/// Lines of every slope in `slopes` through every point of q, deduplicated;
/// m(l) = number of points of q on l.
WeightedLineFamily translated_family(std::span<const GaussianRational> slopes, std::span<const Point2> q);

/// m(l) <- min(m(l), cap); throws IdentityViolation if W exceeds |L||Q|.
WeightedLineFamily cap_weights(const WeightedLineFamily& family, Count cap);

/// Pairwise intersections of family lines with m(x) = weight through x.
std::vector<std::pair<Point2, Count>> intersection_points(const WeightedLineFamily& family);

// ---------------------------------------------------------------------------
// Popular lines through A x A

/// Lines through the origin with n(l) in (N/2, N].
struct DyadicClass {
  Count N = 0;
  std::vector<GaussianRational> slopes;
  /// sum of n(l)^2 over the class
  BigInt energy_contribution;
  /// |L| N^2
  BigInt size_times_n_sq;
};

struct PopularLineSelection {
  Count N = 0;
  std::vector<GaussianRational> slopes;
  BigInt energy_contribution;
  BigInt multiplicative_energy;
  /// |L| N^2 >= E_*(A) / (2 log2 |A|), decided exactly.
  bool pigeonhole_bound_holds = false;
  std::vector<DyadicClass> classes;
};

/// Dyadic class maximising |L| N^2 (ties to the smaller N).
PopularLineSelection popular_lines(const FiniteComplexSet& a);

struct RatioPopularLines {
  /// |A|^2 / (2 |A:A|)
  Rational threshold;
  std::vector<GaussianRational> slopes;
  Count supported_points = 0;
  Count max_points_per_line = 0;
};

/// Origin lines with n(l) >= |A|^2 / (2|A:A|).
RatioPopularLines popular_lines_ratio(const FiniteComplexSet& a);

struct NBoundSelection {
  PopularLineSelection selection;
  Rational constant;
  /// |A-A|^2 |A.A| / |A|^3
  Rational scale;
  /// N / scale minimised over the classes meeting the pigeonhole bound.
  Rational smallest_admissible_constant;
};

/// Restricts the class search to N <= constant * |A-A|^2|A.A|/|A|^3.
/// Throws NoAdmissibleClass (message carries the constant needed).
NBoundSelection select_popular_with_N_bound(const FiniteComplexSet& a, const Rational& constant = Rational(4));

/// {(x, y) in A x A : y/x in slopes}, sorted.
std::vector<Point2> points_on_lines(const FiniteComplexSet& a, std::span<const GaussianRational> slopes);

/// n(l) for every l in A:A (l = y/x).
RepCountMap ratio_counts(const FiniteComplexSet& a);

// ---------------------------------------------------------------------------
// Line family y = (d + x)/a, d in A-A, a in A

std::vector<LineC> elekes_family(const FiniteComplexSet& a);

struct ElekesContainment {
  Count t = 0;
  std::size_t rich_ratios = 0;
  std::size_t points_checked = 0;
  /// (a, l) points incident to fewer than n(l) family lines.
  std::vector<Point2> violations;
  bool holds() const { return violations.empty(); }
};

/// Checks A x L_t inside P_t, with L_t = {l : n(l) >= t} and P_t the points
/// on at least t family lines.
ElekesContainment verify_elekes_containment(const FiniteComplexSet& a, Count t);

// ---------------------------------------------------------------------------
// Reports

struct TailRow {
  Count t = 0;
  Count count = 0;
  std::string bound_quantity;
  std::string ratio;
};

struct RichSumReport {
  std::size_t p_size = 0;
  std::size_t q_size = 0;
  std::size_t slope_count = 0;
  std::size_t family_size = 0;
  Count max_points_per_line = 0;
  Count total_weight = 0;
  Count pair_bound = 0;
  std::size_t sum_count = 0;
  std::size_t max_lines_through_sum = 0;
  /// x with n(x) > m(x)
  std::vector<Point2> multiplicity_violations;
  /// x on more than |L| family lines
  std::vector<Point2> line_count_violations;
  /// x with n(x) > N but on a single family line
  std::vector<Point2> heavy_single_line_violations;
  Count t = 0;
  /// |{x : n(x) >= t}| against |L|^{3/2}|Q|^{5/2}/t^3
  TailRow at_t;
  /// Same quantity for t = N, 2N, 4N, ... up to |P|.
  std::vector<TailRow> sweep;

  bool contracts_hold() const {
    return multiplicity_violations.empty() && line_count_violations.empty() &&
           heavy_single_line_violations.empty() && total_weight <= pair_bound;
  }
};

/// Requires |Q| >= |P| and every point of P on an origin line of `slopes`.
RichSumReport rich_sum_report(std::span<const Point2> p, std::span<const Point2> q,
                              std::span<const GaussianRational> slopes, Count t);

struct WeightRow {
  Count t = 0;
  Count count = 0;
  Count weight = 0;
  std::string count_bound;
  std::string count_ratio;
  std::string weight_bound;
  std::string weight_ratio;
  /// log2 slopes against the previous row; empty on the first row or when a count is 0.
  std::string count_exponent;
  std::string weight_exponent;
};

/// |L_t| and W(L_t) for t, 2t, 4t, ... up to the maximum weight, compared
/// with |Q|^2/t^3 and |Q|^2/t^2.
std::vector<WeightRow> weight_distribution_report(const WeightedLineFamily& family, std::size_t q_size, Count t);

std::string tail_csv(const std::vector<TailRow>& rows);
std::string weight_csv(const std::vector<WeightRow>& rows);
nlohmann::ordered_json to_json(const RichSumReport& report);

// ---------------------------------------------------------------------------
// Line-family files: "slope_re slope_im intercept_re intercept_im weight" or
// "V x_re x_im weight" per line.

WeightedLineFamily read_family(std::istream& in);
void write_family(std::ostream& out, const WeightedLineFamily& family);

}  // namespace sumprod::incidence
