#include "sumprod/energy.hpp"

#include <algorithm>

namespace sumprod::energy {

namespace {

BigInt big(std::size_t v) { return BigInt(static_cast<unsigned long>(v)); }

BigInt additive_energy_value(const FiniteComplexSet& a, const FiniteComplexSet& b) {
  return power_sum(representation_counts(a, b, SetOp::Diff), 2);
}

void require_nonempty(const FiniteComplexSet& a, const char* what) {
  if (a.empty()) throw Error(ErrorCode::EmptySet, std::string(what) + " needs a nonempty set");
}

EnergyReport make_report(std::string kind, RepCountMap counts, unsigned long power) {
  EnergyReport r;
  r.kind = std::move(kind);
  r.energy_value = power_sum(counts, power);
  r.per_value_counts = std::move(counts);
  return r;
}

void attach_bound(EnergyReport& r, Rational bound) {
  r.bound_applies = true;
  r.lower_bound_rhs = std::move(bound);
  r.slack = Rational(r.energy_value) - r.lower_bound_rhs;
}

}  // namespace

BigInt power_sum(const RepCountMap& counts, unsigned long power) {
  BigInt total = 0;
  BigInt term;
  for (const auto& [value, n] : counts) {
    mpz_ui_pow_ui(term.get_mpz_t(), n, power);
    total += term;
  }
  return total;
}

EnergyReport additive_energy(const FiniteComplexSet& a, const FiniteComplexSet& b) {
  require_nonempty(a, "additive energy");
  require_nonempty(b, "additive energy");
  EnergyReport r = make_report("additive", representation_counts(a, b, SetOp::Diff), 2);
  const RepCountMap sums = representation_counts(a, b, SetOp::Sum);
  const BigInt from_sums = power_sum(sums, 2);
  if (from_sums != r.energy_value) {
    throw Error(ErrorCode::IdentityViolation,
                "difference-side energy " + r.energy_value.get_str() + " != sum-side " + from_sums.get_str());
  }
  const std::size_t smallest = std::min(r.per_value_counts.size(), sums.size());
  attach_bound(r, Rational(big(a.size()) * big(a.size()) * big(b.size()) * big(b.size()), big(smallest)));
  return r;
}

EnergyReport multiplicative_energy(const FiniteComplexSet& a) {
  require_nonempty(a, "multiplicative energy");
  if (a.contains(GaussianRational(0))) throw Error(ErrorCode::ZeroElement, "multiplicative energy with 0 in A");
  EnergyReport r = make_report("multiplicative", representation_counts(a, a, SetOp::Ratio), 2);
  const BigInt n = big(a.size());
  attach_bound(r, Rational(BigInt(n * n * n * n), big(product_set(a, a).size())));
  return r;
}

EnergyReport cubic_energy(const FiniteComplexSet& a) {
  require_nonempty(a, "cubic energy");
  return make_report("cubic", representation_counts(a, a, SetOp::Diff), 3);
}

SliceSet slice(const FiniteComplexSet& a, const GaussianRational& d) {
  std::vector<GaussianRational> members;
  for (const auto& x : a) {
    if (a.contains(x + d)) members.push_back(x);
  }
  return {d, FiniteComplexSet(std::move(members))};
}

IdentityCheck verify_e3_identity(const FiniteComplexSet& a) {
  require_nonempty(a, "E3 identity");
  IdentityCheck check;
  const RepCountMap diffs = representation_counts(a, a, SetOp::Diff);
  check.lhs = power_sum(diffs, 3);
  check.rhs = 0;
  for (const auto& [d, n] : diffs) check.rhs += additive_energy_value(a, slice(a, d).members);
  check.holds = check.lhs == check.rhs;
  if (!check.holds) {
    throw Error(ErrorCode::IdentityViolation,
                "E3 = " + check.lhs.get_str() + " but sum of E(A, A_d) = " + check.rhs.get_str());
  }
  return check;
}

FiniteComplexSet popular_differences(const FiniteComplexSet& a) {
  require_nonempty(a, "popular differences");
  const RepCountMap diffs = representation_counts(a, a, SetOp::Diff);
  const BigInt n_sq = big(a.size()) * big(a.size());
  const BigInt twice_d = 2 * big(diffs.size());
  std::vector<GaussianRational> popular;
  for (const auto& [d, count] : diffs) {
    // |A_d| = n(d); compare 2|A-A| n(d) >= |A|^2.
    if (BigInt(twice_d * static_cast<unsigned long>(count)) >= n_sq) popular.push_back(d);
  }
  return FiniteComplexSet(std::move(popular));
}

Lemma31Report verify_lemma_31(const FiniteComplexSet& a, const FiniteComplexSet& subset) {
  require_nonempty(a, "slice bound");
  if (subset.empty()) throw Error(ErrorCode::BadParams, "D' must be nonempty");
  const FiniteComplexSet diffs = difference_set(a, a);
  if (!subset.is_subset_of(diffs)) throw Error(ErrorCode::BadParams, "D' is not a subset of A-A");

  Lemma31Report r;
  r.subset_size = subset.size();
  r.cubic_energy = cubic_energy(a).energy_value;
  r.set_size_sq = big(a.size()) * big(a.size());
  r.lhs = 0;
  std::vector<std::uint64_t> slice_sizes;
  slice_sizes.reserve(subset.size());
  for (const auto& d : subset) {
    const SliceSet s = slice(a, d);
    slice_sizes.push_back(s.members.size());
    r.lhs += big(s.members.size()) * big(difference_set(a, s.members).size());
  }
  r.comparison = compare_three_halves_sum(slice_sizes, r.set_size_sq, BigInt(r.cubic_energy * r.lhs));
  r.holds = r.comparison.holds;
  return r;
}

IdentityCheck verify_katz_koester(const FiniteComplexSet& a) {
  require_nonempty(a, "Katz-Koester bound");
  const FiniteComplexSet diffs = difference_set(a, a);
  IdentityCheck check;
  check.lhs = additive_energy_value(a, diffs);
  check.rhs = 0;
  for (const auto& d : diffs) {
    const SliceSet s = slice(a, d);
    check.rhs += big(s.members.size()) * big(difference_set(a, s.members).size());
  }
  check.holds = check.lhs >= check.rhs;
  return check;
}

Corollary5Report verify_corollary_5(const FiniteComplexSet& a) {
  if (a.size() < 2) throw Error(ErrorCode::BadParams, "corollary check needs |A| >= 2");
  const FiniteComplexSet diffs = difference_set(a, a);
  Corollary5Report r;
  r.lhs = cubic_energy(a).energy_value * additive_energy_value(a, diffs);
  BigInt n8;
  mpz_ui_pow_ui(n8.get_mpz_t(), a.size(), 8);
  r.rhs = Rational(n8, 16 * big(diffs.size()));
  r.holds = Rational(r.lhs) >= r.rhs;
  r.observed_ratio = to_decimal(Rational(r.lhs) / r.rhs);
  return r;
}

CauchySchwarzCheck verify_additive_cauchy_schwarz(const FiniteComplexSet& a, const FiniteComplexSet& b) {
  const BigInt e = additive_energy_value(a, b);
  const BigInt target = big(a.size()) * big(a.size()) * big(b.size()) * big(b.size());
  CauchySchwarzCheck check;
  check.difference_side = BigInt(e * big(difference_set(a, b).size())) >= target;
  check.sum_side = BigInt(e * big(sumset(a, b).size())) >= target;
  return check;
}

bool verify_multiplicative_cauchy_schwarz(const FiniteComplexSet& a) {
  const EnergyReport r = multiplicative_energy(a);
  const BigInt n = big(a.size());
  return BigInt(r.energy_value * big(product_set(a, a).size())) >= BigInt(n * n * n * n);
}

nlohmann::ordered_json to_json(const EnergyReport& report) {
  nlohmann::ordered_json counts = nlohmann::ordered_json::array();
  for (const auto& [value, n] : report.per_value_counts) {
    counts.push_back({value.str(), std::to_string(n)});
  }
  nlohmann::ordered_json j;
  j["kind"] = report.kind;
  j["energy_value"] = report.energy_value.get_str();
  j["bound_applies"] = report.bound_applies;
  j["lower_bound_rhs"] = report.lower_bound_rhs.str();
  j["slack"] = report.slack.str();
  j["per_value_counts"] = std::move(counts);
  return j;
}

nlohmann::ordered_json to_json(const Lemma31Report& report) {
  nlohmann::ordered_json j;
  j["lhs"] = report.lhs.get_str();
  j["cubic_energy"] = report.cubic_energy.get_str();
  j["set_size_sq"] = report.set_size_sq.get_str();
  j["subset_size"] = std::to_string(report.subset_size);
  j["method"] = report.comparison.method;
  j["precision_bits"] = report.comparison.precision_bits;
  j["scaled_square_lower"] = report.comparison.value_lower;
  j["scaled_square_upper"] = report.comparison.value_upper;
  j["holds"] = report.holds;
  return j;
}

nlohmann::ordered_json to_json(const Corollary5Report& report) {
  nlohmann::ordered_json j;
  j["lhs"] = report.lhs.get_str();
  j["rhs"] = report.rhs.str();
  j["holds"] = report.holds;
  j["observed_ratio"] = report.observed_ratio;
  return j;
}

}  // namespace sumprod::energy
