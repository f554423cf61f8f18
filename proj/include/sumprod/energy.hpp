#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "sumprod/numeric.hpp"
#include "sumprod/set_core.hpp"

namespace sumprod::energy {

/// Energy value with the representation counts it was summed from and the
/// Cauchy-Schwarz style lower bound it is checked against.
struct EnergyReport {
  std::string kind;
  BigInt energy_value;
  RepCountMap per_value_counts;
  /// False when no lower bound is attached (cubic energy).
  bool bound_applies = false;
  Rational lower_bound_rhs;
  Rational slack;
};

/// E(A,B) = sum_{d in A-B} n(d)^2. The same value is recomputed from the
/// sum side and a mismatch throws IdentityViolation. The attached bound is
/// |A|^2|B|^2 / min(|A-B|, |A+B|).
EnergyReport additive_energy(const FiniteComplexSet& a, const FiniteComplexSet& b);

/// E_*(A) = sum_{l in A:A} n(l)^2 with bound |A|^4/|A.A|. Throws ZeroElement.
EnergyReport multiplicative_energy(const FiniteComplexSet& a);

/// E_3(A) = sum_{d in A-A} n(d)^3.
EnergyReport cubic_energy(const FiniteComplexSet& a);

/// sum n(v)^power
BigInt power_sum(const RepCountMap& counts, unsigned long power);

struct SliceSet {
  GaussianRational d;
  FiniteComplexSet members;
};

/// A_d = {a in A : a + d in A}; empty when d is not a difference.
SliceSet slice(const FiniteComplexSet& a, const GaussianRational& d);

struct IdentityCheck {
  BigInt lhs;
  BigInt rhs;
  bool holds = false;
};

/// E_3(A) against sum_{d in A-A} E(A, A_d). Throws IdentityViolation when they
/// disagree; the returned check always holds.
IdentityCheck verify_e3_identity(const FiniteComplexSet& a);

/// D' = {d in A-A : |A_d| >= |A|^2 / (2|A-A|)}.
FiniteComplexSet popular_differences(const FiniteComplexSet& a);

struct Lemma31Report {
  /// sum_{d in D'} |A_d| |A - A_d|
  BigInt lhs;
  BigInt cubic_energy;
  BigInt set_size_sq;
  std::size_t subset_size = 0;
  /// |A|^2 (sum |A_d|^{3/2})^2 <= E_3(A) * lhs, decided exactly or by
  /// certified intervals.
  ThreeHalvesComparison comparison;
  bool holds = false;
};

/// Requires D' nonempty and D' subset of A-A (BadParams otherwise).
Lemma31Report verify_lemma_31(const FiniteComplexSet& a, const FiniteComplexSet& subset);

/// E(A, A-A) >= sum_{d in A-A} |A_d| |A - A_d|.
IdentityCheck verify_katz_koester(const FiniteComplexSet& a);

struct Corollary5Report {
  /// E_3(A) * E(A, A-A)
  BigInt lhs;
  /// |A|^8 / (16 |A-A|)
  Rational rhs;
  bool holds = false;
  /// lhs / rhs, 12 significant digits.
  std::string observed_ratio;
};

/// Requires |A| >= 2.
Corollary5Report verify_corollary_5(const FiniteComplexSet& a);

/// Cauchy-Schwarz checks E(A,B)|A-B| >= |A|^2|B|^2 and E(A,B)|A+B| >= |A|^2|B|^2.
struct CauchySchwarzCheck {
  bool difference_side = false;
  bool sum_side = false;
  bool holds() const { return difference_side && sum_side; }
};
CauchySchwarzCheck verify_additive_cauchy_schwarz(const FiniteComplexSet& a, const FiniteComplexSet& b);
/// E_*(A)|A.A| >= |A|^4.
bool verify_multiplicative_cauchy_schwarz(const FiniteComplexSet& a);

nlohmann::ordered_json to_json(const EnergyReport& report);
nlohmann::ordered_json to_json(const Lemma31Report& report);
nlohmann::ordered_json to_json(const Corollary5Report& report);

}  // namespace sumprod::energy
