#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>

#include "sumprod/rational.hpp"

namespace sumprod {

/// Decides coeff * log2(n) >= rhs. Exact when n is a power of two; otherwise
/// log2(n) is irrational, equality is impossible, and directed-rounding
/// intervals are refined until they separate.
bool times_log2_at_least(const BigInt& coeff, std::uint64_t n, const BigInt& rhs);

/// Outcome of scale * (sum_i k_i^{3/2})^2 <= bound.
struct ThreeHalvesComparison {
  bool holds = false;
  /// "exact" when the sum collapses to a single radical, else "interval".
  std::string method;
  long precision_bits = 0;
  /// Enclosure of scale * (sum k^{3/2})^2, 12 significant digits each.
  std::string value_lower;
  std::string value_upper;
};

ThreeHalvesComparison compare_three_halves_sum(std::span<const std::uint64_t> ks, const BigInt& scale,
                                               const BigInt& bound);

/// Writes k = s^2 * r with r squarefree; returns {s, r}.
std::pair<std::uint64_t, std::uint64_t> squarefree_split(std::uint64_t k);

/// Round-to-nearest decimal with `digits` significant digits.
std::string to_decimal(const Rational& value, int digits = 12);

/// numer / base^(p/q) as a decimal.
std::string power_ratio_decimal(const BigInt& numer, std::uint64_t base, long p, long q, int digits = 12);

/// sqrt(radicand) / denom as a decimal.
std::string sqrt_over_decimal(const BigInt& radicand, const BigInt& denom, int digits = 12);

/// numer / sqrt(radicand) as a decimal.
std::string over_sqrt_decimal(const BigInt& numer, const BigInt& radicand, int digits = 12);

/// log2(numer / denom) as a decimal; both must be positive.
std::string log2_ratio_decimal(const BigInt& numer, const BigInt& denom, int digits = 12);

}  // namespace sumprod
