#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sumprod/gaussian.hpp"

namespace sumprod {

using Count = std::uint64_t;

/// Finite set of Gaussian rationals. Elements are distinct and kept in
/// lexicographic (re, im) order, so iteration is deterministic.
class FiniteComplexSet {
 public:
  FiniteComplexSet() = default;
  FiniteComplexSet(std::initializer_list<GaussianRational> elements);
  explicit FiniteComplexSet(std::vector<GaussianRational> elements);

  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  bool contains(const GaussianRational& z) const;

  const std::vector<GaussianRational>& elements() const noexcept { return elements_; }
  auto begin() const noexcept { return elements_.begin(); }
  auto end() const noexcept { return elements_.end(); }
  const GaussianRational& operator[](std::size_t i) const { return elements_[i]; }

  /// c*A
  FiniteComplexSet dilate(const GaussianRational& c) const;
  /// A + c
  FiniteComplexSet translate(const GaussianRational& c) const;
  bool is_subset_of(const FiniteComplexSet& other) const;

  friend bool operator==(const FiniteComplexSet&, const FiniteComplexSet&) = default;

 private:
  std::vector<GaussianRational> elements_;
};

enum class SetOp { Sum, Diff, Prod, Ratio };

/// n(v) for every value v of a binary set operation, sorted by v.
class RepCountMap {
 public:
  using Entry = std::pair<GaussianRational, Count>;

  RepCountMap() = default;
  explicit RepCountMap(std::vector<Entry> sorted_entries) : entries_(std::move(sorted_entries)) {}

  /// 0 when v is not a key.
  Count at(const GaussianRational& v) const;
  std::size_t size() const noexcept { return entries_.size(); }
  Count total() const;
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }
  FiniteComplexSet support() const;

 private:
  std::vector<Entry> entries_;
};

FiniteComplexSet sumset(const FiniteComplexSet& a, const FiniteComplexSet& b);
FiniteComplexSet difference_set(const FiniteComplexSet& a, const FiniteComplexSet& b);
FiniteComplexSet product_set(const FiniteComplexSet& a, const FiniteComplexSet& b);
/// Throws ZeroInRatioDenominator if 0 is in b.
FiniteComplexSet ratio_set(const FiniteComplexSet& a, const FiniteComplexSet& b);

RepCountMap representation_counts(const FiniteComplexSet& a, const FiniteComplexSet& b, SetOp op);

/// |tan(2 arg z)| < epsilon for every z, decided with rational arithmetic:
/// with t = im/re we need re > 0, |t| < 1 and 2|t|/(1 - t^2) < epsilon.
/// Throws ZeroElement if 0 is in the set.
bool sector_check(const FiniteComplexSet& a, const Rational& epsilon);
bool in_sector(const GaussianRational& z, const Rational& epsilon);

// ---------------------------------------------------------------------------
// Generators

enum class GeneratorKind { Arithmetic, Geometric, ComplexLattice, RandomSector, RandomGaussian };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Arithmetic;
  std::size_t n = 2;
  GaussianRational start = 1;
  /// Common difference (arithmetic) or common ratio (geometric).
  GaussianRational step = 1;
  Rational epsilon = Rational(1, 100);
  std::uint64_t seed = 0;
};

/// Deterministic for a fixed spec. Never produces 0; throws BadParams when
/// the spec cannot yield n distinct nonzero elements.
FiniteComplexSet generate(const GeneratorSpec& spec);

const char* to_string(GeneratorKind kind) noexcept;
/// "arithmetic"/"ap", "geometric"/"gp", "lattice", "sector", "random".
GeneratorKind parse_generator_kind(const std::string& name);

/// SplitMix64; a fixed, portable stream so seeds replay bit-exactly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);

 private:
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Set files: one element per line, "<re> <im>" with each part "p/q" or "p",
// a missing im means 0, '#' starts a comment.

FiniteComplexSet read_set(std::istream& in);
FiniteComplexSet parse_set(const std::string& text);
FiniteComplexSet load_set(const std::string& path);
void write_set(std::ostream& out, const FiniteComplexSet& a);
std::string format_set(const FiniteComplexSet& a);

}  // namespace sumprod
