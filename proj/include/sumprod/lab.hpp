#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sumprod/geometry.hpp"
#include "sumprod/set_core.hpp"

namespace sumprod::lab {

struct RatioEntry {
  std::string name;
  /// Exact integer numerator, e.g. |A+A| + |A:A|.
  BigInt numerator;
  /// Exponent of |A| in the denominator, as "p/q".
  std::string exponent;
  /// numerator / |A|^exponent to 12 significant digits.
  std::string value;
};

struct BoundReport {
  std::string set_id;
  std::size_t n = 0;
  std::size_t sumset = 0;
  std::size_t diffset = 0;
  std::size_t prodset = 0;
  std::size_t ratioset = 0;
  BigInt additive_energy;
  BigInt multiplicative_energy;
  BigInt cubic_energy;
  std::vector<RatioEntry> ratios;
};

/// Throws ZeroElement when 0 is in A, EmptySet for the empty set.
BoundReport bound_report(const FiniteComplexSet& a, std::string set_id);
nlohmann::ordered_json to_json(const BoundReport& report);
std::string bound_csv_header();
std::string bound_csv_row(const BoundReport& report);

// ---------------------------------------------------------------------------
// Families

/// "<kind>[:<lo>-<hi>]" or "<kind>:<n>", kind one of ap, gp, lattice, sector,
/// random, mixed. Mixed cycles through ap, gp, random and sector.
struct FamilySpec {
  std::string kind = "mixed";
  std::size_t min_n = 2;
  std::size_t max_n = 16;

  static FamilySpec parse(const std::string& text);
  std::string str() const;
};

struct GeneratedSet {
  std::string id;
  std::string kind;
  std::uint64_t seed = 0;
  FiniteComplexSet set;
};

/// One member of a non-mixed family kind with |A| = n.
FiniteComplexSet family_member(const std::string& kind, std::size_t n, std::uint64_t seed, const Rational& eps);

/// `count` members with sizes drawn from [min_n, max_n]; deterministic in seed.
std::vector<GeneratedSet> generate_family(const FamilySpec& family, std::size_t count, std::uint64_t seed,
                                          const Rational& eps);

// ---------------------------------------------------------------------------
// Verification runs

enum class Suite { Identities, Claim, Incidence };
std::string to_string(Suite s);
/// "all" expands to every suite.
std::vector<Suite> parse_suites(const std::string& name);
std::string default_family(Suite s);

struct RunConfig {
  Rational epsilon = Rational(1, 100);
  std::uint64_t seed = 0;
  /// Overrides every suite's default family when set.
  std::optional<std::string> family;
  std::vector<Suite> suites{Suite::Identities, Suite::Claim, Suite::Incidence};
  std::size_t count = 20;
  geom::VertexSet vertex_set = geom::VertexSet::AllRatios;
  std::string format = "json";
  std::string output;
  std::string counterexample_dir = "counterexamples";

  nlohmann::ordered_json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
};

struct SuiteResult {
  std::string name;
  std::string family;
  std::size_t sets = 0;
  std::size_t skipped = 0;
  std::size_t checks = 0;
  std::vector<std::string> violations;
  nlohmann::ordered_json details = nlohmann::ordered_json::array();

  bool passed() const { return violations.empty(); }
};

struct VerifyResult {
  RunConfig config;
  std::vector<SuiteResult> suites;

  bool passed() const;
};

VerifyResult run_verify(const RunConfig& config);
nlohmann::ordered_json to_json(const VerifyResult& result);
std::string to_csv(const VerifyResult& result);

/// Writes <dir>/<id>.set and <dir>/<id>.json; returns the set file path.
std::string persist_counterexample(const std::string& dir, const std::string& id, const FiniteComplexSet& a,
                                   const nlohmann::ordered_json& report);

// ---------------------------------------------------------------------------
// Sweeps and budgets

/// One bound report per n, in the order given.
std::vector<BoundReport> run_sweep(const std::string& kind, std::span<const std::size_t> ns, std::uint64_t seed,
                                   const Rational& eps);
std::string sweep_csv(const std::vector<BoundReport>& rows);

/// Rough per-set cost in milliseconds for a workload on a set of size n.
double estimate_cost_ms(const std::string& workload, std::size_t n);
/// SUMPROD_BUDGET_MS when set; ParseError when it is not a positive number.
std::optional<double> budget_from_env();
/// Throws BudgetExceeded when the estimate exceeds the budget.
void enforce_budget(const std::string& workload, std::size_t n, std::optional<double> budget_ms);

}  // namespace sumprod::lab
