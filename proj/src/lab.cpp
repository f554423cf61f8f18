#include "sumprod/lab.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "sumprod/energy.hpp"
#include "sumprod/incidence.hpp"
#include "sumprod/numeric.hpp"

namespace sumprod::lab {

namespace {

BigInt big(std::size_t v) { return BigInt(static_cast<unsigned long>(v)); }

RatioEntry ratio_entry(std::string name, std::size_t numer, std::size_t n, long p, long q) {
  RatioEntry e;
  e.name = std::move(name);
  e.numerator = big(numer);
  e.exponent = std::to_string(p) + "/" + std::to_string(q);
  e.value = power_ratio_decimal(e.numerator, n, p, q);
  return e;
}

}  // namespace

BoundReport bound_report(const FiniteComplexSet& a, std::string set_id) {
  if (a.empty()) throw Error(ErrorCode::EmptySet, "stats need a nonempty set");
  if (a.contains(GaussianRational(0))) throw Error(ErrorCode::ZeroElement, "stats need 0 not in A");
  BoundReport r;
  r.set_id = std::move(set_id);
  r.n = a.size();
  r.sumset = sumset(a, a).size();
  r.diffset = difference_set(a, a).size();
  r.prodset = product_set(a, a).size();
  r.ratioset = ratio_set(a, a).size();
  r.additive_energy = energy::additive_energy(a, a).energy_value;
  r.multiplicative_energy = energy::multiplicative_energy(a).energy_value;
  r.cubic_energy = energy::cubic_energy(a).energy_value;
  r.ratios.push_back(ratio_entry("sum_ratio", r.sumset + r.ratioset, r.n, 4, 3));
  r.ratios.push_back(ratio_entry("sum_prod", r.sumset + r.prodset, r.n, 4, 3));
  r.ratios.push_back(ratio_entry("diff_ratio", r.diffset + r.ratioset, r.n, 40, 31));
  r.ratios.push_back(ratio_entry("diff_prod", r.diffset + r.prodset, r.n, 50, 39));
  return r;
}

nlohmann::ordered_json to_json(const BoundReport& r) {
  nlohmann::ordered_json ratios = nlohmann::ordered_json::array();
  for (const auto& e : r.ratios) {
    ratios.push_back(
        {{"name", e.name}, {"numerator", e.numerator.get_str()}, {"exponent", e.exponent}, {"value", e.value}});
  }
  nlohmann::ordered_json j;
  j["set_id"] = r.set_id;
  j["n"] = std::to_string(r.n);
  j["sizes"] = {{"sumset", std::to_string(r.sumset)},
                {"diffset", std::to_string(r.diffset)},
                {"prodset", std::to_string(r.prodset)},
                {"ratioset", std::to_string(r.ratioset)}};
  j["energies"] = {{"additive", r.additive_energy.get_str()},
                   {"multiplicative", r.multiplicative_energy.get_str()},
                   {"cubic", r.cubic_energy.get_str()}};
  j["ratios"] = std::move(ratios);
  return j;
}

std::string bound_csv_header() {
  return "set_id,n,sumset,diffset,prodset,ratioset,additive_energy,multiplicative_energy,cubic_energy,"
         "sum_ratio_numerator,sum_ratio,sum_prod_numerator,sum_prod,diff_ratio_numerator,diff_ratio,"
         "diff_prod_numerator,diff_prod\n";
}

std::string bound_csv_row(const BoundReport& r) {
  std::ostringstream out;
  out << r.set_id << ',' << r.n << ',' << r.sumset << ',' << r.diffset << ',' << r.prodset << ',' << r.ratioset << ','
      << r.additive_energy << ',' << r.multiplicative_energy << ',' << r.cubic_energy;
  for (const auto& e : r.ratios) out << ',' << e.numerator << ',' << e.value;
  out << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------

namespace {

const std::vector<std::string>& known_kinds() {
  static const std::vector<std::string> kinds{"ap", "gp", "lattice", "sector", "random", "mixed"};
  return kinds;
}

std::string canonical_kind(const std::string& name) {
  if (name == "arithmetic") return "ap";
  if (name == "geometric") return "gp";
  for (const auto& k : known_kinds()) {
    if (k == name) return k;
  }
  throw Error(ErrorCode::ParseError, "unknown family '" + name + "'");
}

std::size_t parse_size(const std::string& text) {
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw Error(ErrorCode::ParseError, "bad size '" + text + "'");
  return v;
}

}  // namespace

FamilySpec FamilySpec::parse(const std::string& text) {
  FamilySpec f;
  const auto colon = text.find(':');
  f.kind = canonical_kind(text.substr(0, colon));
  if (colon == std::string::npos) {
    if (f.kind != "mixed") f.max_n = 12;
    return f;
  }
  const std::string range = text.substr(colon + 1);
  const auto dash = range.find('-');
  if (dash == std::string::npos) {
    f.min_n = f.max_n = parse_size(range);
  } else {
    f.min_n = parse_size(range.substr(0, dash));
    f.max_n = parse_size(range.substr(dash + 1));
  }
  if (f.min_n < 2 || f.min_n > f.max_n) throw Error(ErrorCode::ParseError, "bad size range in '" + text + "'");
  return f;
}

std::string FamilySpec::str() const { return kind + ":" + std::to_string(min_n) + "-" + std::to_string(max_n); }

FiniteComplexSet family_member(const std::string& kind_name, std::size_t n, std::uint64_t seed, const Rational& eps) {
  const std::string kind = canonical_kind(kind_name);
  Rng rng(seed);
  GeneratorSpec spec;
  spec.n = n;
  spec.seed = seed;
  spec.epsilon = eps;
  if (kind == "ap") {
    spec.kind = GeneratorKind::Arithmetic;
    spec.start = rng.between(1, 4);
    const auto re = rng.between(1, 3);
    const auto im = rng.between(0, 1);
    spec.step = GaussianRational(Rational(re), Rational(im));
  } else if (kind == "gp") {
    static const std::vector<GaussianRational> ratios{
        GaussianRational(2), GaussianRational(3), GaussianRational(Rational(1), Rational(1)),
        GaussianRational(Rational(2), Rational(1)), GaussianRational(Rational(3, 2))};
    spec.kind = GeneratorKind::Geometric;
    spec.start = rng.between(1, 3);
    spec.step = ratios[rng.below(ratios.size())];
  } else if (kind == "lattice") {
    spec.kind = GeneratorKind::ComplexLattice;
    spec.start = rng.between(1, 3);
  } else if (kind == "sector") {
    spec.kind = GeneratorKind::RandomSector;
  } else if (kind == "random") {
    spec.kind = GeneratorKind::RandomGaussian;
  } else {
    throw Error(ErrorCode::BadParams, "family member needs a concrete kind, not '" + kind + "'");
  }
  return generate(spec);
}

std::vector<GeneratedSet> generate_family(const FamilySpec& family, std::size_t count, std::uint64_t seed,
                                          const Rational& eps) {
  static const std::vector<std::string> cycle{"ap", "gp", "random", "sector"};
  Rng master(seed);
  std::vector<GeneratedSet> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = family.min_n + master.below(family.max_n - family.min_n + 1);
    GeneratedSet g;
    g.seed = master.next();
    g.kind = family.kind == "mixed" ? cycle[i % cycle.size()] : family.kind;
    g.set = family_member(g.kind, n, g.seed, eps);
    std::ostringstream id;
    id << g.kind << '-' << i << "-n" << n;
    g.id = id.str();
    out.push_back(std::move(g));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(Suite s) {
  switch (s) {
    case Suite::Identities: return "identities";
    case Suite::Claim: return "claim";
    case Suite::Incidence: return "incidence";
  }
  return "identities";
}

std::vector<Suite> parse_suites(const std::string& name) {
  if (name == "all") return {Suite::Identities, Suite::Claim, Suite::Incidence};
  if (name == "identities") return {Suite::Identities};
  if (name == "claim") return {Suite::Claim};
  if (name == "incidence") return {Suite::Incidence};
  throw Error(ErrorCode::ParseError, "unknown suite '" + name + "'");
}

std::string default_family(Suite s) {
  switch (s) {
    case Suite::Identities: return "mixed:2-16";
    case Suite::Claim: return "sector:2-10";
    case Suite::Incidence: return "mixed:2-10";
  }
  return "mixed:2-16";
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json suite_names = nlohmann::ordered_json::array();
  for (Suite s : suites) suite_names.push_back(to_string(s));
  nlohmann::ordered_json j;
  j["epsilon"] = epsilon.str();
  j["seed"] = seed;
  j["family"] = family ? nlohmann::ordered_json(*family) : nlohmann::ordered_json(nullptr);
  j["suites"] = std::move(suite_names);
  j["count"] = count;
  j["vertex_set"] = geom::to_string(vertex_set);
  j["format"] = format;
  j["output"] = output;
  j["counterexample_dir"] = counterexample_dir;
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    if (j.contains("epsilon")) c.epsilon = Rational::parse(j.at("epsilon").get<std::string>());
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("family") && !j.at("family").is_null()) c.family = j.at("family").get<std::string>();
    if (j.contains("suites")) {
      c.suites.clear();
      for (const auto& s : j.at("suites")) {
        for (Suite x : parse_suites(s.get<std::string>())) c.suites.push_back(x);
      }
    }
    if (j.contains("count")) c.count = j.at("count").get<std::size_t>();
    if (j.contains("vertex_set")) c.vertex_set = geom::parse_vertex_set(j.at("vertex_set").get<std::string>());
    if (j.contains("format")) c.format = j.at("format").get<std::string>();
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
    if (j.contains("counterexample_dir")) c.counterexample_dir = j.at("counterexample_dir").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad run config: ") + e.what());
  }
  if (c.epsilon.sign() <= 0) throw Error(ErrorCode::BadParams, "epsilon must be positive");
  if (c.format != "json" && c.format != "csv") throw Error(ErrorCode::ParseError, "format must be json or csv");
  return c;
}

bool VerifyResult::passed() const {
  for (const auto& s : suites) {
    if (!s.passed()) return false;
  }
  return true;
}

std::string persist_counterexample(const std::string& dir, const std::string& id, const FiniteComplexSet& a,
                                   const nlohmann::ordered_json& report) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path set_path = fs::path(dir) / (id + ".set");
  {
    std::ofstream out(set_path);
    out << "# counterexample " << id << '\n';
    write_set(out, a);
  }
  std::ofstream(fs::path(dir) / (id + ".json")) << report.dump(2) << '\n';
  return set_path.string();
}

// ---------------------------------------------------------------------------

namespace {

class SuiteRun {
 public:
  SuiteRun(SuiteResult& result, const GeneratedSet& g) : result_(result), g_(g) {}

  /// Records one exact check; returns ok.
  bool check(bool ok, const std::string& what) {
    ++result_.checks;
    ++local_checks_;
    if (!ok) {
      failed_ = true;
      result_.violations.push_back(g_.id + ": " + what);
    }
    return ok;
  }

  nlohmann::ordered_json summary(nlohmann::ordered_json extra = nlohmann::ordered_json::object()) const {
    nlohmann::ordered_json j;
    j["id"] = g_.id;
    j["n"] = std::to_string(g_.set.size());
    j["status"] = failed_ ? "fail" : "pass";
    j["checks"] = std::to_string(local_checks_);
    for (auto& [k, v] : extra.items()) j[k] = v;
    return j;
  }

  bool failed() const { return failed_; }

 private:
  SuiteResult& result_;
  const GeneratedSet& g_;
  std::size_t local_checks_ = 0;
  bool failed_ = false;
};

FiniteComplexSet random_subset(const FiniteComplexSet& d, Rng& rng) {
  std::vector<GaussianRational> pool = d.elements();
  const std::size_t k = 1 + rng.below(pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return FiniteComplexSet(std::move(pool));
}

void identities_on(SuiteResult& result, const GeneratedSet& g, const Rational& eps) {
  SuiteRun run(result, g);
  const FiniteComplexSet& a = g.set;
  try {
    energy::verify_e3_identity(a);
    run.check(true, "cubic energy identity");
  } catch (const Error& e) {
    if (e.code() != ErrorCode::IdentityViolation) throw;
    run.check(false, e.what());
  }

  Rng rng(g.seed ^ 0x2545f4914f6cdd1dULL);
  const std::size_t companion_n = 2 + rng.below(5);
  const FiniteComplexSet b = family_member("random", companion_n, rng.next(), eps);
  run.check(energy::verify_additive_cauchy_schwarz(a, a).holds(), "additive Cauchy-Schwarz (A, A)");
  run.check(energy::verify_additive_cauchy_schwarz(a, b).holds(), "additive Cauchy-Schwarz (A, B)");
  run.check(energy::verify_multiplicative_cauchy_schwarz(a), "multiplicative Cauchy-Schwarz");

  const FiniteComplexSet diffs = difference_set(a, a);
  std::vector<FiniteComplexSet> subsets{energy::popular_differences(a)};
  for (int k = 0; k < 5; ++k) subsets.push_back(random_subset(diffs, rng));
  for (std::size_t k = 0; k < subsets.size(); ++k) {
    const auto report = energy::verify_lemma_31(a, subsets[k]);
    run.check(report.holds, "slice bound with D' #" + std::to_string(k));
  }

  run.check(energy::verify_katz_koester(a).holds, "E(A, A-A) slice count");
  const auto cor = energy::verify_corollary_5(a);
  run.check(cor.holds, "E3 E(A, A-A) >= |A|^8/(16|A-A|)");
  result.details.push_back(run.summary({{"kind", g.kind}, {"energy_product_ratio", cor.observed_ratio}}));
}

void claim_on(SuiteResult& result, const GeneratedSet& g, const RunConfig& config) {
  if (!sector_check(g.set, config.epsilon)) {
    ++result.skipped;
    result.details.push_back({{"id", g.id}, {"n", std::to_string(g.set.size())}, {"status", "skip"}});
    return;
  }
  SuiteRun run(result, g);
  const geom::ClaimReport report = geom::verify_claim(g.set, config.epsilon, config.vertex_set);
  run.check(report.mst.passes(), "spanning tree properties");
  run.check(report.rhombus_overlaps.empty(), "rhombus disjointness");
  run.check(report.containment_failures.empty(), "lens inside rhombus");
  run.check(report.images_outside.empty(), "sum images inside lenses");
  run.check(report.repeated_sums.empty(), "vector sums injective");
  run.check(report.count_holds, "|A+A|^2 >= sum n(l1)n(l2)");
  nlohmann::ordered_json extra{{"vertices", std::to_string(report.tree.vertices.size())},
                               {"edges", std::to_string(report.tree.edges.size())},
                               {"realisations", std::to_string(report.realisations)},
                               {"pair_count_sum", report.pair_count_sum.get_str()},
                               {"sumset_size", std::to_string(report.sumset_size)}};
  if (run.failed()) {
    const auto json = geom::to_json(report);
    extra["counterexample"] = persist_counterexample(config.counterexample_dir, "claim-" + g.id, g.set, json);
    extra["report"] = json;
  }
  result.details.push_back(run.summary(std::move(extra)));
}

void incidence_on(SuiteResult& result, const GeneratedSet& g) {
  using namespace incidence;
  SuiteRun run(result, g);
  const FiniteComplexSet& a = g.set;
  const PopularLineSelection sel = popular_lines(a);
  run.check(sel.pigeonhole_bound_holds, "|L|N^2 >= E_*/(2 log2 |A|)");

  auto translated = [&](const std::vector<GaussianRational>& slopes, Count t, const std::string& label) {
    const std::vector<Point2> p = points_on_lines(a, slopes);
    std::vector<Point2> q;
    if (p.size() <= 24) {
      for (const auto& x : p) {
        for (const auto& y : p) q.push_back(x - y);
      }
    } else {
      for (const auto& x : p) q.push_back(-x);
    }
    const RichSumReport r = rich_sum_report(p, q, slopes, t);
    run.check(r.multiplicity_violations.empty(), label + ": n(x) <= m(x)");
    run.check(r.line_count_violations.empty(), label + ": lines through x <= |L|");
    run.check(r.heavy_single_line_violations.empty(), label + ": n(x) > N on two lines");
    run.check(r.total_weight <= r.pair_bound, label + ": W <= |L||Q|");
    return r;
  };
  const RichSumReport product_case = translated(sel.slopes, sel.N, "dyadic");
  const RatioPopularLines ratio = popular_lines_ratio(a);
  const std::size_t ratio_count = ratio_set(a, a).size();
  if (ratio.slopes.size() < ratio_count) {
    translated(ratio.slopes, std::max<Count>(1, ratio.max_points_per_line), "threshold");
  }

  for (Count t : {1, 2, 4}) {
    const ElekesContainment c = verify_elekes_containment(a, t);
    run.check(c.holds(), "A x L_t inside P_t at t = " + std::to_string(t));
  }

  const std::vector<LineC> lines = elekes_family(a);
  std::vector<Point2> points;
  const std::size_t oracle_slopes = std::min<std::size_t>(ratio.slopes.size(), 8);
  for (const auto& x : a) {
    for (std::size_t k = 0; k < oracle_slopes; ++k) points.push_back({x, ratio.slopes[k]});
  }
  const IncidenceCounts hashed = incidences(points, lines, 2);
  const IncidenceCounts naive = incidences_naive(points, lines);
  run.check(hashed.total == naive.total && hashed.per_point == naive.per_point && hashed.per_line == naive.per_line,
            "hashed incidences equal naive");

  result.details.push_back(run.summary({{"N", std::to_string(sel.N)},
                                        {"popular_slopes", std::to_string(sel.slopes.size())},
                                        {"rich_sums_at_N", std::to_string(product_case.at_t.count)},
                                        {"rich_sum_ratio", product_case.at_t.ratio}}));
}

}  // namespace

VerifyResult run_verify(const RunConfig& config) {
  const auto budget = budget_from_env();
  VerifyResult out;
  out.config = config;
  for (Suite s : config.suites) {
    SuiteResult result;
    result.name = to_string(s);
    const FamilySpec family = FamilySpec::parse(config.family.value_or(default_family(s)));
    result.family = family.str();
    const auto sets = generate_family(family, config.count, config.seed, config.epsilon);
    for (const auto& g : sets) {
      enforce_budget(result.name, g.set.size(), budget);
      ++result.sets;
      switch (s) {
        case Suite::Identities: identities_on(result, g, config.epsilon); break;
        case Suite::Claim: claim_on(result, g, config); break;
        case Suite::Incidence: incidence_on(result, g); break;
      }
    }
    out.suites.push_back(std::move(result));
  }
  return out;
}

nlohmann::ordered_json to_json(const VerifyResult& r) {
  nlohmann::ordered_json suites = nlohmann::ordered_json::array();
  for (const auto& s : r.suites) {
    suites.push_back({{"suite", s.name},
                      {"family", s.family},
                      {"sets", std::to_string(s.sets)},
                      {"skipped", std::to_string(s.skipped)},
                      {"checks", std::to_string(s.checks)},
                      {"passed", s.passed()},
                      {"violations", s.violations},
                      {"details", s.details}});
  }
  nlohmann::ordered_json j;
  j["config"] = r.config.to_json();
  j["suites"] = std::move(suites);
  j["passed"] = r.passed();
  return j;
}

std::string to_csv(const VerifyResult& r) {
  std::ostringstream out;
  out << "suite,set_id,n,status,checks\n";
  for (const auto& s : r.suites) {
    for (const auto& d : s.details) {
      out << s.name << ',' << d.at("id").get<std::string>() << ',' << d.at("n").get<std::string>() << ','
          << d.at("status").get<std::string>() << ',' << (d.contains("checks") ? d.at("checks").get<std::string>() : "0")
          << '\n';
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------

std::vector<BoundReport> run_sweep(const std::string& kind_name, std::span<const std::size_t> ns, std::uint64_t seed,
                                   const Rational& eps) {
  const std::string kind = canonical_kind(kind_name);
  if (kind == "mixed") throw Error(ErrorCode::BadParams, "sweeps need a single family kind");
  const auto budget = budget_from_env();
  for (std::size_t n : ns) enforce_budget("stats", n, budget);

  auto member = [&](std::size_t n) {
    GeneratorSpec spec;
    spec.n = n;
    if (kind == "ap") return generate(spec);
    if (kind == "gp") {
      spec.kind = GeneratorKind::Geometric;
      spec.step = 2;
      return generate(spec);
    }
    if (kind == "lattice") {
      spec.kind = GeneratorKind::ComplexLattice;
      return generate(spec);
    }
    return family_member(kind, n, seed + n, eps);
  };

  std::vector<std::future<BoundReport>> jobs;
  jobs.reserve(ns.size());
  for (std::size_t n : ns) {
    jobs.push_back(std::async(std::launch::async, [&, n] { return bound_report(member(n), kind + "-n" + std::to_string(n)); }));
  }
  std::vector<BoundReport> rows;
  rows.reserve(jobs.size());
  for (auto& j : jobs) rows.push_back(j.get());
  return rows;
}

std::string sweep_csv(const std::vector<BoundReport>& rows) {
  std::string out = bound_csv_header();
  for (const auto& r : rows) out += bound_csv_row(r);
  return out;
}

double estimate_cost_ms(const std::string& workload, std::size_t n) {
  const double x = static_cast<double>(n);
  if (workload == "stats") return 2e-3 * x * x;
  if (workload == "identities") return 1e-3 * x * x * x * x;
  if (workload == "claim") return 2e-3 * x * x * x * x;
  if (workload == "incidence") return 1e-3 * x * x * x * x;
  throw Error(ErrorCode::BadParams, "unknown workload '" + workload + "'");
}

std::optional<double> budget_from_env() {
  const char* raw = std::getenv("SUMPROD_BUDGET_MS");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(v > 0)) {
    throw Error(ErrorCode::ParseError, std::string("SUMPROD_BUDGET_MS is not a positive number: ") + raw);
  }
  return v;
}

void enforce_budget(const std::string& workload, std::size_t n, std::optional<double> budget_ms) {
  if (!budget_ms) return;
  const double cost = estimate_cost_ms(workload, n);
  if (cost > *budget_ms) {
    std::ostringstream msg;
    msg << workload << " on |A| = " << n << " is estimated at " << cost << " ms, over the " << *budget_ms
        << " ms budget";
    throw Error(ErrorCode::BudgetExceeded, msg.str());
  }
}

}  // namespace sumprod::lab
