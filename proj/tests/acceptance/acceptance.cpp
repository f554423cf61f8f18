// Acceptance run: one PASS/FAIL line per criterion, each with a pinned wall
// time limit. Exit status is nonzero when any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sumprod/energy.hpp"
#include "sumprod/geometry.hpp"
#include "sumprod/incidence.hpp"
#include "sumprod/lab.hpp"

namespace {

using namespace sumprod;
using Z = GaussianRational;
namespace fs = std::filesystem;

constexpr std::uint64_t kSeed = 20241016;

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<Outcome()> run;
};

BigInt big(std::size_t v) { return BigInt(static_cast<unsigned long>(v)); }

std::vector<lab::GeneratedSet> identity_sets() {
  return lab::generate_family(lab::FamilySpec::parse("mixed:2-16"), 200, kSeed, Rational(1, 100));
}

/// Uniform nonempty subset of d, drawn by a partial shuffle.
FiniteComplexSet random_subset(const FiniteComplexSet& d, Rng& rng) {
  std::vector<Z> pool = d.elements();
  const std::size_t k = 1 + rng.below(pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return FiniteComplexSet(std::move(pool));
}

Outcome fail_first(Outcome o, const std::string& what) {
  if (o.ok) {
    o.ok = false;
    o.detail = what;
  }
  return o;
}

Outcome identity_suite() {
  Outcome o;
  std::size_t n = 0;
  for (const auto& g : identity_sets()) {
    const auto r = energy::verify_e3_identity(g.set);
    if (!r.holds || r.lhs != r.rhs) o = fail_first(o, g.id + ": E_3 identity");
    ++n;
  }
  if (o.ok) o.detail = std::to_string(n) + " sets";
  return o;
}

Outcome cauchy_schwarz_suite() {
  Outcome o;
  Rng rng(kSeed ^ 0x5eed);
  std::size_t checks = 0;
  for (const auto& g : identity_sets()) {
    GeneratorSpec companion;
    companion.kind = GeneratorKind::RandomGaussian;
    companion.n = 2 + rng.below(7);
    companion.seed = rng.next();
    for (const auto& b : {g.set, generate(companion)}) {
      if (!energy::verify_additive_cauchy_schwarz(g.set, b).holds()) o = fail_first(o, g.id + ": additive");
      ++checks;
    }
    if (!energy::verify_multiplicative_cauchy_schwarz(g.set)) o = fail_first(o, g.id + ": multiplicative");
    ++checks;
  }
  if (o.ok) o.detail = "200 sets, " + std::to_string(checks) + " checks";
  return o;
}

Outcome slice_inequality_suite() {
  Outcome o;
  Rng rng(kSeed ^ 0xd1ff);
  std::size_t checks = 0;
  std::map<std::string, std::size_t> methods;
  for (const auto& g : identity_sets()) {
    std::vector<FiniteComplexSet> subsets{energy::popular_differences(g.set)};
    const auto diffs = difference_set(g.set, g.set);
    for (int k = 0; k < 5; ++k) subsets.push_back(random_subset(diffs, rng));
    for (const auto& d : subsets) {
      const auto r = energy::verify_lemma_31(g.set, d);
      if (!r.holds) o = fail_first(o, g.id + ": slice inequality");
      ++methods[r.comparison.method];
      ++checks;
    }
  }
  if (o.ok) {
    std::ostringstream s;
    s << "200 sets, " << checks << " subsets (";
    bool first = true;
    for (const auto& [m, c] : methods) {
      s << (first ? "" : ", ") << m << ' ' << c;
      first = false;
    }
    s << ')';
    o.detail = s.str();
  }
  return o;
}

Outcome energy_chain_suite() {
  Outcome o;
  for (const auto& g : identity_sets()) {
    const auto kk = energy::verify_katz_koester(g.set);
    if (!kk.holds || kk.lhs < kk.rhs) o = fail_first(o, g.id + ": E(A,A-A) counting bound");
    const auto c = energy::verify_corollary_5(g.set);
    if (!c.holds || Rational(c.lhs, 1) < c.rhs) o = fail_first(o, g.id + ": E_3 E(A,A-A) >= |A|^8/(16|A-A|)");
  }
  if (o.ok) o.detail = "200 sets";
  return o;
}

Outcome claim_suite(const std::string& cx_dir) {
  Outcome o;
  const Rational eps(1, 100);
  const auto sets = lab::generate_family(lab::FamilySpec::parse("sector:2-12"), 50, kSeed, eps);
  std::size_t ties = 0;
  std::size_t edges = 0;
  for (const auto& g : sets) {
    if (!sector_check(g.set, eps)) {
      o = fail_first(o, g.id + ": generated set outside the sector");
      continue;
    }
    const auto r = geom::verify_claim(g.set, eps);
    edges += r.tree.edges.size();
    for (const auto& c : r.mst.crossings) ties += c.tie ? 1 : 0;
    for (const auto& a : r.mst.angles) ties += a.tie ? 1 : 0;
    bool ok = r.mst.passes() && r.rhombus_overlaps.empty() && r.containment_failures.empty() &&
              r.images_outside.empty() && r.repeated_sums.empty() && r.count_holds;
    if (!ok) {
      const auto path = lab::persist_counterexample(cx_dir, "claim-" + g.id, g.set, geom::to_json(r));
      o = fail_first(o, g.id + ": claim violated, saved to " + path);
    }
  }
  if (o.ok) o.detail = "50 sets, " + std::to_string(edges) + " tree edges, " + std::to_string(ties) + " tied predicates";
  return o;
}

Outcome incidence_oracle_suite() {
  using namespace incidence;
  Outcome o;
  Rng rng(kSeed ^ 0x1ace);
  Count total = 0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t np = 1 + rng.below(200);
    const std::size_t nl = 1 + rng.below(200);
    std::vector<Point2> pts;
    for (std::size_t i = 0; i < np; ++i) {
      const auto xr = rng.between(-4, 4);
      const auto xi = rng.between(-1, 1);
      const auto yr = rng.between(-4, 4);
      const auto yi = rng.between(-1, 1);
      pts.push_back({Z(Rational(xr), Rational(xi)), Z(Rational(yr), Rational(yi))});
    }
    std::vector<LineC> lines;
    for (std::size_t i = 0; i < nl; ++i) {
      const Point2& p = pts[rng.below(pts.size())];
      const Point2& q = pts[rng.below(pts.size())];
      if (p.x == q.x) {
        lines.push_back(LineC::vertical(p.x));
      } else {
        lines.push_back(LineC::through((q.y - p.y) / (q.x - p.x), p));
      }
    }
    const auto fast = incidences(pts, lines, 1 + static_cast<unsigned>(rng.below(8)));
    const auto slow = incidences_naive(pts, lines);
    if (fast.total != slow.total || fast.per_point != slow.per_point || fast.per_line != slow.per_line) {
      o = fail_first(o, "instance " + std::to_string(k) + ": hashed and naive counts differ");
    }
    total += slow.total;
  }
  if (o.ok) o.detail = "100 instances, " + std::to_string(total) + " incidences";
  return o;
}

Outcome translated_family_suite() {
  using namespace incidence;
  Outcome o;
  const auto sets = lab::generate_family(lab::FamilySpec::parse("mixed:2-10"), 50, kSeed ^ 0x7a, Rational(1, 100));
  std::size_t sums = 0;
  for (const auto& g : sets) {
    const auto sel = popular_lines(g.set);
    const auto p = points_on_lines(g.set, sel.slopes);
    std::vector<Point2> q;
    for (const auto& x : g.set)
      for (const auto& y : g.set) q.push_back({x, y});
    const auto r = rich_sum_report(p, q, sel.slopes, 1);
    if (!r.multiplicity_violations.empty()) o = fail_first(o, g.id + ": n(x) > m(x)");
    if (!r.line_count_violations.empty()) o = fail_first(o, g.id + ": point on more than |L| lines");
    if (!r.heavy_single_line_violations.empty()) o = fail_first(o, g.id + ": n(x) > N on a single line");
    if (r.total_weight > r.pair_bound) o = fail_first(o, g.id + ": W > |L||Q|");
    sums += r.sum_count;
  }
  if (o.ok) o.detail = "50 instances, " + std::to_string(sums) + " sums checked";
  return o;
}

Outcome elekes_suite() {
  Outcome o;
  const auto sets = lab::generate_family(lab::FamilySpec::parse("mixed:2-10"), 50, kSeed ^ 0xe1, Rational(1, 100));
  std::size_t points = 0;
  for (const auto& g : sets) {
    for (Count t : {Count(1), Count(2), Count(4)}) {
      const auto r = incidence::verify_elekes_containment(g.set, t);
      if (!r.holds()) o = fail_first(o, g.id + ": containment fails at t = " + std::to_string(t));
      points += r.points_checked;
    }
  }
  if (o.ok) o.detail = "50 sets, " + std::to_string(points) + " points";
  return o;
}

Outcome anchor_suite() {
  Outcome o;
  for (std::size_t n : {8, 16, 32, 64}) {
    GeneratorSpec ap;
    ap.n = n;
    const auto a = generate(ap);
    const auto s = sumset(a, a).size();
    const auto r = ratio_set(a, a).size();
    if (s != 2 * n - 1) o = fail_first(o, "AP n = " + std::to_string(n) + ": |A+A| != 2n-1");
    // (|A+A| + |A:A|) / n^{4/3} >= 1  <=>  (|A+A| + |A:A|)^3 >= n^4
    const BigInt lhs = big(s + r) * big(s + r) * big(s + r);
    const BigInt rhs = big(n) * big(n) * big(n) * big(n);
    if (lhs < rhs) o = fail_first(o, "AP n = " + std::to_string(n) + ": ratio below 1");
    GeneratorSpec gp;
    gp.kind = GeneratorKind::Geometric;
    gp.n = n;
    gp.step = 2;
    const auto b = generate(gp);
    if (product_set(b, b).size() != 2 * n - 1) o = fail_first(o, "GP n = " + std::to_string(n) + ": |A.A| != 2n-1");
  }
  if (o.ok) o.detail = "n in {8, 16, 32, 64}";
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism_suite(const fs::path& work) {
  Outcome o;
  std::vector<std::string> outputs;
  for (int run = 0; run < 2; ++run) {
    // Identical command lines: the report echoes its run config, output path included.
    const fs::path out = work / "verify.json";
    fs::remove(out);
    const std::string cmd = std::string(SUMPROD_CLI) + " verify --suite all --seed 7 --counterexample-dir " +
                            (work / "cx").string() + " --out " + out.string();
    const int rc = std::system(cmd.c_str());
    if (!WIFEXITED(rc) || WEXITSTATUS(rc) != 0) {
      return fail_first(o, "run " + std::to_string(run) + " exited with status " + std::to_string(WEXITSTATUS(rc)));
    }
    outputs.push_back(slurp(out));
  }
  if (outputs[0].empty()) return fail_first(o, "empty report");
  if (outputs[0] != outputs[1]) return fail_first(o, "reports differ");
  o.detail = "2 runs, " + std::to_string(outputs[0].size()) + " identical bytes";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::current_path() / "acceptance-work";
  fs::create_directories(work);
  const std::string cx_dir = (work / "counterexamples").string();

  const std::vector<Criterion> criteria{
      {1, "cubic energy identity", 60, identity_suite},
      {2, "Cauchy-Schwarz energy bounds", 60, cauchy_schwarz_suite},
      {3, "slice inequality with popular and random D'", 120, slice_inequality_suite},
      {4, "counting bound and E_3 E(A,A-A) >= |A|^8/(16|A-A|)", 120, energy_chain_suite},
      {5, "geometric claim on sector sets", 300, [&] { return claim_suite(cx_dir); }},
      {6, "hashed incidences equal the naive count", 30, incidence_oracle_suite},
      {7, "translated-family contracts", 120, translated_family_suite},
      {8, "line-family containment", 60, elekes_suite},
      {9, "progression anchors", 30, anchor_suite},
      {10, "verify --suite all --seed 7 is byte-identical", 600, [&] { return determinism_suite(work); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = o.ok && in_time;
    failures += pass ? 0 : 1;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2f s, limit %.0f s", secs, c.limit_s);
    std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.name << " (" << o.detail << "; "
              << timing << (in_time ? "" : ", over time") << ")" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
