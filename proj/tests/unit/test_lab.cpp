#include <doctest.h>
#include <sys/wait.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "../oracle.hpp"
#include "sumprod/energy.hpp"
#include "sumprod/lab.hpp"
#include "support.hpp"

using namespace sumprod;
using namespace sumprod::lab;
using support::code_of;
using support::reals;
using Z = GaussianRational;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("sumprod-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int n = 0;
    return n;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args, const std::string& out, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + SUMPROD_CLI + std::string(" ") + args + " > " + out +
                          " 2> " + out + ".err";
  const int rc = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

std::size_t size_of(const FiniteComplexSet& a, oracle::Op op) { return oracle::image(a, a, op).size(); }

}  // namespace

TEST_SUITE("lab") {
  TEST_CASE("bound report examples") {
    const auto r = bound_report(reals({1, 2, 3, 4}), "ap4");
    CHECK(r.n == 4);
    CHECK(r.sumset == 7);
    CHECK(r.diffset == 7);
    CHECK(r.prodset == 9);
    CHECK(r.ratioset == 11);
    const auto two = bound_report(reals({1, 2}), "two");
    CHECK(two.sumset == 3);
    CHECK(two.diffset == 3);
    CHECK(two.prodset == 3);
    CHECK(two.ratioset == 3);
    const auto one = bound_report(reals({5}), "one");
    CHECK(one.sumset == 1);
    CHECK(one.ratioset == 1);
    REQUIRE(r.ratios.size() == 4);
    CHECK(r.ratios[0].name == "sum_ratio");
    CHECK(r.ratios[0].numerator == 18);
    CHECK(r.ratios[0].exponent == "4/3");
    CHECK(std::stod(r.ratios[0].value) == doctest::Approx(18 / std::pow(4.0, 4.0 / 3)).epsilon(1e-11));
    CHECK(r.ratios[2].exponent == "40/31");
    CHECK(r.ratios[3].exponent == "50/39");
    CHECK(code_of([] { bound_report(reals({0, 1}), "z"); }) == ErrorCode::ZeroElement);
    CHECK(code_of([] { bound_report(FiniteComplexSet{}, "e"); }) == ErrorCode::EmptySet);
  }

  TEST_CASE("bound report fields agree with naive recomputation") {
    oracle::Gen g(1);
    for (int k = 0; k < 25; ++k) {
      const auto a = k % 2 ? g.dense_set(1 + g.below(8)) : g.set(1 + g.below(8));
      const auto r = bound_report(a, "x");
      CHECK(r.sumset == size_of(a, oracle::Op::Sum));
      CHECK(r.diffset == size_of(a, oracle::Op::Diff));
      CHECK(r.prodset == size_of(a, oracle::Op::Prod));
      CHECK(r.ratioset == size_of(a, oracle::Op::Ratio));
      CHECK(r.additive_energy == BigInt(static_cast<unsigned long>(oracle::additive_energy(a, a))));
      CHECK(r.multiplicative_energy == BigInt(static_cast<unsigned long>(oracle::multiplicative_energy(a))));
      CHECK(r.cubic_energy == BigInt(static_cast<unsigned long>(oracle::cubic_energy(a))));
      CHECK(r.ratios[0].numerator == BigInt(static_cast<unsigned long>(r.sumset + r.ratioset)));
      CHECK(r.ratios[1].numerator == BigInt(static_cast<unsigned long>(r.sumset + r.prodset)));
      const auto j = to_json(r);
      CHECK(j.at("energies").at("cubic") == r.cubic_energy.get_str());
    }
  }

  TEST_CASE("family specs") {
    const auto f = FamilySpec::parse("sector:2-10");
    CHECK(f.kind == "sector");
    CHECK(f.min_n == 2);
    CHECK(f.max_n == 10);
    CHECK(FamilySpec::parse("ap:5").min_n == 5);
    CHECK(FamilySpec::parse("ap:5").max_n == 5);
    CHECK(FamilySpec::parse(f.str()).str() == f.str());
    CHECK(code_of([] { FamilySpec::parse("blob"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { FamilySpec::parse("ap:9-3"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { FamilySpec::parse("ap:1-3"); }) == ErrorCode::ParseError);
  }

  TEST_CASE("generated families") {
    const Rational eps(1, 100);
    const auto mixed = generate_family(FamilySpec::parse("mixed:2-16"), 40, 3, eps);
    CHECK(mixed.size() == 40);
    std::set<std::string> kinds;
    for (const auto& g : mixed) {
      kinds.insert(g.kind);
      CHECK(g.set.size() >= 2);
      CHECK(g.set.size() <= 16);
      CHECK_FALSE(g.set.contains(Z(0)));
    }
    CHECK(kinds == std::set<std::string>{"ap", "gp", "random", "sector"});
    for (const auto& g : generate_family(FamilySpec::parse("sector:2-10"), 20, 5, eps)) CHECK(sector_check(g.set, eps));
    const auto again = generate_family(FamilySpec::parse("mixed:2-16"), 40, 3, eps);
    for (std::size_t i = 0; i < mixed.size(); ++i) {
      CHECK(mixed[i].id == again[i].id);
      CHECK(mixed[i].set == again[i].set);
    }
    CHECK(generate_family(FamilySpec::parse("ap"), 0, 1, eps).empty());
    CHECK(family_member("gp", 6, 0, eps).size() == 6);
    CHECK(code_of([&] { family_member("mixed", 6, 0, eps); }) == ErrorCode::BadParams);
  }

  TEST_CASE("suite names") {
    CHECK(parse_suites("all").size() == 3);
    CHECK(parse_suites("claim") == std::vector<Suite>{Suite::Claim});
    CHECK(code_of([] { parse_suites("nope"); }) == ErrorCode::ParseError);
    CHECK(to_string(Suite::Incidence) == "incidence");
  }

  TEST_CASE("run configs round trip through json") {
    RunConfig c;
    c.epsilon = Rational(1, 20);
    c.seed = 99;
    c.family = "random:3-7";
    c.suites = {Suite::Claim, Suite::Identities};
    c.count = 4;
    c.vertex_set = geom::VertexSet::PopularProduct;
    c.format = "csv";
    c.output = "out.csv";
    c.counterexample_dir = "cx";
    const auto back = RunConfig::from_json(nlohmann::json::parse(c.to_json().dump()));
    CHECK(back.to_json() == c.to_json());
    CHECK(back.epsilon == c.epsilon);
    CHECK(back.family == c.family);
    CHECK(back.suites == c.suites);
    CHECK(code_of([] { RunConfig::from_json(nlohmann::json::parse(R"({"epsilon": "0"})")); }) ==
          ErrorCode::BadParams);
    CHECK(code_of([] { RunConfig::from_json(nlohmann::json::parse(R"({"format": "xml"})")); }) ==
          ErrorCode::ParseError);
  }

  TEST_CASE("verification runs pass and replay exactly") {
    RunConfig c;
    c.count = 6;
    c.seed = 11;
    const auto r = run_verify(c);
    CHECK(r.passed());
    REQUIRE(r.suites.size() == 3);
    for (const auto& s : r.suites) {
      CHECK(s.sets + s.skipped >= s.sets);
      CHECK(s.checks > 0);
    }
    CHECK(to_json(run_verify(c)).dump() == to_json(r).dump());
    CHECK(to_csv(run_verify(c)) == to_csv(r));
    CHECK(to_csv(r).rfind("suite,set_id,n,status,checks\n", 0) == 0);
  }

  TEST_CASE("zero count gives an empty passing report") {
    RunConfig c;
    c.count = 0;
    const auto r = run_verify(c);
    CHECK(r.passed());
    for (const auto& s : r.suites) {
      CHECK(s.sets == 0);
      CHECK(s.checks == 0);
    }
    CHECK(to_csv(r) == "suite,set_id,n,status,checks\n");
  }

  TEST_CASE("counterexamples are persisted as set and json files") {
    TempDir dir;
    const auto a = reals({1, 2, 3});
    const auto path = persist_counterexample(dir.file("cx"), "claim-demo", a, {{"why", "test"}});
    CHECK(fs::exists(path));
    CHECK(load_set(path) == a);
    const auto j = nlohmann::json::parse(slurp(dir.file("cx/claim-demo.json")));
    CHECK(j.at("why") == "test");
  }

  TEST_CASE("sweeps") {
    const std::vector<std::size_t> ns{4, 8, 16, 32};
    const auto ap = run_sweep("ap", ns, 0, Rational(1, 100));
    REQUIRE(ap.size() == 4);
    for (std::size_t i = 0; i < ns.size(); ++i) {
      CHECK(ap[i].n == ns[i]);
      CHECK(ap[i].sumset == 2 * ns[i] - 1);
    }
    const std::vector<std::size_t> gns{4, 8, 16};
    for (const auto& r : run_sweep("gp", gns, 0, Rational(1, 100))) CHECK(r.prodset == 2 * r.n - 1);
    CHECK(sweep_csv({}) == bound_csv_header());
    const auto csv = sweep_csv(ap);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    const auto rnd = run_sweep("sector", gns, 4, Rational(1, 100));
    CHECK(sweep_csv(rnd) == sweep_csv(run_sweep("sector", gns, 4, Rational(1, 100))));
    CHECK(code_of([&] { run_sweep("mixed", gns, 0, Rational(1, 100)); }) == ErrorCode::BadParams);
  }

  TEST_CASE("budgets") {
    CHECK(estimate_cost_ms("stats", 10) == doctest::Approx(0.2));
    CHECK(estimate_cost_ms("claim", 10) > estimate_cost_ms("identities", 10));
    enforce_budget("claim", 100, std::nullopt);
    enforce_budget("claim", 10, 100.0);
    CHECK(code_of([] { enforce_budget("claim", 100, 100.0); }) == ErrorCode::BudgetExceeded);
    CHECK(code_of([] { estimate_cost_ms("other", 3); }) == ErrorCode::BadParams);
  }
}

TEST_SUITE("cli") {
  TEST_CASE("gen and stats") {
    TempDir dir;
    CHECK(run_cli("gen --family ap --n 4 --out " + dir.file("a.set"), dir.file("gen.txt")) == 0);
    const auto gen = load_set(dir.file("a.set"));
    CHECK(gen.size() == 4);
    CHECK(sumset(gen, gen).size() == 7);
    std::ofstream(dir.file("a.set")) << "1\n2\n3 0\n4/1 0\n";
    CHECK(run_cli("stats " + dir.file("a.set"), dir.file("stats.json")) == 0);
    const auto j = nlohmann::json::parse(slurp(dir.file("stats.json")));
    CHECK(j.at("sizes").at("sumset") == "7");
    CHECK(j.at("sizes").at("prodset") == "9");
    CHECK(run_cli("stats --format csv " + dir.file("a.set"), dir.file("stats.csv")) == 0);
    CHECK(slurp(dir.file("stats.csv")).rfind(bound_csv_header(), 0) == 0);

    std::ofstream(dir.file("zero.set")) << "0 0\n1 0\n";
    CHECK(run_cli("stats " + dir.file("zero.set"), dir.file("z.txt")) == 2);
    std::ofstream(dir.file("bad.set")) << "1 x\n";
    CHECK(run_cli("stats " + dir.file("bad.set"), dir.file("b.txt")) == 2);
    CHECK(run_cli("stats " + dir.file("missing.set"), dir.file("m.txt")) == 2);
  }

  TEST_CASE("usage errors exit 2") {
    TempDir dir;
    CHECK(run_cli("", dir.file("o")) == 2);
    CHECK(run_cli("frobnicate", dir.file("o")) == 2);
    CHECK(run_cli("verify --suite nope", dir.file("o")) == 2);
    CHECK(run_cli("verify --epsilon 1/0", dir.file("o")) == 2);
    CHECK(run_cli("verify --format xml --count 1", dir.file("o")) == 2);
    CHECK(run_cli("sweep --n 4,x", dir.file("o")) == 2);
    CHECK(run_cli("--help", dir.file("o")) == 0);
  }

  TEST_CASE("verify exit codes, formats and config replay") {
    TempDir dir;
    CHECK(run_cli("verify --suite identities --count 0", dir.file("zero.json")) == 0);
    CHECK(run_cli("verify --suite claim --count 3 --seed 2 --format csv", dir.file("claim.csv")) == 0);
    CHECK(slurp(dir.file("claim.csv")).rfind("suite,set_id,n,status,checks\n", 0) == 0);
    const std::string args = "verify --suite all --count 3 --seed 5 --epsilon 1/50 --save-config " + dir.file("cfg.json");
    CHECK(run_cli(args, dir.file("first.json")) == 0);
    CHECK(run_cli("verify --config " + dir.file("cfg.json"), dir.file("replay.json")) == 0);
    CHECK(slurp(dir.file("first.json")) == slurp(dir.file("replay.json")));
    CHECK(run_cli("verify --config " + dir.file("cfg.json") + " --seed 6", dir.file("other.json")) == 0);
    CHECK(slurp(dir.file("first.json")) != slurp(dir.file("other.json")));
    std::ofstream(dir.file("broken.json")) << "{";
    CHECK(run_cli("verify --config " + dir.file("broken.json"), dir.file("o")) == 2);
  }

  TEST_CASE("sweep output and budget") {
    TempDir dir;
    CHECK(run_cli("sweep --family ap --n 4,8,16,32", dir.file("ap.csv")) == 0);
    const auto csv = slurp(dir.file("ap.csv"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    CHECK(csv.find("ap-n32,32,63,") != std::string::npos);
    CHECK(run_cli("sweep --family ap --n \"\"", dir.file("empty.csv")) == 0);
    CHECK(slurp(dir.file("empty.csv")) == bound_csv_header());
    CHECK(run_cli("sweep --family gp --n 4 --format json", dir.file("gp.json")) == 0);
    CHECK(nlohmann::json::parse(slurp(dir.file("gp.json"))).size() == 1);
    CHECK(run_cli("sweep --family ap --n 1000", dir.file("o"), "SUMPROD_BUDGET_MS=1") == 2);
    CHECK(slurp(dir.file("o") + ".err").find("budget") != std::string::npos);
    CHECK(run_cli("verify --count 1", dir.file("o"), "SUMPROD_BUDGET_MS=abc") == 2);
  }
}
