#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sumprod/lab.hpp"

namespace {

using namespace sumprod;

constexpr int kPass = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::BadParams, "cannot write " + path);
  out << text;
}

void check_format(const std::string& format) {
  if (format != "json" && format != "csv") throw Error(ErrorCode::ParseError, "format must be json or csv");
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (item.empty()) continue;
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || used == 0) throw Error(ErrorCode::ParseError, "bad size '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact sum-product laboratory"};
  app.require_subcommand(1);

  std::string epsilon = "1/100";
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out_path;

  auto* gen = app.add_subcommand("gen", "Generate a set file");
  std::string gen_family = "sector";
  std::size_t gen_n = 8;
  gen->add_option("--family", gen_family, "ap, gp, lattice, sector or random");
  gen->add_option("--n", gen_n, "Set size")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  gen->add_option("--seed", seed);
  gen->add_option("--epsilon", epsilon, "Sector half-width p/q");
  gen->add_option("--out", out_path);

  auto* stats = app.add_subcommand("stats", "Sizes, energies and bound ratios of a set file");
  std::string stats_file;
  stats->add_option("file", stats_file)->required();
  stats->add_option("--format", format);
  stats->add_option("--out", out_path);

  auto* verify = app.add_subcommand("verify", "Run verification suites on generated families");
  std::string suite = "all";
  std::string family;
  std::size_t count = 20;
  std::string vertex_set = "all";
  bool popular = false;
  std::string counterexample_dir = "counterexamples";
  std::string config_path;
  std::string save_config;
  auto* suite_opt = verify->add_option("--suite", suite, "identities, claim, incidence or all");
  auto* family_opt = verify->add_option("--family", family, "e.g. random:2-12, sector:2-10, mixed:2-16");
  auto* count_opt = verify->add_option("--count", count);
  auto* seed_opt = verify->add_option("--seed", seed);
  auto* eps_opt = verify->add_option("--epsilon", epsilon);
  auto* format_opt = verify->add_option("--format", format);
  auto* out_opt = verify->add_option("--out", out_path);
  auto* vertex_opt = verify->add_option("--vertex-set", vertex_set, "all, popular-ratio or popular-product");
  auto* popular_opt = verify->add_flag("--popular", popular, "Same as --vertex-set popular-ratio");
  auto* cx_opt = verify->add_option("--counterexample-dir", counterexample_dir);
  verify->add_option("--config", config_path, "Replay a saved run config");
  verify->add_option("--save-config", save_config, "Write the effective run config");

  auto* sweep = app.add_subcommand("sweep", "Bound-report table over a family and list of sizes");
  std::string sweep_family = "ap";
  std::string sweep_ns;
  std::string sweep_format = "csv";
  sweep->add_option("--family", sweep_family, "ap, gp, lattice, sector or random");
  sweep->add_option("--n", sweep_ns, "Comma-separated sizes");
  sweep->add_option("--seed", seed);
  sweep->add_option("--epsilon", epsilon);
  sweep->add_option("--format", sweep_format);
  sweep->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    if (*gen) {
      const FiniteComplexSet a = lab::family_member(gen_family, gen_n, seed, Rational::parse(epsilon));
      emit(format_set(a), out_path);
      return kPass;
    }

    if (*stats) {
      check_format(format);
      const lab::BoundReport r = lab::bound_report(load_set(stats_file), stats_file);
      emit(format == "json" ? lab::to_json(r).dump(2) + "\n" : lab::bound_csv_header() + lab::bound_csv_row(r),
           out_path);
      return kPass;
    }

    if (*verify) {
      lab::RunConfig config;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw Error(ErrorCode::ParseError, "cannot read " + config_path);
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
          throw Error(ErrorCode::ParseError, config_path + ": " + e.what());
        }
        config = lab::RunConfig::from_json(j.contains("config") ? j.at("config") : j);
      }
      const bool fresh = config_path.empty();
      if (fresh || suite_opt->count()) config.suites = lab::parse_suites(suite);
      if (family_opt->count()) config.family = family;
      if (fresh || count_opt->count()) config.count = count;
      if (fresh || seed_opt->count()) config.seed = seed;
      if (fresh || eps_opt->count()) config.epsilon = Rational::parse(epsilon);
      if (fresh || format_opt->count()) config.format = format;
      if (fresh || out_opt->count()) config.output = out_path;
      if (fresh || vertex_opt->count()) config.vertex_set = geom::parse_vertex_set(vertex_set);
      if (popular_opt->count()) config.vertex_set = geom::VertexSet::PopularRatio;
      if (fresh || cx_opt->count()) config.counterexample_dir = counterexample_dir;
      if (config.epsilon.sign() <= 0) throw Error(ErrorCode::BadParams, "epsilon must be positive");
      check_format(config.format);
      if (!save_config.empty()) emit(config.to_json().dump(2) + "\n", save_config);

      const lab::VerifyResult result = lab::run_verify(config);
      emit(config.format == "json" ? lab::to_json(result).dump(2) + "\n" : lab::to_csv(result), config.output);
      for (const auto& s : result.suites) {
        for (const auto& v : s.violations) std::cerr << "violation [" << s.name << "] " << v << '\n';
      }
      return result.passed() ? kPass : kViolation;
    }

    if (*sweep) {
      check_format(sweep_format);
      const std::vector<std::size_t> ns = parse_sizes(sweep_ns);
      const auto rows = lab::run_sweep(sweep_family, ns, seed, Rational::parse(epsilon));
      if (sweep_format == "csv") {
        emit(lab::sweep_csv(rows), out_path);
      } else {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& r : rows) arr.push_back(lab::to_json(r));
        emit(arr.dump(2) + "\n", out_path);
      }
      return kPass;
    }
  } catch (const Error& e) {
    std::cerr << "sumprod: " << e.what() << '\n';
    return e.code() == ErrorCode::IdentityViolation ? kViolation : kUsage;
  } catch (const std::exception& e) {
    std::cerr << "sumprod: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
