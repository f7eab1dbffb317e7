// ttpcd: run co-evolution experiments, compare result sets, generate instances.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ttpcd/experiment.hpp"

namespace {

// "1,2,5-8" -> {1, 2, 5, 6, 7, 8}
std::vector<std::uint64_t> parse_seeds(const std::vector<std::string>& tokens) {
  std::vector<std::uint64_t> seeds;
  for (const std::string& raw : tokens) {
    std::stringstream ss(raw);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) continue;
      const auto dash = tok.find('-');
      try {
        if (dash == std::string::npos) {
          seeds.push_back(std::stoull(tok));
        } else {
          const std::uint64_t lo = std::stoull(tok.substr(0, dash));
          const std::uint64_t hi = std::stoull(tok.substr(dash + 1));
          if (hi < lo) throw std::invalid_argument("empty range");
          for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        }
      } catch (const std::exception&) {
        throw CLI::ValidationError("--seeds", "bad seed token '" + tok + "'");
      }
    }
  }
  return seeds;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("TTPCD_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring non-numeric TTPCD_SEED '" << env << "'\n";
    }
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Co-evolution of quality diversity and entropy diversity for the Traveling Thief Problem"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "Run every (instance, mode, policy, seed) cell");
  std::vector<std::string> instances;
  std::vector<std::string> mode_names{"coea"};
  std::vector<std::string> policy_names{"gamma2"};
  std::vector<std::string> seed_tokens;
  std::string zmin_name = "dynamic";
  ttpcd::ExperimentSpec spec;
  run_cmd->add_option("--instance", instances, "Instance file(s)")->required()->delimiter(',');
  run_cmd->add_option("--mode", mode_names, "coea, qd or edo")
      ->delimiter(',')
      ->check(CLI::IsMember({"coea", "qd", "edo"}));
  run_cmd->add_option("--policy", policy_names, "fixed, gamma1 or gamma2")
      ->delimiter(',')
      ->check(CLI::IsMember({"fixed", "gamma1", "gamma2"}));
  run_cmd->add_option("--seeds", seed_tokens, "Seeds, e.g. 1,2,3 or 1-10 (default $TTPCD_SEED or 1)");
  run_cmd->add_option("--budget-mult", spec.base.budget_multiplier, "Evaluation budget per item")
      ->capture_default_str();
  run_cmd->add_option("--alpha", spec.base.alpha, "Quality fraction for z_min")->capture_default_str();
  run_cmd->add_option("--alpha1", spec.base.grid.alpha1, "Tour-length window fraction")->capture_default_str();
  run_cmd->add_option("--alpha2", spec.base.grid.alpha2, "Profit window fraction")->capture_default_str();
  run_cmd->add_option("--delta1", spec.base.grid.delta1, "Grid cells along tour length")->capture_default_str();
  run_cmd->add_option("--delta2", spec.base.grid.delta2, "Grid cells along profit")->capture_default_str();
  run_cmd->add_option("--mu", spec.base.mu, "Entropy population size")->capture_default_str();
  run_cmd->add_option("--zmin-mode", zmin_name, "dynamic or fixed")
      ->check(CLI::IsMember({"dynamic", "fixed"}))
      ->capture_default_str();
  run_cmd->add_option("--interval-mult", spec.base.interval_multiplier, "Adaptation interval per item")
      ->capture_default_str();
  run_cmd->add_option("--tsp-crossovers", spec.base.tsp.crossovers_per_city, "TSP GA crossovers per city")
      ->capture_default_str();
  run_cmd->add_option("--jobs", spec.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", spec.output_dir, "Output directory")->capture_default_str();

  // compare
  auto* cmp_cmd = app.add_subcommand("compare", "Compare two or three result sets by their summaries");
  std::vector<std::string> globs;
  std::string metric_name = "H";
  double test_alpha = 0.05;
  cmp_cmd->add_option("globs", globs, "Summary globs, one per side")->required()->expected(2, 3);
  cmp_cmd->add_option("--metric", metric_name, "H or Z")->check(CLI::IsMember({"H", "Z"}))->capture_default_str();
  cmp_cmd->add_option("--significance", test_alpha, "Family-wise significance level")->capture_default_str();

  // gen-instance
  auto* gen_cmd = app.add_subcommand("gen-instance", "Write a random instance");
  ttpcd::InstanceGenConfig gen;
  std::string gen_out = "-";
  bool seed_given = false;
  gen_cmd->add_option("--n", gen.n, "Number of cities")->required();
  gen_cmd->add_option("--m", gen.m, "Number of items")->required();
  auto* gen_seed = gen_cmd->add_option("--seed", gen.seed, "Random seed (default $TTPCD_SEED or 1)");
  gen_cmd->add_option("--capacity-factor", gen.capacity_factor, "W as a fraction of the total weight")
      ->capture_default_str();
  gen_cmd->add_flag("--correlated", gen.correlated, "Strongly correlated profits");
  gen_cmd->add_option("--out", gen_out, "Output file, - for stdout")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) {
      spec.instances = instances;
      spec.modes.clear();
      for (const auto& m : mode_names) spec.modes.push_back(ttpcd::mode_from_string(m));
      spec.policies.clear();
      for (const auto& p : policy_names) spec.policies.push_back(ttpcd::policy_from_string(p));
      spec.seeds = seed_tokens.empty() ? std::vector<std::uint64_t>{default_seed()} : parse_seeds(seed_tokens);
      spec.base.zmin_mode = ttpcd::zmin_mode_from_string(zmin_name);
      const auto outcomes = ttpcd::run_experiments(spec);
      int failed = 0;
      for (const auto& o : outcomes) {
        if (o.ok) {
          std::cout << "ok     " << o.stem << '\n';
        } else {
          ++failed;
          std::cout << "FAILED " << o.stem << ": " << o.error << '\n';
        }
      }
      std::cout << fmt::format("{} of {} runs succeeded; artifacts in {}\n", outcomes.size() - failed,
                               outcomes.size(), spec.output_dir);
      return failed == 0 ? 0 : 1;
    }
    if (*cmp_cmd) {
      std::vector<std::vector<nlohmann::json>> sides;
      for (const auto& g : globs) sides.push_back(ttpcd::load_summaries(g));
      const auto report = ttpcd::compare_summaries(sides, ttpcd::metric_from_string(metric_name), test_alpha);
      std::cout << ttpcd::format_report(report);
      return 0;
    }
    if (*gen_cmd) {
      seed_given = gen_seed->count() > 0;
      if (!seed_given) gen.seed = default_seed();
      const auto inst = ttpcd::generate_instance(gen);
      if (gen_out == "-") {
        ttpcd::write_instance(std::cout, inst);
      } else {
        std::ofstream out(gen_out);
        if (!out) throw std::runtime_error("cannot write " + gen_out);
        ttpcd::write_instance(out, inst);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
