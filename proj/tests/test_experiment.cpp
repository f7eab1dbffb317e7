#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "support.hpp"
#include "ttpcd/experiment.hpp"
#include "ttpcd/stats.hpp"

using namespace ttpcd;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ttpcd_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

fs::path write_generated(const fs::path& dir, const std::string& name, InstanceGenConfig cfg) {
  const fs::path p = dir / (name + ".ttp");
  std::ofstream out(p);
  write_instance(out, generate_instance(cfg));
  return p;
}

RunConfig quick_config() {
  RunConfig cfg;
  cfg.budget_multiplier = 200;
  cfg.interval_multiplier = 50;
  cfg.mu = 5;
  cfg.tsp.population_size = 20;
  cfg.tsp.crossovers_per_city = 50;
  return cfg;
}

std::vector<double> around(double mean) {
  std::vector<double> v;
  for (int k = 0; k < 10; ++k) v.push_back(mean - 0.009 + 0.002 * k);
  return v;
}

}  // namespace

TEST_CASE("artifact writers") {
  const TtpInstance inst = generate_instance({12, 11, 2, 0.5, false});
  RunConfig cfg = quick_config();
  const RunLog log = run(inst, cfg);

  std::ostringstream runlog;
  write_runlog_csv(runlog, log);
  CHECK(first_line(runlog.str()) == "evals,z_best,h_p2,p2_size,grid_occupancy");
  std::size_t lines = 0;
  for (char c : runlog.str()) lines += c == '\n';
  CHECK(lines == log.samples.size() + 1);

  std::ostringstream map;
  write_map_csv(map, log.grid);
  CHECK(first_line(map.str()) == "i,j,f,g,z");

  std::ostringstream freq;
  write_frequency_csv(freq, log.population);
  CHECK(first_line(freq.str()) == "type,key_a,key_b,count");
  if (!log.population.empty()) {
    CHECK(freq.str().find("\nedge,") != std::string::npos);
  }

  const nlohmann::json summary = summary_json("x", inst, cfg, log);
  CHECK(summary.at("instance") == "x");
  CHECK(summary.at("evaluations").get<std::uint64_t>() == log.evaluations);
  CHECK(summary.at("final_entropy").at("H").get<double>() == doctest::Approx(log.final_entropy.total()));
  const auto tour = summary.at("best_solution").at("tour").get<std::vector<int>>();
  CHECK(tour.front() == 1);
  CHECK(static_cast<int>(tour.size()) == inst.num_cities());
}

TEST_CASE("frequency export uses 1-based keys") {
  Rng rng(81);
  const TtpInstance inst = support::random_instance(4, 2, rng, 0.5, EdgeWeightType::kCeil2D, 0.0);
  EdoPopulation pop(4, 2, 3, -1e18);
  pop.offer(make_solution(inst, {0, 1, 2, 3}, {1, 0}), rng);
  std::ostringstream out;
  write_frequency_csv(out, pop);
  const std::string text = out.str();
  CHECK(text.find("edge,1,2,1\n") != std::string::npos);
  CHECK(text.find("edge,1,4,1\n") != std::string::npos);
  CHECK(text.find("item,1,,1\n") != std::string::npos);
  CHECK(text.find("item,2,") == std::string::npos);
}

TEST_CASE("experiment matrix writes every cell and is reproducible") {
  const fs::path dir = scratch_dir("matrix");
  const fs::path a = write_generated(dir, "alpha", {10, 9, 1, 0.5, false});
  const fs::path b = write_generated(dir, "beta", {11, 10, 2, 0.5, false});

  ExperimentSpec spec;
  spec.instances = {a.string(), b.string()};
  spec.modes = {Mode::kCoEA, Mode::kQdOnly, Mode::kEdoOnly};
  spec.policies = {PolicyKind::kFixed, PolicyKind::kGamma2};
  spec.seeds = {1, 2};
  spec.base = quick_config();
  spec.output_dir = (dir / "out1").string();
  spec.jobs = 2;
  const auto outcomes = run_experiments(spec);
  REQUIRE(outcomes.size() == 24);
  for (const CellOutcome& c : outcomes) {
    CHECK_MESSAGE(c.ok, c.error);
    for (const char* ext : {".log.csv", ".map.csv", ".freq.csv", ".summary.json"}) {
      CHECK(fs::exists(fs::path(spec.output_dir) / (c.stem + ext)));
    }
  }
  const auto summaries = load_summaries((fs::path(spec.output_dir) / "*.summary.json").string());
  CHECK(summaries.size() == 24);
  const auto index = nlohmann::json::parse(slurp(fs::path(spec.output_dir) / "index.json"));
  CHECK(index.size() == 24);

  spec.output_dir = (dir / "out2").string();
  spec.jobs = 1;
  run_experiments(spec);
  for (const CellOutcome& c : outcomes) {
    CHECK(slurp(dir / "out1" / (c.stem + ".log.csv")) == slurp(dir / "out2" / (c.stem + ".log.csv")));
    CHECK(slurp(dir / "out1" / (c.stem + ".summary.json")) == slurp(dir / "out2" / (c.stem + ".summary.json")));
  }
  CHECK(run_stem("alpha", Mode::kEdoOnly, PolicyKind::kGamma1, 3) == "alpha_edo_gamma1_s3");
  CHECK(instance_label("/x/y/eil51_n50.ttp") == "eil51_n50");
}

TEST_CASE("an unreadable instance fails only its own cells") {
  const fs::path dir = scratch_dir("broken");
  const fs::path good = write_generated(dir, "good", {10, 9, 1, 0.5, false});
  std::ofstream(dir / "bad.ttp") << "PROBLEM NAME: bad\nDIMENSION: x\n";
  ExperimentSpec spec;
  spec.instances = {good.string(), (dir / "bad.ttp").string(), (dir / "missing.ttp").string()};
  spec.seeds = {1, 2};
  spec.base = quick_config();
  spec.output_dir = (dir / "out").string();
  const auto outcomes = run_experiments(spec);
  REQUIRE(outcomes.size() == 6);
  int ok = 0;
  for (const CellOutcome& c : outcomes) {
    ok += c.ok;
    if (!c.ok) CHECK_FALSE(c.error.empty());
  }
  CHECK(ok == 2);
  const auto index = nlohmann::json::parse(slurp(dir / "out" / "index.json"));
  CHECK(index.size() == 6);
}

TEST_CASE("experiment matrix validation") {
  ExperimentSpec spec;
  CHECK_THROWS(spec.validate());
  spec.instances = {"x.ttp"};
  spec.seeds.clear();
  CHECK_THROWS(spec.validate());
}

TEST_CASE("comparison of two groups") {
  std::vector<double> low, high;
  for (int k = 1; k <= 10; ++k) {
    low.push_back(k);
    high.push_back(k + 10);
  }
  const CompareReport same = compare_groups({{{"i", low}}, {{"i", low}}}, Metric::kEntropy);
  REQUIRE(same.rows.size() == 1);
  CHECK(same.rows[0].notation == std::vector<std::string>{"2^*", "1^*"});

  const CompareReport diff = compare_groups({{{"i", low}}, {{"i", high}}}, Metric::kEntropy);
  CHECK(diff.rows[0].notation == std::vector<std::string>{"2^-", "1^+"});
  CHECK(diff.rows[0].pair_p_values[0] <= 0.001);
  CHECK(std::isnan(diff.rows[0].overall_p));
  CHECK(format_report(diff).find("1^+") != std::string::npos);

  CHECK_THROWS_AS(compare_groups({{{"i", low}}, {{"j", low}}}, Metric::kEntropy), std::invalid_argument);
  try {
    compare_groups({{{"i", low}, {"j", low}}, {{"i", low}}}, Metric::kEntropy);
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("j missing from side(s) 2") != std::string::npos);
  }
}

TEST_CASE("three groups use a Bonferroni-corrected threshold") {
  // Pairwise p of about 0.03 is significant alone but not at 0.05 / 3.
  const std::vector<double> a{1, 2, 3, 4, 5, 6, 7, 8};
  const std::vector<double> b{4, 5, 6, 7, 8, 9, 10, 11};
  const double p = stats::kruskal_wallis({a, b}).p_value;
  REQUIRE(p < 0.05);
  REQUIRE(p > 0.05 / 3);
  const CompareReport r = compare_groups({{{"i", a}}, {{"i", b}}, {{"i", b}}}, Metric::kEntropy);
  CHECK(r.rows[0].notation == std::vector<std::string>{"2^*3^*", "1^*3^*", "1^*2^*"});
  CHECK(r.rows[0].pair_p_values.size() == 3);
  CHECK(r.rows[0].overall_p > 0);
}

TEST_CASE("policy comparison means reproduce the expected notation") {
  struct Row {
    const char* id;
    double means[3];
    const char* notation[3];
  };
  const Row rows[] = {
      {"1", {8.7, 8.8, 8.2}, {"2^-3^+", "1^+3^+", "1^-2^-"}},
      {"2", {9.3, 9.3, 9.1}, {"2^*3^+", "1^*3^+", "1^-2^-"}},
      {"3", {9.9, 9.8, 9.6}, {"2^+3^+", "1^-3^+", "1^-2^-"}},
      {"5", {9.0, 9.0, 8.8}, {"2^*3^+", "1^*3^+", "1^-2^-"}},
      {"6", {9.4, 9.4, 9.2}, {"2^*3^+", "1^*3^+", "1^-2^-"}},
      {"15", {10.9, 10.9, 10.7}, {"2^*3^+", "1^*3^+", "1^-2^-"}},
      {"18", {11.4, 11.4, 11.1}, {"2^*3^+", "1^*3^+", "1^-2^-"}},
  };
  std::vector<std::map<std::string, std::vector<double>>> groups(3);
  for (const Row& row : rows) {
    for (int g = 0; g < 3; ++g) groups[g][row.id] = around(row.means[g]);
  }
  const CompareReport report = compare_groups(groups, Metric::kEntropy);
  REQUIRE(report.rows.size() == std::size(rows));
  for (const Row& row : rows) {
    CAPTURE(row.id);
    const auto it = std::find_if(report.rows.begin(), report.rows.end(),
                                 [&](const CompareRow& r) { return r.instance == row.id; });
    REQUIRE(it != report.rows.end());
    for (int g = 0; g < 3; ++g) CHECK(it->notation[g] == row.notation[g]);
  }
}

TEST_CASE("comparison of summary files") {
  const fs::path dir = scratch_dir("compare");
  const fs::path inst = write_generated(dir, "gamma", {10, 9, 4, 0.5, false});
  ExperimentSpec spec;
  spec.instances = {inst.string()};
  spec.seeds = {1, 2, 3};
  spec.base = quick_config();
  spec.output_dir = (dir / "out").string();
  run_experiments(spec);
  const auto side = load_summaries((dir / "out" / "*.summary.json").string());
  REQUIRE(side.size() == 3);
  for (Metric metric : {Metric::kEntropy, Metric::kObjective}) {
    const CompareReport r = compare_summaries({side, side}, metric);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].instance == "gamma");
    CHECK(r.rows[0].notation == std::vector<std::string>{"2^*", "1^*"});
  }
  CHECK_THROWS(compare_summaries({side, {side[0]}}, Metric::kEntropy));
  CHECK(metric_from_string("H") == Metric::kEntropy);
  CHECK(metric_from_string("Z") == Metric::kObjective);
  CHECK_THROWS(metric_from_string("Q"));
}

TEST_CASE("instance generation") {
  const TtpInstance inst = generate_instance({5, 4, 7, 0.5, false});
  std::ostringstream text;
  write_instance(text, inst);
  const TtpInstance back = parse_instance_string(text.str());
  CHECK(back.num_cities() == 5);
  CHECK(back.num_items() == 4);

  std::ostringstream again;
  write_instance(again, generate_instance({5, 4, 7, 0.5, false}));
  CHECK(again.str() == text.str());
  std::ostringstream other;
  write_instance(other, generate_instance({5, 4, 8, 0.5, false}));
  CHECK(other.str() != text.str());

  CHECK_THROWS(generate_instance({5, 4, 7, 0.0, false}));
  CHECK_THROWS(generate_instance({2, 4, 7, 0.5, false}));

  const TtpInstance big = generate_instance({9, 20, 3, 0.4, false});
  double total_weight = 0;
  for (int j = 0; j < big.num_items(); ++j) {
    CHECK(big.item(j).city == 1 + j % 8);
    CHECK(big.item(j).profit >= 1);
    CHECK(big.item(j).weight <= 1000);
    total_weight += big.item(j).weight;
  }
  CHECK(big.capacity() == std::floor(0.4 * total_weight));
  for (int c = 0; c < big.num_cities(); ++c) {
    CHECK(big.coords()[c].x >= 0);
    CHECK(big.coords()[c].x <= 1000);
  }
  const double z = *ttp_objective(big, nearest_neighbor_tour(big, 0), greedy_packing(big));
  CHECK(std::abs(z) < 1e-6 * total_weight);

  const TtpInstance corr = generate_instance({9, 20, 3, 0.5, true});
  for (int j = 0; j < corr.num_items(); ++j) CHECK(corr.item(j).profit == corr.item(j).weight + 100);
}
