#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttpcd/coea.hpp"

namespace ttpcd {

// ---- Artifact formats -------------------------------------------------------

/// Header "evals,z_best,h_p2,p2_size,grid_occupancy".
void write_runlog_csv(std::ostream& out, const RunLog& log);

/// Header "i,j,f,g,z", one row per occupied cell.
void write_map_csv(std::ostream& out, const QdGrid& grid);

/// Header "type,key_a,key_b,count"; cities and items are written 1-based and
/// item rows leave key_b empty.
void write_frequency_csv(std::ostream& out, const EdoPopulation& pop);

nlohmann::json summary_json(const std::string& instance_label, const TtpInstance& inst, const RunConfig& config,
                            const RunLog& log);

// ---- Experiment matrix ------------------------------------------------------

struct ExperimentSpec {
  std::vector<std::string> instances;
  std::vector<Mode> modes{Mode::kCoEA};
  std::vector<PolicyKind> policies{PolicyKind::kGamma2};
  std::vector<std::uint64_t> seeds{1};
  RunConfig base;
  std::string output_dir = "results";
  std::size_t jobs = 1;

  void validate() const;
};

struct CellOutcome {
  std::string instance;
  Mode mode = Mode::kCoEA;
  PolicyKind policy = PolicyKind::kGamma2;
  std::uint64_t seed = 0;
  std::string stem;
  bool ok = false;
  std::string error;
};

/// "<instance>_<mode>_<policy>_s<seed>"
std::string run_stem(const std::string& instance_label, Mode mode, PolicyKind policy, std::uint64_t seed);

/// Instance label used in artifact names: the file name without its extension.
std::string instance_label(const std::string& path);

/// Runs every (instance, mode, policy, seed) cell on a pool of spec.jobs
/// workers, writes "<stem>.log.csv", "<stem>.map.csv", "<stem>.freq.csv" and
/// "<stem>.summary.json" per cell plus "index.json" listing all cells.
/// A failing cell is recorded and the others proceed.
std::vector<CellOutcome> run_experiments(const ExperimentSpec& spec);

// ---- Comparison -------------------------------------------------------------

enum class Metric { kEntropy, kObjective };

Metric metric_from_string(const std::string& name);

/// Summary files matching a shell glob, sorted by path.
std::vector<nlohmann::json> load_summaries(const std::string& pattern);

struct CompareRow {
  std::string instance;
  std::vector<double> means;
  std::vector<double> medians;
  /// p-value per unordered pair (0,1), (0,2), (1,2), ...
  std::vector<double> pair_p_values;
  /// Kruskal-Wallis over all groups when there are more than two, else NaN.
  double overall_p = 0.0;
  /// Per group, e.g. "2^+3^*": group 1's median is significantly better than
  /// group 2's and not significantly different from group 3's.
  std::vector<std::string> notation;
};

struct CompareReport {
  Metric metric = Metric::kEntropy;
  std::size_t groups = 0;
  std::vector<CompareRow> rows;
};

/// Two groups: two-sided Mann-Whitney at alpha. Three or more: pairwise
/// Kruskal-Wallis with Bonferroni correction over the pairs. Higher is better
/// for both metrics. Throws when the groups cover different instances.
CompareReport compare_summaries(const std::vector<std::vector<nlohmann::json>>& groups, Metric metric,
                                double alpha = 0.05);

/// Same as compare_summaries on raw values, keyed by instance per group.
CompareReport compare_groups(const std::vector<std::map<std::string, std::vector<double>>>& groups, Metric metric,
                             double alpha = 0.05);

std::string format_report(const CompareReport& report);

// ---- Instance generation ----------------------------------------------------

struct InstanceGenConfig {
  int n = 20;
  int m = 19;
  std::uint64_t seed = 1;
  double capacity_factor = 0.5;
  bool correlated = false;
};

/// Uniform integer coordinates in [0, 1000]^2, profits and weights in
/// [1, 1000] (correlated: profit = weight + 100), items assigned round-robin
/// to cities 2..n, W = floor(capacity_factor * sum of weights). The renting
/// ratio is set so that the nearest-neighbour tour with the greedy packing
/// scores exactly zero.
TtpInstance generate_instance(const InstanceGenConfig& config);

}  // namespace ttpcd
