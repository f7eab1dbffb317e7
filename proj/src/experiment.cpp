#include "ttpcd/experiment.hpp"

#include <glob.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "ttpcd/stats.hpp"

namespace ttpcd {

namespace fs = std::filesystem;
using nlohmann::json;

void write_runlog_csv(std::ostream& out, const RunLog& log) {
  out << "evals,z_best,h_p2,p2_size,grid_occupancy\n";
  for (const RunSample& s : log.samples) {
    out << fmt::format("{},{},{},{},{}\n", s.evals, s.z_best, s.h_p2, s.p2_size, s.grid_occupancy);
  }
}

void write_map_csv(std::ostream& out, const QdGrid& grid) {
  out << "i,j,f,g,z\n";
  for (const MapRecord& r : grid.export_map()) out << fmt::format("{},{},{},{},{}\n", r.i, r.j, r.f, r.g, r.z);
}

void write_frequency_csv(std::ostream& out, const EdoPopulation& pop) {
  out << "type,key_a,key_b,count\n";
  for (const FrequencyRecord& r : pop.export_frequencies()) {
    if (r.kind == FrequencyRecord::Kind::kEdge) {
      out << fmt::format("edge,{},{},{}\n", r.a + 1, r.b + 1, r.count);
    } else {
      out << fmt::format("item,{},,{}\n", r.a + 1, r.count);
    }
  }
}

namespace {

json solution_json(const Solution& s) {
  std::vector<int> tour;
  tour.reserve(s.tour.size());
  for (int c : s.tour) tour.push_back(c + 1);
  std::vector<int> items;
  for (std::size_t j = 0; j < s.packing.size(); ++j) {
    if (s.packing[j]) items.push_back(static_cast<int>(j) + 1);
  }
  return json{{"tour", tour}, {"items", items}, {"f", s.f}, {"g", s.g}, {"z", s.z}};
}

}  // namespace

json summary_json(const std::string& label, const TtpInstance& inst, const RunConfig& config, const RunLog& log) {
  json j;
  j["instance"] = label;
  j["instance_name"] = inst.name();
  j["n"] = inst.num_cities();
  j["m"] = inst.num_items();
  j["mode"] = std::string(to_string(config.mode));
  j["policy"] = std::string(to_string(config.policy));
  j["seed"] = config.seed;
  j["config"] = {
      {"budget_multiplier", config.budget_multiplier},
      {"alpha", config.alpha},
      {"mu", config.mu},
      {"alpha1", config.grid.alpha1},
      {"alpha2", config.grid.alpha2},
      {"delta1", config.grid.delta1},
      {"delta2", config.grid.delta2},
      {"zmin_mode", std::string(to_string(config.zmin_mode))},
      {"interval_multiplier", config.interval_multiplier},
      {"tsp_population", config.tsp.population_size},
      {"tsp_crossovers_per_city", config.tsp.crossovers_per_city},
  };
  j["f_star"] = log.f_star;
  j["g_star"] = log.g_star;
  j["g_star_exact"] = log.g_star_exact;
  j["evaluations"] = log.evaluations;
  j["init_evaluations"] = log.init_evaluations;
  j["offspring"] = log.offspring;
  j["final_gamma"] = log.final_gamma;
  j["z_min"] = log.z_min;
  j["z_best"] = log.best ? json(log.best->z) : json(nullptr);
  j["final_entropy"] = {{"H", log.final_entropy.total()},
                        {"H_e", log.final_entropy.edges},
                        {"H_i", log.final_entropy.items}};
  j["p2_size"] = log.population.size();
  j["grid_occupancy"] = log.grid.occupancy();
  j["best_solution"] = log.best ? solution_json(*log.best) : json(nullptr);
  return j;
}

void ExperimentSpec::validate() const {
  if (instances.empty()) throw std::invalid_argument("at least one instance is required");
  if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
  if (modes.empty()) throw std::invalid_argument("at least one mode is required");
  if (policies.empty()) throw std::invalid_argument("at least one policy is required");
  if (jobs < 1) throw std::invalid_argument("jobs must be at least 1");
  base.validate();
}

std::string run_stem(const std::string& label, Mode mode, PolicyKind policy, std::uint64_t seed) {
  return fmt::format("{}_{}_{}_s{}", label, to_string(mode), to_string(policy), seed);
}

std::string instance_label(const std::string& path) { return fs::path(path).stem().string(); }

namespace {

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::vector<CellOutcome> run_experiments(const ExperimentSpec& spec) {
  spec.validate();
  const fs::path dir(spec.output_dir);
  fs::create_directories(dir);
  {
    // Fail early on an unwritable directory rather than once per cell.
    const fs::path probe = dir / ".write_probe";
    std::ofstream out(probe);
    if (!out) throw std::runtime_error("output directory " + dir.string() + " is not writable");
    out.close();
    fs::remove(probe);
  }

  struct Loaded {
    std::optional<TtpInstance> inst;
    std::string error;
  };
  std::vector<Loaded> loaded;
  for (const std::string& path : spec.instances) {
    Loaded l;
    try {
      l.inst.emplace(load_instance(path));
    } catch (const std::exception& e) {
      l.error = e.what();
    }
    loaded.push_back(std::move(l));
  }

  struct Cell {
    std::size_t instance;
    CellOutcome outcome;
  };
  std::vector<Cell> cells;
  for (std::size_t k = 0; k < spec.instances.size(); ++k) {
    const std::string label = instance_label(spec.instances[k]);
    for (Mode mode : spec.modes) {
      for (PolicyKind policy : spec.policies) {
        for (std::uint64_t seed : spec.seeds) {
          CellOutcome o;
          o.instance = spec.instances[k];
          o.mode = mode;
          o.policy = policy;
          o.seed = seed;
          o.stem = run_stem(label, mode, policy, seed);
          cells.push_back({k, std::move(o)});
        }
      }
    }
  }

  auto execute = [&](Cell& cell) {
    CellOutcome& o = cell.outcome;
    const Loaded& l = loaded[cell.instance];
    if (!l.inst) {
      o.error = l.error;
      return;
    }
    try {
      RunConfig config = spec.base;
      config.mode = o.mode;
      config.policy = o.policy;
      config.seed = o.seed;
      const RunLog log = run(*l.inst, config);
      std::ostringstream runlog, map, freq;
      write_runlog_csv(runlog, log);
      write_map_csv(map, log.grid);
      write_frequency_csv(freq, log.population);
      write_file(dir / (o.stem + ".log.csv"), runlog.str());
      write_file(dir / (o.stem + ".map.csv"), map.str());
      write_file(dir / (o.stem + ".freq.csv"), freq.str());
      write_file(dir / (o.stem + ".summary.json"),
                 summary_json(instance_label(o.instance), *l.inst, config, log).dump(2) + "\n");
      o.ok = true;
    } catch (const std::exception& e) {
      o.error = e.what();
    }
  };

  const std::size_t workers = std::min(spec.jobs, cells.size());
  if (workers <= 1) {
    for (Cell& c : cells) execute(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < cells.size(); k = next++) execute(cells[k]);
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<CellOutcome> outcomes;
  json index = json::array();
  for (Cell& c : cells) {
    const CellOutcome& o = c.outcome;
    json entry{{"instance", o.instance},
               {"mode", std::string(to_string(o.mode))},
               {"policy", std::string(to_string(o.policy))},
               {"seed", o.seed},
               {"stem", o.stem},
               {"ok", o.ok}};
    if (o.ok) {
      entry["files"] = {o.stem + ".log.csv", o.stem + ".map.csv", o.stem + ".freq.csv", o.stem + ".summary.json"};
    } else {
      entry["error"] = o.error;
    }
    index.push_back(std::move(entry));
    outcomes.push_back(std::move(c.outcome));
  }
  write_file(dir / "index.json", index.dump(2) + "\n");
  return outcomes;
}

Metric metric_from_string(const std::string& name) {
  if (name == "H" || name == "h") return Metric::kEntropy;
  if (name == "Z" || name == "z") return Metric::kObjective;
  throw std::invalid_argument("unknown metric '" + name + "' (expected H or Z)");
}

std::vector<json> load_summaries(const std::string& pattern) {
  glob_t g{};
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
  std::vector<std::string> paths;
  if (rc == 0) {
    for (std::size_t k = 0; k < g.gl_pathc; ++k) paths.emplace_back(g.gl_pathv[k]);
  }
  globfree(&g);
  if (rc != 0 && rc != GLOB_NOMATCH) throw std::runtime_error("glob failed for '" + pattern + "'");
  std::sort(paths.begin(), paths.end());
  std::vector<json> out;
  for (const std::string& p : paths) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot read " + p);
    try {
      out.push_back(json::parse(in));
    } catch (const json::exception& e) {
      throw std::runtime_error(p + ": " + e.what());
    }
  }
  return out;
}

namespace {

double metric_value(const json& s, Metric metric) {
  if (metric == Metric::kEntropy) return s.at("final_entropy").at("H").get<double>();
  const json& z = s.at("z_best");
  if (z.is_null()) return -std::numeric_limits<double>::infinity();
  return z.get<double>();
}

}  // namespace

CompareReport compare_groups(const std::vector<std::map<std::string, std::vector<double>>>& groups, Metric metric,
                             double alpha) {
  const std::size_t k = groups.size();
  if (k < 2) throw std::invalid_argument("comparison needs at least two groups");

  std::set<std::string> all;
  for (const auto& g : groups) {
    for (const auto& [name, values] : g) all.insert(name);
  }
  std::string mismatch;
  for (const std::string& name : all) {
    std::string missing;
    for (std::size_t a = 0; a < k; ++a) {
      if (!groups[a].count(name)) missing += (missing.empty() ? "" : ", ") + std::to_string(a + 1);
    }
    if (!missing.empty()) mismatch += fmt::format("\n  {} missing from side(s) {}", name, missing);
  }
  if (!mismatch.empty()) throw std::invalid_argument("instances differ across sides:" + mismatch);

  const std::size_t pairs = k * (k - 1) / 2;
  const double threshold = k == 2 ? alpha : alpha / static_cast<double>(pairs);

  CompareReport report;
  report.metric = metric;
  report.groups = k;
  for (const std::string& name : all) {
    CompareRow row;
    row.instance = name;
    std::vector<std::vector<double>> samples;
    for (const auto& g : groups) {
      const auto& v = g.at(name);
      if (v.empty()) throw std::invalid_argument("empty sample for " + name);
      samples.push_back(v);
      row.means.push_back(stats::mean(v));
      row.medians.push_back(stats::median(v));
    }
    row.overall_p = k > 2 ? stats::kruskal_wallis(samples).p_value : std::numeric_limits<double>::quiet_NaN();

    std::vector<std::vector<char>> sign(k, std::vector<char>(k, '*'));
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        const double p = k == 2 ? stats::mann_whitney_u(samples[a], samples[b]).p_value
                                : stats::kruskal_wallis({samples[a], samples[b]}).p_value;
        row.pair_p_values.push_back(p);
        if (p < threshold) {
          double da = row.medians[a];
          double db = row.medians[b];
          if (da == db) {
            da = row.means[a];
            db = row.means[b];
          }
          if (da != db) {
            sign[a][b] = da > db ? '+' : '-';
            sign[b][a] = da > db ? '-' : '+';
          }
        }
      }
    }
    for (std::size_t a = 0; a < k; ++a) {
      std::string s;
      for (std::size_t b = 0; b < k; ++b) {
        if (b != a) s += fmt::format("{}^{}", b + 1, sign[a][b]);
      }
      row.notation.push_back(std::move(s));
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

CompareReport compare_summaries(const std::vector<std::vector<json>>& groups, Metric metric, double alpha) {
  std::vector<std::map<std::string, std::vector<double>>> values;
  for (std::size_t a = 0; a < groups.size(); ++a) {
    if (groups[a].size() < 2) {
      throw std::invalid_argument(fmt::format("side {} has {} summaries; at least 2 are required", a + 1,
                                              groups[a].size()));
    }
    std::map<std::string, std::vector<double>> by_instance;
    for (const json& s : groups[a]) by_instance[s.at("instance").get<std::string>()].push_back(metric_value(s, metric));
    values.push_back(std::move(by_instance));
  }
  return compare_groups(values, metric, alpha);
}

std::string format_report(const CompareReport& report) {
  std::string out = fmt::format("metric: {}\n", report.metric == Metric::kEntropy ? "H" : "Z");
  for (const CompareRow& row : report.rows) {
    out += fmt::format("instance {}\n", row.instance);
    for (std::size_t a = 0; a < report.groups; ++a) {
      out += fmt::format("  ({}) mean {:.6g}  median {:.6g}  {}\n", a + 1, row.means[a], row.medians[a],
                         row.notation[a]);
    }
    std::size_t idx = 0;
    for (std::size_t a = 0; a < report.groups; ++a) {
      for (std::size_t b = a + 1; b < report.groups; ++b) {
        out += fmt::format("  p({},{}) = {:.4g}\n", a + 1, b + 1, row.pair_p_values[idx++]);
      }
    }
    if (report.groups > 2) out += fmt::format("  kruskal-wallis p = {:.4g}\n", row.overall_p);
  }
  return out;
}

TtpInstance generate_instance(const InstanceGenConfig& config) {
  if (config.n < 3) throw std::invalid_argument("n must be at least 3");
  if (config.m < 1) throw std::invalid_argument("m must be at least 1");
  if (!(config.capacity_factor > 0.0) || !std::isfinite(config.capacity_factor)) {
    throw std::invalid_argument("capacity factor must be positive");
  }

  Rng rng(config.seed);
  std::uniform_int_distribution<int> coord(0, 1000);
  std::uniform_int_distribution<int> value(1, 1000);
  std::vector<Point> coords;
  for (int i = 0; i < config.n; ++i) {
    const int x = coord(rng);
    const int y = coord(rng);
    coords.push_back({static_cast<double>(x), static_cast<double>(y)});
  }
  std::vector<Item> items;
  double total_weight = 0.0;
  for (int j = 0; j < config.m; ++j) {
    Item it;
    if (config.correlated) {
      it.weight = value(rng);
      it.profit = it.weight + 100.0;
    } else {
      it.profit = value(rng);
      it.weight = value(rng);
    }
    it.city = 1 + j % (config.n - 1);
    total_weight += it.weight;
    items.push_back(it);
  }
  TtpInstance::Params params;
  params.name = fmt::format("desk-n{}-m{}-s{}", config.n, config.m, config.seed);
  params.knapsack_data_type = config.correlated ? "bounded strongly corr" : "uncorrelated";
  params.capacity = std::floor(config.capacity_factor * total_weight);
  if (params.capacity < 1.0) throw std::invalid_argument("capacity factor yields a zero capacity");

  // Calibrate the rent on a provisional instance.
  TtpInstance draft(params, coords, items);
  const Tour tour = nearest_neighbor_tour(draft, 0);
  const Packing packing = greedy_packing(draft);
  const double profit = packing_profit_weight(draft, packing).profit;
  const double time = travel_time(draft, tour, packing);
  params.renting_ratio = profit > 0.0 && time > 0.0 ? profit / time : 1.0;
  return TtpInstance(params, std::move(coords), std::move(items));
}

}  // namespace ttpcd
