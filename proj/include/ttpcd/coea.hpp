#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "ttpcd/eax.hpp"
#include "ttpcd/edo_population.hpp"
#include "ttpcd/instance.hpp"
#include "ttpcd/knapsack.hpp"
#include "ttpcd/packing.hpp"
#include "ttpcd/qd_grid.hpp"
#include "ttpcd/tsp_solver.hpp"

namespace ttpcd {

/// kCoEA evolves both archives, kQdOnly only the MAP-Elites grid, kEdoOnly
/// only the entropy population (the grid is frozen after initialisation).
enum class Mode { kCoEA, kQdOnly, kEdoOnly };

/// kDynamic tracks the best objective of the grid; kFixed freezes the
/// threshold computed after initialisation.
enum class ZMinMode { kDynamic, kFixed };

std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view name);
std::string_view to_string(ZMinMode mode);
ZMinMode zmin_mode_from_string(std::string_view name);

struct RunConfig {
  /// Global budget is budget_multiplier * m objective evaluations.
  double budget_multiplier = 1'000'000.0;
  /// Quality fraction: z_min = Z - alpha * |Z|.
  double alpha = 0.10;
  PolicyKind policy = PolicyKind::kGamma2;
  std::size_t mu = 50;
  GridConfig grid;
  Mode mode = Mode::kCoEA;
  ZMinMode zmin_mode = ZMinMode::kDynamic;
  std::uint64_t seed = 1;
  /// Adaptation interval u = interval_multiplier * m evaluations.
  double interval_multiplier = 2000.0;
  TspGaConfig tsp;
  KpOptions kp;

  void validate() const;
  std::uint64_t budget(int m) const;
};

class InitializationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunSample {
  std::uint64_t evals = 0;
  double z_best = 0.0;
  double h_p2 = 0.0;
  std::size_t p2_size = 0;
  std::size_t grid_occupancy = 0;
};

struct RunLog {
  std::vector<RunSample> samples;
  double f_star = 0.0;
  double g_star = 0.0;
  bool g_star_exact = true;
  std::uint64_t evaluations = 0;
  std::uint64_t init_evaluations = 0;
  std::uint64_t offspring = 0;
  double final_gamma = 0.0;
  double z_min = 0.0;
  std::optional<Solution> best;
  Entropy final_entropy;
  QdGrid grid;
  EdoPopulation population;
};

/// z_min for quality fraction alpha relative to the best objective so far.
double quality_threshold(double z_best, double alpha);

/// Draws one member uniformly from the grid or population. With both
/// available, each parent picks its source by a fair coin.
std::pair<const Solution*, const Solution*> select_parents(const QdGrid& grid, const EdoPopulation& pop, Rng& rng);

struct Offspring {
  std::optional<Solution> solution;
  std::uint64_t evaluations = 0;
};

/// Tour by EAX-1AB, packing inherited from parent one and improved by the
/// inner (1+1) EA. When the crossover returns parent one's tour unchanged its
/// objective is reused without an evaluation.
Offspring generate_offspring(const TtpInstance& inst, const EaxCrossover& eax, const Solution& parent_one,
                             const Solution& parent_two, const TerminationPolicy& policy,
                             std::uint64_t budget_remaining, Rng& rng);

/// One run of the co-evolutionary algorithm. Construct, then either call
/// run() or drive it with initialize() and step().
class CoevolutionEngine {
 public:
  CoevolutionEngine(const TtpInstance& inst, RunConfig config);

  /// Reference values, initial tour pool, packings, grid. Throws
  /// InitializationError when no pooled solution lands in the grid window.
  void initialize();

  /// One offspring through both survival selections. False once the budget is spent.
  bool step();

  RunLog run();

  const QdGrid& grid() const { return *grid_; }
  const EdoPopulation& population() const { return *pop_; }
  const AdaptationState& adaptation() const noexcept { return adaptation_; }
  std::uint64_t evaluations() const noexcept { return evals_; }
  std::uint64_t budget() const noexcept { return budget_; }
  double z_best() const noexcept { return z_best_; }
  const std::vector<RunSample>& samples() const noexcept { return samples_; }
  const RunConfig& config() const noexcept { return config_; }

 private:
  void record_sample();
  void update_threshold();
  void close_intervals();
  std::pair<const Solution*, const Solution*> pick_parents();

  const TtpInstance* inst_;
  RunConfig config_;
  Rng rng_;
  EaxCrossover eax_;
  std::optional<QdGrid> grid_;
  std::optional<EdoPopulation> pop_;
  AdaptationState adaptation_;
  std::uint64_t budget_ = 0;
  std::uint64_t evals_ = 0;
  std::uint64_t init_evals_ = 0;
  std::uint64_t offspring_ = 0;
  double z_best_ = 0.0;
  bool g_star_exact_ = true;
  bool initialized_ = false;
  std::vector<RunSample> samples_;
};

RunLog run(const TtpInstance& inst, const RunConfig& config);

}  // namespace ttpcd
