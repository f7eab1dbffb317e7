#include "ttpcd/coea.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include <fmt/format.h>

namespace ttpcd {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kCoEA:
      return "coea";
    case Mode::kQdOnly:
      return "qd";
    case Mode::kEdoOnly:
      return "edo";
  }
  return "unknown";
}

Mode mode_from_string(std::string_view name) {
  if (name == "coea") return Mode::kCoEA;
  if (name == "qd") return Mode::kQdOnly;
  if (name == "edo") return Mode::kEdoOnly;
  throw std::invalid_argument("unknown mode '" + std::string(name) + "' (expected coea, qd or edo)");
}

std::string_view to_string(ZMinMode mode) { return mode == ZMinMode::kDynamic ? "dynamic" : "fixed"; }

ZMinMode zmin_mode_from_string(std::string_view name) {
  if (name == "dynamic") return ZMinMode::kDynamic;
  if (name == "fixed") return ZMinMode::kFixed;
  throw std::invalid_argument("unknown z_min mode '" + std::string(name) + "' (expected dynamic or fixed)");
}

void RunConfig::validate() const {
  if (!(budget_multiplier >= 1.0)) throw std::invalid_argument("budget multiplier must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (mu < 1) throw std::invalid_argument("mu must be at least 1");
  if (grid.delta1 < 1 || grid.delta2 < 1) throw std::invalid_argument("grid resolution must be at least 1x1");
  if (!(grid.alpha1 > 0.0) || !(grid.alpha2 > 0.0 && grid.alpha2 <= 1.0)) {
    throw std::invalid_argument("grid windows need alpha1 > 0 and 0 < alpha2 <= 1");
  }
  if (!(interval_multiplier > 0.0)) throw std::invalid_argument("interval multiplier must be positive");
  if (tsp.population_size < 2) throw std::invalid_argument("TSP population size must be at least 2");
}

std::uint64_t RunConfig::budget(int m) const {
  return static_cast<std::uint64_t>(std::llround(budget_multiplier * static_cast<double>(m)));
}

double quality_threshold(double z_best, double alpha) { return z_best - alpha * std::abs(z_best); }

std::pair<const Solution*, const Solution*> select_parents(const QdGrid& grid, const EdoPopulation& pop, Rng& rng) {
  auto draw = [&]() -> const Solution* {
    const bool from_pop = !pop.empty() && (grid.empty() || std::bernoulli_distribution(0.5)(rng));
    if (from_pop) return &pop.member(std::uniform_int_distribution<std::size_t>(0, pop.size() - 1)(rng));
    return &grid.occupant(std::uniform_int_distribution<std::size_t>(0, grid.occupancy() - 1)(rng));
  };
  const Solution* first = draw();
  const Solution* second = draw();
  return {first, second};
}

namespace {

// Drops the lowest profit/weight items until the packing fits.
Packing repair(const TtpInstance& inst, Packing y) {
  double weight = packing_profit_weight(inst, y).weight;
  if (weight <= inst.capacity()) return y;
  std::vector<int> chosen;
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (y[j]) chosen.push_back(static_cast<int>(j));
  }
  std::stable_sort(chosen.begin(), chosen.end(), [&](int a, int b) {
    const Item& ia = inst.item(a);
    const Item& ib = inst.item(b);
    return ia.profit * ib.weight < ib.profit * ia.weight;
  });
  for (int j : chosen) {
    if (weight <= inst.capacity()) break;
    y[static_cast<std::size_t>(j)] = 0;
    weight -= inst.item(j).weight;
  }
  return y;
}

}  // namespace

Offspring generate_offspring(const TtpInstance& inst, const EaxCrossover& eax, const Solution& parent_one,
                             const Solution& parent_two, const TerminationPolicy& policy,
                             std::uint64_t budget_remaining, Rng& rng) {
  Tour child = eax(parent_one.tour, parent_two.tour, rng);
  std::optional<double> known;
  if (child == parent_one.tour) known = parent_one.z;
  const Packing seed = repair(inst, parent_one.packing);
  if (seed != parent_one.packing) known.reset();

  PackingResult packed = optimize_packing(inst, child, seed, known, policy, budget_remaining, rng);
  Offspring out;
  out.evaluations = packed.evaluations;
  if (packed.z) out.solution = make_solution(inst, std::move(child), std::move(packed.packing), *packed.z);
  return out;
}

CoevolutionEngine::CoevolutionEngine(const TtpInstance& inst, RunConfig config)
    : inst_(&inst), config_(std::move(config)), rng_(config_.seed), eax_(inst, config_.tsp.merge) {
  config_.validate();
}

void CoevolutionEngine::initialize() {
  const TtpInstance& inst = *inst_;
  const int m = inst.num_items();

  const TspResult tsp = solve_tsp(inst, config_.tsp, rng_);
  const KpResult kp = solve_kp_or_greedy(inst, config_.kp);
  g_star_exact_ = kp.exact;
  if (!(kp.g_star > 0.0)) throw InitializationError("optimal knapsack profit is zero; no item fits the knapsack");

  grid_.emplace(tsp.f_star, kp.g_star, config_.grid);
  adaptation_ = initial_adaptation(config_.policy, m, config_.interval_multiplier);
  budget_ = config_.budget(m);

  std::set<Tour> seen;
  const Packing seed = greedy_packing(inst);
  for (const Tour& tour : tsp.tour_pool) {
    if (evals_ >= budget_) break;
    if (!seen.insert(tour).second) continue;
    PackingResult packed = optimize_packing(inst, tour, seed, std::nullopt, adaptation_.policy, budget_ - evals_, rng_);
    evals_ += packed.evaluations;
    if (!packed.z) continue;
    grid_->try_insert(make_solution(inst, tour, std::move(packed.packing), *packed.z));
  }
  if (grid_->empty()) {
    throw InitializationError(fmt::format(
        "no initial solution fell inside the behaviour window (f* = {}, g* = {}); widen alpha1/alpha2", tsp.f_star,
        kp.g_star));
  }

  z_best_ = grid_->best_solution()->z;
  pop_.emplace(inst.num_cities(), m, config_.mu, quality_threshold(z_best_, config_.alpha));
  init_evals_ = evals_;
  adaptation_.z_at_interval_start = z_best_;
  adaptation_.next_boundary = (evals_ / adaptation_.interval_length + 1) * adaptation_.interval_length;
  initialized_ = true;
  record_sample();
}

std::pair<const Solution*, const Solution*> CoevolutionEngine::pick_parents() {
  if (config_.mode == Mode::kEdoOnly) {
    const bool filled = pop_->size() >= pop_->capacity();
    auto draw = [&]() -> const Solution* {
      if (filled) return &pop_->member(std::uniform_int_distribution<std::size_t>(0, pop_->size() - 1)(rng_));
      return &grid_->occupant(std::uniform_int_distribution<std::size_t>(0, grid_->occupancy() - 1)(rng_));
    };
    const Solution* first = draw();
    const Solution* second = draw();
    return {first, second};
  }
  return select_parents(*grid_, *pop_, rng_);
}

void CoevolutionEngine::update_threshold() {
  if (config_.zmin_mode == ZMinMode::kDynamic) pop_->raise_threshold(quality_threshold(z_best_, config_.alpha));
}

bool CoevolutionEngine::step() {
  if (!initialized_) initialize();
  if (evals_ >= budget_) return false;

  const auto [first, second] = pick_parents();
  Offspring child =
      generate_offspring(*inst_, eax_, *first, *second, adaptation_.policy, budget_ - evals_, rng_);
  evals_ += child.evaluations;
  ++offspring_;

  if (child.solution) {
    if (config_.mode != Mode::kEdoOnly) {
      grid_->try_insert(*child.solution);
      const double best = grid_->best_solution()->z;
      if (best > z_best_) {
        z_best_ = best;
        update_threshold();
      }
    }
    if (config_.mode != Mode::kQdOnly) pop_->offer(*child.solution, rng_);
  }
  close_intervals();
  return evals_ < budget_;
}

void CoevolutionEngine::close_intervals() {
  bool crossed = false;
  while (evals_ >= adaptation_.next_boundary) {
    const bool success = z_best_ > adaptation_.z_at_interval_start;
    adaptation_ = update_gamma(adaptation_, success);
    adaptation_.z_at_interval_start = z_best_;
    adaptation_.next_boundary += adaptation_.interval_length;
    crossed = true;
  }
  if (crossed) record_sample();
}

void CoevolutionEngine::record_sample() {
  RunSample s;
  s.evals = evals_;
  s.z_best = z_best_;
  s.h_p2 = pop_->empty() ? 0.0 : pop_->entropy().total();
  s.p2_size = pop_->size();
  s.grid_occupancy = grid_->occupancy();
  samples_.push_back(s);
}

RunLog CoevolutionEngine::run() {
  if (!initialized_) initialize();
  while (step()) {
  }
  if (samples_.empty() || samples_.back().evals != evals_) record_sample();

  const Solution* best = grid_->best_solution();
  RunLog log{
      samples_,
      grid_->f_star(),
      grid_->g_star(),
      g_star_exact_,
      evals_,
      init_evals_,
      offspring_,
      adaptation_.policy.gamma,
      pop_->z_min(),
      best ? std::optional<Solution>(*best) : std::nullopt,
      pop_->empty() ? Entropy{} : pop_->entropy(),
      *grid_,
      *pop_,
  };
  return log;
}

RunLog run(const TtpInstance& inst, const RunConfig& config) { return CoevolutionEngine(inst, config).run(); }

}  // namespace ttpcd
