#include "ttpcd/tsp_solver.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace ttpcd {

Tour canonical_tour(const Tour& cyclic) {
  const auto zero = std::find(cyclic.begin(), cyclic.end(), 0);
  Tour out(zero, cyclic.end());
  out.insert(out.end(), cyclic.begin(), zero);
  return out;
}

Tour nearest_neighbor_tour(const TtpInstance& inst, int start) {
  const int n = inst.num_cities();
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  Tour order;
  order.reserve(static_cast<std::size_t>(n));
  int cur = start;
  used[static_cast<std::size_t>(cur)] = 1;
  order.push_back(cur);
  for (int step = 1; step < n; ++step) {
    int best = -1;
    double best_d = 0.0;
    for (int v = 0; v < n; ++v) {
      if (used[static_cast<std::size_t>(v)]) continue;
      const double d = inst.distance(cur, v);
      if (best < 0 || d < best_d) {
        best = v;
        best_d = d;
      }
    }
    used[static_cast<std::size_t>(best)] = 1;
    order.push_back(best);
    cur = best;
  }
  return canonical_tour(order);
}

Tour random_tour(int n, Rng& rng) {
  Tour t(static_cast<std::size_t>(n));
  std::iota(t.begin(), t.end(), 0);
  std::shuffle(t.begin() + 1, t.end(), rng);
  return t;
}

namespace {

struct Member {
  Tour tour;
  double length;
};

// Direction-free key of a tour: from city 0 toward its smaller neighbour.
Tour undirected_key(const Tour& t) {
  if (t.size() < 3 || t[1] < t.back()) return t;
  Tour r(t.size());
  r[0] = t[0];
  std::reverse_copy(t.begin() + 1, t.end(), r.begin() + 1);
  return r;
}

std::vector<Member> run_once(const TtpInstance& inst, const TspGaConfig& config, const EaxCrossover& eax, Rng& rng) {
  const int n = inst.num_cities();
  std::vector<Member> pop;
  pop.reserve(config.population_size);
  std::map<Tour, int> present;
  std::uniform_int_distribution<int> city(0, n - 1);
  for (std::size_t k = 0; k < config.population_size; ++k) {
    Tour t = k % 2 == 0 ? nearest_neighbor_tour(inst, city(rng)) : random_tour(n, rng);
    // Tiny instances may have fewer distinct tours than members.
    for (int attempt = 0; attempt < 100 && present.count(undirected_key(t)); ++attempt) t = random_tour(n, rng);
    const double len = tour_length(inst, t);
    ++present[undirected_key(t)];
    pop.push_back({std::move(t), len});
  }

  // Children already in the population are discarded so that the final
  // pool keeps distinct tours.
  std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
  const std::size_t budget = config.crossovers_per_city * static_cast<std::size_t>(n);
  for (std::size_t step = 0; step < budget; ++step) {
    const std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    while (j == i) j = pick(rng);
    Tour child = eax(pop[i].tour, pop[j].tour, rng);
    const double len = tour_length(inst, child);
    auto worst = std::max_element(pop.begin(), pop.end(), [](const Member& a, const Member& b) { return a.length < b.length; });
    if (!(len < worst->length)) continue;
    Tour key = undirected_key(child);
    if (present.count(key)) continue;
    auto old = present.find(undirected_key(worst->tour));
    if (--old->second == 0) present.erase(old);
    present.emplace(std::move(key), 1);
    *worst = {std::move(child), len};
  }
  return pop;
}

}  // namespace

TspResult solve_tsp(const TtpInstance& inst, const TspGaConfig& config, Rng& rng) {
  if (config.population_size < 2) throw std::invalid_argument("TSP population size must be at least 2");
  const EaxCrossover eax(inst, config.merge);

  TspResult result;
  bool have = false;
  for (std::size_t r = 0; r < std::max<std::size_t>(config.restarts, 1); ++r) {
    auto pop = run_once(inst, config, eax, rng);
    const auto best = std::min_element(pop.begin(), pop.end(), [](const Member& a, const Member& b) { return a.length < b.length; });
    if (!have || best->length < result.f_star) {
      have = true;
      result.f_star = best->length;
      result.best = best->tour;
      result.tour_pool.clear();
      for (auto& m : pop) result.tour_pool.push_back(std::move(m.tour));
    }
  }
  return result;
}

}  // namespace ttpcd
