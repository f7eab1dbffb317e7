#pragma once

#include <cstddef>
#include <vector>

#include "ttpcd/eax.hpp"
#include "ttpcd/instance.hpp"

namespace ttpcd {

struct TspGaConfig {
  std::size_t population_size = 100;
  /// Crossover budget per restart is crossovers_per_city * n.
  std::size_t crossovers_per_city = 2000;
  std::size_t restarts = 1;
  MergeOptions merge;
};

struct TspResult {
  double f_star = 0.0;
  Tour best;
  /// Final population of the restart that produced f_star.
  std::vector<Tour> tour_pool;
};

Tour nearest_neighbor_tour(const TtpInstance& inst, int start);

Tour random_tour(int n, Rng& rng);

/// Rotates a closed tour so that it starts at city 0, keeping its direction.
Tour canonical_tour(const Tour& cyclic);

/// Steady-state EAX-1AB genetic algorithm: two random parents, one child,
/// the child replaces the longest member when it is strictly shorter.
TspResult solve_tsp(const TtpInstance& inst, const TspGaConfig& config, Rng& rng);

}  // namespace ttpcd
