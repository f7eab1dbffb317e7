// Independent reference implementations used as test oracles. They share no
// code with the library beyond its data types.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "ttpcd/instance.hpp"

namespace support {

using ttpcd::EdgeWeightType;
using ttpcd::Item;
using ttpcd::Packing;
using ttpcd::Point;
using ttpcd::Rng;
using ttpcd::Tour;
using ttpcd::TtpInstance;

inline TtpInstance random_instance(int n, int m, Rng& rng, double capacity_fraction = 0.5,
                                   EdgeWeightType type = EdgeWeightType::kCeil2D, double renting_ratio = -1.0) {
  std::uniform_int_distribution<int> coord(0, 100);
  std::uniform_int_distribution<int> value(1, 50);
  std::vector<Point> coords;
  for (int i = 0; i < n; ++i) coords.push_back({double(coord(rng)), double(coord(rng))});
  std::vector<Item> items;
  double total = 0.0;
  for (int j = 0; j < m; ++j) {
    Item it;
    it.profit = value(rng);
    it.weight = value(rng);
    it.city = 1 + std::uniform_int_distribution<int>(0, n - 2)(rng);
    total += it.weight;
    items.push_back(it);
  }
  TtpInstance::Params p;
  p.name = "random";
  p.edge_weight_type = type;
  p.capacity = std::max(1.0, std::floor(capacity_fraction * total));
  p.min_speed = 0.1;
  p.max_speed = 1.0;
  p.renting_ratio = renting_ratio >= 0.0 ? renting_ratio : std::uniform_real_distribution<double>(0.0, 2.0)(rng);
  return TtpInstance(p, std::move(coords), std::move(items));
}

inline Tour shuffled_tour(int n, Rng& rng) {
  Tour t(static_cast<std::size_t>(n));
  std::iota(t.begin(), t.end(), 0);
  std::shuffle(t.begin() + 1, t.end(), rng);
  return t;
}

inline Packing random_feasible_packing(const TtpInstance& inst, Rng& rng) {
  Packing y(static_cast<std::size_t>(inst.num_items()), 0);
  std::vector<int> order(y.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  double w = 0.0;
  for (int j : order) {
    if (std::bernoulli_distribution(0.5)(rng) && w + inst.item(j).weight <= inst.capacity()) {
      y[static_cast<std::size_t>(j)] = 1;
      w += inst.item(j).weight;
    }
  }
  return y;
}

inline double oracle_distance(Point a, Point b, EdgeWeightType type) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double d = std::sqrt(dx * dx + dy * dy);
  return type == EdgeWeightType::kCeil2D ? std::ceil(d) : std::floor(d + 0.5);
}

// Walks the tour leg by leg, picking up items on arrival at each city.
// NaN for an overweight packing.
inline double oracle_objective(const TtpInstance& inst, const Tour& tour, const Packing& y) {
  double capacity_used = 0.0;
  double profit = 0.0;
  for (int j = 0; j < inst.num_items(); ++j) {
    if (y[static_cast<std::size_t>(j)]) {
      capacity_used += inst.item(j).weight;
      profit += inst.item(j).profit;
    }
  }
  if (capacity_used > inst.capacity()) return std::numeric_limits<double>::quiet_NaN();
  const double nu = (inst.max_speed() - inst.min_speed()) / inst.capacity();
  double carried = 0.0;
  double time = 0.0;
  const std::size_t n = tour.size();
  for (std::size_t k = 0; k < n; ++k) {
    const int here = tour[k];
    for (int j = 0; j < inst.num_items(); ++j) {
      if (y[static_cast<std::size_t>(j)] && inst.item(j).city == here) carried += inst.item(j).weight;
    }
    const int next = tour[(k + 1) % n];
    const double leg = oracle_distance(inst.coords()[static_cast<std::size_t>(here)],
                                       inst.coords()[static_cast<std::size_t>(next)], inst.edge_weight_type());
    time += leg / (inst.max_speed() - nu * carried);
  }
  return profit - inst.renting_ratio() * time;
}

inline double oracle_tour_length(const TtpInstance& inst, const Tour& tour) {
  double total = 0.0;
  for (std::size_t k = 0; k < tour.size(); ++k) {
    total += oracle_distance(inst.coords()[static_cast<std::size_t>(tour[k])],
                             inst.coords()[static_cast<std::size_t>(tour[(k + 1) % tour.size()])],
                             inst.edge_weight_type());
  }
  return total;
}

using Edge = std::pair<int, int>;

inline Edge undirected(int u, int v) { return u < v ? Edge{u, v} : Edge{v, u}; }

inline std::set<Edge> edge_set(const Tour& t) {
  std::set<Edge> out;
  for (std::size_t k = 0; k < t.size(); ++k) out.insert(undirected(t[k], t[(k + 1) % t.size()]));
  return out;
}

inline bool is_permutation_from_zero(const Tour& t, int n) {
  if (static_cast<int>(t.size()) != n || t.empty() || t[0] != 0) return false;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int c : t) {
    if (c < 0 || c >= n || seen[static_cast<std::size_t>(c)]) return false;
    seen[static_cast<std::size_t>(c)] = 1;
  }
  return true;
}

// Connected components of an undirected multigraph given as an edge list.
inline int component_count(int n, const std::vector<Edge>& edges) {
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  for (auto [u, v] : edges) parent[static_cast<std::size_t>(find(u))] = find(v);
  int count = 0;
  for (int i = 0; i < n; ++i) count += find(i) == i;
  return count;
}

struct EntropyParts {
  double edges = 0.0;
  double items = 0.0;
};

inline double shannon(const std::map<long, int>& counts) {
  double total = 0.0;
  for (const auto& [k, c] : counts) total += c;
  if (total == 0.0) return 0.0;
  double h = 0.0;
  for (const auto& [k, c] : counts) {
    const double p = c / total;
    h -= p * std::log(p);
  }
  return h;
}

// Entropy recounted from scratch over the given tours and packings.
inline EntropyParts oracle_entropy(const std::vector<Tour>& tours, const std::vector<Packing>& packings) {
  std::map<long, int> edges;
  std::map<long, int> items;
  for (const Tour& t : tours) {
    for (auto [u, v] : edge_set(t)) ++edges[long(u) * 100000 + v];
  }
  for (const Packing& y : packings) {
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j]) ++items[long(j)];
    }
  }
  return {shannon(edges), shannon(items)};
}

// Best 0/1 knapsack profit by enumerating every subset.
inline double oracle_knapsack(const std::vector<double>& profits, const std::vector<double>& weights, double capacity) {
  const std::size_t m = profits.size();
  double best = 0.0;
  for (unsigned long mask = 0; mask < (1UL << m); ++mask) {
    double p = 0.0;
    double w = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (mask & (1UL << j)) {
        p += profits[j];
        w += weights[j];
      }
    }
    if (w <= capacity) best = std::max(best, p);
  }
  return best;
}

// Decomposition of K_n (n odd) into (n-1)/2 edge-disjoint Hamiltonian cycles.
inline std::vector<Tour> walecki_cycles(int n) {
  const int k = (n - 1) / 2;
  const int ring = n - 1;  // cities 0..n-2 on a ring, city n-1 in the centre
  std::vector<Tour> cycles;
  for (int i = 0; i < k; ++i) {
    Tour t{n - 1};
    for (int s = 0; s < ring; ++s) {
      const int step = (s + 1) / 2;
      const int offset = s % 2 == 1 ? step : -step;
      t.push_back(((i + offset) % ring + ring) % ring);
    }
    const auto zero = std::find(t.begin(), t.end(), 0);
    std::rotate(t.begin(), zero, t.end());
    cycles.push_back(t);
  }
  return cycles;
}

}  // namespace support
