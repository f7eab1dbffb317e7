#include "ttpcd/knapsack.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include <fmt/format.h>

namespace ttpcd {

KpResult solve_knapsack(std::span<const double> profits, std::span<const double> weights, double capacity,
                        const KpOptions& options) {
  if (profits.size() != weights.size()) throw std::invalid_argument("profits and weights differ in length");
  if (!(capacity >= 0.0)) throw std::invalid_argument("capacity must be non-negative");
  for (double w : weights) {
    if (!(w >= 0.0) || w != std::floor(w)) throw std::invalid_argument("knapsack weights must be non-negative integers");
  }

  const std::size_t m = profits.size();
  const std::size_t cap = static_cast<std::size_t>(std::floor(capacity));
  const std::size_t row_words = (cap + 1 + 63) / 64;

  const long double needed = static_cast<long double>(m) * row_words * sizeof(std::uint64_t) +
                             static_cast<long double>(cap + 1) * sizeof(double);
  if (needed > static_cast<long double>(options.memory_budget_bytes)) {
    throw KnapsackCapacityError(fmt::format(
        "knapsack DP needs ~{:.0f} MiB for m={} and W={}, over the {} MiB budget; use the greedy near-optimal fallback",
        static_cast<double>(needed / (1024.0L * 1024.0L)), m, cap, options.memory_budget_bytes >> 20));
  }

  std::vector<double> best(cap + 1, 0.0);
  // take[j] bit c: item j improved capacity c when it was processed.
  std::vector<std::uint64_t> take(m * row_words, 0);

  for (std::size_t j = 0; j < m; ++j) {
    const double p = profits[j];
    const std::size_t w = static_cast<std::size_t>(weights[j]);
    if (w > cap) continue;
    std::uint64_t* row = take.data() + j * row_words;
    for (std::size_t c = cap + 1; c-- > w;) {
      const double candidate = best[c - w] + p;
      if (candidate > best[c]) {
        best[c] = candidate;
        row[c >> 6] |= std::uint64_t{1} << (c & 63);
      }
    }
  }

  KpResult result;
  result.g_star = best[cap];
  result.selection.assign(m, 0);
  std::size_t c = cap;
  for (std::size_t j = m; j-- > 0;) {
    const std::uint64_t* row = take.data() + j * row_words;
    if ((row[c >> 6] >> (c & 63)) & 1U) {
      result.selection[j] = 1;
      c -= static_cast<std::size_t>(weights[j]);
    }
  }
  return result;
}

namespace {

void split_items(const TtpInstance& inst, std::vector<double>& profits, std::vector<double>& weights) {
  profits.reserve(inst.items().size());
  weights.reserve(inst.items().size());
  for (const Item& it : inst.items()) {
    profits.push_back(it.profit);
    weights.push_back(it.weight);
  }
}

}  // namespace

KpResult solve_kp(const TtpInstance& inst, const KpOptions& options) {
  std::vector<double> profits;
  std::vector<double> weights;
  split_items(inst, profits, weights);
  return solve_knapsack(profits, weights, inst.capacity(), options);
}

KpResult solve_kp_greedy(const TtpInstance& inst) {
  const auto& items = inst.items();
  std::vector<int> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  auto ratio = [&](int j) {
    const Item& it = items[static_cast<std::size_t>(j)];
    return it.weight > 0.0 ? it.profit / it.weight : std::numeric_limits<double>::infinity();
  };
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return ratio(a) > ratio(b); });

  KpResult greedy;
  greedy.exact = false;
  greedy.selection.assign(items.size(), 0);
  double load = 0.0;
  for (int j : order) {
    const Item& it = items[static_cast<std::size_t>(j)];
    if (load + it.weight <= inst.capacity()) {
      load += it.weight;
      greedy.g_star += it.profit;
      greedy.selection[static_cast<std::size_t>(j)] = 1;
    }
  }

  int best_single = -1;
  for (std::size_t j = 0; j < items.size(); ++j) {
    if (items[j].weight <= inst.capacity() && (best_single < 0 || items[j].profit > items[static_cast<std::size_t>(best_single)].profit)) {
      best_single = static_cast<int>(j);
    }
  }
  if (best_single >= 0 && items[static_cast<std::size_t>(best_single)].profit > greedy.g_star) {
    greedy.g_star = items[static_cast<std::size_t>(best_single)].profit;
    greedy.selection.assign(items.size(), 0);
    greedy.selection[static_cast<std::size_t>(best_single)] = 1;
  }
  return greedy;
}

KpResult solve_kp_or_greedy(const TtpInstance& inst, const KpOptions& options) {
  try {
    return solve_kp(inst, options);
  } catch (const KnapsackCapacityError&) {
    return solve_kp_greedy(inst);
  }
}

}  // namespace ttpcd
