#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>

#include "ttpcd/instance.hpp"

namespace ttpcd {

struct KpOptions {
  /// Upper bound on the DP tables (value row plus one decision bit per item and capacity).
  std::size_t memory_budget_bytes = std::size_t{2} << 30;
};

struct KpResult {
  double g_star = 0.0;
  Packing selection;
  /// False when the value comes from the greedy fallback.
  bool exact = true;
};

/// Raised when m * W does not fit the memory budget. Use solve_kp_greedy instead.
class KnapsackCapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact 0/1 knapsack by dynamic programming over integral capacities.
/// Weights must be non-negative integers; a fractional capacity is floored.
KpResult solve_knapsack(std::span<const double> profits, std::span<const double> weights, double capacity,
                        const KpOptions& options = {});

KpResult solve_kp(const TtpInstance& inst, const KpOptions& options = {});

/// Greedy by profit/weight ratio, compared against the best single item.
/// Feasible, flagged as near-optimal.
KpResult solve_kp_greedy(const TtpInstance& inst);

/// solve_kp, falling back to solve_kp_greedy when the DP would exceed the budget.
KpResult solve_kp_or_greedy(const TtpInstance& inst, const KpOptions& options = {});

}  // namespace ttpcd
