#include "ttpcd/packing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ttpcd {

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kFixed:
      return "fixed";
    case PolicyKind::kGamma1:
      return "gamma1";
    case PolicyKind::kGamma2:
      return "gamma2";
  }
  return "unknown";
}

PolicyKind policy_from_string(std::string_view name) {
  if (name == "fixed") return PolicyKind::kFixed;
  if (name == "gamma1") return PolicyKind::kGamma1;
  if (name == "gamma2") return PolicyKind::kGamma2;
  throw std::invalid_argument("unknown policy '" + std::string(name) + "' (expected fixed, gamma1 or gamma2)");
}

double gamma_lower_bound(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kFixed:
      return 2.0;
    case PolicyKind::kGamma1:
      return 1.0;
    case PolicyKind::kGamma2:
      return 0.1;
  }
  return 1.0;
}

double gamma_upper_bound(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kFixed:
      return 2.0;
    case PolicyKind::kGamma1:
      return 10.0;
    case PolicyKind::kGamma2:
      return 1.0;
  }
  return 1.0;
}

std::size_t TerminationPolicy::limit(int m) const {
  const double raw = gamma * static_cast<double>(m);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(raw - 1e-9)));
}

AdaptationState initial_adaptation(PolicyKind kind, int m, double interval_multiplier) {
  AdaptationState s;
  s.policy = {kind, gamma_upper_bound(kind)};
  s.interval_length = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(interval_multiplier * m)));
  return s;
}

AdaptationState update_gamma(AdaptationState state, bool interval_was_success) {
  const PolicyKind kind = state.policy.kind;
  if (kind == PolicyKind::kFixed) return state;
  double& g = state.policy.gamma;
  g = interval_was_success ? std::max(g * kSuccessFactor, gamma_lower_bound(kind))
                           : std::min(g * kFailureFactor, gamma_upper_bound(kind));
  return state;
}

namespace {

// Positions flipped by one standard bit-flip mutation (never empty).
void sample_flips(std::size_t m, Rng& rng, std::vector<std::size_t>& flips) {
  flips.clear();
  if (m == 0) return;
  std::geometric_distribution<std::size_t> gap(1.0 / static_cast<double>(m));
  while (flips.empty()) {
    for (std::size_t pos = gap(rng); pos < m; pos += 1 + gap(rng)) flips.push_back(pos);
  }
}

}  // namespace

Packing bit_flip(const Packing& y, Rng& rng) {
  std::vector<std::size_t> flips;
  sample_flips(y.size(), rng, flips);
  Packing out = y;
  for (std::size_t j : flips) out[j] ^= 1U;
  return out;
}

PackingResult optimize_packing(const TtpInstance& inst, const Tour& tour, const Packing& seed,
                               std::optional<double> seed_z, const TerminationPolicy& policy,
                               std::uint64_t budget_remaining, Rng& rng) {
  PackingResult result{seed, seed_z, 0};
  if (budget_remaining == 0) return result;

  const ProfitWeight start = packing_profit_weight(inst, seed);
  if (static_cast<int>(seed.size()) != inst.num_items() || start.weight > inst.capacity()) {
    throw std::invalid_argument("seed packing must be feasible");
  }

  Packing& y = result.packing;
  double profit = start.profit;
  double weight = start.weight;
  auto evaluate = [&] { return profit - inst.renting_ratio() * travel_time(inst, tour, y); };

  std::uint64_t used = 0;
  double z = 0.0;
  if (seed_z) {
    z = *seed_z;
  } else {
    z = evaluate();
    used = 1;
  }

  const std::size_t limit = policy.limit(inst.num_items());
  const bool stagnation_rule = policy.kind == PolicyKind::kGamma2;
  std::size_t stagnation = 0;
  std::vector<std::size_t> flips;

  while (used < budget_remaining) {
    if (stagnation_rule ? stagnation >= limit : used >= limit) break;
    sample_flips(y.size(), rng, flips);
    for (std::size_t j : flips) {
      const Item& it = inst.items()[j];
      const double sign = y[j] ? -1.0 : 1.0;
      profit += sign * it.profit;
      weight += sign * it.weight;
      y[j] ^= 1U;
    }
    ++used;
    if (weight <= inst.capacity()) {
      const double candidate = evaluate();
      if (candidate > z) {
        z = candidate;
        stagnation = 0;
        continue;
      }
    }
    for (std::size_t j : flips) {
      const Item& it = inst.items()[j];
      const double sign = y[j] ? -1.0 : 1.0;
      profit += sign * it.profit;
      weight += sign * it.weight;
      y[j] ^= 1U;
    }
    ++stagnation;
  }

  result.z = z;
  result.evaluations = used;
  return result;
}

Packing greedy_packing(const TtpInstance& inst) {
  const auto& items = inst.items();
  std::vector<int> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  auto ratio = [&](int j) {
    const Item& it = items[static_cast<std::size_t>(j)];
    return it.weight > 0.0 ? it.profit / it.weight : std::numeric_limits<double>::infinity();
  };
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return ratio(a) > ratio(b); });
  Packing y(items.size(), 0);
  double load = 0.0;
  for (int j : order) {
    const double w = items[static_cast<std::size_t>(j)].weight;
    if (load + w <= inst.capacity()) {
      load += w;
      y[static_cast<std::size_t>(j)] = 1;
    }
  }
  return y;
}

}  // namespace ttpcd
