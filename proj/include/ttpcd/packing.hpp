#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "ttpcd/instance.hpp"

namespace ttpcd {

/// How long the inner (1+1) EA runs on one tour.
///  - kFixed:  t = 2m evaluations.
///  - kGamma1: t = gamma * m evaluations, gamma self-adapted in [1, 10].
///  - kGamma2: stop after gamma' * m consecutive non-improving evaluations,
///             gamma' self-adapted in [0.1, 1].
enum class PolicyKind { kFixed, kGamma1, kGamma2 };

std::string_view to_string(PolicyKind kind);
PolicyKind policy_from_string(std::string_view name);

inline constexpr double kSuccessFactor = 0.5;  // F1
inline constexpr double kFailureFactor = 1.2;  // F2

double gamma_lower_bound(PolicyKind kind);
double gamma_upper_bound(PolicyKind kind);

struct TerminationPolicy {
  PolicyKind kind = PolicyKind::kGamma2;
  double gamma = 1.0;

  /// Evaluation cap (Fixed, Gamma1) or stagnation window (Gamma2) for m items.
  std::size_t limit(int m) const;
};

/// Self-adaptation bookkeeping; success means the best objective of the QD
/// archive rose during the last interval of `interval_length` evaluations.
struct AdaptationState {
  TerminationPolicy policy;
  std::uint64_t interval_length = 0;
  std::uint64_t next_boundary = 0;
  double z_at_interval_start = 0.0;
};

/// Starts at the upper bound of the policy's gamma range; interval u = 2000 m.
AdaptationState initial_adaptation(PolicyKind kind, int m, double interval_multiplier = 2000.0);

/// success: gamma <- max(gamma * F1, lower); failure: gamma <- min(gamma * F2, upper).
/// The fixed policy never changes.
AdaptationState update_gamma(AdaptationState state, bool interval_was_success);

/// Flips every bit with probability 1/m; draws again while nothing flipped.
Packing bit_flip(const Packing& y, Rng& rng);

struct PackingResult {
  Packing packing;
  /// Objective of `packing`; empty only when nothing could be evaluated.
  std::optional<double> z;
  std::uint64_t evaluations = 0;
};

/// (1+1) EA over packings for a fixed tour. Mutants replace the incumbent only
/// when feasible and strictly better. Every evaluation, including the seed's
/// (skipped when `seed_z` is given) and infeasible mutants, counts once
/// against both the policy and `budget_remaining`.
PackingResult optimize_packing(const TtpInstance& inst, const Tour& tour, const Packing& seed,
                               std::optional<double> seed_z, const TerminationPolicy& policy,
                               std::uint64_t budget_remaining, Rng& rng);

/// Adds items by decreasing profit/weight ratio while they fit.
Packing greedy_packing(const TtpInstance& inst);

}  // namespace ttpcd
