#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ttpcd/instance.hpp"

namespace ttpcd {

enum class EdgeOrigin { kParentA, kParentB };

struct TaggedEdge {
  int u = 0;
  int v = 0;
  EdgeOrigin origin = EdgeOrigin::kParentA;
};

/// Closed walk c0 c1 ... c(2k-1) in the union of two parent tours. Edge
/// (c[i], c[i+1]) comes from parent A for even i and from parent B for odd i;
/// the closing edge (c[2k-1], c0) comes from B. A city may occur more than once.
struct AbCycle {
  std::vector<int> cities;

  std::size_t size() const noexcept { return cities.size(); }
  std::vector<TaggedEdge> edges() const;
};

/// Degree-2 graph left after exchanging one AB-cycle, split into its sub-tours.
struct IntermediateTour {
  std::vector<std::array<int, 2>> links;
  /// Each sub-tour as a cyclic city sequence.
  std::vector<std::vector<int>> subtours;
};

/// Decomposes the symmetric difference of the parents' edge sets into AB-cycles
/// by random alternating walks. Identical parents give an empty list.
std::vector<AbCycle> build_ab_cycles(const Tour& parent_a, const Tour& parent_b, Rng& rng);

/// E(parent_a) minus the cycle's A-edges plus its B-edges.
IntermediateTour apply_ab_cycle(const Tour& parent_a, const AbCycle& cycle);

struct MergeOptions {
  /// Above this many cities the second edge of a 4-tuple is restricted to
  /// edges touching the nearest neighbours of the first edge's endpoints.
  int exhaustive_limit = 500;
  int neighbor_count = 10;
};

/// Nearest-neighbour candidate lists, sorted by distance then index.
std::vector<std::vector<int>> nearest_neighbors(const TtpInstance& inst, int k);

/// Joins sub-tours one at a time, always starting from the sub-tour with the
/// fewest edges, replacing e1 (in that sub-tour) and e2 (elsewhere) by the two
/// reconnecting edges that minimise -d(e1) - d(e2) + d(e3) + d(e4).
/// The result leaves city 0 towards its smaller-indexed neighbour.
Tour merge_subtours(const TtpInstance& inst, IntermediateTour intermediate, const MergeOptions& options = {},
                    const std::vector<std::vector<int>>* neighbors = nullptr);

/// Picks the direction of `tour` that shares more directed edges with
/// `reference`; ties keep the direction leaving city 0 towards the smaller neighbour.
Tour orient_like(const Tour& tour, const Tour& reference);

/// EAX with a single AB-cycle. Holds the nearest-neighbour lists for large instances.
class EaxCrossover {
 public:
  explicit EaxCrossover(const TtpInstance& inst, MergeOptions options = {});

  /// One AB-cycle chosen uniformly at random, applied to parent_a and repaired
  /// into a single tour oriented like parent_a. Identical parents give a copy of parent_a.
  Tour operator()(const Tour& parent_a, const Tour& parent_b, Rng& rng) const;

 private:
  const TtpInstance* inst_;
  MergeOptions options_;
  std::vector<std::vector<int>> neighbors_;
};

Tour eax_1ab(const TtpInstance& inst, const Tour& parent_a, const Tour& parent_b, Rng& rng);

}  // namespace ttpcd
