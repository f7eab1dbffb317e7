#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ttpcd/instance.hpp"

namespace ttpcd {

struct Entropy {
  double edges = 0.0;
  double items = 0.0;
  double total() const noexcept { return edges + items; }
};

enum class OfferOutcome { kAddedBelowCapacity, kReplacedWorst, kRejectedQuality, kRejectedDiversity };

struct FrequencyRecord {
  enum class Kind { kEdge, kItem };
  Kind kind = Kind::kEdge;
  int a = 0;   // smaller endpoint or item index (0-based)
  int b = -1;  // larger endpoint; -1 for items
  int count = 0;
};

/// Undirected edge key with u < v.
std::uint64_t edge_key(int u, int v, int n);

/// Population that maximises structural entropy H = H_e + H_i of its tours'
/// edges and its packings' items, subject to z >= z_min for every member.
/// Edge and item frequencies are maintained incrementally.
class EdoPopulation {
 public:
  EdoPopulation(int num_cities, int num_items, std::size_t mu, double z_min);

  /// Throws std::logic_error on an empty population.
  Entropy entropy() const;

  /// H(P) - H(P without member k); removal down to an empty population gives H = 0.
  double contribution(std::size_t k) const;

  /// Quality gate, then add; above capacity the member with least
  /// contribution is removed, ties broken uniformly at random.
  OfferOutcome offer(const Solution& candidate, Rng& rng);

  /// Removes every member with z < new_z_min and returns how many went.
  std::size_t raise_threshold(double new_z_min);

  std::vector<FrequencyRecord> export_frequencies() const;

  /// Compares the incremental tables against a full recount.
  bool tables_consistent() const;

  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  std::size_t capacity() const noexcept { return mu_; }
  double z_min() const noexcept { return z_min_; }
  const Solution& member(std::size_t k) const { return members_.at(k).solution; }

  std::size_t edge_total() const noexcept { return edge_total_; }
  std::size_t item_total() const noexcept { return item_total_; }
  int edge_count(int u, int v) const;
  int item_count(int j) const { return item_freq_.at(static_cast<std::size_t>(j)); }

 private:
  struct Member {
    Solution solution;
    std::vector<std::uint64_t> edges;
    std::vector<int> items;
  };

  Member make_member(const Solution& s) const;
  void add_counts(const Member& m);
  void remove_counts(const Member& m);
  struct Sums {
    double edges = 0.0;  // sum of f ln f over edge counts
    double items = 0.0;
  };
  Sums sums() const;
  double entropy_without(const Member& removed, const Sums& sums) const;
  void remove_at(std::size_t k);

  int n_;
  int m_;
  std::size_t mu_;
  double z_min_;
  std::vector<Member> members_;
  std::unordered_map<std::uint64_t, int> edge_freq_;
  std::vector<int> item_freq_;
  std::size_t edge_total_ = 0;
  std::size_t item_total_ = 0;
};

}  // namespace ttpcd
