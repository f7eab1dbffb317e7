#include "ttpcd/edo_population.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace ttpcd {

std::uint64_t edge_key(int u, int v, int n) {
  if (u > v) std::swap(u, v);
  return static_cast<std::uint64_t>(u) * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(v);
}

namespace {

double x_log_x(int f) { return f > 1 ? f * std::log(static_cast<double>(f)) : 0.0; }

// Entropy of a frequency table with sum of f*ln(f) `s` and total `t`.
double entropy_from(double s, double t) { return t > 0.0 ? std::log(t) - s / t : 0.0; }

}  // namespace

EdoPopulation::EdoPopulation(int num_cities, int num_items, std::size_t mu, double z_min)
    : n_(num_cities), m_(num_items), mu_(mu), z_min_(z_min), item_freq_(static_cast<std::size_t>(num_items), 0) {
  if (mu == 0) throw std::invalid_argument("EDO population capacity must be at least 1");
}

EdoPopulation::Member EdoPopulation::make_member(const Solution& s) const {
  Member m{s, {}, {}};
  const std::size_t n = s.tour.size();
  m.edges.reserve(n);
  for (std::size_t i = 0; i < n; ++i) m.edges.push_back(edge_key(s.tour[i], s.tour[(i + 1) % n], n_));
  for (std::size_t j = 0; j < s.packing.size(); ++j) {
    if (s.packing[j]) m.items.push_back(static_cast<int>(j));
  }
  return m;
}

void EdoPopulation::add_counts(const Member& m) {
  for (auto e : m.edges) ++edge_freq_[e];
  for (int j : m.items) ++item_freq_[static_cast<std::size_t>(j)];
  edge_total_ += m.edges.size();
  item_total_ += m.items.size();
}

void EdoPopulation::remove_counts(const Member& m) {
  for (auto e : m.edges) {
    auto it = edge_freq_.find(e);
    if (--it->second == 0) edge_freq_.erase(it);
  }
  for (int j : m.items) --item_freq_[static_cast<std::size_t>(j)];
  edge_total_ -= m.edges.size();
  item_total_ -= m.items.size();
}

EdoPopulation::Sums EdoPopulation::sums() const {
  Sums out;
  for (const auto& [key, f] : edge_freq_) out.edges += x_log_x(f);
  for (int f : item_freq_) out.items += x_log_x(f);
  return out;
}

double EdoPopulation::entropy_without(const Member& removed, const Sums& sums) const {
  double s_edges = sums.edges;
  double s_items = sums.items;
  for (auto e : removed.edges) {
    const int f = edge_freq_.at(e);
    s_edges -= x_log_x(f) - x_log_x(f - 1);
  }
  for (int j : removed.items) {
    const int f = item_freq_[static_cast<std::size_t>(j)];
    s_items -= x_log_x(f) - x_log_x(f - 1);
  }
  const double t_edges = static_cast<double>(edge_total_ - removed.edges.size());
  const double t_items = static_cast<double>(item_total_ - removed.items.size());
  return entropy_from(s_edges, t_edges) + entropy_from(s_items, t_items);
}

Entropy EdoPopulation::entropy() const {
  if (members_.empty()) throw std::logic_error("entropy of an empty population is undefined");
  const Sums s = sums();
  return {entropy_from(s.edges, static_cast<double>(edge_total_)), entropy_from(s.items, static_cast<double>(item_total_))};
}

double EdoPopulation::contribution(std::size_t k) const {
  if (k >= members_.size()) throw std::out_of_range("no such population member");
  const Sums s = sums();
  return entropy_from(s.edges, static_cast<double>(edge_total_)) + entropy_from(s.items, static_cast<double>(item_total_)) -
         entropy_without(members_[k], s);
}

OfferOutcome EdoPopulation::offer(const Solution& candidate, Rng& rng) {
  if (candidate.z < z_min_) return OfferOutcome::kRejectedQuality;
  members_.push_back(make_member(candidate));
  add_counts(members_.back());
  if (members_.size() <= mu_) return OfferOutcome::kAddedBelowCapacity;

  // H(P) is shared by every option, so the least contribution is the removal
  // leaving the highest entropy.
  const Sums s = sums();
  std::vector<double> remaining(members_.size());
  for (std::size_t k = 0; k < members_.size(); ++k) remaining[k] = entropy_without(members_[k], s);
  const double top = *std::max_element(remaining.begin(), remaining.end());
  const double tol = 1e-12 * std::max(1.0, std::abs(top));
  std::vector<std::size_t> ties;
  for (std::size_t k = 0; k < remaining.size(); ++k) {
    if (remaining[k] >= top - tol) ties.push_back(k);
  }
  const std::size_t victim =
      ties.size() == 1 ? ties.front() : ties[std::uniform_int_distribution<std::size_t>(0, ties.size() - 1)(rng)];
  const bool was_candidate = victim == members_.size() - 1;
  remove_at(victim);
  return was_candidate ? OfferOutcome::kRejectedDiversity : OfferOutcome::kReplacedWorst;
}

void EdoPopulation::remove_at(std::size_t k) {
  remove_counts(members_[k]);
  members_.erase(members_.begin() + static_cast<long>(k));
}

std::size_t EdoPopulation::raise_threshold(double new_z_min) {
  z_min_ = std::max(z_min_, new_z_min);
  std::size_t removed = 0;
  for (std::size_t k = members_.size(); k-- > 0;) {
    if (members_[k].solution.z < z_min_) {
      remove_at(k);
      ++removed;
    }
  }
  return removed;
}

int EdoPopulation::edge_count(int u, int v) const {
  const auto it = edge_freq_.find(edge_key(u, v, n_));
  return it == edge_freq_.end() ? 0 : it->second;
}

std::vector<FrequencyRecord> EdoPopulation::export_frequencies() const {
  std::vector<FrequencyRecord> out;
  std::vector<std::pair<std::uint64_t, int>> edges(edge_freq_.begin(), edge_freq_.end());
  std::sort(edges.begin(), edges.end());
  const auto n = static_cast<std::uint64_t>(n_);
  for (const auto& [key, f] : edges) {
    out.push_back({FrequencyRecord::Kind::kEdge, static_cast<int>(key / n), static_cast<int>(key % n), f});
  }
  for (int j = 0; j < m_; ++j) {
    const int f = item_freq_[static_cast<std::size_t>(j)];
    if (f > 0) out.push_back({FrequencyRecord::Kind::kItem, j, -1, f});
  }
  return out;
}

bool EdoPopulation::tables_consistent() const {
  std::map<std::uint64_t, int> edges;
  std::vector<int> items(static_cast<std::size_t>(m_), 0);
  std::size_t item_total = 0;
  for (const Member& m : members_) {
    const Member fresh = make_member(m.solution);
    for (auto e : fresh.edges) ++edges[e];
    for (int j : fresh.items) ++items[static_cast<std::size_t>(j)];
    item_total += fresh.items.size();
  }
  if (edges.size() != edge_freq_.size()) return false;
  for (const auto& [key, f] : edges) {
    const auto it = edge_freq_.find(key);
    if (it == edge_freq_.end() || it->second != f) return false;
  }
  return items == item_freq_ && item_total == item_total_ &&
         edge_total_ == static_cast<std::size_t>(n_) * members_.size();
}

}  // namespace ttpcd
