#include "ttpcd/eax.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <numeric>

namespace ttpcd {

std::vector<TaggedEdge> AbCycle::edges() const {
  std::vector<TaggedEdge> out;
  out.reserve(cities.size());
  for (std::size_t i = 0; i < cities.size(); ++i) {
    out.push_back({cities[i], cities[(i + 1) % cities.size()], i % 2 == 0 ? EdgeOrigin::kParentA : EdgeOrigin::kParentB});
  }
  return out;
}

namespace {

// Up to two remaining incident edges of one parent at a city.
struct Incident {
  std::array<int, 2> to{-1, -1};
  int count = 0;

  void add(int v) { to[static_cast<std::size_t>(count++)] = v; }
  void remove(int v) {
    if (to[0] == v) {
      to[0] = to[1];
    }
    to[1] = -1;
    --count;
  }
};

std::vector<std::array<int, 2>> tour_links(const Tour& tour) {
  const std::size_t n = tour.size();
  std::vector<std::array<int, 2>> links(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int c = tour[i];
    links[static_cast<std::size_t>(c)] = {tour[(i + n - 1) % n], tour[(i + 1) % n]};
  }
  return links;
}

bool has_link(const std::array<int, 2>& l, int v) { return l[0] == v || l[1] == v; }

void replace_link(std::array<int, 2>& l, int from, int to) {
  if (l[0] == from) {
    l[0] = to;
  } else {
    assert(l[1] == from);
    l[1] = to;
  }
}

// Walks the 2-regular graph from `start`, stepping first to links[start][first_slot].
std::vector<int> traverse(const std::vector<std::array<int, 2>>& links, int start, int first_slot = 0) {
  std::vector<int> order;
  int prev = start;
  int cur = links[static_cast<std::size_t>(start)][static_cast<std::size_t>(first_slot)];
  order.push_back(start);
  while (cur != start) {
    order.push_back(cur);
    const auto& l = links[static_cast<std::size_t>(cur)];
    const int next = l[0] == prev ? l[1] : l[0];
    prev = cur;
    cur = next;
  }
  return order;
}

}  // namespace

std::vector<AbCycle> build_ab_cycles(const Tour& parent_a, const Tour& parent_b, Rng& rng) {
  const std::size_t n = parent_a.size();
  const auto links_a = tour_links(parent_a);
  const auto links_b = tour_links(parent_b);

  std::vector<Incident> rem_a(n);
  std::vector<Incident> rem_b(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (int w : links_a[v]) {
      if (!has_link(links_b[v], w)) rem_a[v].add(w);
    }
    for (int w : links_b[v]) {
      if (!has_link(links_a[v], w)) rem_b[v].add(w);
    }
  }

  std::vector<int> starts;
  for (std::size_t v = 0; v < n; ++v) {
    if (rem_a[v].count > 0) starts.push_back(static_cast<int>(v));
  }
  std::shuffle(starts.begin(), starts.end(), rng);

  std::vector<AbCycle> cycles;
  std::vector<int> path;
  std::vector<std::vector<int>> positions(n);

  auto take_edge = [&](std::vector<Incident>& rem, int from) {
    Incident& inc = rem[static_cast<std::size_t>(from)];
    int pick = 0;
    if (inc.count == 2) pick = std::uniform_int_distribution<int>(0, 1)(rng);
    const int to = inc.to[static_cast<std::size_t>(pick)];
    inc.remove(to);
    rem[static_cast<std::size_t>(to)].remove(from);
    return to;
  };

  // Index of the latest earlier visit of `v` at even distance from `at`, or -1.
  auto closing_index = [&](int v, std::size_t at) -> long {
    const auto& pos = positions[static_cast<std::size_t>(v)];
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
      const auto k = static_cast<std::size_t>(*it);
      if (k < at && (at - k) % 2 == 0) return static_cast<long>(k);
    }
    return -1;
  };

  auto extract = [&](std::size_t k) {
    // path[k] == path.back(); edges k .. size-2 form the cycle.
    AbCycle cycle;
    const std::size_t last = path.size() - 1;
    if (k % 2 == 0) {
      cycle.cities.assign(path.begin() + static_cast<long>(k), path.begin() + static_cast<long>(last));
    } else {
      cycle.cities.assign(path.begin() + static_cast<long>(k) + 1, path.begin() + static_cast<long>(last));
      cycle.cities.push_back(path[k]);
    }
    for (std::size_t i = k + 1; i <= last; ++i) positions[static_cast<std::size_t>(path[i])].pop_back();
    path.resize(k + 1);
    cycles.push_back(std::move(cycle));
  };

  for (int start : starts) {
    if (rem_a[static_cast<std::size_t>(start)].count == 0) continue;
    path.assign(1, start);
    positions[static_cast<std::size_t>(start)].push_back(0);

    while (true) {
      const std::size_t at = path.size() - 1;
      const int cur = path[at];
      auto& rem = at % 2 == 0 ? rem_a : rem_b;
      if (rem[static_cast<std::size_t>(cur)].count == 0) {
        assert(path.size() == 1);
        break;
      }
      const int next = take_edge(rem, cur);
      path.push_back(next);
      positions[static_cast<std::size_t>(next)].push_back(static_cast<int>(path.size() - 1));
      // Closing may cascade when the new endpoint also closes against an earlier visit.
      for (long k = closing_index(next, path.size() - 1); k >= 0; k = closing_index(path.back(), path.size() - 1)) {
        extract(static_cast<std::size_t>(k));
      }
    }
    positions[static_cast<std::size_t>(start)].clear();
    path.clear();
  }
  return cycles;
}

IntermediateTour apply_ab_cycle(const Tour& parent_a, const AbCycle& cycle) {
  IntermediateTour result;
  result.links = tour_links(parent_a);
  auto& links = result.links;
  const auto edges = cycle.edges();
  for (const TaggedEdge& e : edges) {
    if (e.origin == EdgeOrigin::kParentA) {
      replace_link(links[static_cast<std::size_t>(e.u)], e.v, -1);
      replace_link(links[static_cast<std::size_t>(e.v)], e.u, -1);
    }
  }
  for (const TaggedEdge& e : edges) {
    if (e.origin == EdgeOrigin::kParentB) {
      replace_link(links[static_cast<std::size_t>(e.u)], -1, e.v);
      replace_link(links[static_cast<std::size_t>(e.v)], -1, e.u);
    }
  }

  std::vector<char> seen(links.size(), 0);
  for (std::size_t v = 0; v < links.size(); ++v) {
    if (seen[v]) continue;
    auto sub = traverse(links, static_cast<int>(v));
    for (int c : sub) seen[static_cast<std::size_t>(c)] = 1;
    result.subtours.push_back(std::move(sub));
  }
  return result;
}

std::vector<std::vector<int>> nearest_neighbors(const TtpInstance& inst, int k) {
  const int n = inst.num_cities();
  const int kk = std::min(k, n - 1);
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    std::iota(order.begin(), order.end(), 0);
    std::swap(order[static_cast<std::size_t>(v)], order.back());
    order.pop_back();
    auto closer = [&](int a, int b) {
      const double da = inst.distance(v, a);
      const double db = inst.distance(v, b);
      return da < db || (da == db && a < b);
    };
    std::partial_sort(order.begin(), order.begin() + kk, order.end(), closer);
    out[static_cast<std::size_t>(v)].assign(order.begin(), order.begin() + kk);
    order.resize(static_cast<std::size_t>(n));
  }
  return out;
}

Tour merge_subtours(const TtpInstance& inst, IntermediateTour intermediate, const MergeOptions& options,
                    const std::vector<std::vector<int>>* neighbors) {
  auto& links = intermediate.links;
  auto& subtours = intermediate.subtours;
  const std::size_t n = links.size();

  std::vector<int> comp(n);
  std::vector<int> succ(n);
  std::vector<int> pred(n);
  auto index_subtours = [&] {
    for (std::size_t s = 0; s < subtours.size(); ++s) {
      const auto& sub = subtours[s];
      for (std::size_t i = 0; i < sub.size(); ++i) {
        const auto c = static_cast<std::size_t>(sub[i]);
        comp[c] = static_cast<int>(s);
        succ[c] = sub[(i + 1) % sub.size()];
        pred[c] = sub[(i + sub.size() - 1) % sub.size()];
      }
    }
  };
  index_subtours();

  const bool restricted = neighbors != nullptr && static_cast<int>(n) > options.exhaustive_limit;

  while (subtours.size() > 1) {
    std::size_t r = 0;
    for (std::size_t s = 1; s < subtours.size(); ++s) {
      if (subtours[s].size() < subtours[r].size()) r = s;
    }

    double best = std::numeric_limits<double>::infinity();
    int ba = -1, bb = -1, bc = -1, bd = -1;
    bool cross = false;

    auto consider = [&](int a, int b, int c, int d) {
      const double removed = inst.distance(a, b) + inst.distance(c, d);
      const double straight = inst.distance(a, c) + inst.distance(b, d) - removed;
      if (straight < best) {
        best = straight;
        ba = a, bb = b, bc = c, bd = d;
        cross = false;
      }
      const double crossed = inst.distance(a, d) + inst.distance(b, c) - removed;
      if (crossed < best) {
        best = crossed;
        ba = a, bb = b, bc = c, bd = d;
        cross = true;
      }
    };

    const auto& small = subtours[r];
    auto search_all = [&](int a, int b) {
      for (std::size_t s = 0; s < subtours.size(); ++s) {
        if (s == r) continue;
        for (int c : subtours[s]) consider(a, b, c, succ[static_cast<std::size_t>(c)]);
      }
    };

    for (std::size_t i = 0; i < small.size(); ++i) {
      const int a = small[i];
      const int b = small[(i + 1) % small.size()];
      if (!restricted) {
        search_all(a, b);
        continue;
      }
      for (int end : {a, b}) {
        for (int x : (*neighbors)[static_cast<std::size_t>(end)]) {
          if (comp[static_cast<std::size_t>(x)] == static_cast<int>(r)) continue;
          consider(a, b, x, succ[static_cast<std::size_t>(x)]);
          consider(a, b, pred[static_cast<std::size_t>(x)], x);
        }
      }
    }
    if (ba < 0) {
      for (std::size_t i = 0; i < small.size(); ++i) search_all(small[i], small[(i + 1) % small.size()]);
    }

    const std::size_t t = static_cast<std::size_t>(comp[static_cast<std::size_t>(bc)]);
    replace_link(links[static_cast<std::size_t>(ba)], bb, cross ? bd : bc);
    replace_link(links[static_cast<std::size_t>(bb)], ba, cross ? bc : bd);
    replace_link(links[static_cast<std::size_t>(bc)], bd, cross ? bb : ba);
    replace_link(links[static_cast<std::size_t>(bd)], bc, cross ? ba : bb);

    subtours[r] = traverse(links, ba);
    subtours.erase(subtours.begin() + static_cast<long>(t));
    index_subtours();
  }

  const auto& l0 = links[0];
  return traverse(links, 0, l0[0] < l0[1] ? 0 : 1);
}

Tour orient_like(const Tour& tour, const Tour& reference) {
  const std::size_t n = tour.size();
  if (n < 3) return tour;
  std::vector<int> ref_succ(n);
  for (std::size_t i = 0; i < n; ++i) ref_succ[static_cast<std::size_t>(reference[i])] = reference[(i + 1) % n];

  std::size_t forward = 0;
  std::size_t backward = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int u = tour[i];
    const int v = tour[(i + 1) % n];
    if (ref_succ[static_cast<std::size_t>(u)] == v) ++forward;
    if (ref_succ[static_cast<std::size_t>(v)] == u) ++backward;
  }

  Tour reversed(n);
  reversed[0] = tour[0];
  for (std::size_t i = 1; i < n; ++i) reversed[i] = tour[n - i];

  if (forward > backward) return tour;
  if (backward > forward) return reversed;
  return tour[1] < tour[n - 1] ? tour : reversed;
}

EaxCrossover::EaxCrossover(const TtpInstance& inst, MergeOptions options) : inst_(&inst), options_(options) {
  if (inst.num_cities() > options_.exhaustive_limit) neighbors_ = nearest_neighbors(inst, options_.neighbor_count);
}

Tour EaxCrossover::operator()(const Tour& parent_a, const Tour& parent_b, Rng& rng) const {
  const auto cycles = build_ab_cycles(parent_a, parent_b, rng);
  if (cycles.empty()) return parent_a;
  const auto pick = std::uniform_int_distribution<std::size_t>(0, cycles.size() - 1)(rng);
  Tour child = merge_subtours(*inst_, apply_ab_cycle(parent_a, cycles[pick]), options_,
                              neighbors_.empty() ? nullptr : &neighbors_);
  child = orient_like(child, parent_a);
  assert(is_valid_tour(*inst_, child));
  return child;
}

Tour eax_1ab(const TtpInstance& inst, const Tour& parent_a, const Tour& parent_b, Rng& rng) {
  return EaxCrossover(inst)(parent_a, parent_b, rng);
}

}  // namespace ttpcd
