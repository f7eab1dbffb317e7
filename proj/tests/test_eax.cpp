#include <doctest.h>

#include "support.hpp"
#include "ttpcd/eax.hpp"

using namespace ttpcd;
using support::Edge;

namespace {

TtpInstance random_points(int n, Rng& rng) { return support::random_instance(n, 1, rng); }

std::set<Edge> links_to_set(const IntermediateTour& it) {
  std::set<Edge> s;
  for (std::size_t c = 0; c < it.links.size(); ++c) {
    for (int d : it.links[c]) s.insert(support::undirected(static_cast<int>(c), d));
  }
  return s;
}

std::vector<Edge> links_to_list(const IntermediateTour& it) {
  std::vector<Edge> out;
  for (std::size_t c = 0; c < it.links.size(); ++c) {
    for (int d : it.links[c]) {
      if (static_cast<int>(c) < d) out.push_back({static_cast<int>(c), d});
    }
  }
  return out;
}

// Concatenates the sub-tours in order, each cut after its listed last city.
double naive_reconnection_length(const TtpInstance& inst, const IntermediateTour& it) {
  Tour joined;
  for (const auto& sub : it.subtours) joined.insert(joined.end(), sub.begin(), sub.end());
  double total = 0.0;
  for (std::size_t k = 0; k < joined.size(); ++k) total += inst.distance(joined[k], joined[(k + 1) % joined.size()]);
  return total;
}

}  // namespace

TEST_CASE("identical parents give no AB-cycle and a copy") {
  Rng rng(1);
  const TtpInstance inst = random_points(10, rng);
  const Tour a = support::shuffled_tour(10, rng);
  CHECK(build_ab_cycles(a, a, rng).empty());
  CHECK(eax_1ab(inst, a, a, rng) == a);
}

TEST_CASE("four-city example") {
  Rng rng(2);
  const Tour a{0, 1, 2, 3};
  const Tour b{0, 2, 1, 3};
  const auto cycles = build_ab_cycles(a, b, rng);
  REQUIRE(cycles.size() == 1);
  std::set<Edge> from_a, from_b;
  for (const TaggedEdge& e : cycles[0].edges()) {
    (e.origin == EdgeOrigin::kParentA ? from_a : from_b).insert(support::undirected(e.u, e.v));
  }
  CHECK(from_a == std::set<Edge>{{0, 1}, {2, 3}});
  CHECK(from_b == std::set<Edge>{{0, 2}, {1, 3}});

  const IntermediateTour it = apply_ab_cycle(a, cycles[0]);
  CHECK(it.subtours.size() == 1);
  CHECK(links_to_set(it) == support::edge_set(b));

  TtpInstance::Params p;
  p.capacity = 1;
  const TtpInstance inst(p, {{0, 0}, {0, 1}, {1, 1}, {1, 0}}, {{1, 1, 1}});
  CHECK(eax_1ab(inst, a, b, rng) == b);
}

TEST_CASE("AB-cycles partition the symmetric difference and alternate") {
  Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = std::uniform_int_distribution<int>(4, 50)(rng);
    const Tour a = support::shuffled_tour(n, rng);
    const Tour b = support::shuffled_tour(n, rng);
    const auto ea = support::edge_set(a);
    const auto eb = support::edge_set(b);
    std::multiset<Edge> seen_a, seen_b;
    for (const AbCycle& c : build_ab_cycles(a, b, rng)) {
      REQUIRE(c.size() % 2 == 0);
      REQUIRE(c.size() >= 4);
      const auto edges = c.edges();
      for (std::size_t k = 0; k < edges.size(); ++k) {
        const TaggedEdge& e = edges[k];
        CHECK(e.origin == (k % 2 == 0 ? EdgeOrigin::kParentA : EdgeOrigin::kParentB));
        CHECK(e.v == edges[(k + 1) % edges.size()].u);
        (e.origin == EdgeOrigin::kParentA ? seen_a : seen_b).insert(support::undirected(e.u, e.v));
      }
    }
    std::multiset<Edge> want_a, want_b;
    for (const Edge& e : ea) {
      if (!eb.count(e)) want_a.insert(e);
    }
    for (const Edge& e : eb) {
      if (!ea.count(e)) want_b.insert(e);
    }
    CHECK(seen_a == want_a);
    CHECK(seen_b == want_b);
  }
}

TEST_CASE("applying an AB-cycle keeps degree two and finds every sub-tour") {
  Rng rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = std::uniform_int_distribution<int>(4, 50)(rng);
    const Tour a = support::shuffled_tour(n, rng);
    const Tour b = support::shuffled_tour(n, rng);
    const auto cycles = build_ab_cycles(a, b, rng);
    if (cycles.empty()) continue;
    const AbCycle& c = cycles[std::uniform_int_distribution<std::size_t>(0, cycles.size() - 1)(rng)];
    const IntermediateTour it = apply_ab_cycle(a, c);

    // Expected edge multiset: E(A) - A-edges of the cycle + B-edges of the cycle.
    std::multiset<Edge> expected;
    for (const Edge& e : support::edge_set(a)) expected.insert(e);
    for (const TaggedEdge& e : c.edges()) {
      if (e.origin == EdgeOrigin::kParentA) {
        expected.erase(expected.find(support::undirected(e.u, e.v)));
      } else {
        expected.insert(support::undirected(e.u, e.v));
      }
    }
    const auto list = links_to_list(it);
    CHECK(std::multiset<Edge>(list.begin(), list.end()) == expected);

    std::vector<int> degree(static_cast<std::size_t>(n), 0);
    for (auto [u, v] : expected) {
      ++degree[static_cast<std::size_t>(u)];
      ++degree[static_cast<std::size_t>(v)];
    }
    for (int d : degree) CHECK(d == 2);

    CHECK(static_cast<int>(it.subtours.size()) == support::component_count(n, list));
    std::vector<int> all;
    for (const auto& s : it.subtours) all.insert(all.end(), s.begin(), s.end());
    std::sort(all.begin(), all.end());
    std::vector<int> expected_cities(static_cast<std::size_t>(n));
    std::iota(expected_cities.begin(), expected_cities.end(), 0);
    CHECK(all == expected_cities);
  }
}

TEST_CASE("merging a single tour leaves its edges unchanged") {
  Rng rng(5);
  const TtpInstance inst = random_points(12, rng);
  const Tour a = support::shuffled_tour(12, rng);
  IntermediateTour it;
  it.links.resize(12);
  for (int k = 0; k < 12; ++k) {
    const int u = a[k];
    const int v = a[(k + 1) % 12];
    it.links[u][1] = v;
    it.links[v][0] = u;
  }
  it.subtours = {a};
  const Tour merged = merge_subtours(inst, it);
  CHECK(support::edge_set(merged) == support::edge_set(a));
  CHECK(merged[1] < merged.back());
}

TEST_CASE("two unit squares merge through the best 4-tuple") {
  TtpInstance::Params p;
  p.capacity = 1;
  p.edge_weight_type = EdgeWeightType::kEuc2D;
  // Left square 0..3, right square 4..7 two units to the right.
  const TtpInstance inst(p, {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {3, 0}, {4, 0}, {4, 1}, {3, 1}}, {{1, 1, 1}});
  IntermediateTour it;
  it.links.resize(8);
  auto add_cycle = [&](std::vector<int> cyc) {
    for (std::size_t k = 0; k < cyc.size(); ++k) {
      const int u = cyc[k];
      const int v = cyc[(k + 1) % cyc.size()];
      it.links[u][1] = v;
      it.links[v][0] = u;
    }
    it.subtours.push_back(cyc);
  };
  add_cycle({0, 1, 2, 3});
  add_cycle({4, 5, 6, 7});

  // Brute force over both edge choices and both reconnections.
  const std::vector<Edge> left{{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  const std::vector<Edge> right{{4, 5}, {5, 6}, {6, 7}, {7, 4}};
  double best_gain = 1e18;
  for (auto [a, b] : left) {
    for (auto [c, d] : right) {
      const double removed = inst.distance(a, b) + inst.distance(c, d);
      best_gain = std::min(best_gain, inst.distance(a, c) + inst.distance(b, d) - removed);
      best_gain = std::min(best_gain, inst.distance(a, d) + inst.distance(b, c) - removed);
    }
  }
  const Tour merged = merge_subtours(inst, it);
  CHECK(support::is_permutation_from_zero(merged, 8));
  CHECK(tour_length(inst, merged) == doctest::Approx(8.0 + best_gain));
  CHECK(tour_length(inst, merged) == doctest::Approx(10.0));
}

TEST_CASE("merging random intermediates yields short valid tours") {
  Rng rng(6);
  int merged_cases = 0;
  for (int trial = 0; trial < 400 && merged_cases < 200; ++trial) {
    const int n = std::uniform_int_distribution<int>(6, 40)(rng);
    const TtpInstance inst = random_points(n, rng);
    const Tour a = support::shuffled_tour(n, rng);
    const Tour b = support::shuffled_tour(n, rng);
    const auto cycles = build_ab_cycles(a, b, rng);
    if (cycles.empty()) continue;
    const IntermediateTour it = apply_ab_cycle(a, cycles[0]);
    const auto intermediate_edges = links_to_set(it);
    const Tour merged = merge_subtours(inst, it);
    REQUIRE(support::is_permutation_from_zero(merged, n));
    CHECK(tour_length(inst, merged) <= naive_reconnection_length(inst, it) + 1e-9);
    if (it.subtours.size() == 1) {
      CHECK(support::edge_set(merged) == intermediate_edges);
    } else {
      ++merged_cases;
    }
  }
  CHECK(merged_cases > 50);
}

TEST_CASE("offspring edges come from the parents or from merging") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = std::uniform_int_distribution<int>(5, 60)(rng);
    const TtpInstance inst = random_points(n, rng);
    const Tour a = support::shuffled_tour(n, rng);
    const Tour b = support::shuffled_tour(n, rng);
    const auto cycles = build_ab_cycles(a, b, rng);
    REQUIRE_FALSE(cycles.empty());
    const IntermediateTour it = apply_ab_cycle(a, cycles[0]);
    const Tour child = merge_subtours(inst, it);
    const auto ea = support::edge_set(a);
    const auto eb = support::edge_set(b);
    int foreign = 0;
    for (const Edge& e : support::edge_set(child)) foreign += !ea.count(e) && !eb.count(e);
    if (it.subtours.size() == 1) CHECK(foreign == 0);
    CHECK(foreign <= 2 * static_cast<int>(it.subtours.size() - 1));
  }
}

TEST_CASE("eax offspring are valid tours oriented like parent A") {
  Rng rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = std::uniform_int_distribution<int>(3, 100)(rng);
    const TtpInstance inst = random_points(n, rng);
    const Tour a = support::shuffled_tour(n, rng);
    const Tour b = support::shuffled_tour(n, rng);
    const Tour child = eax_1ab(inst, a, b, rng);
    REQUIRE(support::is_permutation_from_zero(child, n));
    CHECK(is_valid_tour(inst, child));
  }
}

TEST_CASE("orientation follows the reference tour") {
  const Tour ref{0, 1, 2, 3, 4, 5};
  Tour reversed{0, 5, 4, 3, 2, 1};
  CHECK(orient_like(reversed, ref) == ref);
  CHECK(orient_like(ref, ref) == ref);
  // No directed edge in common either way: leave 0 towards the smaller neighbour.
  const Tour other{0, 3, 1, 5, 2, 4};
  const Tour oriented = orient_like(other, Tour{0, 2, 4, 1, 3, 5});
  CHECK(support::edge_set(oriented) == support::edge_set(other));
}

TEST_CASE("neighbour-restricted merging on large instances") {
  Rng rng(9);
  const int n = 600;
  const TtpInstance inst = random_points(n, rng);
  const auto nn = nearest_neighbors(inst, 10);
  REQUIRE(nn.size() == static_cast<std::size_t>(n));
  for (int c = 0; c < n; c += 37) {
    REQUIRE(nn[c].size() == 10);
    for (std::size_t k = 1; k < nn[c].size(); ++k) CHECK(inst.distance(c, nn[c][k - 1]) <= inst.distance(c, nn[c][k]));
  }
  const EaxCrossover eax(inst);
  const Tour a = support::shuffled_tour(n, rng);
  const Tour b = support::shuffled_tour(n, rng);
  for (int k = 0; k < 20; ++k) CHECK(support::is_permutation_from_zero(eax(a, b, rng), n));

  MergeOptions small;
  small.exhaustive_limit = 10;
  const TtpInstance mid = random_points(40, rng);
  const EaxCrossover restricted(mid, small);
  for (int k = 0; k < 100; ++k) {
    const Tour pa = support::shuffled_tour(40, rng);
    const Tour pb = support::shuffled_tour(40, rng);
    CHECK(support::is_permutation_from_zero(restricted(pa, pb, rng), 40));
  }
}
