#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "urbanet/routing.hpp"

using namespace urbanet;

namespace {

MultilayerGraph line_nodes(int n, LayerId layer = LayerId::Drive) {
  MultilayerGraph g;
  for (int i = 1; i <= n; ++i) g.add_node({i, GeoPoint(0, 0.001 * i), layer, NodeKind::Intersection, {}});
  return g;
}

void add(MultilayerGraph& g, NodeId a, NodeId b, double length, std::optional<double> speed = std::nullopt) {
  NetEdge e;
  e.from = a;
  e.to = b;
  e.layer = g.node(a).layer;
  e.length_m = length;
  if (speed) {
    e.speed_mps = *speed;
    e.travel_time_s = length / *speed;
  }
  g.add_edge(e);
}

void add_both(MultilayerGraph& g, NodeId a, NodeId b, double length, std::optional<double> speed = std::nullopt) {
  add(g, a, b, length, speed);
  add(g, b, a, length, speed);
}

/// 1 -> 4 through a short slow corridor (via 2) or a long fast one (via 3).
MultilayerGraph two_corridors() {
  MultilayerGraph g = line_nodes(4);
  add(g, 1, 2, 50.0, 1.4);
  add(g, 2, 4, 50.0, 1.4);
  add(g, 1, 3, 75.0, 13.9);
  add(g, 3, 4, 75.0, 13.9);
  return g;
}

/// Lexicographically smallest node sequence among minimum-cost simple paths.
std::vector<int> lexmin_optimal_path(const oracle::ArcGraph& g, int src, int dst, double best) {
  std::vector<std::vector<oracle::Arc>> out(g.n);
  for (const auto& a : g.arcs) out[a.u].push_back(a);
  std::vector<int> path{src}, winner;
  std::vector<bool> on(g.n, false);
  std::function<void(int, double)> dfs = [&](int v, double cost) {
    if (v == dst) {
      if (cost == best && (winner.empty() || path < winner)) winner = path;
      return;
    }
    on[v] = true;
    for (const auto& a : out[v])
      if (!on[a.v]) {
        path.push_back(a.v);
        dfs(a.v, cost + a.w);
        path.pop_back();
      }
    on[v] = false;
  };
  dfs(src, 0.0);
  return winner;
}

}  // namespace

TEST(ShortestPath, TriangleTakesTwoHops) {
  MultilayerGraph g = line_nodes(3);
  add_both(g, 1, 2, 1.0);
  add_both(g, 2, 3, 1.0);
  add_both(g, 1, 3, 3.0);
  const PathQuery q = shortest_path(g, 1, 3, Objective::distance());
  ASSERT_TRUE(q.found());
  EXPECT_EQ(q.route->nodes, (std::vector<NodeId>{1, 2, 3}));
  EXPECT_EQ(q.route->cost, 2.0);
  EXPECT_EQ(q.route->edges.size(), 2u);
}

TEST(ShortestPath, SourceEqualsDestination) {
  MultilayerGraph g = line_nodes(2);
  add(g, 1, 2, 5.0);
  const PathQuery q = shortest_path(g, 1, 1, Objective::distance());
  ASSERT_TRUE(q.found());
  EXPECT_EQ(q.route->nodes, (std::vector<NodeId>{1}));
  EXPECT_EQ(q.route->cost, 0.0);
  EXPECT_TRUE(q.route->edges.empty());
}

TEST(ShortestPath, ObjectivesDiverge) {
  const MultilayerGraph g = two_corridors();
  const auto by_distance = shortest_path(g, 1, 4, Objective::distance());
  const auto by_time = shortest_path(g, 1, 4, Objective::time());
  EXPECT_EQ(by_distance.route->nodes, (std::vector<NodeId>{1, 2, 4}));
  EXPECT_EQ(by_time.route->nodes, (std::vector<NodeId>{1, 3, 4}));
  EXPECT_NEAR(*by_time.route->travel_time_s, 150.0 / 13.9, 1e-9);
  EXPECT_NEAR(by_time.route->cost, 10.79, 0.01);
  EXPECT_NEAR(*by_distance.route->travel_time_s, 71.43, 0.01);
  EXPECT_EQ(by_distance.route->length_m, 100.0);
  EXPECT_EQ(by_time.route->length_m, 150.0);
}

TEST(ShortestPath, RespectsDirection) {
  MultilayerGraph g = line_nodes(2);
  add(g, 1, 2, 5.0);
  const PathQuery q = shortest_path(g, 2, 1, Objective::distance());
  EXPECT_FALSE(q.found());
  EXPECT_EQ(q.reached_nodes, 1u);
}

TEST(ShortestPath, NegativeCostRejectedBeforeSearch) {
  MultilayerGraph g = line_nodes(3);
  add(g, 1, 2, 1.0);
  NetEdge e;
  e.from = 2;
  e.to = 3;
  e.attributes["penalty"] = -1.0;
  g.add_edge(e);
  EXPECT_THROW(shortest_path(g, 3, 3, Objective::custom("penalty")), AnalysisError);
}

TEST(ShortestPath, MissingAttributeIsAnError) {
  MultilayerGraph g = line_nodes(2);
  add(g, 1, 2, 1.0);
  EXPECT_THROW(shortest_path(g, 1, 2, Objective::time()), AnalysisError);
}

TEST(ShortestPath, CustomObjective) {
  MultilayerGraph g = line_nodes(3);
  for (auto [a, b, turns] : {std::tuple{1, 2, 1.0}, {2, 3, 1.0}, {1, 3, 5.0}}) {
    NetEdge e;
    e.from = a;
    e.to = b;
    e.length_m = 1.0;
    e.attributes["turns"] = turns;
    g.add_edge(e);
  }
  const auto q = shortest_path(g, 1, 3, Objective::parse("turns"));
  EXPECT_EQ(q.route->nodes, (std::vector<NodeId>{1, 2, 3}));
  EXPECT_EQ(q.route->cost, 2.0);
}

TEST(ShortestPath, TiesGoToLexicographicallySmallestSequence) {
  MultilayerGraph g = line_nodes(9);
  add(g, 1, 5, 2.0);
  add(g, 5, 9, 2.0);
  add(g, 1, 2, 1.0);
  add(g, 2, 3, 1.0);
  add(g, 3, 9, 2.0);
  add(g, 1, 4, 1.0);
  add(g, 4, 9, 3.0);
  const auto q = shortest_path(g, 1, 9, Objective::distance());
  EXPECT_EQ(q.route->nodes, (std::vector<NodeId>{1, 2, 3, 9}));
}

TEST(ShortestPath, ParallelEdgesResolveToCheapestThenSmallestKey) {
  MultilayerGraph g = line_nodes(2);
  add(g, 1, 2, 4.0);
  add(g, 1, 2, 3.0);
  add(g, 1, 2, 3.0);
  const auto q = shortest_path(g, 1, 2, Objective::distance());
  ASSERT_EQ(q.route->edges.size(), 1u);
  EXPECT_EQ(q.route->edges[0].key, 1u);
}

TEST(ShortestPath, MatchesPathEnumerationAndTieBreak) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 150; ++trial) {
    // Integer weights make ties common and every sum exact.
    oracle::ArcGraph a = oracle::random_directed(rng, 9, 0.3);
    for (auto& arc : a.arcs) arc.w = std::floor(arc.w / 3.0) + 1.0;
    const MultilayerGraph g = oracle::to_multilayer(a);
    for (int s = 0; s < a.n; ++s)
      for (int t = 0; t < a.n; ++t) {
        const double best = s == t ? 0.0 : oracle::enumerate_paths(a, s, t);
        const auto q = shortest_path(g, s + 1, t + 1, Objective::distance());
        ASSERT_EQ(q.found(), std::isfinite(best));
        if (!q.found()) continue;
        ASSERT_EQ(q.route->cost, best);
        if (s == t) continue;
        std::vector<NodeId> expected;
        for (int v : lexmin_optimal_path(a, s, t, best)) expected.push_back(v + 1);
        ASSERT_EQ(q.route->nodes, expected);
      }
  }
}

TEST(ShortestPath, RouteTotalsAreConsistent) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const oracle::ArcGraph a = oracle::random_directed(rng, 40, 0.08);
    const MultilayerGraph g = oracle::to_multilayer(a);
    for (int t = 0; t < a.n; ++t) {
      const auto q = shortest_path(g, 1, t + 1, Objective::distance());
      if (!q.found()) continue;
      const RouteResult& r = *q.route;
      ASSERT_EQ(r.nodes.size(), r.edges.size() + 1);
      double sum = 0.0, time = 0.0;
      for (std::size_t i = 0; i < r.edges.size(); ++i) {
        EXPECT_EQ(r.edges[i].from, r.nodes[i]);
        EXPECT_EQ(r.edges[i].to, r.nodes[i + 1]);
        const NetEdge& e = g.edge_at(*g.find_edge(r.edges[i]));
        sum += e.length_m;
        time += *e.travel_time_s;
      }
      EXPECT_NEAR(r.cost, sum, 1e-9 * std::max(1.0, sum));
      EXPECT_NEAR(r.length_m, sum, 1e-9 * std::max(1.0, sum));
      EXPECT_NEAR(*r.travel_time_s, time, 1e-9 * std::max(1.0, time));
    }
  }
}

TEST(ShortestPath, SubpathOptimality) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    const oracle::ArcGraph a = oracle::random_directed(rng, 40, 0.08);
    const MultilayerGraph g = oracle::to_multilayer(a);
    const auto dist = oracle::relax_to_fixpoint(a, 0);
    for (int t = 0; t < a.n; ++t) {
      const auto q = shortest_path(g, 1, t + 1, Objective::distance());
      if (!q.found()) continue;
      double prefix = 0.0;
      for (std::size_t i = 0; i < q.route->edges.size(); ++i) {
        prefix += g.edge_at(*g.find_edge(q.route->edges[i])).length_m;
        EXPECT_EQ(prefix, dist[q.route->nodes[i + 1] - 1]);
      }
    }
  }
}

TEST(ShortestPath, AddingAnEdgeNeverIncreasesCost) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 40; ++trial) {
    oracle::ArcGraph a = oracle::random_directed(rng, 25, 0.1);
    const MultilayerGraph before = oracle::to_multilayer(a);
    a.arcs.push_back({oracle::uniform_int(rng, 0, a.n - 1), oracle::uniform_int(rng, 0, a.n - 1), oracle::uniform(rng, 0, 10)});
    const MultilayerGraph after = oracle::to_multilayer(a);
    for (int t = 0; t < a.n; ++t) {
      const auto q0 = shortest_path(before, 1, t + 1, Objective::distance());
      const auto q1 = shortest_path(after, 1, t + 1, Objective::distance());
      if (q0.found()) {
        ASSERT_TRUE(q1.found());
        EXPECT_LE(q1.route->cost, q0.route->cost);
      }
    }
  }
}

TEST(NearestNode, ExactTieAndSingleNode) {
  MultilayerGraph g;
  g.add_node({9, GeoPoint(0, -0.001), LayerId::Walk, NodeKind::Intersection, {}});
  g.add_node({7, GeoPoint(0, 0.001), LayerId::Walk, NodeKind::Intersection, {}});
  g.add_node({3, GeoPoint(5, 5), LayerId::Drive, NodeKind::Intersection, {}});
  EXPECT_EQ(nearest_node(g, GeoPoint(0, 0), LayerId::Walk), 7);
  EXPECT_EQ(nearest_node(g, GeoPoint(0, 0.001), LayerId::Walk), 7);
  EXPECT_EQ(nearest_node(g, GeoPoint(0, -0.001), LayerId::Walk), 9);
  EXPECT_EQ(nearest_node(g, GeoPoint(0, 0), LayerId::Drive), 3);
  EXPECT_EQ(nearest_node(g, GeoPoint(-40, 100), LayerId::Drive), 3);
  EXPECT_THROW(nearest_node(g, GeoPoint(0, 0), LayerId::Bike), AnalysisError);
}

TEST(CompareRoutes, OverlapCases) {
  const auto disjoint = compare_routes(two_corridors(), 1, 4);
  ASSERT_TRUE(disjoint.overlap.has_value());
  EXPECT_EQ(*disjoint.overlap, 0.0);

  MultilayerGraph g = line_nodes(3);
  add(g, 1, 2, 10.0, 5.0);
  add(g, 2, 3, 10.0, 5.0);
  add(g, 1, 3, 30.0, 5.0);
  EXPECT_EQ(*compare_routes(g, 1, 3).overlap, 1.0);
  EXPECT_EQ(*compare_routes(g, 2, 2).overlap, 1.0);

  MultilayerGraph partial = line_nodes(4);
  add(partial, 1, 2, 10.0, 10.0);
  add(partial, 2, 4, 10.0, 1.0);
  add(partial, 2, 3, 20.0, 10.0);
  add(partial, 3, 4, 20.0, 10.0);
  const auto half = compare_routes(partial, 1, 4);
  EXPECT_DOUBLE_EQ(*half.overlap, 10.0 / 50.0);
}
