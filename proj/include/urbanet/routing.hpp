#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "urbanet/error.hpp"
#include "urbanet/geo.hpp"
#include "urbanet/graph.hpp"

namespace urbanet {

/// Edge cost used by the path search.
class Objective {
 public:
  enum class Kind { Distance, Time, Custom };

  static Objective distance() { return Objective(Kind::Distance, "length_m"); }
  static Objective time() { return Objective(Kind::Time, "travel_time_s"); }
  static Objective custom(std::string attribute) { return Objective(Kind::Custom, std::move(attribute)); }

  /// "distance", "time", or any other attribute name.
  static Objective parse(const std::string& s) {
    if (s == "distance") return distance();
    if (s == "time") return time();
    return custom(s);
  }

  Kind kind() const { return kind_; }
  const std::string& attribute() const { return attribute_; }
  std::string name() const {
    switch (kind_) {
      case Kind::Distance: return "distance";
      case Kind::Time: return "time";
      case Kind::Custom: return attribute_;
    }
    return attribute_;
  }

  std::optional<double> cost(const NetEdge& e) const { return e.attribute(attribute_); }

 private:
  Objective(Kind k, std::string attr) : kind_(k), attribute_(std::move(attr)) {}
  Kind kind_;
  std::string attribute_;
};

struct RouteResult {
  std::vector<NodeId> nodes;
  std::vector<EdgeRef> edges;
  double cost = 0.0;
  double length_m = 0.0;
  // Absent when some edge on the path has no travel time.
  std::optional<double> travel_time_s = 0.0;
};

/// Outcome of a single query: a route, or the number of nodes the search
/// reached before giving up.
struct PathQuery {
  std::optional<RouteResult> route;
  std::size_t reached_nodes = 0;

  bool found() const { return route.has_value(); }
};

namespace detail {

struct SearchTree {
  std::vector<double> dist;
  std::size_t reached = 0;
};

inline double edge_cost(const NetEdge& e, const Objective& objective) {
  const auto c = objective.cost(e);
  if (!c) throw AnalysisError(describe(e.ref()) + " has no '" + objective.attribute() + "' attribute");
  return *c;
}

inline SearchTree dijkstra(const MultilayerGraph& g, std::size_t src, const Objective& objective) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  SearchTree t;
  t.dist.assign(g.node_count(), inf);
  std::vector<bool> settled(g.node_count(), false);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  t.dist[src] = 0.0;
  heap.push({0.0, src});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (settled[u]) continue;
    settled[u] = true;
    ++t.reached;
    for (std::size_t e : g.out_edges(u)) {
      const NetEdge& edge = g.edge_at(e);
      const std::size_t v = g.index_of(edge.to);
      const double alt = d + edge_cost(edge, objective);
      if (alt < t.dist[v]) {
        t.dist[v] = alt;
        heap.push({alt, v});
      }
    }
  }
  return t;
}

}  // namespace detail

/// Cost-minimal directed path from `src` to `dst` under `objective`.
///
/// Among equal-cost paths the one whose node-id sequence is lexicographically
/// smallest is returned; parallel edges resolve to the smallest key. Edge
/// costs must be non-negative; a negative cost anywhere is rejected before
/// the search starts.
inline PathQuery shortest_path(const MultilayerGraph& g, NodeId src, NodeId dst, const Objective& objective) {
  const std::size_t s = g.index_of(src);
  const std::size_t t = g.index_of(dst);
  for (const NetEdge& e : g.edges()) {
    if (auto c = objective.cost(e); c && (*c < 0.0 || std::isnan(*c)))
      throw AnalysisError(describe(e.ref()) + " has negative '" + objective.attribute() + "' cost");
  }

  const detail::SearchTree tree = detail::dijkstra(g, s, objective);
  if (!std::isfinite(tree.dist[t])) return {std::nullopt, tree.reached};

  auto tight = [&](const NetEdge& e, std::size_t from, std::size_t to) {
    return std::isfinite(tree.dist[from]) && tree.dist[from] + detail::edge_cost(e, objective) == tree.dist[to];
  };

  // Nodes that reach dst over tight edges lie on some optimal path.
  std::vector<bool> useful(g.node_count(), false);
  std::vector<std::size_t> stack{t};
  useful[t] = true;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t e : g.in_edges(v)) {
      const NetEdge& edge = g.edge_at(e);
      const std::size_t u = g.index_of(edge.from);
      if (!useful[u] && tight(edge, u, v)) {
        useful[u] = true;
        stack.push_back(u);
      }
    }
  }

  // Depth-first walk in ascending node-id order over the tight subgraph; the
  // first simple path found is the lexicographically smallest one. Positive
  // costs make the tight subgraph acyclic, so this never backtracks then.
  struct Step {
    NodeId to;
    std::size_t to_idx;
    std::size_t edge;
  };
  auto successors = [&](std::size_t u) {
    std::vector<Step> next;
    for (std::size_t e : g.out_edges(u)) {
      const NetEdge& edge = g.edge_at(e);
      const std::size_t v = g.index_of(edge.to);
      if (useful[v] && tight(edge, u, v)) next.push_back({edge.to, v, e});
    }
    std::sort(next.begin(), next.end(), [&](const Step& a, const Step& b) {
      if (a.to != b.to) return a.to < b.to;
      return g.edge_at(a.edge).key < g.edge_at(b.edge).key;
    });
    next.erase(std::unique(next.begin(), next.end(), [](const Step& a, const Step& b) { return a.to == b.to; }),
               next.end());
    return next;
  };

  std::vector<bool> on_path(g.node_count(), false);
  std::vector<std::size_t> path_nodes{s};
  std::vector<std::size_t> path_edges;
  std::vector<std::vector<Step>> frontier{successors(s)};
  std::vector<std::size_t> cursor{0};
  on_path[s] = true;
  while (!path_nodes.empty() && path_nodes.back() != t) {
    auto& options = frontier.back();
    std::size_t& c = cursor.back();
    while (c < options.size() && on_path[options[c].to_idx]) ++c;
    if (c == options.size()) {
      on_path[path_nodes.back()] = false;
      path_nodes.pop_back();
      if (!path_edges.empty()) path_edges.pop_back();
      frontier.pop_back();
      cursor.pop_back();
      if (!cursor.empty()) ++cursor.back();
      continue;
    }
    const Step step = options[c];
    on_path[step.to_idx] = true;
    path_nodes.push_back(step.to_idx);
    path_edges.push_back(step.edge);
    frontier.push_back(successors(step.to_idx));
    cursor.push_back(0);
  }
  if (path_nodes.empty()) throw AnalysisError("no simple optimal path to a reachable node");

  RouteResult r;
  r.cost = 0.0;
  for (std::size_t idx : path_nodes) r.nodes.push_back(g.node_at(idx).id);
  for (std::size_t e : path_edges) {
    const NetEdge& edge = g.edge_at(e);
    r.edges.push_back(edge.ref());
    r.cost += detail::edge_cost(edge, objective);
    r.length_m += edge.length_m;
    if (r.travel_time_s && edge.travel_time_s) *r.travel_time_s += *edge.travel_time_s;
    else r.travel_time_s.reset();
  }
  return {std::move(r), tree.reached};
}

/// Node of `layer` closest to `p`; distances within 1e-12 m count as ties
/// and go to the smaller id.
inline NodeId nearest_node(const MultilayerGraph& g, const GeoPoint& p, LayerId layer) {
  const auto members = g.layer_nodes(layer);
  if (members.empty()) throw AnalysisError("layer '" + std::string(to_string(layer)) + "' has no nodes");
  std::optional<NodeId> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t idx : members) {
    const NetNode& n = g.node_at(idx);
    const double d = haversine_m(p, n.point);
    if (d < best_d - 1e-12) {
      best = n.id;
      best_d = d;
    } else if (std::abs(d - best_d) <= 1e-12 && n.id < *best) {
      best = n.id;
      best_d = std::min(best_d, d);
    }
  }
  return *best;
}

struct RouteComparison {
  PathQuery by_distance;
  PathQuery by_time;
  // Shared edge length over the longer route; absent if either query failed.
  std::optional<double> overlap;
};

/// Runs the distance and time objectives between the same endpoints.
inline RouteComparison compare_routes(const MultilayerGraph& g, NodeId src, NodeId dst) {
  RouteComparison c{shortest_path(g, src, dst, Objective::distance()),
                    shortest_path(g, src, dst, Objective::time()), std::nullopt};
  if (!c.by_distance.found() || !c.by_time.found()) return c;
  const RouteResult& a = *c.by_distance.route;
  const RouteResult& b = *c.by_time.route;
  const double longest = std::max(a.length_m, b.length_m);
  if (longest == 0.0) {
    c.overlap = a.edges == b.edges ? 1.0 : 0.0;
    return c;
  }
  std::vector<EdgeRef> ea = a.edges, eb = b.edges;
  std::sort(ea.begin(), ea.end());
  std::sort(eb.begin(), eb.end());
  std::vector<EdgeRef> shared;
  std::set_intersection(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(shared));
  double shared_len = 0.0;
  for (const EdgeRef& ref : shared) shared_len += g.edge_at(*g.find_edge(ref)).length_m;
  c.overlap = shared_len / longest;
  return c;
}

}  // namespace urbanet
