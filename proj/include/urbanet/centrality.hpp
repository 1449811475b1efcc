#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "urbanet/error.hpp"
#include "urbanet/graph.hpp"

namespace urbanet {

enum class CentralityMetric { Closeness, Betweenness, Degree };

inline std::string_view to_string(CentralityMetric m) {
  switch (m) {
    case CentralityMetric::Closeness: return "closeness";
    case CentralityMetric::Betweenness: return "betweenness";
    case CentralityMetric::Degree: return "degree";
  }
  return "?";
}

inline std::optional<CentralityMetric> metric_from_string(std::string_view s) {
  for (auto m : {CentralityMetric::Closeness, CentralityMetric::Betweenness, CentralityMetric::Degree})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

/// Node id -> value, sorted by id.
struct NodeCentralityMap {
  CentralityMetric metric = CentralityMetric::Degree;
  bool normalized = false;
  std::vector<NodeId> ids;
  std::vector<double> values;

  std::size_t size() const { return ids.size(); }

  double at(NodeId id) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id) throw ConfigError("node " + std::to_string(id) + " not in centrality map");
    return values[static_cast<std::size_t>(it - ids.begin())];
  }
};

enum class EdgeProvenance { Inversion, EndpointMean };

inline std::string_view to_string(EdgeProvenance p) {
  return p == EdgeProvenance::Inversion ? "inversion" : "endpoint-mean";
}

/// Undirected edge -> value. Edges are keyed (smaller id, larger id, 0).
struct EdgeCentralityMap {
  CentralityMetric metric = CentralityMetric::Closeness;
  EdgeProvenance provenance = EdgeProvenance::Inversion;
  bool normalized = false;
  std::vector<EdgeRef> edges;
  std::vector<double> values;

  std::size_t size() const { return edges.size(); }

  double at(const EdgeRef& e) const {
    auto it = std::lower_bound(edges.begin(), edges.end(), e);
    if (it == edges.end() || *it != e) throw ConfigError(describe(e) + " not in centrality map");
    return values[static_cast<std::size_t>(it - edges.begin())];
  }
};

namespace detail {

/// Runs `work(begin, end, out)` over source chunks whose size depends only on
/// the source count, then sums the chunk partials in chunk order. Results are
/// bit-identical regardless of how many threads ran.
template <typename Work>
std::vector<double> chunked_sum(std::size_t n_sources, std::size_t width, Work work) {
  const std::size_t kChunk = std::max<std::size_t>(64, (n_sources + 63) / 64);
  const std::size_t chunks = (n_sources + kChunk - 1) / kChunk;
  std::vector<std::vector<double>> partial(chunks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < chunks; c = next++) {
      partial[c].assign(width, 0.0);
      work(c * kChunk, std::min(n_sources, (c + 1) * kChunk), partial[c]);
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(chunks, 1));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<double> total(width, 0.0);
  for (const auto& p : partial)
    for (std::size_t i = 0; i < width; ++i) total[i] += p[i];
  return total;
}

/// Reusable single-source Dijkstra state over an UndirectedGraph.
class SourceSearch {
 public:
  explicit SourceSearch(const UndirectedGraph& g)
      : g_(g), dist_(g.node_count(), std::numeric_limits<double>::infinity()), sigma_(g.node_count(), 0.0),
        delta_(g.node_count(), 0.0), settled_(g.node_count(), false) {}

  /// Settles every node reachable from `s`; `order()` lists them by
  /// non-decreasing distance.
  void run(std::size_t s) {
    for (std::size_t v : order_) {
      dist_[v] = std::numeric_limits<double>::infinity();
      sigma_[v] = 0.0;
      delta_[v] = 0.0;
      settled_[v] = false;
    }
    order_.clear();
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist_[s] = 0.0;
    heap.push({0.0, static_cast<std::uint32_t>(s)});
    std::vector<bool>& done = settled_;
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (done[u]) continue;
      done[u] = true;
      order_.push_back(u);
      for (const auto& arc : g_.neighbors(u)) {
        const double alt = d + g_.edges()[arc.edge].weight;
        if (alt < dist_[arc.to]) {
          dist_[arc.to] = alt;
          heap.push({alt, arc.to});
        }
      }
    }
  }

  /// Shortest-path counts; requires run() first.
  void count_paths(std::size_t s) {
    sigma_[s] = 1.0;
    for (std::size_t i = 1; i < order_.size(); ++i) {
      const std::uint32_t w = order_[i];
      double sum = 0.0;
      for (const auto& arc : g_.neighbors(w))
        if (dist_[arc.to] + g_.edges()[arc.edge].weight == dist_[w]) sum += sigma_[arc.to];
      sigma_[w] = sum;
    }
  }

  /// Brandes dependency accumulation into `out`; requires count_paths().
  void accumulate(std::vector<double>& out) {
    for (std::size_t i = order_.size(); i-- > 1;) {
      const std::uint32_t w = order_[i];
      const double coeff = (1.0 + delta_[w]) / sigma_[w];
      for (const auto& arc : g_.neighbors(w))
        if (dist_[arc.to] + g_.edges()[arc.edge].weight == dist_[w]) delta_[arc.to] += sigma_[arc.to] * coeff;
      out[w] += delta_[w];
    }
  }

  std::span<const std::uint32_t> order() const { return order_; }
  double dist(std::size_t v) const { return dist_[v]; }

 private:
  const UndirectedGraph& g_;
  std::vector<double> dist_;
  std::vector<double> sigma_;
  std::vector<double> delta_;
  std::vector<std::uint32_t> order_;
  std::vector<bool> settled_;
};

}  // namespace detail

/// Closeness (r-1)/sum(d) scaled by (r-1)/(N-1), where r counts the nodes
/// reachable from x including x. Isolated nodes score 0. Self-loops are
/// ignored.
inline NodeCentralityMap closeness(const UndirectedGraph& g) {
  g.require_positive_weights();
  const std::size_t n = g.node_count();
  NodeCentralityMap m{CentralityMetric::Closeness, true, {g.ids().begin(), g.ids().end()}, {}};
  m.values = detail::chunked_sum(n, n, [&](std::size_t begin, std::size_t end, std::vector<double>& out) {
    detail::SourceSearch search(g);
    for (std::size_t s = begin; s < end; ++s) {
      search.run(s);
      double total = 0.0;
      for (std::uint32_t v : search.order()) total += search.dist(v);
      const double reached = static_cast<double>(search.order().size());
      if (reached <= 1.0 || total <= 0.0) continue;
      out[s] = ((reached - 1.0) / total) * ((reached - 1.0) / static_cast<double>(n - 1));
    }
  });
  return m;
}

/// Brandes betweenness over unordered pairs. With `normalized` the values are
/// divided by (N-1)(N-2)/2.
inline NodeCentralityMap betweenness(const UndirectedGraph& g, bool normalized = false) {
  g.require_positive_weights();
  const std::size_t n = g.node_count();
  NodeCentralityMap m{CentralityMetric::Betweenness, normalized, {g.ids().begin(), g.ids().end()}, {}};
  m.values = detail::chunked_sum(n, n, [&](std::size_t begin, std::size_t end, std::vector<double>& out) {
    detail::SourceSearch search(g);
    for (std::size_t s = begin; s < end; ++s) {
      search.run(s);
      search.count_paths(s);
      search.accumulate(out);
    }
  });
  // Each unordered pair was counted from both ends.
  double scale = 0.5;
  if (normalized) scale = n > 2 ? 1.0 / ((static_cast<double>(n) - 1.0) * (static_cast<double>(n) - 2.0)) : 0.0;
  for (double& v : m.values) v *= scale;
  return m;
}

/// Undirected neighbor count (parallel and reverse edges collapsed, self
/// excluded, all layers and edge kinds counted) over N-1.
inline NodeCentralityMap degree_centrality(const MultilayerGraph& g) {
  const std::size_t n = g.node_count();
  if (n < 2) throw AnalysisError("degree centrality needs at least 2 nodes");
  std::vector<std::unordered_set<NodeId>> neighbors(n);
  for (const NetEdge& e : g.edges()) {
    if (e.from == e.to) continue;
    neighbors[g.index_of(e.from)].insert(e.to);
    neighbors[g.index_of(e.to)].insert(e.from);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return g.node_at(a).id < g.node_at(b).id; });
  NodeCentralityMap m{CentralityMetric::Degree, true, {}, {}};
  m.ids.reserve(n);
  m.values.reserve(n);
  for (std::size_t idx : order) {
    m.ids.push_back(g.node_at(idx).id);
    m.values.push_back(static_cast<double>(neighbors[idx].size()) / static_cast<double>(n - 1));
  }
  return m;
}

/// Line graph: one node per edge of `g` (its id is the edge's index in
/// g.edges()), adjacent when the edges share an endpoint, weighted by the
/// mean of the two edge weights.
inline UndirectedGraph line_graph(const UndirectedGraph& g) {
  const auto edges = g.edges();
  std::vector<NodeId> ids(edges.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::vector<UndirectedEdge> line;
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    const auto arcs = g.neighbors(v);
    for (std::size_t i = 0; i < arcs.size(); ++i)
      for (std::size_t j = i + 1; j < arcs.size(); ++j) {
        const std::uint32_t a = arcs[i].edge, b = arcs[j].edge;
        line.push_back({std::min(a, b), std::max(a, b), (edges[a].weight + edges[b].weight) / 2.0});
      }
  }
  return UndirectedGraph(std::move(ids), line);
}

namespace detail {

inline EdgeRef undirected_ref(const UndirectedGraph& g, const UndirectedEdge& e) {
  const NodeId a = g.id(e.u), b = g.id(e.v);
  return {std::min(a, b), std::max(a, b), 0};
}

inline EdgeCentralityMap sorted_edge_map(const UndirectedGraph& g, CentralityMetric metric, EdgeProvenance prov,
                                         bool normalized, const std::vector<double>& per_edge) {
  std::vector<std::size_t> order(g.edge_count());
  std::iota(order.begin(), order.end(), 0);
  std::vector<EdgeRef> refs(g.edge_count());
  for (std::size_t i = 0; i < refs.size(); ++i) refs[i] = undirected_ref(g, g.edges()[i]);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return refs[a] < refs[b]; });
  EdgeCentralityMap m{metric, prov, normalized, {}, {}};
  for (std::size_t i : order) {
    m.edges.push_back(refs[i]);
    m.values.push_back(per_edge[i]);
  }
  return m;
}

inline NodeCentralityMap node_metric(const UndirectedGraph& g, CentralityMetric metric, bool normalized) {
  switch (metric) {
    case CentralityMetric::Closeness: return closeness(g);
    case CentralityMetric::Betweenness: return betweenness(g, normalized);
    case CentralityMetric::Degree: break;
  }
  throw ConfigError("edge projection supports closeness and betweenness only");
}

}  // namespace detail

/// Projects a node metric onto edges by computing it on the line graph and
/// reading each line-node's value back onto its originating edge.
inline EdgeCentralityMap edge_centrality_via_inversion(const UndirectedGraph& g, CentralityMetric metric,
                                                       bool normalized = false) {
  const UndirectedGraph lg = line_graph(g);
  const NodeCentralityMap on_line = detail::node_metric(lg, metric, normalized);
  // Line-graph ids are 0..E-1 in edge order, so values line up directly.
  return detail::sorted_edge_map(g, metric, EdgeProvenance::Inversion, on_line.normalized, on_line.values);
}

/// Alternative projection: each edge gets the mean of its endpoint values.
inline EdgeCentralityMap edge_centrality_endpoint_mean(const UndirectedGraph& g, CentralityMetric metric,
                                                       bool normalized = false) {
  const NodeCentralityMap nodes = detail::node_metric(g, metric, normalized);
  std::vector<double> per_edge(g.edge_count());
  for (std::size_t i = 0; i < per_edge.size(); ++i) {
    const auto& e = g.edges()[i];
    per_edge[i] = (nodes.values[e.u] + nodes.values[e.v]) / 2.0;
  }
  return detail::sorted_edge_map(g, metric, EdgeProvenance::EndpointMean, nodes.normalized, per_edge);
}

/// Nodes whose value is strictly above factor times the mean, in id order.
inline std::vector<NodeId> high_centrality_nodes(const NodeCentralityMap& m, double factor = 1.5) {
  if (m.size() == 0) throw AnalysisError("empty centrality map");
  const double mean = std::accumulate(m.values.begin(), m.values.end(), 0.0) / static_cast<double>(m.size());
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m.values[i] > factor * mean) out.push_back(m.ids[i]);
  return out;
}

/// Drops nodes outside the graph's core window (buffer-zone nodes).
inline NodeCentralityMap restrict_to_core(const NodeCentralityMap& m, const MultilayerGraph& g) {
  NodeCentralityMap out{m.metric, m.normalized, {}, {}};
  for (std::size_t i = 0; i < m.size(); ++i)
    if (g.in_core(m.ids[i])) {
      out.ids.push_back(m.ids[i]);
      out.values.push_back(m.values[i]);
    }
  return out;
}

}  // namespace urbanet
