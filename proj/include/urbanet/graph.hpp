#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "urbanet/error.hpp"
#include "urbanet/geo.hpp"

namespace urbanet {

using NodeId = std::int64_t;

enum class LayerId : std::uint8_t { Drive = 0, Walk, Bike, Transit, Poi };
inline constexpr std::size_t kLayerCount = 5;
inline constexpr std::array<LayerId, kLayerCount> kAllLayers{LayerId::Drive, LayerId::Walk, LayerId::Bike,
                                                            LayerId::Transit, LayerId::Poi};

enum class NodeKind : std::uint8_t { Intersection = 0, Stop, Poi };
enum class EdgeKind : std::uint8_t { Street = 0, TransitRoute, Interlayer, WalkTransfer };

inline std::string_view to_string(LayerId layer) {
  switch (layer) {
    case LayerId::Drive: return "drive";
    case LayerId::Walk: return "walk";
    case LayerId::Bike: return "bike";
    case LayerId::Transit: return "transit";
    case LayerId::Poi: return "poi";
  }
  return "?";
}

inline std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Intersection: return "intersection";
    case NodeKind::Stop: return "stop";
    case NodeKind::Poi: return "poi";
  }
  return "?";
}

inline std::string_view to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::Street: return "street";
    case EdgeKind::TransitRoute: return "transit_route";
    case EdgeKind::Interlayer: return "interlayer";
    case EdgeKind::WalkTransfer: return "walk_transfer";
  }
  return "?";
}

inline std::optional<LayerId> layer_from_string(std::string_view s) {
  for (LayerId l : kAllLayers)
    if (to_string(l) == s) return l;
  return std::nullopt;
}

inline std::optional<NodeKind> node_kind_from_string(std::string_view s) {
  for (NodeKind k : {NodeKind::Intersection, NodeKind::Stop, NodeKind::Poi})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

inline std::optional<EdgeKind> edge_kind_from_string(std::string_view s) {
  for (EdgeKind k : {EdgeKind::Street, EdgeKind::TransitRoute, EdgeKind::Interlayer, EdgeKind::WalkTransfer})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

struct NetNode {
  NodeId id = 0;
  GeoPoint point;
  LayerId layer = LayerId::Drive;
  NodeKind kind = NodeKind::Intersection;
  std::map<std::string, std::string> tags;
};

/// Identifies one directed edge of a multigraph.
struct EdgeRef {
  NodeId from = 0;
  NodeId to = 0;
  std::uint32_t key = 0;

  friend auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
  friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
};

struct NetEdge {
  NodeId from = 0;
  NodeId to = 0;
  std::uint32_t key = 0;
  LayerId layer = LayerId::Drive;
  EdgeKind kind = EdgeKind::Street;
  double length_m = 0.0;
  std::optional<double> speed_mps;
  std::optional<double> travel_time_s;
  // OSM highway class for street edges, empty otherwise.
  std::string highway;
  // Extra numeric attributes usable as custom routing objectives.
  std::map<std::string, double> attributes;

  EdgeRef ref() const { return {from, to, key}; }

  /// Looks up a numeric attribute by name; the built-in fields are reachable
  /// as "length_m", "speed_mps" and "travel_time_s".
  std::optional<double> attribute(std::string_view name) const {
    if (name == "length_m") return length_m;
    if (name == "travel_time_s") return travel_time_s;
    if (name == "speed_mps") return speed_mps;
    if (auto it = attributes.find(std::string(name)); it != attributes.end()) return it->second;
    return std::nullopt;
  }
};

inline std::string describe(const EdgeRef& e) {
  return "edge " + std::to_string(e.from) + "->" + std::to_string(e.to) + "#" + std::to_string(e.key);
}

/// Circular analysis window; nodes beyond core_radius_m but within the buffer
/// are kept for path structure but excluded from reported results.
struct Window {
  GeoPoint center;
  double core_radius_m = 0.0;
  double buffer_m = 0.0;
};

/// Directed multigraph with self-loops whose nodes and edges carry a layer tag.
///
/// Nodes keep insertion order; edge keys disambiguate parallel edges between
/// the same ordered pair and are assigned 0, 1, ... unless given explicitly.
/// Once frozen, every mutating call throws.
class MultilayerGraph {
 public:
  MultilayerGraph() = default;

  void add_node(NetNode node) {
    ensure_mutable();
    if (index_.contains(node.id)) throw ConfigError("duplicate node id " + std::to_string(node.id));
    if (node.kind == NodeKind::Stop && node.layer != LayerId::Transit)
      throw ConfigError("stop node " + std::to_string(node.id) + " must be on the transit layer");
    if (node.kind == NodeKind::Poi && node.layer != LayerId::Poi)
      throw ConfigError("poi node " + std::to_string(node.id) + " must be on the poi layer");
    const std::size_t idx = nodes_.size();
    index_.emplace(node.id, idx);
    layer_nodes_[layer_slot(node.layer)].push_back(idx);
    nodes_.push_back(std::move(node));
    out_.emplace_back();
    in_.emplace_back();
    assert(counts_consistent());
  }

  /// Adds an edge. When `edge.key` should be chosen automatically pass
  /// `auto_key = true`; the next free key for (from, to) is used.
  const NetEdge& add_edge(NetEdge edge, bool auto_key = true) {
    ensure_mutable();
    const auto fi = index_.find(edge.from);
    const auto ti = index_.find(edge.to);
    if (fi == index_.end() || ti == index_.end())
      throw ConfigError(describe(edge.ref()) + " references a missing node");
    if (!(edge.length_m >= 0.0) || !std::isfinite(edge.length_m))
      throw ConfigError(describe(edge.ref()) + " has invalid length");
    if (edge.speed_mps && !(*edge.speed_mps > 0.0))
      throw ConfigError(describe(edge.ref()) + " has non-positive speed");
    if (edge.travel_time_s && !(*edge.travel_time_s >= 0.0))
      throw ConfigError(describe(edge.ref()) + " has negative travel time");
    if (edge.kind == EdgeKind::Interlayer && nodes_[fi->second].layer == nodes_[ti->second].layer)
      throw ConfigError(describe(edge.ref()) + " is interlayer but joins one layer");

    auto& keys = pair_keys_[{edge.from, edge.to}];
    if (auto_key) {
      edge.key = keys.empty() ? 0 : *keys.rbegin() + 1;
    } else if (keys.contains(edge.key)) {
      throw ConfigError("duplicate " + describe(edge.ref()));
    }
    keys.insert(edge.key);

    const std::size_t idx = edges_.size();
    out_[fi->second].push_back(idx);
    in_[ti->second].push_back(idx);
    layer_edges_[layer_slot(edge.layer)].push_back(idx);
    edges_.push_back(std::move(edge));
    assert(counts_consistent());
    return edges_.back();
  }

  /// Mutable access for annotation passes (speeds, times).
  NetEdge& mutable_edge(std::size_t idx) {
    ensure_mutable();
    return edges_.at(idx);
  }

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  /// Copy that accepts mutation again.
  MultilayerGraph unfrozen_copy() const {
    MultilayerGraph g = *this;
    g.frozen_ = false;
    return g;
  }

  bool empty() const { return nodes_.empty(); }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t node_count(LayerId l) const { return layer_nodes_[layer_slot(l)].size(); }
  std::size_t edge_count(LayerId l) const { return layer_edges_[layer_slot(l)].size(); }

  std::span<const NetNode> nodes() const { return nodes_; }
  std::span<const NetEdge> edges() const { return edges_; }
  std::span<const std::size_t> layer_nodes(LayerId l) const { return layer_nodes_[layer_slot(l)]; }
  std::span<const std::size_t> layer_edges(LayerId l) const { return layer_edges_[layer_slot(l)]; }

  bool has_node(NodeId id) const { return index_.contains(id); }

  std::size_t index_of(NodeId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw ConfigError("unknown node id " + std::to_string(id));
    return it->second;
  }

  const NetNode& node(NodeId id) const { return nodes_[index_of(id)]; }
  const NetNode& node_at(std::size_t idx) const { return nodes_[idx]; }
  const NetEdge& edge_at(std::size_t idx) const { return edges_[idx]; }

  /// Edge indices leaving / entering the node at dense index `idx`.
  std::span<const std::size_t> out_edges(std::size_t idx) const { return out_[idx]; }
  std::span<const std::size_t> in_edges(std::size_t idx) const { return in_[idx]; }

  std::optional<std::size_t> find_edge(const EdgeRef& ref) const {
    auto it = index_.find(ref.from);
    if (it == index_.end()) return std::nullopt;
    for (std::size_t e : out_[it->second]) {
      const NetEdge& edge = edges_[e];
      if (edge.to == ref.to && edge.key == ref.key) return e;
    }
    return std::nullopt;
  }

  const std::optional<Window>& window() const { return window_; }
  void set_window(const Window& w) {
    ensure_mutable();
    window_ = w;
  }

  /// True when the node lies inside the core radius of the window, or when
  /// the graph has no window at all.
  bool in_core(NodeId id) const {
    if (!window_) return true;
    return haversine_m(node(id).point, window_->center) <= window_->core_radius_m;
  }

  bool in_buffer_zone(NodeId id) const { return window_.has_value() && !in_core(id); }

  /// Full structural check: adjacency symmetry, per-layer counts, edge kind
  /// rules and street travel-time consistency. Throws on the first violation.
  void check_invariants() const {
    if (!counts_consistent()) throw AnalysisError("per-layer indices do not sum to totals");
    std::size_t out_total = 0, in_total = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      out_total += out_[i].size();
      in_total += in_[i].size();
      for (std::size_t e : out_[i])
        if (index_.at(edges_[e].from) != i) throw AnalysisError("out-adjacency mismatch");
      for (std::size_t e : in_[i])
        if (index_.at(edges_[e].to) != i) throw AnalysisError("in-adjacency mismatch");
    }
    if (out_total != edges_.size() || in_total != edges_.size()) throw AnalysisError("adjacency size mismatch");
    for (const NetEdge& e : edges_) {
      if (e.kind == EdgeKind::Street && e.speed_mps && e.travel_time_s) {
        const double expected = e.length_m / *e.speed_mps;
        if (std::abs(expected - *e.travel_time_s) > 1e-9 * std::max(1.0, std::abs(expected)))
          throw AnalysisError(describe(e.ref()) + " travel time disagrees with length/speed");
      }
    }
  }

 private:
  static std::size_t layer_slot(LayerId l) { return static_cast<std::size_t>(l); }

  void ensure_mutable() const {
    if (frozen_) throw ConfigError("graph is frozen");
  }

  bool counts_consistent() const {
    std::size_t n = 0, m = 0;
    for (std::size_t s = 0; s < kLayerCount; ++s) {
      n += layer_nodes_[s].size();
      m += layer_edges_[s].size();
    }
    return n == nodes_.size() && m == edges_.size();
  }

  std::vector<NetNode> nodes_;
  std::vector<NetEdge> edges_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::array<std::vector<std::size_t>, kLayerCount> layer_nodes_;
  std::array<std::vector<std::size_t>, kLayerCount> layer_edges_;
  std::map<std::pair<NodeId, NodeId>, std::set<std::uint32_t>> pair_keys_;
  std::optional<Window> window_;
  bool frozen_ = false;
};

/// Keeps nodes within radius + buffer of `center` (inclusive) and the edges
/// whose endpoints both survive. The result carries the window so callers can
/// report core nodes only. An empty result is a valid, empty graph.
inline MultilayerGraph induced_subgraph_by_radius(const MultilayerGraph& g, const GeoPoint& center,
                                                  double radius_m, double buffer_m = 0.0) {
  if (!(radius_m > 0.0)) throw ConfigError("radius must be positive");
  if (!(buffer_m >= 0.0)) throw ConfigError("buffer must be non-negative");
  const double limit = radius_m + buffer_m;

  MultilayerGraph out;
  std::vector<bool> keep(g.node_count(), false);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const NetNode& n = g.node_at(i);
    if (haversine_m(n.point, center) <= limit) {
      keep[i] = true;
      out.add_node(n);
    }
  }
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (!keep[i]) continue;
    for (std::size_t e : g.out_edges(i)) {
      const NetEdge& edge = g.edge_at(e);
      if (keep[g.index_of(edge.to)]) out.add_edge(edge, false);
    }
  }
  out.set_window({center, radius_m, buffer_m});
  return out;
}

enum class WeightAttr { LengthM, TravelTimeS };

inline std::string_view to_string(WeightAttr w) {
  return w == WeightAttr::LengthM ? "length_m" : "travel_time_s";
}

inline std::optional<WeightAttr> weight_attr_from_string(std::string_view s) {
  if (s == "length_m") return WeightAttr::LengthM;
  if (s == "travel_time_s") return WeightAttr::TravelTimeS;
  return std::nullopt;
}

/// Undirected edge between dense indices u < v.
struct UndirectedEdge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  double weight = 0.0;
};

/// Simple undirected weighted graph over dense indices [0, n). `ids` maps a
/// dense index back to the identifier it stands for (a graph node id, or an
/// edge index for line graphs). Self-loops are kept apart from the simple
/// edge set; centrality ignores them, modularity counts them.
class UndirectedGraph {
 public:
  struct Arc {
    std::uint32_t to;
    std::uint32_t edge;
  };

  UndirectedGraph() = default;

  /// Builds from arbitrary edge input; parallel edges collapse to the minimum
  /// weight, u == v entries become self-loops (also minimum).
  UndirectedGraph(std::vector<NodeId> ids, std::span<const UndirectedEdge> input) : ids_(std::move(ids)) {
    const std::size_t n = ids_.size();
    self_loop_.assign(n, std::nullopt);
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> best;
    for (const UndirectedEdge& e : input) {
      if (e.u >= n || e.v >= n) throw ConfigError("undirected edge endpoint out of range");
      if (e.u == e.v) {
        auto& s = self_loop_[e.u];
        s = s ? std::min(*s, e.weight) : e.weight;
        continue;
      }
      const auto key = std::minmax(e.u, e.v);
      auto [it, inserted] = best.emplace(key, e.weight);
      if (!inserted) it->second = std::min(it->second, e.weight);
    }
    edges_.reserve(best.size());
    for (const auto& [k, w] : best) edges_.push_back({k.first, k.second, w});

    offsets_.assign(n + 1, 0);
    for (const auto& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
    arcs_.resize(offsets_[n]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::uint32_t ei = 0; ei < edges_.size(); ++ei) {
      const auto& e = edges_[ei];
      arcs_[fill[e.u]++] = {e.v, ei};
      arcs_[fill[e.v]++] = {e.u, ei};
    }
  }

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const NodeId> ids() const { return ids_; }
  NodeId id(std::size_t idx) const { return ids_[idx]; }
  std::span<const UndirectedEdge> edges() const { return edges_; }
  std::span<const Arc> neighbors(std::size_t idx) const {
    return {arcs_.data() + offsets_[idx], arcs_.data() + offsets_[idx + 1]};
  }
  std::size_t degree(std::size_t idx) const { return offsets_[idx + 1] - offsets_[idx]; }
  const std::optional<double>& self_loop(std::size_t idx) const { return self_loop_[idx]; }

  /// Dense index of an id; ids are sorted when built from a MultilayerGraph.
  std::optional<std::size_t> find(NodeId id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - ids_.begin());
  }

  /// Rejects non-positive or non-finite weights; centrality needs them.
  void require_positive_weights() const {
    for (const auto& e : edges_)
      if (!(e.weight > 0.0) || !std::isfinite(e.weight))
        throw AnalysisError("edge " + std::to_string(ids_[e.u]) + "-" + std::to_string(ids_[e.v]) +
                            " has non-positive weight " + std::to_string(e.weight));
  }

 private:
  std::vector<NodeId> ids_;
  std::vector<UndirectedEdge> edges_;
  std::vector<std::optional<double>> self_loop_;
  std::vector<std::size_t> offsets_;
  std::vector<Arc> arcs_;
};

/// Collapses a directed multigraph to one undirected edge per node pair,
/// weighted by the minimum over all parallel and reverse edges. When `layers`
/// is given only nodes of those layers (and edges among them) are kept.
inline UndirectedGraph undirected_min_view(const MultilayerGraph& g, WeightAttr weight,
                                           const std::optional<std::set<LayerId>>& layers = std::nullopt) {
  std::vector<NodeId> ids;
  ids.reserve(g.node_count());
  for (const NetNode& n : g.nodes())
    if (!layers || layers->contains(n.layer)) ids.push_back(n.id);
  std::sort(ids.begin(), ids.end());

  auto dense = [&](NodeId id) -> std::optional<std::uint32_t> {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id) return std::nullopt;
    return static_cast<std::uint32_t>(it - ids.begin());
  };

  std::vector<UndirectedEdge> input;
  input.reserve(g.edge_count());
  for (const NetEdge& e : g.edges()) {
    const auto u = dense(e.from);
    const auto v = dense(e.to);
    if (!u || !v) continue;
    std::optional<double> w = weight == WeightAttr::LengthM ? std::optional<double>(e.length_m) : e.travel_time_s;
    if (!w) throw AnalysisError(describe(e.ref()) + " has no " + std::string(to_string(weight)));
    input.push_back({*u, *v, *w});
  }
  return UndirectedGraph(std::move(ids), input);
}

}  // namespace urbanet
