#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "json.hpp"
#include "urbanet/centrality.hpp"
#include "urbanet/error.hpp"
#include "urbanet/geo.hpp"
#include "urbanet/graph.hpp"
#include "urbanet/ingest/geojson.hpp"
#include "urbanet/spatial_grid.hpp"

namespace urbanet {

inline constexpr double kDefaultLinkRadiusM = 500.0;
inline constexpr double kDefaultSnapToleranceM = 50.0;
inline constexpr double kDefaultTransferThresholdM = 200.0;
inline constexpr double kDefaultWalkSpeedMps = 1.4;
inline constexpr double kMinBusTravelTimeS = 30.0;

// ---------------------------------------------------------------------------
// Node construction

/// Stops get ids 1..S in file order; POIs follow as S+1..S+P.
inline std::vector<NetNode> stop_nodes(std::span<const ingest::StopRecord> stops) {
  std::vector<NetNode> out;
  out.reserve(stops.size());
  for (std::size_t i = 0; i < stops.size(); ++i) {
    NetNode n{static_cast<NodeId>(i + 1), stops[i].point, LayerId::Transit, NodeKind::Stop, {}};
    n.tags["stop_id"] = stops[i].stop_id;
    if (!stops[i].name.empty()) n.tags["name"] = stops[i].name;
    out.push_back(std::move(n));
  }
  return out;
}

inline std::vector<NetNode> poi_nodes(std::span<const ingest::PoiRecord> pois, NodeId first_id) {
  std::vector<NetNode> out;
  out.reserve(pois.size());
  for (std::size_t i = 0; i < pois.size(); ++i) {
    NetNode n{first_id + static_cast<NodeId>(i), pois[i].point, LayerId::Poi, NodeKind::Poi, {}};
    n.tags["category"] = pois[i].category;
    if (!pois[i].name.empty()) n.tags["name"] = pois[i].name;
    out.push_back(std::move(n));
  }
  return out;
}

// ---------------------------------------------------------------------------
// POI -> stop linking

/// One interlayer edge per POI, to its nearest stop, when that stop is within
/// `radius_m` (inclusive). Equidistant stops resolve to the smaller node id.
inline std::vector<NetEdge> link_pois_to_stops(std::span<const NetNode> pois, std::span<const NetNode> stops,
                                               double radius_m = kDefaultLinkRadiusM) {
  if (!(radius_m > 0.0)) throw ConfigError("link radius must be positive");
  std::vector<NetEdge> out;
  if (stops.empty()) return out;
  std::vector<GeoPoint> pts;
  pts.reserve(stops.size());
  for (const auto& s : stops) pts.push_back(s.point);
  const SpatialGrid grid(pts, radius_m);

  for (const NetNode& poi : pois) {
    std::optional<std::size_t> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::uint32_t i : grid.within(poi.point, radius_m)) {
      const double d = haversine_m(poi.point, stops[i].point);
      if (d < best_d || (d == best_d && stops[i].id < stops[*best].id)) {
        best = i;
        best_d = d;
      }
    }
    if (!best) continue;
    NetEdge e;
    e.from = poi.id;
    e.to = stops[*best].id;
    e.layer = LayerId::Poi;
    e.kind = EdgeKind::Interlayer;
    e.length_m = best_d;
    out.push_back(std::move(e));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stops along route polylines

struct TransitEdges {
  std::vector<NetEdge> edges;
  // Routes that snapped fewer than two stops and produced no edges.
  std::vector<std::string> skipped_routes;
};

namespace detail {

struct Snap {
  double distance_m;
  double arc_m;
};

inline std::optional<Snap> snap_to_segment(const GeoPoint& p, const GeoPoint& a, const GeoPoint& b) {
  const LocalProjection proj(a);
  const auto [bx, by] = proj.to_xy(b);
  const auto [px, py] = proj.to_xy(p);
  const double len2 = bx * bx + by * by;
  const double t = len2 > 0.0 ? std::clamp((px * bx + py * by) / len2, 0.0, 1.0) : 0.0;
  const GeoPoint foot = lerp(a, b, t);
  return Snap{haversine_m(p, foot), haversine_m(a, foot)};
}

}  // namespace detail

/// Joins consecutive stops along each route. A stop belongs to a route when
/// it lies within `snap_tolerance_m` of the polyline; stops are ordered by
/// their arc-length position and each consecutive pair gets an edge whose
/// length is the arc-length gap. Pairs shared by several routes keep one edge
/// (the shortest gap).
inline TransitEdges transit_route_edges(std::span<const NetNode> stops,
                                        std::span<const ingest::RoutePolyline> routes,
                                        double snap_tolerance_m = kDefaultSnapToleranceM) {
  if (!(snap_tolerance_m > 0.0)) throw ConfigError("snap tolerance must be positive");
  TransitEdges out;
  std::vector<GeoPoint> pts;
  for (const auto& s : stops) pts.push_back(s.point);
  const SpatialGrid grid(pts, snap_tolerance_m);

  std::map<std::pair<NodeId, NodeId>, NetEdge> unique;
  std::vector<std::pair<NodeId, NodeId>> first_seen;
  for (const auto& route : routes) {
    std::map<std::uint32_t, detail::Snap> best;
    double arc_before = 0.0;
    for (std::size_t j = 0; j + 1 < route.points.size(); ++j) {
      const GeoPoint& a = route.points[j];
      const GeoPoint& b = route.points[j + 1];
      for (std::uint32_t i :
           grid.candidates_in_box(std::min(a.lat(), b.lat()), std::min(a.lon(), b.lon()),
                                  std::max(a.lat(), b.lat()), std::max(a.lon(), b.lon()))) {
        auto snap = detail::snap_to_segment(stops[i].point, a, b);
        if (!snap || snap->distance_m > snap_tolerance_m) continue;
        snap->arc_m += arc_before;
        auto it = best.find(i);
        if (it == best.end() || snap->distance_m < it->second.distance_m) best[i] = *snap;
      }
      arc_before += haversine_m(a, b);
    }
    if (best.size() < 2) {
      out.skipped_routes.push_back(route.route_id);
      continue;
    }
    std::vector<std::pair<double, std::uint32_t>> along;
    for (const auto& [i, s] : best) along.push_back({s.arc_m, i});
    std::sort(along.begin(), along.end(), [&](const auto& x, const auto& y) {
      if (x.first != y.first) return x.first < y.first;
      return stops[x.second].id < stops[y.second].id;
    });
    for (std::size_t k = 0; k + 1 < along.size(); ++k) {
      const NetNode& s1 = stops[along[k].second];
      const NetNode& s2 = stops[along[k + 1].second];
      const double gap = along[k + 1].first - along[k].first;
      const auto key = std::minmax(s1.id, s2.id);
      auto it = unique.find(key);
      if (it != unique.end()) {
        if (gap < it->second.length_m) it->second.length_m = gap;
        continue;
      }
      NetEdge e;
      e.from = s1.id;
      e.to = s2.id;
      e.layer = LayerId::Transit;
      e.kind = EdgeKind::TransitRoute;
      e.length_m = gap;
      unique.emplace(key, e);
      first_seen.push_back(key);
    }
  }
  for (const auto& key : first_seen) out.edges.push_back(unique.at(key));
  return out;
}

/// The POI + transit network: stop and POI nodes, nearest-stop interlayer
/// links and intra-transit route edges.
struct AccessibilityNetwork {
  MultilayerGraph graph;
  std::vector<std::string> skipped_routes;
};

inline AccessibilityNetwork build_accessibility_network(std::span<const ingest::PoiRecord> pois,
                                                        std::span<const ingest::StopRecord> stops,
                                                        std::span<const ingest::RoutePolyline> routes,
                                                        double link_radius_m = kDefaultLinkRadiusM,
                                                        double snap_tolerance_m = kDefaultSnapToleranceM) {
  const auto snodes = stop_nodes(stops);
  const auto pnodes = poi_nodes(pois, static_cast<NodeId>(stops.size()) + 1);
  AccessibilityNetwork net;
  for (const auto& n : snodes) net.graph.add_node(n);
  for (const auto& n : pnodes) net.graph.add_node(n);
  for (auto& e : link_pois_to_stops(pnodes, snodes, link_radius_m)) net.graph.add_edge(std::move(e));
  TransitEdges transit = transit_route_edges(snodes, routes, snap_tolerance_m);
  for (auto& e : transit.edges) net.graph.add_edge(std::move(e));
  net.skipped_routes = std::move(transit.skipped_routes);
  return net;
}

// ---------------------------------------------------------------------------
// Layer merging and transit-time graphs

/// Union of a drive and a walk layer keyed by node id and (from, to, key).
/// Where both layers hold the same edge, the walk edge (and its travel time)
/// wins; a node present in both keeps its walk record.
inline MultilayerGraph merge_walk_priority(const MultilayerGraph& drive, const MultilayerGraph& walk) {
  for (const auto* g : {&drive, &walk})
    for (const NetEdge& e : g->edges())
      if (!e.travel_time_s) throw AnalysisError(describe(e.ref()) + " has no travel time");

  std::map<NodeId, const NetNode*> nodes;
  for (const NetNode& n : drive.nodes()) nodes[n.id] = &n;
  for (const NetNode& n : walk.nodes()) nodes[n.id] = &n;
  std::map<EdgeRef, const NetEdge*> edges;
  for (const NetEdge& e : drive.edges()) edges[e.ref()] = &e;
  for (const NetEdge& e : walk.edges()) edges[e.ref()] = &e;

  MultilayerGraph out;
  for (const auto& [id, n] : nodes) out.add_node(*n);
  for (const auto& [ref, e] : edges) out.add_edge(*e, false);
  return out;
}

/// Observed arrivals along one route, in route order, minutes since midnight.
struct StopTimetable {
  std::string route_id;
  std::vector<std::pair<std::string, int>> arrivals;
};

/// Reads {"routes": [{"route_id": .., "stops": [{"stop_id": .., "arrival":
/// "HH:MM" | minutes}, ...]}, ...]}.
inline std::vector<StopTimetable> parse_timetables_json(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document.begin(), document.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
  auto fail = [](const std::string& what) -> ParseError { return ParseError("timetable: " + what); };
  if (!doc.is_object() || !doc.contains("routes") || !doc["routes"].is_array()) throw fail("missing routes array");
  std::vector<StopTimetable> out;
  for (std::size_t r = 0; r < doc["routes"].size(); ++r) {
    const auto& route = doc["routes"][r];
    if (!route.is_object() || !route.contains("stops") || !route["stops"].is_array())
      throw fail("route " + std::to_string(r) + " has no stops array");
    StopTimetable t;
    if (route.contains("route_id") && route["route_id"].is_string()) t.route_id = route["route_id"].get<std::string>();
    else if (route.contains("route_id") && route["route_id"].is_number_integer())
      t.route_id = std::to_string(route["route_id"].get<std::int64_t>());
    else t.route_id = std::to_string(r);
    for (const auto& stop : route["stops"]) {
      if (!stop.is_object() || !stop.contains("stop_id") || !stop.contains("arrival"))
        throw fail("route " + t.route_id + " has a stop without stop_id/arrival");
      const auto& sid = stop["stop_id"];
      std::string id = sid.is_string() ? sid.get<std::string>()
                       : sid.is_number_integer() ? std::to_string(sid.get<std::int64_t>())
                                                 : throw fail("route " + t.route_id + " has a non-scalar stop_id");
      const auto& arr = stop["arrival"];
      int minutes = 0;
      if (arr.is_number_integer()) {
        minutes = arr.get<int>();
      } else if (arr.is_string()) {
        const std::string s = arr.get<std::string>();
        int h = 0, m = 0;
        char colon = 0;
        if (std::sscanf(s.c_str(), "%d%c%d", &h, &colon, &m) != 3 || colon != ':' || h < 0 || m < 0 || m > 59)
          throw fail("route " + t.route_id + " has bad arrival '" + s + "'");
        minutes = h * 60 + m;
      } else {
        throw fail("route " + t.route_id + " has a non-time arrival");
      }
      t.arrivals.push_back({std::move(id), minutes});
    }
    out.push_back(std::move(t));
  }
  return out;
}

/// Directed transit edges between consecutive timetable stops, weighted by
/// the arrival-time delta with a 30 s floor.
inline MultilayerGraph bus_time_graph(std::span<const StopTimetable> timetables,
                                      std::span<const ingest::StopRecord> stops) {
  MultilayerGraph g;
  std::unordered_map<std::string, NodeId> by_stop_id;
  for (const NetNode& n : stop_nodes(stops)) {
    by_stop_id.emplace(n.tags.at("stop_id"), n.id);
    g.add_node(n);
  }
  for (const StopTimetable& t : timetables) {
    for (std::size_t i = 0; i + 1 < t.arrivals.size(); ++i) {
      const auto& [a_id, a_min] = t.arrivals[i];
      const auto& [b_id, b_min] = t.arrivals[i + 1];
      if (b_min < a_min)
        throw ConfigError("route " + t.route_id + ": arrival at position " + std::to_string(i + 1) +
                          " is earlier than at position " + std::to_string(i));
      auto a = by_stop_id.find(a_id);
      auto b = by_stop_id.find(b_id);
      if (a == by_stop_id.end() || b == by_stop_id.end())
        throw ConfigError("route " + t.route_id + " references unknown stop '" +
                          (a == by_stop_id.end() ? a_id : b_id) + "'");
      NetEdge e;
      e.from = a->second;
      e.to = b->second;
      e.layer = LayerId::Transit;
      e.kind = EdgeKind::TransitRoute;
      e.length_m = haversine_m(g.node(e.from).point, g.node(e.to).point);
      e.travel_time_s = std::max(60.0 * (b_min - a_min), kMinBusTravelTimeS);
      g.add_edge(std::move(e));
    }
  }
  return g;
}

/// Adds a walk_transfer edge in each direction for every pair of stops closer
/// than `threshold_m` (strict), with travel time distance / walk speed.
inline MultilayerGraph merge_nearby_stops(MultilayerGraph g, double threshold_m = kDefaultTransferThresholdM,
                                          double walk_speed_mps = kDefaultWalkSpeedMps) {
  if (!(threshold_m > 0.0)) throw ConfigError("transfer threshold must be positive");
  if (!(walk_speed_mps > 0.0)) throw ConfigError("walk speed must be positive");
  if (g.frozen()) g = g.unfrozen_copy();

  std::vector<const NetNode*> stops;
  for (const NetNode& n : g.nodes())
    if (n.kind == NodeKind::Stop) stops.push_back(&n);
  std::sort(stops.begin(), stops.end(), [](auto* a, auto* b) { return a->id < b->id; });
  std::vector<GeoPoint> pts;
  for (auto* s : stops) pts.push_back(s->point);
  const SpatialGrid grid(pts, threshold_m);

  std::vector<NetEdge> added;
  for (std::uint32_t i = 0; i < stops.size(); ++i) {
    for (std::uint32_t j : grid.within(pts[i], threshold_m)) {
      if (j <= i) continue;
      const double d = haversine_m(pts[i], pts[j]);
      if (!(d < threshold_m)) continue;
      NetEdge e;
      e.layer = LayerId::Transit;
      e.kind = EdgeKind::WalkTransfer;
      e.length_m = d;
      e.speed_mps = walk_speed_mps;
      e.travel_time_s = d / walk_speed_mps;
      e.from = stops[i]->id;
      e.to = stops[j]->id;
      added.push_back(e);
      std::swap(e.from, e.to);
      added.push_back(e);
    }
  }
  for (auto& e : added) g.add_edge(std::move(e));
  return g;
}

// ---------------------------------------------------------------------------
// Areas

/// A bounding box or a polygon ring in lat/lon.
class AreaFilter {
 public:
  static AreaFilter bbox(const GeoPoint& south_west, const GeoPoint& north_east) {
    if (!(north_east.lat() > south_west.lat()) || !(north_east.lon() > south_west.lon()))
      throw ConfigError("bounding box has no area");
    AreaFilter a;
    a.ring_ = {south_west, {south_west.lat(), north_east.lon()}, north_east, {north_east.lat(), south_west.lon()}};
    a.is_box_ = true;
    return a;
  }

  static AreaFilter polygon(std::vector<GeoPoint> ring) {
    if (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
    if (ring.size() < 3) throw ConfigError("polygon needs at least 3 vertices");
    double twice_area = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const auto& p = ring[i];
      const auto& q = ring[(i + 1) % ring.size()];
      twice_area += p.lon() * q.lat() - q.lon() * p.lat();
    }
    if (std::abs(twice_area) <= 0.0) throw ConfigError("polygon has no area");
    AreaFilter a;
    a.ring_ = std::move(ring);
    return a;
  }

  bool contains(const GeoPoint& p) const {
    if (is_box_)
      return p.lat() >= ring_[0].lat() && p.lat() <= ring_[2].lat() && p.lon() >= ring_[0].lon() &&
             p.lon() <= ring_[2].lon();
    bool inside = false;
    for (std::size_t i = 0, j = ring_.size() - 1; i < ring_.size(); j = i++) {
      const auto& a = ring_[i];
      const auto& b = ring_[j];
      if ((a.lat() > p.lat()) != (b.lat() > p.lat())) {
        const double x = (b.lon() - a.lon()) * (p.lat() - a.lat()) / (b.lat() - a.lat()) + a.lon();
        if (p.lon() < x) inside = !inside;
      }
    }
    return inside;
  }

  bool is_box() const { return is_box_; }
  const std::vector<GeoPoint>& ring() const { return ring_; }

 private:
  AreaFilter() = default;
  std::vector<GeoPoint> ring_;
  bool is_box_ = false;
};

// ---------------------------------------------------------------------------
// Network statistics

/// Raw counts the report is assembled from.
struct ReportCounts {
  std::size_t poi_nodes = 0;
  std::size_t stop_nodes = 0;
  std::size_t other_nodes = 0;
  std::size_t interlayer_edges = 0;
  std::size_t intra_transit_edges = 0;
  std::size_t other_edges = 0;
  std::size_t connected_pois = 0;
  double interlayer_length_sum_m = 0.0;
  double average_degree_centrality = 0.0;
  double maximum_degree_centrality = 0.0;
  std::size_t high_centrality_nodes = 0;
  std::size_t high_centrality_nodes_in_area = 0;
};

struct AccessibilityReport {
  std::size_t total_nodes = 0;
  std::size_t pois = 0;
  std::size_t stops = 0;
  std::size_t total_edges = 0;
  std::size_t inter_layer_edges = 0;
  std::size_t intra_transit_edges = 0;
  double average_degree_centrality = 0.0;
  double maximum_degree_centrality = 0.0;
  std::size_t pois_connected = 0;
  std::size_t pois_isolated = 0;
  std::size_t high_centrality_nodes = 0;
  std::size_t high_centrality_nodes_in_area = 0;
  // Exact ratio in percent, and the one-decimal figure that gets published.
  double connected_fraction_pct = 0.0;
  double percentage_of_pois_connected_to_transit = 0.0;
  std::optional<double> average_distance_of_inter_layer_connections_m;
};

/// Derives totals and percentages from raw counts and checks the identities
/// that must hold between them.
inline AccessibilityReport assemble_report(const ReportCounts& c) {
  if (c.poi_nodes == 0) throw AnalysisError("no POIs: connected percentage is undefined");
  if (c.connected_pois > c.poi_nodes) throw AnalysisError("more connected POIs than POIs");
  AccessibilityReport r;
  r.pois = c.poi_nodes;
  r.stops = c.stop_nodes;
  r.total_nodes = c.poi_nodes + c.stop_nodes + c.other_nodes;
  r.inter_layer_edges = c.interlayer_edges;
  r.intra_transit_edges = c.intra_transit_edges;
  r.total_edges = c.interlayer_edges + c.intra_transit_edges + c.other_edges;
  r.average_degree_centrality = c.average_degree_centrality;
  r.maximum_degree_centrality = c.maximum_degree_centrality;
  r.pois_connected = c.connected_pois;
  r.pois_isolated = c.poi_nodes - c.connected_pois;
  r.high_centrality_nodes = c.high_centrality_nodes;
  r.high_centrality_nodes_in_area = c.high_centrality_nodes_in_area;
  r.connected_fraction_pct = 100.0 * static_cast<double>(c.connected_pois) / static_cast<double>(c.poi_nodes);
  r.percentage_of_pois_connected_to_transit = std::round(r.connected_fraction_pct * 10.0) / 10.0;
  if (c.interlayer_edges > 0)
    r.average_distance_of_inter_layer_connections_m =
        c.interlayer_length_sum_m / static_cast<double>(c.interlayer_edges);

  if (r.pois_connected + r.pois_isolated != r.pois) throw AnalysisError("connected + isolated != POIs");
  if (std::abs(r.percentage_of_pois_connected_to_transit - r.connected_fraction_pct) > 0.05 + 1e-9)
    throw AnalysisError("rounded percentage drifted");
  return r;
}

/// Table-style summary of a POI + transit network. High-centrality nodes use
/// degree centrality above 1.5x its mean; `area` counts those inside it.
inline AccessibilityReport network_stats(const MultilayerGraph& g, const std::optional<AreaFilter>& area,
                                         double high_factor = 1.5) {
  ReportCounts c;
  std::vector<bool> connected(g.node_count(), false);
  for (const NetNode& n : g.nodes()) {
    if (n.kind == NodeKind::Poi) ++c.poi_nodes;
    else if (n.kind == NodeKind::Stop) ++c.stop_nodes;
    else ++c.other_nodes;
  }
  for (const NetEdge& e : g.edges()) {
    if (e.kind == EdgeKind::Interlayer) {
      ++c.interlayer_edges;
      c.interlayer_length_sum_m += e.length_m;
      for (NodeId end : {e.from, e.to}) {
        const std::size_t idx = g.index_of(end);
        if (g.node_at(idx).kind == NodeKind::Poi) connected[idx] = true;
      }
    } else if (e.kind == EdgeKind::TransitRoute) {
      ++c.intra_transit_edges;
    } else {
      ++c.other_edges;
    }
  }
  c.connected_pois = static_cast<std::size_t>(std::count(connected.begin(), connected.end(), true));

  if (g.node_count() >= 2) {
    const NodeCentralityMap degree = degree_centrality(g);
    double sum = 0.0, mx = 0.0;
    for (double v : degree.values) {
      sum += v;
      mx = std::max(mx, v);
    }
    c.average_degree_centrality = sum / static_cast<double>(degree.size());
    c.maximum_degree_centrality = mx;
    const auto high = high_centrality_nodes(degree, high_factor);
    c.high_centrality_nodes = high.size();
    if (area)
      for (NodeId id : high)
        if (area->contains(g.node(id).point)) ++c.high_centrality_nodes_in_area;
  }
  return assemble_report(c);
}

// ---------------------------------------------------------------------------
// Walkability

struct WalkabilityScore {
  // +infinity when no betweenness falls inside the area ("unimpeded").
  double value = 0.0;
  bool unimpeded = false;
  std::size_t edges_in_area = 0;
  double sum_closeness = 0.0;
  double sum_betweenness = 0.0;
};

/// W = sum C_i / sum B_i over edges whose great-circle midpoint lies in the
/// area, using edge-level closeness and normalized edge betweenness.
inline WalkabilityScore walkability_score(const MultilayerGraph& g, const EdgeCentralityMap& closeness_map,
                                          const EdgeCentralityMap& betweenness_map, const AreaFilter& area) {
  if (closeness_map.metric != CentralityMetric::Closeness) throw ConfigError("first map must hold closeness");
  if (betweenness_map.metric != CentralityMetric::Betweenness) throw ConfigError("second map must hold betweenness");
  if (!betweenness_map.normalized) throw ConfigError("walkability needs normalized betweenness");
  if (closeness_map.edges != betweenness_map.edges)
    throw AnalysisError("closeness and betweenness maps cover different edges");

  WalkabilityScore w;
  for (std::size_t i = 0; i < closeness_map.size(); ++i) {
    const EdgeRef& e = closeness_map.edges[i];
    const GeoPoint mid = great_circle_midpoint(g.node(e.from).point, g.node(e.to).point);
    if (!area.contains(mid)) continue;
    ++w.edges_in_area;
    w.sum_closeness += closeness_map.values[i];
    w.sum_betweenness += betweenness_map.values[i];
  }
  if (w.edges_in_area == 0) throw AnalysisError("walkability undefined: no edges in area");
  if (w.sum_betweenness == 0.0) {
    if (w.sum_closeness == 0.0) throw AnalysisError("walkability undefined: zero closeness and betweenness");
    w.value = std::numeric_limits<double>::infinity();
    w.unimpeded = true;
    return w;
  }
  w.value = w.sum_closeness / w.sum_betweenness;
  return w;
}

}  // namespace urbanet
