#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "urbanet/centrality.hpp"
#include "urbanet/communities.hpp"
#include "urbanet/error.hpp"
#include "urbanet/graph.hpp"
#include "urbanet/multilayer.hpp"
#include "urbanet/routing.hpp"

namespace urbanet::io {

using Json = nlohmann::ordered_json;

inline constexpr int kBundleVersion = 1;
inline constexpr std::string_view kBundleFormat = "urbanet-graph-bundle";

/// Rounds to `digits` significant digits. The JSON writer prints the
/// shortest round-trip form, so rounded values print with at most that many.
inline double round_sig(double x, int digits = 9) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

inline std::string format_sig(double x, int digits = 9) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

inline Json position(const GeoPoint& p, bool rounded) {
  return rounded ? Json::array({round_sig(p.lon()), round_sig(p.lat())}) : Json::array({p.lon(), p.lat()});
}

// ---------------------------------------------------------------------------
// Graph bundle: the lossless on-disk form of a MultilayerGraph.

inline Json node_to_json(const NetNode& n) {
  Json j = Json::array({n.id, n.point.lat(), n.point.lon(), to_string(n.layer), to_string(n.kind)});
  Json tags = Json::object();
  for (const auto& [k, v] : n.tags) tags[k] = v;
  j.push_back(std::move(tags));
  return j;
}

inline Json edge_to_json(const NetEdge& e) {
  Json j = Json::object();
  j["from"] = e.from;
  j["to"] = e.to;
  j["key"] = e.key;
  j["layer"] = to_string(e.layer);
  j["kind"] = to_string(e.kind);
  j["length_m"] = e.length_m;
  j["speed_mps"] = e.speed_mps ? Json(*e.speed_mps) : Json(nullptr);
  j["travel_time_s"] = e.travel_time_s ? Json(*e.travel_time_s) : Json(nullptr);
  if (!e.highway.empty()) j["highway"] = e.highway;
  if (!e.attributes.empty()) {
    Json a = Json::object();
    for (const auto& [k, v] : e.attributes) a[k] = v;
    j["attributes"] = std::move(a);
  }
  return j;
}

inline std::string write_bundle(const MultilayerGraph& g) {
  Json doc = Json::object();
  doc["format"] = kBundleFormat;
  doc["version"] = kBundleVersion;
  Json counts = Json::object();
  counts["nodes"] = g.node_count();
  counts["edges"] = g.edge_count();
  Json layers = Json::object();
  for (LayerId l : kAllLayers) {
    Json c = Json::object();
    c["nodes"] = g.node_count(l);
    c["edges"] = g.edge_count(l);
    layers[std::string(to_string(l))] = std::move(c);
  }
  counts["layers"] = std::move(layers);
  doc["header"] = std::move(counts);
  if (const auto& w = g.window()) {
    Json win = Json::object();
    win["center"] = Json::array({w->center.lat(), w->center.lon()});
    win["core_radius_m"] = w->core_radius_m;
    win["buffer_m"] = w->buffer_m;
    doc["window"] = std::move(win);
  }
  Json nodes = Json::array();
  for (const NetNode& n : g.nodes()) nodes.push_back(node_to_json(n));
  doc["nodes"] = std::move(nodes);
  Json edges = Json::array();
  for (const NetEdge& e : g.edges()) edges.push_back(edge_to_json(e));
  doc["edges"] = std::move(edges);
  return doc.dump(1) + "\n";
}

namespace detail {

template <typename T, typename F>
T enum_field(const Json& j, const char* what, F from_string) {
  if (!j.is_string()) throw ParseError(std::string("bundle: ") + what + " is not a string");
  auto v = from_string(j.get<std::string>());
  if (!v) throw ParseError(std::string("bundle: unknown ") + what + " '" + j.get<std::string>() + "'");
  return *v;
}

inline std::optional<double> optional_number(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw ParseError(std::string("bundle: ") + key + " is not a number");
  return it->get<double>();
}

inline NetEdge edge_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("bundle: edge is not an object");
  NetEdge e;
  try {
    e.from = j.at("from").get<NodeId>();
    e.to = j.at("to").get<NodeId>();
    e.key = j.at("key").get<std::uint32_t>();
    e.length_m = j.at("length_m").get<double>();
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("bundle: bad edge: ") + ex.what());
  }
  e.layer = enum_field<LayerId>(j.at("layer"), "layer", layer_from_string);
  e.kind = enum_field<EdgeKind>(j.at("kind"), "edge kind", edge_kind_from_string);
  e.speed_mps = optional_number(j, "speed_mps");
  e.travel_time_s = optional_number(j, "travel_time_s");
  if (auto it = j.find("highway"); it != j.end() && it->is_string()) e.highway = it->get<std::string>();
  if (auto it = j.find("attributes"); it != j.end() && it->is_object())
    for (auto a = it->begin(); a != it->end(); ++a) {
      if (!a->is_number()) throw ParseError("bundle: attribute '" + a.key() + "' is not a number");
      e.attributes[a.key()] = a->get<double>();
    }
  return e;
}

}  // namespace detail

/// Reads a bundle written by write_bundle. Throws FormatVersionError for a
/// different format version and ParseError for anything malformed.
inline MultilayerGraph read_bundle(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("bundle: invalid JSON: ") + e.what(), e.byte);
  }
  if (!doc.is_object() || doc.value("format", std::string{}) != kBundleFormat)
    throw ParseError("not a graph bundle");
  if (!doc.contains("version") || !doc["version"].is_number_integer())
    throw ParseError("bundle has no version");
  if (doc["version"].get<int>() != kBundleVersion)
    throw FormatVersionError("bundle format version " + std::to_string(doc["version"].get<int>()) +
                             " is not supported (expected " + std::to_string(kBundleVersion) + ")");
  if (!doc.contains("nodes") || !doc["nodes"].is_array() || !doc.contains("edges") || !doc["edges"].is_array())
    throw ParseError("bundle lacks node or edge table");

  MultilayerGraph g;
  try {
    for (const Json& n : doc["nodes"]) {
      if (!n.is_array() || n.size() != 6) throw ParseError("bundle: node row must have 6 fields");
      NetNode node;
      node.id = n[0].get<NodeId>();
      const double lat = n[1].get<double>(), lon = n[2].get<double>();
      if (!GeoPoint::valid(lat, lon)) throw ParseError("bundle: node " + std::to_string(node.id) + " has bad coordinates");
      node.point = GeoPoint(lat, lon);
      node.layer = detail::enum_field<LayerId>(n[3], "layer", layer_from_string);
      node.kind = detail::enum_field<NodeKind>(n[4], "node kind", node_kind_from_string);
      for (auto t = n[5].begin(); t != n[5].end(); ++t) node.tags[t.key()] = t->get<std::string>();
      g.add_node(std::move(node));
    }
    for (const Json& e : doc["edges"]) g.add_edge(detail::edge_from_json(e), false);
    if (auto w = doc.find("window"); w != doc.end()) {
      const auto& c = w->at("center");
      g.set_window({GeoPoint(c.at(0).get<double>(), c.at(1).get<double>()), w->at("core_radius_m").get<double>(),
                    w->at("buffer_m").get<double>()});
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("bundle: ") + ex.what());
  } catch (const ConfigError& ex) {
    throw ParseError(std::string("bundle: ") + ex.what());
  }

  const auto& header = doc.value("header", Json::object());
  if (header.value("nodes", std::size_t{0}) != g.node_count() || header.value("edges", std::size_t{0}) != g.edge_count())
    throw ParseError("bundle header counts do not match its tables");
  return g;
}

// ---------------------------------------------------------------------------
// Graph as GeoJSON: nodes as Points, edges as LineStrings, full precision so
// the file can be read back.

inline std::string graph_to_geojson(const MultilayerGraph& g) {
  Json fc = Json::object();
  fc["type"] = "FeatureCollection";
  Json features = Json::array();
  for (const NetNode& n : g.nodes()) {
    Json f = Json::object();
    f["type"] = "Feature";
    f["geometry"] = Json{{"type", "Point"}, {"coordinates", position(n.point, false)}};
    Json props = Json::object();
    props["element"] = "node";
    props["id"] = n.id;
    props["layer"] = to_string(n.layer);
    props["kind"] = to_string(n.kind);
    Json tags = Json::object();
    for (const auto& [k, v] : n.tags) tags[k] = v;
    props["tags"] = std::move(tags);
    f["properties"] = std::move(props);
    features.push_back(std::move(f));
  }
  for (const NetEdge& e : g.edges()) {
    Json f = Json::object();
    f["type"] = "Feature";
    f["geometry"] = Json{{"type", "LineString"},
                         {"coordinates", Json::array({position(g.node(e.from).point, false),
                                                      position(g.node(e.to).point, false)})}};
    Json props = edge_to_json(e);
    props["element"] = "edge";
    f["properties"] = std::move(props);
    features.push_back(std::move(f));
  }
  fc["features"] = std::move(features);
  return fc.dump(1) + "\n";
}

inline MultilayerGraph graph_from_geojson(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
  if (!doc.is_object() || !doc.contains("features") || !doc["features"].is_array())
    throw ParseError("not a FeatureCollection");
  MultilayerGraph g;
  std::vector<NetEdge> edges;
  try {
    for (const Json& f : doc["features"]) {
      const Json& p = f.at("properties");
      const std::string element = p.at("element").get<std::string>();
      if (element == "node") {
        const Json& c = f.at("geometry").at("coordinates");
        NetNode n;
        n.id = p.at("id").get<NodeId>();
        n.point = GeoPoint(c.at(1).get<double>(), c.at(0).get<double>());
        n.layer = detail::enum_field<LayerId>(p.at("layer"), "layer", layer_from_string);
        n.kind = detail::enum_field<NodeKind>(p.at("kind"), "node kind", node_kind_from_string);
        for (auto t = p.at("tags").begin(); t != p.at("tags").end(); ++t) n.tags[t.key()] = t->get<std::string>();
        g.add_node(std::move(n));
      } else if (element == "edge") {
        edges.push_back(detail::edge_from_json(p));
      }
    }
    for (auto& e : edges) g.add_edge(std::move(e), false);
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("graph GeoJSON: ") + ex.what());
  } catch (const ConfigError& ex) {
    throw ParseError(std::string("graph GeoJSON: ") + ex.what());
  }
  return g;
}

// ---------------------------------------------------------------------------
// Analysis outputs. Every float goes through round_sig.

inline Json feature_collection(Json features) {
  Json fc = Json::object();
  fc["type"] = "FeatureCollection";
  fc["features"] = std::move(features);
  return fc;
}

/// Edge heatmap: one LineString per edge with its `value`.
inline std::string heatmap_geojson(const MultilayerGraph& g, const EdgeCentralityMap& m) {
  Json features = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    const EdgeRef& e = m.edges[i];
    Json f = Json::object();
    f["type"] = "Feature";
    f["geometry"] = Json{{"type", "LineString"},
                         {"coordinates", Json::array({position(g.node(e.from).point, true),
                                                      position(g.node(e.to).point, true)})}};
    Json p = Json::object();
    p["from"] = e.from;
    p["to"] = e.to;
    p["metric"] = to_string(m.metric);
    p["provenance"] = to_string(m.provenance);
    p["normalized"] = m.normalized;
    p["value"] = round_sig(m.values[i]);
    f["properties"] = std::move(p);
    features.push_back(std::move(f));
  }
  return feature_collection(std::move(features)).dump(1) + "\n";
}

/// node_id,value[,in_core] rows sorted by node id.
inline std::string centrality_csv(const NodeCentralityMap& m, const MultilayerGraph* g = nullptr) {
  std::ostringstream os;
  os << "node_id," << to_string(m.metric);
  const bool core = g && g->window();
  if (core) os << ",in_core";
  os << "\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    os << m.ids[i] << "," << format_sig(m.values[i]);
    if (core) os << "," << (g->in_core(m.ids[i]) ? 1 : 0);
    os << "\n";
  }
  return os.str();
}

inline Json route_feature(const MultilayerGraph& g, const RouteResult& r, const std::string& objective) {
  Json coords = Json::array();
  for (NodeId id : r.nodes) coords.push_back(position(g.node(id).point, true));
  if (coords.size() == 1) coords.push_back(coords[0]);
  Json f = Json::object();
  f["type"] = "Feature";
  f["geometry"] = Json{{"type", "LineString"}, {"coordinates", std::move(coords)}};
  Json p = Json::object();
  p["objective"] = objective;
  p["cost"] = round_sig(r.cost);
  p["length_m"] = round_sig(r.length_m);
  p["travel_time_s"] = r.travel_time_s ? Json(round_sig(*r.travel_time_s)) : Json(nullptr);
  p["nodes"] = r.nodes;
  f["properties"] = std::move(p);
  return f;
}

inline std::string communities_geojson(const MultilayerGraph& g, const CommunityAssignment& a) {
  Json features = Json::array();
  for (std::size_t i = 0; i < a.ids.size(); ++i) {
    Json f = Json::object();
    f["type"] = "Feature";
    f["geometry"] = Json{{"type", "Point"}, {"coordinates", position(g.node(a.ids[i]).point, true)}};
    Json p = Json::object();
    p["id"] = a.ids[i];
    p["community"] = a.community[i];
    f["properties"] = std::move(p);
    features.push_back(std::move(f));
  }
  Json fc = feature_collection(std::move(features));
  // Foreign members describing the run.
  fc["gamma"] = round_sig(a.gamma);
  fc["modularity"] = round_sig(a.modularity);
  fc["communities"] = a.community_count;
  fc["weight"] = a.weight_attr;
  return fc.dump(1) + "\n";
}

/// Flat JSON object with one key per report field.
inline std::string report_json(const AccessibilityReport& r) {
  Json j = Json::object();
  j["total_nodes"] = r.total_nodes;
  j["pois"] = r.pois;
  j["stops"] = r.stops;
  j["total_edges"] = r.total_edges;
  j["inter_layer_edges"] = r.inter_layer_edges;
  j["intra_transit_edges"] = r.intra_transit_edges;
  j["average_degree_centrality"] = round_sig(r.average_degree_centrality);
  j["maximum_degree_centrality"] = round_sig(r.maximum_degree_centrality);
  j["pois_connected"] = r.pois_connected;
  j["pois_isolated"] = r.pois_isolated;
  j["high_centrality_nodes"] = r.high_centrality_nodes;
  j["high_centrality_nodes_in_area"] = r.high_centrality_nodes_in_area;
  j["percentage_of_pois_connected_to_transit"] = r.percentage_of_pois_connected_to_transit;
  j["average_distance_of_inter_layer_connections_meters"] =
      r.average_distance_of_inter_layer_connections_m ? Json(round_sig(*r.average_distance_of_inter_layer_connections_m))
                                                      : Json(nullptr);
  return j.dump(2) + "\n";
}

inline std::string walkability_json(const WalkabilityScore& w) {
  Json j = Json::object();
  j["walkability_score"] = w.unimpeded ? Json(nullptr) : Json(round_sig(w.value));
  j["unimpeded"] = w.unimpeded;
  j["edges_in_area"] = w.edges_in_area;
  j["sum_closeness"] = round_sig(w.sum_closeness);
  j["sum_betweenness"] = round_sig(w.sum_betweenness);
  return j.dump(2) + "\n";
}

}  // namespace urbanet::io
