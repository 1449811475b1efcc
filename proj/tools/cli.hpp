#pragma once

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "urbanet/urbanet.hpp"

namespace urbanet::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kAnalysisFailure = 1, kInputFailure = 2, kVersionMismatch = 3 };

// ---------------------------------------------------------------------------
// Input helpers

inline std::string read_file(const std::string& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw ConfigError("input file not found: " + path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void require_files(std::initializer_list<const std::string*> paths) {
  for (const std::string* p : paths) {
    std::error_code ec;
    if (p && !p->empty() && !fs::is_regular_file(*p, ec)) throw ConfigError("input file not found: " + *p);
  }
}

/// "lat,lon"
inline GeoPoint parse_point(const std::string& text, const char* what) {
  double lat = 0.0, lon = 0.0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf,%lf%c", &lat, &lon, &tail) != 2)
    throw ConfigError(std::string(what) + " must be 'lat,lon', got '" + text + "'");
  if (!GeoPoint::valid(lat, lon)) throw ConfigError(std::string(what) + " is out of range: " + text);
  return {lat, lon};
}

/// First Polygon (or first part of a MultiPolygon) in a GeoJSON file, exterior
/// ring only.
inline AreaFilter area_from_geojson(const std::string& path) {
  const std::string text = read_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": invalid JSON: " + e.what(), e.byte);
  }
  auto ring_of = [&](const nlohmann::json& geom) -> std::optional<AreaFilter> {
    if (!geom.is_object() || !geom.contains("type") || !geom["type"].is_string()) return std::nullopt;
    const std::string type = geom["type"].get<std::string>();
    const nlohmann::json* rings = nullptr;
    if (type == "Polygon") rings = &geom.at("coordinates");
    else if (type == "MultiPolygon") rings = &geom.at("coordinates").at(0);
    else return std::nullopt;
    std::vector<GeoPoint> ring;
    for (const auto& c : rings->at(0)) {
      const double lon = c.at(0).get<double>(), lat = c.at(1).get<double>();
      if (!GeoPoint::valid(lat, lon)) throw ConfigError(path + ": polygon vertex out of range");
      ring.emplace_back(lat, lon);
    }
    return AreaFilter::polygon(std::move(ring));
  };
  try {
    if (auto a = ring_of(doc)) return *a;
    if (doc.contains("geometry"))
      if (auto a = ring_of(doc["geometry"])) return *a;
    if (doc.contains("features") && doc["features"].is_array())
      for (const auto& f : doc["features"])
        if (f.is_object() && f.contains("geometry"))
          if (auto a = ring_of(f["geometry"])) return *a;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": bad polygon: " + e.what());
  }
  throw ConfigError(path + " contains no Polygon");
}

struct AreaOptions {
  std::string bbox;     // "min_lat,min_lon,max_lat,max_lon"
  std::string polygon;  // GeoJSON file

  std::optional<AreaFilter> resolve() const {
    if (!bbox.empty() && !polygon.empty()) throw ConfigError("give either --area-bbox or --area-polygon, not both");
    if (!polygon.empty()) return area_from_geojson(polygon);
    if (bbox.empty()) return std::nullopt;
    double a = 0, b = 0, c = 0, d = 0;
    char tail = 0;
    if (std::sscanf(bbox.c_str(), "%lf,%lf,%lf,%lf%c", &a, &b, &c, &d, &tail) != 4)
      throw ConfigError("--area-bbox must be 'min_lat,min_lon,max_lat,max_lon'");
    if (!GeoPoint::valid(a, b) || !GeoPoint::valid(c, d)) throw ConfigError("--area-bbox is out of range");
    return AreaFilter::bbox({a, b}, {c, d});
  }
};

inline MultilayerGraph load_bundle(const std::string& path) { return io::read_bundle(read_file(path)); }

inline WeightAttr parse_weight(const std::string& s) {
  auto w = weight_attr_from_string(s);
  if (!w) throw ConfigError("unknown weight '" + s + "' (expected length_m or travel_time_s)");
  return *w;
}

inline std::optional<std::set<LayerId>> parse_layers(const std::vector<std::string>& names) {
  if (names.empty()) return std::nullopt;
  std::set<LayerId> out;
  for (const auto& n : names) {
    auto l = layer_from_string(n);
    if (!l) throw ConfigError("unknown layer '" + n + "'");
    out.insert(*l);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Output staging: everything is computed in memory first, then committed
// under an advisory lock with temp-file-then-rename per file.

class OutputSet {
 public:
  explicit OutputSet(std::string dir) : dir_(std::move(dir)) {
    std::error_code ec;
    if (fs::exists(dir_, ec) && !fs::is_directory(dir_, ec))
      throw ConfigError("output path exists and is not a directory: " + dir_);
  }

  void add(std::string name, std::string content) { files_.emplace_back(std::move(name), std::move(content)); }

  void commit() const {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir_ + ": " + ec.message());
    const fs::path lock_path = fs::path(dir_) / ".urbanet.lock";
    const int fd = ::open(lock_path.c_str(), O_RDWR | O_CREAT, 0644);
    if (fd < 0) throw ConfigError("cannot open lock file " + lock_path.string());
    if (::flock(fd, LOCK_EX | LOCK_NB) != 0) {
      ::close(fd);
      throw ConfigError("output directory " + dir_ + " is in use by another run");
    }
    try {
      for (const auto& [name, content] : files_) {
        const fs::path final_path = fs::path(dir_) / name;
        const fs::path tmp = fs::path(dir_) / ("." + name + ".tmp");
        {
          std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
          out << content;
          if (!out) throw ConfigError("cannot write " + tmp.string());
        }
        fs::rename(tmp, final_path);
      }
    } catch (...) {
      ::flock(fd, LOCK_UN);
      ::close(fd);
      throw;
    }
    ::flock(fd, LOCK_UN);
    ::close(fd);
  }

  const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

 private:
  std::string dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

inline void print_counts(std::ostream& out, const MultilayerGraph& g) {
  out << "nodes " << g.node_count() << " edges " << g.edge_count() << "\n";
  for (LayerId l : kAllLayers)
    if (g.node_count(l) || g.edge_count(l))
      out << "  " << to_string(l) << ": nodes " << g.node_count(l) << " edges " << g.edge_count(l) << "\n";
}

inline std::string gamma_label(double gamma) { return io::format_sig(gamma, 6); }

/// Closest node over `layers` (every layer if empty); ties go to the smaller id.
inline NodeId snap(const MultilayerGraph& g, const GeoPoint& p, const std::optional<std::set<LayerId>>& layers) {
  std::optional<std::pair<double, NodeId>> best;
  for (LayerId l : kAllLayers) {
    if (layers && !layers->contains(l)) continue;
    if (g.node_count(l) == 0) continue;
    const NodeId id = nearest_node(g, p, l);
    const std::pair<double, NodeId> cand{haversine_m(p, g.node(id).point), id};
    if (!best || cand.first < best->first - 1e-12 || (std::abs(cand.first - best->first) <= 1e-12 && id < best->second))
      best = cand;
  }
  if (!best) throw ConfigError("no nodes to snap to");
  return best->second;
}

// ---------------------------------------------------------------------------
// Subcommands

struct Common {
  std::string out_dir;
  std::uint64_t seed = 0;
};

struct BuildArgs {
  std::string osm, profile = "drive", center, name = "graph";
  std::optional<double> radius_m;
  double buffer_m = 0.0;
};

inline void cmd_build(const BuildArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
  require_files({&a.osm});
  const auto pid = ingest::profile_from_string(a.profile);
  if (!pid) throw ConfigError("unknown profile '" + a.profile + "'");
  if (a.radius_m && !(*a.radius_m > 0.0)) throw ConfigError("--radius-m must be positive");
  if (!(a.buffer_m >= 0.0)) throw ConfigError("--buffer-m must be non-negative");
  if (a.radius_m && a.center.empty()) throw ConfigError("--radius-m needs --center");
  std::optional<GeoPoint> center;
  if (!a.center.empty()) center = parse_point(a.center, "--center");
  OutputSet outputs(c.out_dir);

  MultilayerGraph g = ingest::parse_osm_xml(read_file(a.osm), ingest::HighwayProfile::for_id(*pid));
  g = ingest::assign_speeds_and_times(std::move(g), ingest::SpeedTable::for_id(*pid));
  if (a.radius_m) {
    g = induced_subgraph_by_radius(g, *center, *a.radius_m, a.buffer_m);
    if (g.empty()) err << "warning: no node lies within the radius; the graph is empty\n";
  }
  outputs.add(a.name + ".bundle.json", io::write_bundle(g));
  outputs.add(a.name + ".geojson", io::graph_to_geojson(g));
  outputs.commit();
  print_counts(out, g);
}

struct LinkArgs {
  std::string pois, stops, routes, name = "network";
  double link_radius_m = kDefaultLinkRadiusM;
  double snap_tolerance_m = kDefaultSnapToleranceM;
};

inline void cmd_link(const LinkArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
  require_files({&a.pois, &a.stops, &a.routes});
  if (!(a.link_radius_m > 0.0)) throw ConfigError("--link-radius-m must be positive");
  if (!(a.snap_tolerance_m > 0.0)) throw ConfigError("--snap-tolerance-m must be positive");
  OutputSet outputs(c.out_dir);

  const auto pois = ingest::parse_pois_geojson(read_file(a.pois));
  const auto stops = ingest::parse_stops_geojson(read_file(a.stops));
  ingest::ParsedFeatures<ingest::RoutePolyline> routes;
  if (!a.routes.empty()) routes = ingest::parse_routes_geojson(read_file(a.routes));
  if (pois.skipped) err << "warning: skipped " << pois.skipped << " non-Point POI features\n";
  if (stops.skipped) err << "warning: skipped " << stops.skipped << " non-Point stop features\n";
  if (routes.skipped) err << "warning: skipped " << routes.skipped << " non-line route features\n";

  AccessibilityNetwork net =
      build_accessibility_network(pois.items, stops.items, routes.items, a.link_radius_m, a.snap_tolerance_m);
  for (const auto& r : net.skipped_routes) err << "warning: route " << r << " snapped fewer than 2 stops\n";
  outputs.add(a.name + ".bundle.json", io::write_bundle(net.graph));
  outputs.add(a.name + ".geojson", io::graph_to_geojson(net.graph));
  outputs.commit();
  print_counts(out, net.graph);
}

struct StatsArgs {
  std::string bundle;
  AreaOptions area;
  double high_factor = 1.5;
};

inline void cmd_stats(const StatsArgs& a, const Common& c, std::ostream& out, std::ostream&) {
  require_files({&a.bundle});
  if (!(a.high_factor > 0.0)) throw ConfigError("--high-factor must be positive");
  const auto area = a.area.resolve();
  OutputSet outputs(c.out_dir);
  const MultilayerGraph g = load_bundle(a.bundle);
  const std::string json = io::report_json(network_stats(g, area, a.high_factor));
  outputs.add("report.json", json);
  outputs.commit();
  out << json;
}

struct CentralityArgs {
  std::string bundle, metric = "betweenness", weight = "length_m", provenance = "inversion";
  std::vector<std::string> layers;
  bool normalize = false, invert = false;
};

inline void cmd_centrality(const CentralityArgs& a, const Common& c, std::ostream& out, std::ostream&) {
  require_files({&a.bundle});
  const auto metric = metric_from_string(a.metric);
  if (!metric) throw ConfigError("unknown metric '" + a.metric + "'");
  const WeightAttr weight = parse_weight(a.weight);
  const auto layers = parse_layers(a.layers);
  if (a.provenance != "inversion" && a.provenance != "endpoint-mean")
    throw ConfigError("unknown provenance '" + a.provenance + "'");
  if (*metric == CentralityMetric::Degree && a.invert) throw ConfigError("degree centrality has no edge form");
  OutputSet outputs(c.out_dir);
  const MultilayerGraph g = load_bundle(a.bundle);
  const std::string name = std::string(to_string(*metric));

  if (*metric == CentralityMetric::Degree) {
    outputs.add("centrality_degree.csv", io::centrality_csv(degree_centrality(g), &g));
    outputs.commit();
    out << "wrote centrality_degree.csv\n";
    return;
  }
  const UndirectedGraph view = undirected_min_view(g, weight, layers);
  if (a.invert) {
    const EdgeCentralityMap m = a.provenance == "inversion"
                                    ? edge_centrality_via_inversion(view, *metric, a.normalize)
                                    : edge_centrality_endpoint_mean(view, *metric, a.normalize);
    outputs.add("heatmap_" + name + ".geojson", io::heatmap_geojson(g, m));
    outputs.commit();
    out << "wrote heatmap_" << name << ".geojson (" << m.size() << " edges)\n";
    return;
  }
  const NodeCentralityMap m = *metric == CentralityMetric::Closeness ? closeness(view) : betweenness(view, a.normalize);
  outputs.add("centrality_" + name + ".csv", io::centrality_csv(m, &g));
  outputs.commit();
  out << "wrote centrality_" << name << ".csv (" << m.size() << " nodes)\n";
}

struct CommunitiesArgs {
  std::string bundle, weight = "travel_time_s";
  std::vector<double> gammas{0.01, 0.1, 1.0};
  std::vector<std::string> layers;
};

inline void cmd_communities(const CommunitiesArgs& a, const Common& c, std::ostream& out, std::ostream&) {
  require_files({&a.bundle});
  if (a.gammas.empty()) throw ConfigError("need at least one --gamma");
  for (double gm : a.gammas)
    if (!(gm > 0.0)) throw ConfigError("--gamma must be positive");
  const WeightAttr weight = parse_weight(a.weight);
  const auto layers = parse_layers(a.layers);
  OutputSet outputs(c.out_dir);
  const MultilayerGraph g = load_bundle(a.bundle);
  const UndirectedGraph view = undirected_min_view(g, weight, layers);

  std::vector<CommunityAssignment> runs(a.gammas.size());
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(a.gammas.size());
  for (std::size_t i = 0; i < a.gammas.size(); ++i)
    pool.emplace_back([&, i] {
      try {
        runs[i] = louvain(view, a.gammas[i], c.seed, std::string(to_string(weight)));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::set<std::string> names;
  for (const auto& r : runs) {
    const std::string file = "communities_gamma_" + gamma_label(r.gamma) + ".geojson";
    if (!names.insert(file).second) continue;
    outputs.add(file, io::communities_geojson(g, r));
    out << "gamma " << gamma_label(r.gamma) << ": " << r.community_count << " communities, modularity "
        << io::format_sig(r.modularity) << "\n";
  }
  outputs.commit();
}

struct RouteArgs {
  std::string bundle, from, to, objective = "distance";
  std::optional<NodeId> src, dst;
  std::vector<std::string> layers;
  bool compare = false;
};

inline void cmd_route(const RouteArgs& a, const Common& c, std::ostream& out, std::ostream&) {
  require_files({&a.bundle});
  if (a.from.empty() == !a.src.has_value()) throw ConfigError("give exactly one of --from or --src");
  if (a.to.empty() == !a.dst.has_value()) throw ConfigError("give exactly one of --to or --dst");
  std::optional<GeoPoint> from, to;
  if (!a.from.empty()) from = parse_point(a.from, "--from");
  if (!a.to.empty()) to = parse_point(a.to, "--to");
  const auto layers = parse_layers(a.layers);
  const Objective objective = Objective::parse(a.objective);
  OutputSet outputs(c.out_dir);
  const MultilayerGraph g = load_bundle(a.bundle);
  const NodeId src = a.src ? *a.src : snap(g, *from, layers);
  const NodeId dst = a.dst ? *a.dst : snap(g, *to, layers);
  for (NodeId id : {src, dst})
    if (!g.has_node(id)) throw ConfigError("node " + std::to_string(id) + " is not in the graph");

  auto require = [&](const PathQuery& q) -> const RouteResult& {
    if (!q.found())
      throw AnalysisError("no path from " + std::to_string(src) + " to " + std::to_string(dst) + " (" +
                          std::to_string(q.reached_nodes) + " nodes reachable)");
    return *q.route;
  };
  io::Json features = io::Json::array();
  io::Json fc;
  if (a.compare) {
    const RouteComparison cmp = compare_routes(g, src, dst);
    features.push_back(io::route_feature(g, require(cmp.by_distance), "distance"));
    features.push_back(io::route_feature(g, require(cmp.by_time), "time"));
    fc = io::feature_collection(std::move(features));
    fc["overlap"] = io::round_sig(*cmp.overlap);
    out << "overlap " << io::format_sig(*cmp.overlap) << "\n";
  } else {
    const PathQuery q = shortest_path(g, src, dst, objective);
    const RouteResult& r = require(q);
    features.push_back(io::route_feature(g, r, objective.name()));
    fc = io::feature_collection(std::move(features));
    out << "cost " << io::format_sig(r.cost) << " over " << r.edges.size() << " edges\n";
  }
  outputs.add("route.geojson", fc.dump(1) + "\n");
  outputs.commit();
}

struct WalkabilityArgs {
  std::string bundle, weight = "length_m";
  std::vector<std::string> layers;
  AreaOptions area;
};

inline void cmd_walkability(const WalkabilityArgs& a, const Common& c, std::ostream& out, std::ostream&) {
  require_files({&a.bundle});
  const auto area = a.area.resolve();
  if (!area) throw ConfigError("walkability needs --area-bbox or --area-polygon");
  const WeightAttr weight = parse_weight(a.weight);
  const auto layers = parse_layers(a.layers);
  OutputSet outputs(c.out_dir);
  const MultilayerGraph g = load_bundle(a.bundle);
  const UndirectedGraph view = undirected_min_view(g, weight, layers);
  const EdgeCentralityMap cl = edge_centrality_via_inversion(view, CentralityMetric::Closeness, true);
  const EdgeCentralityMap bt = edge_centrality_via_inversion(view, CentralityMetric::Betweenness, true);
  const std::string json = io::walkability_json(walkability_score(g, cl, bt, *area));
  outputs.add("walkability.json", json);
  outputs.commit();
  out << json;
}

struct MergeArgs {
  std::string drive, walk, name = "merged";
};

inline void cmd_merge(const MergeArgs& a, const Common& c, std::ostream& out, std::ostream&) {
  require_files({&a.drive, &a.walk});
  OutputSet outputs(c.out_dir);
  const MultilayerGraph g = merge_walk_priority(load_bundle(a.drive), load_bundle(a.walk));
  outputs.add(a.name + ".bundle.json", io::write_bundle(g));
  outputs.commit();
  print_counts(out, g);
}

struct BusGraphArgs {
  std::string timetables, stops, name = "bus";
  double transfer_threshold_m = kDefaultTransferThresholdM;
  double walk_speed_mps = kDefaultWalkSpeedMps;
  bool no_transfers = false;
};

inline void cmd_bus_graph(const BusGraphArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
  require_files({&a.timetables, &a.stops});
  if (!(a.transfer_threshold_m > 0.0)) throw ConfigError("--transfer-threshold-m must be positive");
  if (!(a.walk_speed_mps > 0.0)) throw ConfigError("--walk-speed-mps must be positive");
  OutputSet outputs(c.out_dir);
  const auto stops = ingest::parse_stops_geojson(read_file(a.stops));
  if (stops.skipped) err << "warning: skipped " << stops.skipped << " non-Point stop features\n";
  const auto tables = parse_timetables_json(read_file(a.timetables));
  MultilayerGraph g = bus_time_graph(tables, stops.items);
  if (!a.no_transfers) g = merge_nearby_stops(std::move(g), a.transfer_threshold_m, a.walk_speed_mps);
  outputs.add(a.name + ".bundle.json", io::write_bundle(g));
  outputs.commit();
  print_counts(out, g);
}

// ---------------------------------------------------------------------------
// Entry point

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Multilayer urban transport network analysis"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out-dir", common.out_dir, "Directory for output files")->required();
    sub->add_option("--seed", common.seed, "Random seed")->capture_default_str();
  };
  auto add_area = [](CLI::App* sub, AreaOptions& area) {
    sub->add_option("--area-bbox", area.bbox, "min_lat,min_lon,max_lat,max_lon");
    sub->add_option("--area-polygon", area.polygon, "GeoJSON file holding a Polygon");
  };

  BuildArgs build;
  auto* s_build = app.add_subcommand("build", "Parse an OSM extract into a graph bundle");
  s_build->add_option("--osm", build.osm, "OSM XML file")->required();
  s_build->add_option("--profile", build.profile, "drive, walk or bike")->capture_default_str();
  s_build->add_option("--center", build.center, "Window center as lat,lon");
  s_build->add_option("--radius-m", build.radius_m, "Window radius in meters");
  s_build->add_option("--buffer-m", build.buffer_m, "Extra buffer beyond the radius")->capture_default_str();
  s_build->add_option("--name", build.name, "Output file stem")->capture_default_str();
  add_common(s_build);

  LinkArgs link;
  auto* s_link = app.add_subcommand("link", "Build the POI and transit network");
  s_link->add_option("--pois", link.pois, "POI GeoJSON")->required();
  s_link->add_option("--stops", link.stops, "Stop GeoJSON")->required();
  s_link->add_option("--routes", link.routes, "Route GeoJSON");
  s_link->add_option("--link-radius-m", link.link_radius_m, "POI to stop radius")->capture_default_str();
  s_link->add_option("--snap-tolerance-m", link.snap_tolerance_m, "Stop to route tolerance")->capture_default_str();
  s_link->add_option("--name", link.name, "Output file stem")->capture_default_str();
  add_common(s_link);

  StatsArgs stats;
  auto* s_stats = app.add_subcommand("stats", "Accessibility report for a POI and transit network");
  s_stats->add_option("--bundle", stats.bundle, "Graph bundle")->required();
  s_stats->add_option("--high-factor", stats.high_factor, "High-centrality threshold over the mean")
      ->capture_default_str();
  add_area(s_stats, stats.area);
  add_common(s_stats);

  CentralityArgs cent;
  auto* s_cent = app.add_subcommand("centrality", "Node or edge centrality");
  s_cent->add_option("--bundle", cent.bundle, "Graph bundle")->required();
  s_cent->add_option("--metric", cent.metric, "closeness, betweenness or degree")->capture_default_str();
  s_cent->add_option("--weight", cent.weight, "length_m or travel_time_s")->capture_default_str();
  s_cent->add_option("--layer", cent.layers, "Restrict to a layer (repeatable)");
  s_cent->add_option("--provenance", cent.provenance, "inversion or endpoint-mean")->capture_default_str();
  s_cent->add_flag("--normalize", cent.normalize, "Normalize betweenness");
  s_cent->add_flag("--invert", cent.invert, "Edge values through the line graph");
  add_common(s_cent);

  CommunitiesArgs comm;
  auto* s_comm = app.add_subcommand("communities", "Louvain communities over a resolution sweep");
  s_comm->add_option("--bundle", comm.bundle, "Graph bundle")->required();
  s_comm->add_option("--gamma", comm.gammas, "Resolution (repeatable)")->capture_default_str();
  s_comm->add_option("--weight", comm.weight, "length_m or travel_time_s")->capture_default_str();
  s_comm->add_option("--layer", comm.layers, "Restrict to a layer (repeatable)");
  add_common(s_comm);

  RouteArgs route;
  auto* s_route = app.add_subcommand("route", "Shortest path between two points or nodes");
  s_route->add_option("--bundle", route.bundle, "Graph bundle")->required();
  s_route->add_option("--from", route.from, "Origin as lat,lon");
  s_route->add_option("--to", route.to, "Destination as lat,lon");
  s_route->add_option("--src", route.src, "Origin node id");
  s_route->add_option("--dst", route.dst, "Destination node id");
  s_route->add_option("--objective", route.objective, "distance, time or an edge attribute")->capture_default_str();
  s_route->add_option("--layer", route.layers, "Snap only to these layers (repeatable)");
  s_route->add_flag("--compare", route.compare, "Emit both the distance and the time route");
  add_common(s_route);

  WalkabilityArgs walk;
  auto* s_walk = app.add_subcommand("walkability", "Walkability score of an area");
  s_walk->add_option("--bundle", walk.bundle, "Graph bundle")->required();
  s_walk->add_option("--weight", walk.weight, "length_m or travel_time_s")->capture_default_str();
  s_walk->add_option("--layer", walk.layers, "Restrict to a layer (repeatable)");
  add_area(s_walk, walk.area);
  add_common(s_walk);

  MergeArgs merge;
  auto* s_merge = app.add_subcommand("merge", "Merge drive and walk bundles, walk times first");
  s_merge->add_option("--drive", merge.drive, "Drive bundle")->required();
  s_merge->add_option("--walk", merge.walk, "Walk bundle")->required();
  s_merge->add_option("--name", merge.name, "Output file stem")->capture_default_str();
  add_common(s_merge);

  BusGraphArgs bus;
  auto* s_bus = app.add_subcommand("bus-graph", "Transit graph weighted by timetable deltas");
  s_bus->add_option("--timetables", bus.timetables, "Timetable JSON")->required();
  s_bus->add_option("--stops", bus.stops, "Stop GeoJSON")->required();
  s_bus->add_option("--transfer-threshold-m", bus.transfer_threshold_m, "Stop merge distance")->capture_default_str();
  s_bus->add_option("--walk-speed-mps", bus.walk_speed_mps, "Transfer walking speed")->capture_default_str();
  s_bus->add_flag("--no-transfers", bus.no_transfers, "Skip walk transfers between nearby stops");
  s_bus->add_option("--name", bus.name, "Output file stem")->capture_default_str();
  add_common(s_bus);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputFailure;
  }

  try {
    if (*s_build) cmd_build(build, common, out, err);
    else if (*s_link) cmd_link(link, common, out, err);
    else if (*s_stats) cmd_stats(stats, common, out, err);
    else if (*s_cent) cmd_centrality(cent, common, out, err);
    else if (*s_comm) cmd_communities(comm, common, out, err);
    else if (*s_route) cmd_route(route, common, out, err);
    else if (*s_walk) cmd_walkability(walk, common, out, err);
    else if (*s_merge) cmd_merge(merge, common, out, err);
    else if (*s_bus) cmd_bus_graph(bus, common, out, err);
  } catch (const FormatVersionError& e) {
    err << "error: " << e.what() << "\n";
    return kVersionMismatch;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputFailure;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kInputFailure;
  } catch (const AnalysisError& e) {
    err << "error: " << e.what() << "\n";
    return kAnalysisFailure;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kAnalysisFailure;
  }
  return kOk;
}

}  // namespace urbanet::cli
