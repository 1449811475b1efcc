// Acceptance suite: one PASS/FAIL line per criterion, each under a time budget.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "oracles.hpp"
#include "urbanet/io/serialize.hpp"

using namespace urbanet;
namespace fs = std::filesystem;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

struct Settings {
  std::string cli, fixtures, work;
};

std::string quote(const std::string& s) { return "'" + s + "'"; }

int run_cli(const Settings& s, const std::string& args, const fs::path& log) {
  const std::string cmd = quote(s.cli) + " " + args + " > " + quote(log.string()) + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// ---------------------------------------------------------------------------

std::string report_identities() {
  ReportCounts c;
  c.poi_nodes = 15996;
  c.stop_nodes = 6160;
  c.interlayer_edges = 11155;
  c.intra_transit_edges = 317;
  c.connected_pois = 11155;
  const AccessibilityReport r = assemble_report(c);
  require(r.total_nodes == 22156, "total nodes " + std::to_string(r.total_nodes));
  require(r.total_edges == 11472, "total edges " + std::to_string(r.total_edges));
  require(r.pois_isolated == 4841, "isolated " + std::to_string(r.pois_isolated));
  require(std::abs(r.percentage_of_pois_connected_to_transit - 69.7) <= 0.05, "connected % " + num(r.connected_fraction_pct));
  require(std::abs(r.connected_fraction_pct - 69.7) <= 0.05, "exact connected % " + num(r.connected_fraction_pct));
  return "22156 nodes, 11472 edges, " + num(r.percentage_of_pois_connected_to_transit) + "% connected, 4841 isolated";
}

/// Minimum left-to-right cost of every simple path from src, per endpoint.
std::vector<double> enumerate_from(const oracle::ArcGraph& g, int src) {
  std::vector<std::vector<oracle::Arc>> out(g.n);
  for (const auto& a : g.arcs) out[a.u].push_back(a);
  std::vector<double> best(g.n, oracle::kInf);
  std::vector<bool> on(g.n, false);
  std::function<void(int, double)> dfs = [&](int v, double cost) {
    best[v] = std::min(best[v], cost);
    on[v] = true;
    for (const auto& a : out[v])
      if (!on[a.v]) dfs(a.v, cost + a.w);
    on[v] = false;
  };
  dfs(src, 0.0);
  return best;
}

std::string routing_oracle() {
  std::mt19937_64 rng(1001);
  std::size_t queries = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = oracle::random_directed(rng, 12, oracle::uniform(rng, 0.1, 0.3));
    const MultilayerGraph g = oracle::to_multilayer(a);
    for (int s = 0; s < a.n; ++s) {
      const auto want = enumerate_from(a, s);
      for (int t = 0; t < a.n; ++t) {
        const auto q = shortest_path(g, s + 1, t + 1, Objective::distance());
        ++queries;
        require(q.found() == std::isfinite(want[t]), "reachability differs in small graph " + std::to_string(trial));
        if (q.found())
          require(q.route->cost == want[t], "small graph " + std::to_string(trial) + ": cost " + num(q.route->cost) +
                                                " vs enumeration " + num(want[t]));
      }
    }
  }
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = oracle::random_directed(rng, 200, 0.02);
    const MultilayerGraph g = oracle::to_multilayer(a);
    for (int s : {0, a.n / 2, a.n - 1}) {
      const auto want = oracle::relax_to_fixpoint(a, s);
      for (int t = 0; t < a.n; ++t) {
        const auto q = shortest_path(g, s + 1, t + 1, Objective::distance());
        ++queries;
        require(q.found() == std::isfinite(want[t]), "reachability differs in large graph " + std::to_string(trial));
        if (q.found())
          require(q.route->cost == want[t], "large graph " + std::to_string(trial) + ": cost " + num(q.route->cost) +
                                                " vs fixpoint " + num(want[t]));
      }
    }
  }
  return std::to_string(queries) + " queries exact";
}

std::string centrality_oracles() {
  std::mt19937_64 rng(1002);
  double worst_b = 0.0, worst_c = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = oracle::random_simple_undirected(rng, 50, oracle::uniform(rng, 0.04, 0.3), 4);
    const auto got = betweenness(oracle::to_undirected(a));
    const auto want = oracle::betweenness(a);
    for (int v = 0; v < a.n; ++v) worst_b = std::max(worst_b, std::abs(got.values[v] - want[v]));

    auto real = oracle::random_simple_undirected(rng, 50, oracle::uniform(rng, 0.04, 0.3), 1);
    for (auto& arc : real.arcs) arc.w = oracle::uniform(rng, 0.1, 10.0);
    const auto cg = closeness(oracle::to_undirected(real));
    const auto cw = oracle::closeness(oracle::floyd_warshall(real));
    for (int v = 0; v < real.n; ++v) worst_c = std::max(worst_c, std::abs(cg.values[v] - cw[v]));
  }
  require(worst_b <= 1e-9, "betweenness max |diff| " + num(worst_b));
  require(worst_c <= 1e-12, "closeness max |diff| " + num(worst_c));
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = oracle::random_simple_undirected(rng, 50, oracle::uniform(rng, 0.02, 0.4), 3);
    const UndirectedGraph g = oracle::to_undirected(a);
    const UndirectedGraph lg = line_graph(g);
    std::size_t pairs = 0;
    for (std::size_t v = 0; v < g.node_count(); ++v)
      if (const std::size_t d = g.degree(v); d > 1) pairs += d * (d - 1) / 2;
    require(lg.node_count() == g.edge_count(), "line graph node count");
    require(lg.edge_count() == pairs, "line graph edge count");
  }
  return "betweenness max |diff| " + num(worst_b) + ", closeness max |diff| " + num(worst_c) +
         ", line-graph identities on 50 graphs";
}

std::string louvain_checks() {
  const auto edges = oracle::two_k4();
  double best = -1.0;
  std::vector<int> arg;
  oracle::for_each_partition(8, [&](const std::vector<int>& p) {
    const double q = oracle::modularity(8, edges, p, 1.0);
    if (q > best + 1e-12) {
      best = q;
      arg = p;
    }
  });
  const std::vector<std::uint32_t> planted{0, 0, 0, 0, 1, 1, 1, 1};
  const UndirectedGraph k4s = oracle::to_undirected({8, edges});
  const auto r = louvain(k4s, 1.0, 0);
  require(oracle::same_partition(r.community, planted), "planted partition not recovered");
  require(arg == std::vector<int>(planted.begin(), planted.end()), "enumeration optimum is not the planted split");
  require(std::abs(r.modularity - 0.42308) <= 1e-5, "Q = " + num(r.modularity));
  require(std::abs(r.modularity - best) <= 1e-12, "Q differs from enumerated optimum " + num(best));
  const auto low = louvain(k4s, 0.01, 0);
  require(low.community_count == 1, "gamma 0.01 gave " + std::to_string(low.community_count) + " communities");

  const UndirectedGraph grid = undirected_min_view(oracle::grid(12, 12), WeightAttr::LengthM);
  std::vector<std::size_t> counts;
  for (double gamma : {0.01, 0.1, 1.0}) counts.push_back(louvain(grid, gamma, 0).community_count);
  require(counts[0] <= counts[1] && counts[1] <= counts[2],
          "grid counts " + std::to_string(counts[0]) + "," + std::to_string(counts[1]) + "," + std::to_string(counts[2]));
  return "Q = " + num(io::round_sig(r.modularity, 6)) + " (optimum over 4140 partitions), grid communities " +
         std::to_string(counts[0]) + " <= " + std::to_string(counts[1]) + " <= " + std::to_string(counts[2]);
}

GeoPoint scatter(std::mt19937_64& rng, double half_m) {
  const GeoPoint o(32.88, -117.234);
  const double dlat = rad_to_deg(oracle::uniform(rng, -half_m, half_m) / kEarthRadiusM);
  const double dlon = rad_to_deg(oracle::uniform(rng, -half_m, half_m) / (kEarthRadiusM * std::cos(deg_to_rad(o.lat()))));
  return {o.lat() + dlat, o.lon() + dlon};
}

std::string multilayer_rules() {
  std::mt19937_64 rng(1003);
  std::size_t links = 0, transfers = 0, bus_edges = 0, conflicts = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ingest::StopRecord> stops;
    std::vector<ingest::PoiRecord> pois;
    const int ns = oracle::uniform_int(rng, 1, 60), np = oracle::uniform_int(rng, 1, 120);
    for (int i = 0; i < ns; ++i) stops.push_back({scatter(rng, 3000), "S" + std::to_string(i), ""});
    for (int i = 0; i < np; ++i) pois.push_back({scatter(rng, 3000), "cafe", ""});

    const auto net = build_accessibility_network(pois, stops, {});
    const AccessibilityReport rep = network_stats(net.graph, std::nullopt);
    require(rep.inter_layer_edges == rep.pois_connected, "interlayer edges != connected POIs");
    std::vector<GeoPoint> spts;
    for (const auto& s : stops) spts.push_back(s.point);
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& p : pois) {
      double d = 0.0;
      if (oracle::nearest_stop(p.point, spts, 500.0, &d) >= 0) {
        sum += d;
        ++count;
      }
    }
    require(count == rep.pois_connected, "connected POIs differ from brute force");
    for (const NetEdge& e : net.graph.edges()) require(e.length_m <= 500.0, "link longer than 500 m");
    if (count > 0)
      require(*rep.average_distance_of_inter_layer_connections_m == sum / static_cast<double>(count),
              "average link distance " + num(*rep.average_distance_of_inter_layer_connections_m) + " vs " +
                  num(sum / static_cast<double>(count)));
    links += count;

    std::vector<StopTimetable> tables;
    for (int r = 0; r < 3; ++r) {
      StopTimetable t{"R" + std::to_string(r), {}};
      int minute = oracle::uniform_int(rng, 300, 1200);
      for (int k = 0; k < std::min(ns, 8); ++k) {
        t.arrivals.push_back({stops[oracle::uniform_int(rng, 0, ns - 1)].stop_id, minute});
        minute += oracle::uniform_int(rng, 0, 4);
      }
      tables.push_back(std::move(t));
    }
    const MultilayerGraph bus = bus_time_graph(tables, stops);
    for (const NetEdge& e : bus.edges()) require(*e.travel_time_s >= 30.0, "bus edge under 30 s");
    bus_edges += bus.edge_count();

    const MultilayerGraph merged = merge_nearby_stops(bus_time_graph({}, stops), 200.0, 1.4);
    std::set<std::pair<NodeId, NodeId>> want;
    for (int i = 0; i < ns; ++i)
      for (int j = 0; j < ns; ++j)
        if (i != j && haversine_m(stops[i].point, stops[j].point) < 200.0) want.insert({i + 1, j + 1});
    std::set<std::pair<NodeId, NodeId>> got;
    for (const NetEdge& e : merged.edges()) {
      got.insert({e.from, e.to});
      require(*e.travel_time_s == haversine_m(merged.node(e.from).point, merged.node(e.to).point) / 1.4,
              "transfer weight is not d/1.4");
    }
    require(got == want, "transfer edges differ from d < 200 m pairs");
    transfers += got.size();

    oracle::ArcGraph base = oracle::random_directed(rng, 20, 0.1);
    MultilayerGraph drive = oracle::to_multilayer(base), walk;
    for (const NetNode& n : drive.nodes()) walk.add_node({n.id, n.point, LayerId::Walk, NodeKind::Intersection, {}});
    for (const NetEdge& e : drive.edges())
      if (oracle::uniform(rng, 0, 1) < 0.5) {
        NetEdge w = e;
        w.layer = LayerId::Walk;
        w.travel_time_s = e.length_m / 1.4 + 1.0;
        walk.add_edge(w, false);
      }
    const MultilayerGraph m = merge_walk_priority(drive, walk);
    require(m.edge_count() == drive.edge_count(), "merge changed the edge set");
    for (const NetEdge& w : walk.edges()) {
      require(m.edge_at(*m.find_edge(w.ref())).travel_time_s == w.travel_time_s, "conflict edge lost its walk time");
      ++conflicts;
    }
  }
  return std::to_string(links) + " links, " + std::to_string(bus_edges) + " bus edges, " + std::to_string(transfers) +
         " transfers, " + std::to_string(conflicts) + " merge conflicts checked";
}

std::string walkability_checks() {
  std::mt19937_64 rng(1004);
  MultilayerGraph g;
  std::vector<EdgeRef> refs;
  for (NodeId i = 1; i <= 30; ++i) g.add_node({i, scatter(rng, 400), LayerId::Walk, NodeKind::Intersection, {}});
  for (NodeId i = 1; i < 30; ++i) refs.push_back({i, i + 1, 0});
  const AreaFilter area = AreaFilter::bbox(GeoPoint(32.87, -117.25), GeoPoint(32.89, -117.22));
  auto score = [&](const std::vector<double>& c, const std::vector<double>& b) {
    return walkability_score(g, {CentralityMetric::Closeness, EdgeProvenance::Inversion, false, refs, c},
                             {CentralityMetric::Betweenness, EdgeProvenance::Inversion, true, refs, b}, area);
  };
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> c(refs.size()), b(refs.size());
    for (auto& v : c) v = oracle::uniform(rng, 0.0, 1.0);
    for (auto& v : b) v = oracle::uniform(rng, 0.001, 1.0);
    const double k = std::exp(oracle::uniform(rng, -5.0, 5.0));
    const double w = score(c, b).value;
    auto kc = c, kb = b;
    for (auto& v : kc) v *= k;
    for (auto& v : kb) v *= k;
    worst = std::max(worst, std::abs(score(kc, b).value / (k * w) - 1.0));
    worst = std::max(worst, std::abs(score(c, kb).value * k / w - 1.0));
  }
  require(worst <= 1e-12, "homogeneity relative error " + num(worst));
  const auto sentinel = score(std::vector<double>(refs.size(), 0.5), std::vector<double>(refs.size(), 0.0));
  require(sentinel.unimpeded && std::isinf(sentinel.value), "zero betweenness did not yield the unimpeded sentinel");
  const auto json = io::Json::parse(io::walkability_json(sentinel));
  require(json["walkability_score"].is_null() && json["unimpeded"].get<bool>(), "sentinel JSON form");
  return "homogeneity max relative error " + num(worst) + ", zero-betweenness sentinel";
}

std::string edge_effect() {
  const MultilayerGraph full = oracle::grid(9, 9);
  const NodeId center = 1 + 4 * 9 + 4;
  const auto full_bc = betweenness(undirected_min_view(full, WeightAttr::LengthM));
  std::ostringstream detail;
  detail << "center full " << full_bc.at(center);
  std::size_t checked = 0;
  for (double radius : {150.0, 250.0, 350.0}) {
    const MultilayerGraph sub = induced_subgraph_by_radius(full, full.node(center).point, radius);
    const auto sub_bc = betweenness(undirected_min_view(sub, WeightAttr::LengthM));
    for (std::size_t i = 0; i < sub_bc.size(); ++i) {
      const double bound = full_bc.at(sub_bc.ids[i]);
      require(sub_bc.values[i] <= bound + 1e-9 * std::max(1.0, bound),
              "radius " + num(radius) + " node " + std::to_string(sub_bc.ids[i]) + ": " + num(sub_bc.values[i]) +
                  " > " + num(bound));
      ++checked;
    }
    detail << ", r" << radius << " " << sub_bc.at(center);
  }
  detail << "; " << checked << " subgraph nodes within their full-grid value";
  return detail.str();
}

std::string perf_betweenness() {
  std::mt19937_64 rng(1005);
  const int side = 100;
  std::vector<UndirectedEdge> edges;
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  auto add = [&](std::uint32_t u, std::uint32_t v) {
    if (u == v || !seen.insert(std::minmax(u, v)).second) return;
    edges.push_back({u, v, oracle::uniform(rng, 10.0, 200.0)});
  };
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) {
      const auto id = static_cast<std::uint32_t>(r * side + c);
      if (c + 1 < side) add(id, id + 1);
      if (r + 1 < side) add(id, id + side);
    }
  while (edges.size() < 25000) {
    const auto u = static_cast<std::uint32_t>(oracle::uniform_int(rng, 0, side * side - 1));
    const int dr = oracle::uniform_int(rng, -3, 3), dc = oracle::uniform_int(rng, -3, 3);
    const int r = static_cast<int>(u) / side + dr, c = static_cast<int>(u) % side + dc;
    if (r < 0 || r >= side || c < 0 || c >= side) continue;
    add(u, static_cast<std::uint32_t>(r * side + c));
  }
  std::vector<NodeId> ids(side * side);
  std::iota(ids.begin(), ids.end(), 1);
  const UndirectedGraph g(std::move(ids), edges);
  const auto t0 = std::chrono::steady_clock::now();
  const auto bc = betweenness(g);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  require(bc.size() == 10000, "wrong map size");
  require(secs <= 180.0, "took " + num(secs) + " s");
  return std::to_string(g.node_count()) + " nodes / " + std::to_string(g.edge_count()) + " edges in " +
         num(io::round_sig(secs, 3)) + " s on " + std::to_string(std::max(1u, std::thread::hardware_concurrency())) +
         " hardware thread(s)";
}

std::string perf_pipeline(const Settings& s) {
  const fs::path dir = fs::path(s.work) / "pipeline";
  fs::create_directories(dir);
  std::mt19937_64 rng(1006);
  // 80 x 80 street grid, about 110 m blocks.
  std::ostringstream osm;
  osm << "<?xml version=\"1.0\"?>\n<osm version=\"0.6\">\n";
  const int side = 80;
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c)
      osm << " <node id=\"" << 1 + r * side + c << "\" lat=\"" << num(32.70 + r * 0.001) << "\" lon=\""
          << num(-117.25 + c * 0.0012) << "\"/>\n";
  int way = 1;
  for (int r = 0; r < side; ++r) {
    osm << " <way id=\"" << way++ << "\">";
    for (int c = 0; c < side; ++c) osm << "<nd ref=\"" << 1 + r * side + c << "\"/>";
    osm << "<tag k=\"highway\" v=\"residential\"/></way>\n";
  }
  for (int c = 0; c < side; ++c) {
    osm << " <way id=\"" << way++ << "\">";
    for (int r = 0; r < side; ++r) osm << "<nd ref=\"" << 1 + r * side + c << "\"/>";
    osm << "<tag k=\"highway\" v=\"" << (c % 10 == 0 ? "primary" : "residential") << "\"/></way>\n";
  }
  osm << "</osm>\n";
  spit(dir / "city.osm", osm.str());

  auto point_fc = [&](int n, const char* id_key, const std::string& prefix) {
    io::Json features = io::Json::array();
    for (int i = 0; i < n; ++i) {
      const double lat = 32.70 + oracle::uniform(rng, 0.0, 0.079);
      const double lon = -117.25 + oracle::uniform(rng, 0.0, 0.0948);
      io::Json props = io::Json::object();
      props[id_key] = prefix + std::to_string(i);
      features.push_back({{"type", "Feature"},
                          {"geometry", {{"type", "Point"}, {"coordinates", {lon, lat}}}},
                          {"properties", props}});
    }
    return io::feature_collection(std::move(features)).dump() + "\n";
  };
  spit(dir / "pois.geojson", point_fc(16000, "amenity", "poi"));
  spit(dir / "stops.geojson", point_fc(6000, "stop_id", "S"));
  io::Json routes = io::Json::array();
  for (int k = 0; k < 60; ++k) {
    const double lat = 32.70 + 0.0013 * k;
    routes.push_back({{"type", "Feature"},
                      {"geometry", {{"type", "LineString"}, {"coordinates", {{-117.25, lat}, {-117.1552, lat}}}}},
                      {"properties", {{"route_id", "R" + std::to_string(k)}}}});
  }
  spit(dir / "routes.geojson", io::feature_collection(std::move(routes)).dump() + "\n");

  const fs::path out = dir / "out";
  const auto t0 = std::chrono::steady_clock::now();
  int code = run_cli(s, "build --osm " + quote((dir / "city.osm").string()) + " --out-dir " + quote(out.string()),
                     dir / "build.log");
  require(code == 0, "build exited " + std::to_string(code) + ": " + slurp(dir / "build.log"));
  code = run_cli(s,
                 "link --pois " + quote((dir / "pois.geojson").string()) + " --stops " +
                     quote((dir / "stops.geojson").string()) + " --routes " + quote((dir / "routes.geojson").string()) +
                     " --out-dir " + quote(out.string()),
                 dir / "link.log");
  require(code == 0, "link exited " + std::to_string(code) + ": " + slurp(dir / "link.log"));
  code = run_cli(s, "stats --bundle " + quote((out / "network.bundle.json").string()) + " --out-dir " + quote(out.string()),
                 dir / "stats.log");
  require(code == 0, "stats exited " + std::to_string(code) + ": " + slurp(dir / "stats.log"));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto report = io::Json::parse(slurp(out / "report.json"));
  require(report["pois"].get<int>() == 16000 && report["stops"].get<int>() == 6000, "report counts");
  require(secs <= 10.0, "took " + num(secs) + " s");
  return "6400-node street grid, 16000 POIs, 6000 stops in " + num(io::round_sig(secs, 3)) + " s";
}

std::string cli_determinism(const Settings& s) {
  const std::string fx = s.fixtures + "/";
  std::vector<std::string> steps{
      "build --osm FX/grid.osm --profile walk --center 32.88,-117.235 --radius-m 300 --buffer-m 100 --name walk",
      "build --osm FX/grid.osm --profile drive --name drive",
      "link --pois FX/pois.geojson --stops FX/stops.geojson --routes FX/routes.geojson",
      "stats --bundle OUT/network.bundle.json --area-polygon FX/area.geojson",
      "centrality --bundle OUT/walk.bundle.json --metric betweenness --invert --normalize",
      "centrality --bundle OUT/walk.bundle.json --metric closeness --provenance endpoint-mean --invert",
      "centrality --bundle OUT/walk.bundle.json --metric closeness",
      "centrality --bundle OUT/drive.bundle.json --metric degree",
      "communities --bundle OUT/walk.bundle.json",
      "route --bundle OUT/drive.bundle.json --from 32.878,-117.237 --to 32.882,-117.233 --compare",
      "walkability --bundle OUT/walk.bundle.json --area-polygon FX/area.geojson",
      "merge --drive OUT/drive.bundle.json --walk OUT/walk.bundle.json",
      "bus-graph --timetables FX/timetables.json --stops FX/stops.geojson",
  };
  auto expand = [&](std::string cmd, const fs::path& out) {
    for (auto [key, value] : {std::pair<std::string, std::string>{"FX/", fx}, {"OUT/", out.string() + "/"}})
      for (auto pos = cmd.find(key); pos != std::string::npos; pos = cmd.find(key, pos + value.size()))
        cmd.replace(pos, key.size(), value);
    return cmd + " --seed 0 --out-dir " + quote(out.string());
  };
  std::vector<fs::path> runs{fs::path(s.work) / "determinism_1", fs::path(s.work) / "determinism_2"};
  std::set<std::string> subcommands;
  for (const auto& out : runs) {
    fs::create_directories(out);
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const fs::path log = fs::path(s.work) / ("determinism_step_" + std::to_string(i) + ".log");
      const int code = run_cli(s, expand(steps[i], out), log);
      require(code == 0, "'" + steps[i] + "' exited " + std::to_string(code) + ": " + slurp(log));
      subcommands.insert(steps[i].substr(0, steps[i].find(' ')));
    }
  }
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(runs[0])) {
    const std::string name = entry.path().filename().string();
    if (name == ".urbanet.lock") continue;
    require(fs::exists(runs[1] / name), name + " missing from second run");
    require(slurp(entry.path()) == slurp(runs[1] / name), name + " differs between runs");
    ++files;
  }
  for (const auto& entry : fs::directory_iterator(runs[1]))
    require(fs::exists(runs[0] / entry.path().filename()), entry.path().filename().string() + " missing from first run");
  require(subcommands.size() == 9, "only " + std::to_string(subcommands.size()) + " subcommands exercised");
  return std::to_string(subcommands.size()) + " subcommands, " + std::to_string(files) + " files byte-identical";
}

}  // namespace

int main(int argc, char** argv) {
  Settings s;
  CLI::App app{"urbanet acceptance suite"};
  app.add_option("--cli", s.cli, "Path to the urbanet binary")->required();
  app.add_option("--fixtures", s.fixtures, "Fixture directory")->required();
  app.add_option("--work-dir", s.work, "Scratch directory (wiped)")->required();
  CLI11_PARSE(app, argc, argv);
  fs::remove_all(s.work);
  fs::create_directories(s.work);

  struct Criterion {
    std::string name;
    double budget_s;
    std::function<std::string()> body;
  };
  const std::vector<Criterion> criteria{
      {"report-identities", 1.0, report_identities},
      {"routing-oracle", 30.0, routing_oracle},
      {"centrality-oracle", 60.0, centrality_oracles},
      {"louvain-resolution", 60.0, louvain_checks},
      {"multilayer-rules", 30.0, multilayer_rules},
      {"walkability-properties", 5.0, walkability_checks},
      {"edge-effect", 5.0, edge_effect},
      {"perf-betweenness-10k", 180.0, perf_betweenness},
      {"perf-build-link-stats", 10.0, [&] { return perf_pipeline(s); }},
      {"cli-determinism", 120.0, [&] { return cli_determinism(s); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = c.body();
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && secs > c.budget_s) {
      ok = false;
      detail = "over time budget; " + detail;
    }
    failed += ok ? 0 : 1;
    std::printf("%s  %-24s %8.3f s / %4.0f s  %s\n", ok ? "PASS" : "FAIL", c.name.c_str(), secs, c.budget_s,
                detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
