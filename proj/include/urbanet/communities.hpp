#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "urbanet/error.hpp"
#include "urbanet/graph.hpp"

namespace urbanet {

struct CommunityAssignment {
  std::vector<NodeId> ids;               // ascending, same order as the view
  std::vector<std::uint32_t> community;  // dense ids from 0
  std::size_t community_count = 0;
  double gamma = 1.0;
  double modularity = 0.0;
  std::string weight_attr;
  // Modularity of the singleton start and after every aggregation level.
  std::vector<double> trajectory;

  std::uint32_t at(NodeId id) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id) throw ConfigError("node " + std::to_string(id) + " not in assignment");
    return community[static_cast<std::size_t>(it - ids.begin())];
  }
};

/// Q = (1/2m) sum_ij [A_ij - gamma k_i k_j / 2m] delta(c_i, c_j). A self-loop
/// of weight w contributes A_ii = 2w, so it also adds 2w to k_i.
inline double modularity(const UndirectedGraph& g, std::span<const std::uint32_t> partition, double gamma) {
  if (partition.size() != g.node_count()) throw ConfigError("partition does not cover every node");
  if (!(gamma > 0.0)) throw ConfigError("resolution must be positive");
  std::vector<double> k(g.node_count(), 0.0);
  double two_m = 0.0;
  for (const auto& e : g.edges()) {
    if (e.weight < 0.0) throw AnalysisError("modularity needs non-negative weights");
    k[e.u] += e.weight;
    k[e.v] += e.weight;
    two_m += 2.0 * e.weight;
  }
  for (std::size_t i = 0; i < g.node_count(); ++i)
    if (const auto& loop = g.self_loop(i)) {
      k[i] += 2.0 * *loop;
      two_m += 2.0 * *loop;
    }
  if (!(two_m > 0.0)) throw AnalysisError("modularity is undefined on a graph without edge weight");

  const std::uint32_t groups = partition.empty() ? 0 : *std::max_element(partition.begin(), partition.end()) + 1;
  std::vector<double> inside(groups, 0.0), total(groups, 0.0);
  for (const auto& e : g.edges())
    if (partition[e.u] == partition[e.v]) inside[partition[e.u]] += 2.0 * e.weight;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    total[partition[i]] += k[i];
    if (const auto& loop = g.self_loop(i)) inside[partition[i]] += 2.0 * *loop;
  }
  double q = 0.0;
  for (std::uint32_t c = 0; c < groups; ++c) q += inside[c] / two_m - gamma * (total[c] / two_m) * (total[c] / two_m);
  return q;
}

namespace detail {

struct LouvainLevel {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;  // no self entries
  std::vector<double> loop;                                        // self-loop weight w (A_ii = 2w)
  std::vector<double> k;

  std::size_t size() const { return adj.size(); }
};

inline LouvainLevel level_from(const UndirectedGraph& g) {
  LouvainLevel l;
  const std::size_t n = g.node_count();
  l.adj.resize(n);
  l.loop.assign(n, 0.0);
  l.k.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& arc : g.neighbors(i)) l.adj[i].push_back({arc.to, g.edges()[arc.edge].weight});
    if (const auto& s = g.self_loop(i)) l.loop[i] = *s;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [j, w] : l.adj[i]) l.k[i] += w;
    l.k[i] += 2.0 * l.loop[i];
  }
  return l;
}

/// Dense relabel by first appearance; returns the number of communities.
inline std::uint32_t compact(std::vector<std::uint32_t>& labels) {
  std::map<std::uint32_t, std::uint32_t> remap;
  for (auto& c : labels) {
    auto [it, inserted] = remap.emplace(c, static_cast<std::uint32_t>(remap.size()));
    c = it->second;
  }
  return static_cast<std::uint32_t>(remap.size());
}

/// One local-moving phase to fixpoint. Returns true if any node moved.
inline bool local_moving(const LouvainLevel& l, double gamma, double two_m, std::mt19937_64& rng,
                         std::vector<std::uint32_t>& community) {
  const std::size_t n = l.size();
  community.resize(n);
  std::iota(community.begin(), community.end(), 0);
  std::vector<double> total(l.k);

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);

  std::vector<double> weight_to(n, 0.0);
  std::vector<std::uint32_t> touched;
  bool any_move = false;
  for (bool improved = true; improved;) {
    improved = false;
    for (std::uint32_t i : order) {
      const std::uint32_t own = community[i];
      touched.clear();
      for (const auto& [j, w] : l.adj[i]) {
        const std::uint32_t c = community[j];
        if (weight_to[c] == 0.0 && std::find(touched.begin(), touched.end(), c) == touched.end())
          touched.push_back(c);
        weight_to[c] += w;
      }
      std::sort(touched.begin(), touched.end());

      const double ki = l.k[i];
      total[own] -= ki;
      const double eps = 1e-12 * std::max(1.0, ki);
      std::uint32_t best = own;
      double best_gain = weight_to[own] - gamma * total[own] * ki / two_m;
      for (std::uint32_t c : touched) {
        if (c == own) continue;
        const double gain = weight_to[c] - gamma * total[c] * ki / two_m;
        if (gain > best_gain + eps) {
          best = c;
          best_gain = gain;
        }
      }
      total[best] += ki;
      if (best != own) {
        community[i] = best;
        improved = true;
        any_move = true;
      }
      for (std::uint32_t c : touched) weight_to[c] = 0.0;
      weight_to[own] = 0.0;
    }
  }
  return any_move;
}

inline LouvainLevel aggregate(const LouvainLevel& l, const std::vector<std::uint32_t>& community,
                              std::uint32_t groups) {
  LouvainLevel next;
  next.adj.resize(groups);
  next.loop.assign(groups, 0.0);
  next.k.assign(groups, 0.0);
  std::vector<std::map<std::uint32_t, double>> acc(groups);
  for (std::size_t i = 0; i < l.size(); ++i) {
    const std::uint32_t ci = community[i];
    next.loop[ci] += l.loop[i];
    next.k[ci] += l.k[i];
    for (const auto& [j, w] : l.adj[i]) {
      const std::uint32_t cj = community[j];
      if (ci == cj) {
        if (i < j) next.loop[ci] += w;
      } else {
        acc[ci][cj] += w;
      }
    }
  }
  for (std::uint32_t c = 0; c < groups; ++c) next.adj[c].assign(acc[c].begin(), acc[c].end());
  return next;
}

}  // namespace detail

/// Louvain community detection with resolution `gamma`.
///
/// Each level scans nodes in a seed-shuffled order and moves each node to the
/// neighboring community with the largest positive modularity gain (ties go to
/// the lowest community id) until nothing moves, then aggregates communities
/// into nodes. Stops when a level makes no move. Deterministic for a seed.
inline CommunityAssignment louvain(const UndirectedGraph& g, double gamma, std::uint64_t seed = 0,
                                   std::string weight_attr = {}) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("resolution must be positive");
  const std::size_t n = g.node_count();

  CommunityAssignment out;
  out.ids.assign(g.ids().begin(), g.ids().end());
  out.gamma = gamma;
  out.weight_attr = std::move(weight_attr);
  out.community.resize(n);
  std::iota(out.community.begin(), out.community.end(), 0);
  out.trajectory.push_back(modularity(g, out.community, gamma));  // also rejects m = 0

  detail::LouvainLevel level = detail::level_from(g);
  const double two_m = std::accumulate(level.k.begin(), level.k.end(), 0.0);
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> moved;
  while (detail::local_moving(level, gamma, two_m, rng, moved)) {
    const std::uint32_t groups = detail::compact(moved);
    for (auto& c : out.community) c = moved[c];
    out.trajectory.push_back(modularity(g, out.community, gamma));
    if (groups == 1) break;
    level = detail::aggregate(level, moved, groups);
  }
  out.community_count = detail::compact(out.community);
  out.modularity = modularity(g, out.community, gamma);
  return out;
}

}  // namespace urbanet
