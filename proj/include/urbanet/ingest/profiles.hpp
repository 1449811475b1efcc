#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>

#include "urbanet/error.hpp"
#include "urbanet/graph.hpp"

namespace urbanet::ingest {

enum class ProfileId { Drive, Walk, Bike };

inline std::string_view to_string(ProfileId p) {
  switch (p) {
    case ProfileId::Drive: return "drive";
    case ProfileId::Walk: return "walk";
    case ProfileId::Bike: return "bike";
  }
  return "?";
}

inline std::optional<ProfileId> profile_from_string(std::string_view s) {
  if (s == "drive") return ProfileId::Drive;
  if (s == "walk") return ProfileId::Walk;
  if (s == "bike") return ProfileId::Bike;
  return std::nullopt;
}

inline LayerId layer_of(ProfileId p) {
  switch (p) {
    case ProfileId::Drive: return LayerId::Drive;
    case ProfileId::Walk: return LayerId::Walk;
    case ProfileId::Bike: return LayerId::Bike;
  }
  return LayerId::Drive;
}

/// Which OSM highway classes a travel mode may use.
struct HighwayProfile {
  ProfileId id = ProfileId::Drive;
  std::set<std::string, std::less<>> allowed;
  bool respects_oneway = false;

  bool allows(std::string_view highway) const { return allowed.find(highway) != allowed.end(); }

  void validate() const {
    if (allowed.empty()) throw ConfigError("highway profile '" + std::string(to_string(id)) + "' has no classes");
    if (respects_oneway && id != ProfileId::Drive) throw ConfigError("only the drive profile respects oneway");
  }

  static HighwayProfile drive() {
    return {ProfileId::Drive,
            {"motorway", "motorway_link", "trunk", "trunk_link", "primary", "primary_link", "secondary",
             "secondary_link", "tertiary", "tertiary_link", "unclassified", "residential", "service"},
            true};
  }

  static HighwayProfile walk() {
    return {ProfileId::Walk,
            {"footway", "path", "pedestrian", "steps", "living_street", "residential", "service", "track",
             "trunk", "trunk_link", "primary", "primary_link", "secondary", "secondary_link", "tertiary",
             "tertiary_link", "unclassified"},
            false};
  }

  static HighwayProfile bike() {
    return {ProfileId::Bike,
            {"cycleway", "path", "residential", "tertiary", "secondary", "service", "track", "unclassified"},
            false};
  }

  static HighwayProfile for_id(ProfileId p) {
    switch (p) {
      case ProfileId::Drive: return drive();
      case ProfileId::Walk: return walk();
      case ProfileId::Bike: return bike();
    }
    return drive();
  }
};

/// Speed per highway class (m/s) with a fallback for unlisted classes.
struct SpeedTable {
  ProfileId profile = ProfileId::Drive;
  std::map<std::string, double, std::less<>> by_highway;
  double default_mps = 13.9;

  double speed_for(std::string_view highway) const {
    if (auto it = by_highway.find(highway); it != by_highway.end()) return it->second;
    return default_mps;
  }

  void validate() const {
    if (!(default_mps > 0.0) || !std::isfinite(default_mps))
      throw ConfigError("default speed must be positive, got " + std::to_string(default_mps));
    for (const auto& [hw, v] : by_highway)
      if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError("speed for highway=" + hw + " must be positive, got " + std::to_string(v));
  }

  static SpeedTable drive() {
    SpeedTable t{ProfileId::Drive,
                 {{"motorway", 29.1},
                  {"trunk", 25.0},
                  {"primary", 18.1},
                  {"secondary", 15.3},
                  {"tertiary", 13.9},
                  {"residential", 11.1},
                  {"service", 6.9}},
                 13.9};
    // Ramps run at the speed of the road class they serve.
    for (const char* base : {"motorway", "trunk", "primary", "secondary", "tertiary"})
      t.by_highway[std::string(base) + "_link"] = t.by_highway.at(base);
    return t;
  }

  static SpeedTable walk() { return {ProfileId::Walk, {}, 1.4}; }
  static SpeedTable bike() { return {ProfileId::Bike, {}, 4.2}; }

  static SpeedTable for_id(ProfileId p) {
    switch (p) {
      case ProfileId::Drive: return drive();
      case ProfileId::Walk: return walk();
      case ProfileId::Bike: return bike();
    }
    return drive();
  }
};

/// Sets speed_mps and travel_time_s = length_m / speed_mps on every street
/// edge of the table's layer. Running it twice gives the same graph.
inline MultilayerGraph assign_speeds_and_times(MultilayerGraph g, const SpeedTable& table) {
  table.validate();
  if (g.frozen()) g = g.unfrozen_copy();
  const LayerId layer = layer_of(table.profile);
  for (std::size_t idx : std::vector<std::size_t>(g.layer_edges(layer).begin(), g.layer_edges(layer).end())) {
    NetEdge& e = g.mutable_edge(idx);
    if (e.kind != EdgeKind::Street) continue;
    const double speed = table.speed_for(e.highway);
    e.speed_mps = speed;
    e.travel_time_s = e.length_m / speed;
  }
  return g;
}

}  // namespace urbanet::ingest
