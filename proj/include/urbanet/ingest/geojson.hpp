#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "urbanet/error.hpp"
#include "urbanet/geo.hpp"

namespace urbanet::ingest {

struct PoiRecord {
  GeoPoint point;
  std::string category;
  std::string name;
};

struct StopRecord {
  GeoPoint point;
  std::string stop_id;
  std::string name;
};

struct RoutePolyline {
  std::string route_id;
  std::vector<GeoPoint> points;
};

/// Parsed records plus the number of features skipped for having an
/// unsupported geometry type.
template <typename T>
struct ParsedFeatures {
  std::vector<T> items;
  std::size_t skipped = 0;
};

namespace detail {

inline std::string string_member(const nlohmann::json& obj, const char* key) {
  if (!obj.is_object()) return {};
  auto it = obj.find(key);
  return it != obj.end() && it->is_string() ? it->get<std::string>() : std::string{};
}

inline nlohmann::json parse_feature_collection(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document.begin(), document.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
  if (!doc.is_object() || string_member(doc, "type") != "FeatureCollection")
    throw ParseError("GeoJSON root is not a FeatureCollection");
  auto it = doc.find("features");
  if (it == doc.end() || !it->is_array()) throw ParseError("FeatureCollection has no features array");
  return doc;
}

inline GeoPoint position(const nlohmann::json& coord, std::size_t feature) {
  // RFC 7946 order is [lon, lat, (alt)].
  if (!coord.is_array() || coord.size() < 2 || !coord[0].is_number() || !coord[1].is_number())
    throw ParseError("feature " + std::to_string(feature) + " has a malformed position");
  const double lon = coord[0].get<double>();
  const double lat = coord[1].get<double>();
  if (!GeoPoint::valid(lat, lon))
    throw ParseError("feature " + std::to_string(feature) + " has out-of-range coordinates");
  return {lat, lon};
}

inline const nlohmann::json& geometry(const nlohmann::json& feature, std::size_t index) {
  if (!feature.is_object() || string_member(feature, "type") != "Feature")
    throw ParseError("feature " + std::to_string(index) + " is not a Feature object");
  auto it = feature.find("geometry");
  if (it == feature.end() || !(it->is_object() || it->is_null()))
    throw ParseError("feature " + std::to_string(index) + " has no geometry");
  return *it;
}

inline std::string geometry_type(const nlohmann::json& geom) {
  return string_member(geom, "type");
}

inline std::string property_string(const nlohmann::json& feature, std::initializer_list<const char*> keys) {
  auto props = feature.find("properties");
  if (props == feature.end() || !props->is_object()) return {};
  for (const char* k : keys) {
    auto it = props->find(k);
    if (it == props->end() || it->is_null()) continue;
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
    if (it->is_number()) return it->dump();
  }
  return {};
}

inline std::string feature_id(const nlohmann::json& feature) {
  auto it = feature.find("id");
  if (it == feature.end() || it->is_null()) return {};
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
  return it->dump();
}

inline const nlohmann::json& coordinates(const nlohmann::json& geom, std::size_t index) {
  auto it = geom.find("coordinates");
  if (it == geom.end() || !it->is_array())
    throw ParseError("feature " + std::to_string(index) + " geometry has no coordinates");
  return *it;
}

}  // namespace detail

/// One record per Point feature. Category is the first present property among
/// amenity, shop, leisure, tourism, else "unknown".
inline ParsedFeatures<PoiRecord> parse_pois_geojson(std::string_view document) {
  const nlohmann::json doc = detail::parse_feature_collection(document);
  ParsedFeatures<PoiRecord> out;
  const auto& features = doc["features"];
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& geom = detail::geometry(features[i], i);
    if (detail::geometry_type(geom) != "Point") {
      ++out.skipped;
      continue;
    }
    PoiRecord r;
    r.point = detail::position(detail::coordinates(geom, i), i);
    r.category = detail::property_string(features[i], {"amenity", "shop", "leisure", "tourism"});
    if (r.category.empty()) r.category = "unknown";
    r.name = detail::property_string(features[i], {"name"});
    out.items.push_back(std::move(r));
  }
  return out;
}

/// Stop id comes from the stop_id / id property, then the feature id, then
/// the feature's position in the file.
inline ParsedFeatures<StopRecord> parse_stops_geojson(std::string_view document) {
  const nlohmann::json doc = detail::parse_feature_collection(document);
  ParsedFeatures<StopRecord> out;
  std::set<std::string> seen;
  const auto& features = doc["features"];
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& geom = detail::geometry(features[i], i);
    if (detail::geometry_type(geom) != "Point") {
      ++out.skipped;
      continue;
    }
    StopRecord r;
    r.point = detail::position(detail::coordinates(geom, i), i);
    r.stop_id = detail::property_string(features[i], {"stop_id", "id"});
    if (r.stop_id.empty()) r.stop_id = detail::feature_id(features[i]);
    if (r.stop_id.empty()) r.stop_id = std::to_string(i);
    if (!seen.insert(r.stop_id).second)
      throw ParseError("feature " + std::to_string(i) + " repeats stop id '" + r.stop_id + "'");
    r.name = detail::property_string(features[i], {"stop_name", "name"});
    out.items.push_back(std::move(r));
  }
  return out;
}

/// LineStrings become one polyline each; MultiLineStrings are split into
/// parts whose ids get "#<part>" appended.
inline ParsedFeatures<RoutePolyline> parse_routes_geojson(std::string_view document) {
  const nlohmann::json doc = detail::parse_feature_collection(document);
  ParsedFeatures<RoutePolyline> out;
  std::set<std::string> seen;
  const auto& features = doc["features"];

  auto read_line = [](const nlohmann::json& coords, std::size_t i) {
    if (!coords.is_array()) throw ParseError("feature " + std::to_string(i) + " has a malformed line");
    std::vector<GeoPoint> pts;
    pts.reserve(coords.size());
    for (const auto& c : coords) pts.push_back(detail::position(c, i));
    if (pts.size() < 2) throw ParseError("feature " + std::to_string(i) + " line has fewer than 2 points");
    return pts;
  };
  auto add = [&](RoutePolyline r, std::size_t i) {
    if (!seen.insert(r.route_id).second)
      throw ParseError("feature " + std::to_string(i) + " repeats route id '" + r.route_id + "'");
    out.items.push_back(std::move(r));
  };

  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& geom = detail::geometry(features[i], i);
    const std::string type = detail::geometry_type(geom);
    if (type != "LineString" && type != "MultiLineString") {
      ++out.skipped;
      continue;
    }
    std::string id = detail::property_string(features[i], {"route_id", "route", "id"});
    if (id.empty()) id = detail::feature_id(features[i]);
    if (id.empty()) id = std::to_string(i);
    const auto& coords = detail::coordinates(geom, i);
    if (type == "LineString") {
      add({id, read_line(coords, i)}, i);
    } else {
      for (std::size_t part = 0; part < coords.size(); ++part)
        add({id + "#" + std::to_string(part), read_line(coords[part], i)}, i);
    }
  }
  return out;
}

}  // namespace urbanet::ingest
