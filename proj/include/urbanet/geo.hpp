#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "urbanet/error.hpp"

namespace urbanet {

/// Mean Earth radius used by every geodesic computation in the library.
inline constexpr double kEarthRadiusM = 6'371'000.0;

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// WGS84 position in degrees. Construction validates range and finiteness,
/// so a GeoPoint that exists is always usable.
class GeoPoint {
 public:
  constexpr GeoPoint() = default;

  GeoPoint(double lat, double lon) : lat_(lat), lon_(lon) {
    if (!valid(lat, lon)) {
      throw ConfigError("invalid WGS84 coordinate (lat=" + std::to_string(lat) +
                        ", lon=" + std::to_string(lon) + ")");
    }
  }

  static bool valid(double lat, double lon) {
    return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 &&
           lon >= -180.0 && lon <= 180.0;
  }

  double lat() const { return lat_; }
  double lon() const { return lon_; }

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;

 private:
  double lat_ = 0.0;
  double lon_ = 0.0;
};

/// Great-circle distance in meters.
inline double haversine_m(const GeoPoint& a, const GeoPoint& b) {
  const double phi1 = deg_to_rad(a.lat());
  const double phi2 = deg_to_rad(b.lat());
  const double dphi = phi2 - phi1;
  const double dlambda = deg_to_rad(b.lon() - a.lon());
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

/// Midpoint of the great-circle segment a-b.
inline GeoPoint great_circle_midpoint(const GeoPoint& a, const GeoPoint& b) {
  const double phi1 = deg_to_rad(a.lat());
  const double phi2 = deg_to_rad(b.lat());
  const double lambda1 = deg_to_rad(a.lon());
  const double dlambda = deg_to_rad(b.lon() - a.lon());
  const double bx = std::cos(phi2) * std::cos(dlambda);
  const double by = std::cos(phi2) * std::sin(dlambda);
  const double phi =
      std::atan2(std::sin(phi1) + std::sin(phi2), std::sqrt((std::cos(phi1) + bx) * (std::cos(phi1) + bx) + by * by));
  double lambda = lambda1 + std::atan2(by, std::cos(phi1) + bx);
  double lon = rad_to_deg(lambda);
  while (lon > 180.0) lon -= 360.0;
  while (lon < -180.0) lon += 360.0;
  return {std::clamp(rad_to_deg(phi), -90.0, 90.0), lon};
}

/// Equirectangular projection around an origin, in meters. Accurate to well
/// under a meter over a few kilometers, which is all the snapping code needs.
class LocalProjection {
 public:
  explicit LocalProjection(const GeoPoint& origin)
      : origin_(origin), cos_lat_(std::max(std::cos(deg_to_rad(origin.lat())), 1e-6)) {}

  std::pair<double, double> to_xy(const GeoPoint& p) const {
    const double x = deg_to_rad(p.lon() - origin_.lon()) * cos_lat_ * kEarthRadiusM;
    const double y = deg_to_rad(p.lat() - origin_.lat()) * kEarthRadiusM;
    return {x, y};
  }

 private:
  GeoPoint origin_;
  double cos_lat_;
};

/// Linear interpolation in coordinate space; t in [0, 1].
inline GeoPoint lerp(const GeoPoint& a, const GeoPoint& b, double t) {
  return {a.lat() + (b.lat() - a.lat()) * t, a.lon() + (b.lon() - a.lon()) * t};
}

}  // namespace urbanet
