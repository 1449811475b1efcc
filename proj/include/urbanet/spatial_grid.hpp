#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "urbanet/error.hpp"
#include "urbanet/geo.hpp"

namespace urbanet {

/// Uniform lat/lon cell index over a fixed point set for radius queries.
///
/// Cells are at least `cell_m` meters wide everywhere in the data's latitude
/// band, so every point within `cell_m` of a query lies in the 3x3 block of
/// cells around it. Queries return indices into the original point span.
class SpatialGrid {
 public:
  SpatialGrid(std::span<const GeoPoint> points, double cell_m) : points_(points.begin(), points.end()) {
    if (!(cell_m > 0.0)) throw ConfigError("grid cell size must be positive");
    double max_abs_lat = 0.0;
    for (const auto& p : points_) max_abs_lat = std::max(max_abs_lat, std::abs(p.lat()));
    // Slack covers the difference between chord-in-degrees and great-circle.
    const double meters_per_deg = deg_to_rad(1.0) * kEarthRadiusM;
    lat_step_ = 1.01 * cell_m / meters_per_deg;
    const double c = std::max(std::cos(deg_to_rad(std::min(max_abs_lat + lat_step_, 90.0))), 1e-3);
    lon_step_ = 1.01 * cell_m / (meters_per_deg * c);
    for (std::uint32_t i = 0; i < points_.size(); ++i) cells_[key(cell_of(points_[i]))].push_back(i);
  }

  /// Indices of points whose haversine distance to `p` is <= radius_m,
  /// ascending. Requires radius_m <= the cell size given at construction
  /// unless `reach` is widened.
  std::vector<std::uint32_t> within(const GeoPoint& p, double radius_m, int reach = 1) const {
    std::vector<std::uint32_t> out;
    const auto [cy, cx] = cell_of(p);
    for (std::int64_t dy = -reach; dy <= reach; ++dy)
      for (std::int64_t dx = -reach; dx <= reach; ++dx) {
        auto it = cells_.find(key({cy + dy, cx + dx}));
        if (it == cells_.end()) continue;
        for (std::uint32_t i : it->second)
          if (haversine_m(p, points_[i]) <= radius_m) out.push_back(i);
      }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Candidate indices in every cell overlapping the lat/lon box, expanded by
  /// one cell on each side. Unfiltered; callers check exact distances.
  std::vector<std::uint32_t> candidates_in_box(double min_lat, double min_lon, double max_lat, double max_lon) const {
    std::vector<std::uint32_t> out;
    const auto [y0, x0] = cell_of_raw(min_lat, min_lon);
    const auto [y1, x1] = cell_of_raw(max_lat, max_lon);
    for (std::int64_t y = y0 - 1; y <= y1 + 1; ++y)
      for (std::int64_t x = x0 - 1; x <= x1 + 1; ++x) {
        auto it = cells_.find(key({y, x}));
        if (it != cells_.end()) out.insert(out.end(), it->second.begin(), it->second.end());
      }
    std::sort(out.begin(), out.end());
    return out;
  }

  const GeoPoint& point(std::uint32_t i) const { return points_[i]; }
  std::size_t size() const { return points_.size(); }

 private:
  using Cell = std::pair<std::int64_t, std::int64_t>;

  Cell cell_of_raw(double lat, double lon) const {
    return {static_cast<std::int64_t>(std::floor(lat / lat_step_)),
            static_cast<std::int64_t>(std::floor(lon / lon_step_))};
  }
  Cell cell_of(const GeoPoint& p) const { return cell_of_raw(p.lat(), p.lon()); }

  static std::uint64_t key(const Cell& c) {
    return (static_cast<std::uint64_t>(c.first) << 32) ^ (static_cast<std::uint64_t>(c.second) & 0xffffffffULL);
  }

  std::vector<GeoPoint> points_;
  double lat_step_ = 1.0;
  double lon_step_ = 1.0;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
};

}  // namespace urbanet
