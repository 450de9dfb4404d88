#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "cinnamon/geometry.hpp"

namespace cinnamon::testing {

inline std::filesystem::path data_path(const std::string& relative) {
  return std::filesystem::path(CINNAMON_DATA_DIR) / relative;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("cinnamon-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// 4 x 3 m single room with three ceiling anchors.
inline RoomLayout single_room() {
  RoomLayout layout;
  layout.rooms = {{"room", {{0, 0}, {4, 0}, {4, 3}, {0, 3}}}};
  layout.anchors = {{"a1", {0.5, 0.5}, 2.5}, {"a2", {3.5, 0.5}, 2.5}, {"a3", {2.0, 2.5}, 2.5}};
  return layout;
}

}  // namespace cinnamon::testing

#include <span>

#include "cinnamon/localization/trilateration.hpp"

namespace cinnamon::testing {

struct GridMinimum {
  Vec2 position;
  double cost = 0.0;
};

/// Exhaustive search of range_cost on a `step` grid over [lo, hi], then
/// repeated 21 x 21 zooms around the best cell.
inline GridMinimum grid_minimum(std::span<const localization::RangeMeasurement> ranges, Vec2 lo, Vec2 hi,
                                double step = 1e-3, int zooms = 8) {
  GridMinimum best{lo, localization::range_cost(lo, ranges)};
  const auto nx = static_cast<long>((hi.x - lo.x) / step);
  const auto ny = static_cast<long>((hi.y - lo.y) / step);
  for (long i = 0; i <= nx; ++i) {
    for (long j = 0; j <= ny; ++j) {
      const Vec2 p{lo.x + i * step, lo.y + j * step};
      const double c = localization::range_cost(p, ranges);
      if (c < best.cost) best = {p, c};
    }
  }
  double h = step;
  for (int z = 0; z < zooms; ++z) {
    const Vec2 centre = best.position;
    for (int i = -10; i <= 10; ++i) {
      for (int j = -10; j <= 10; ++j) {
        const Vec2 p{centre.x + i * h / 10.0, centre.y + j * h / 10.0};
        const double c = localization::range_cost(p, ranges);
        if (c < best.cost) best = {p, c};
      }
    }
    h /= 10.0;
  }
  return best;
}

}  // namespace cinnamon::testing
