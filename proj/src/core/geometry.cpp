#include "cinnamon/geometry.hpp"

#include <algorithm>
#include <set>

#include "cinnamon/errors.hpp"

namespace cinnamon {

namespace {

bool on_segment(Vec2 p, Vec2 a, Vec2 b, double tol) {
  const Vec2 ab = b - a;
  const double len = norm(ab);
  if (len == 0.0) return distance(p, a) <= tol;
  if (std::abs(cross(ab, p - a)) / len > tol) return false;
  const double t = dot(p - a, ab) / (len * len);
  return t >= -tol / len && t <= 1.0 + tol / len;
}

int orientation(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  if (v > 0) return 1;
  if (v < 0) return -1;
  return 0;
}

bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(q1, p1, p2, 0.0)) return true;
  if (o2 == 0 && on_segment(q2, p1, p2, 0.0)) return true;
  if (o3 == 0 && on_segment(p1, q1, q2, 0.0)) return true;
  if (o4 == 0 && on_segment(p2, q1, q2, 0.0)) return true;
  return false;
}

}  // namespace

bool on_polygon_boundary(Vec2 p, std::span<const Vec2> polygon, double tol) {
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (on_segment(p, polygon[i], polygon[(i + 1) % n], tol)) return true;
  }
  return false;
}

bool point_in_polygon(Vec2 p, std::span<const Vec2> polygon) {
  if (polygon.size() < 3) return false;
  if (on_polygon_boundary(p, polygon)) return true;
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = polygon[i];
    const Vec2 b = polygon[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

bool is_simple_polygon(std::span<const Vec2> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a1 = polygon[i];
    const Vec2 a2 = polygon[(i + 1) % n];
    if (a1 == a2) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      const Vec2 b1 = polygon[j];
      const Vec2 b2 = polygon[(j + 1) % n];
      if (adjacent) {
        // Consecutive edges share one vertex; they may not fold back onto each other.
        const Vec2 shared = (j == i + 1) ? a2 : a1;
        const Vec2 u = (j == i + 1) ? a1 : a2;
        const Vec2 v = (j == i + 1) ? b2 : b1;
        if (orientation(shared, u, v) == 0 && dot(u - shared, v - shared) > 0) return false;
        continue;
      }
      if (segments_intersect(a1, a2, b1, b2)) return false;
    }
  }
  return std::abs(polygon_area(polygon)) > 0.0;
}

double polygon_area(std::span<const Vec2> polygon) {
  double twice = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) twice += cross(polygon[i], polygon[(i + 1) % n]);
  return 0.5 * twice;
}

Vec2 polygon_centroid(std::span<const Vec2> polygon) {
  const double area = polygon_area(polygon);
  const std::size_t n = polygon.size();
  if (area == 0.0) {
    Vec2 sum;
    for (auto v : polygon) sum = sum + v;
    return (1.0 / static_cast<double>(n)) * sum;
  }
  double cx = 0.0;
  double cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = polygon[i];
    const Vec2 b = polygon[(i + 1) % n];
    const double c = cross(a, b);
    cx += (a.x + b.x) * c;
    cy += (a.y + b.y) * c;
  }
  return {cx / (6.0 * area), cy / (6.0 * area)};
}

const Room* RoomLayout::find_room(const std::string& id) const {
  auto it = std::find_if(rooms.begin(), rooms.end(), [&](const Room& r) { return r.id == id; });
  return it == rooms.end() ? nullptr : &*it;
}

const Anchor* RoomLayout::find_anchor(const std::string& id) const {
  auto it = std::find_if(anchors.begin(), anchors.end(), [&](const Anchor& a) { return a.id == id; });
  return it == anchors.end() ? nullptr : &*it;
}

void RoomLayout::validate() const {
  if (rooms.empty()) throw ValidationError("layout has no rooms");
  std::set<std::string> room_ids;
  for (const auto& room : rooms) {
    if (room.id.empty()) throw ValidationError("room with empty id");
    if (!room_ids.insert(room.id).second) throw ValidationError("duplicate room id '" + room.id + "'");
    if (room.polygon.size() < 3) {
      throw ValidationError("room '" + room.id + "' polygon needs at least 3 vertices");
    }
    for (auto v : room.polygon) {
      if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
        throw ValidationError("room '" + room.id + "' has a non-finite vertex");
      }
    }
    if (!is_simple_polygon(room.polygon)) {
      throw ValidationError("room '" + room.id + "' polygon is not simple");
    }
  }
  std::set<std::string> anchor_ids;
  for (const auto& anchor : anchors) {
    if (anchor.id.empty()) throw ValidationError("anchor with empty id");
    if (!anchor_ids.insert(anchor.id).second) {
      throw ValidationError("duplicate anchor id '" + anchor.id + "'");
    }
    if (!std::isfinite(anchor.mount_height) || anchor.mount_height < 0.0) {
      throw ValidationError("anchor '" + anchor.id + "' has an invalid mount_height");
    }
    if (!assign_room(anchor.position, *this)) {
      throw ValidationError("anchor '" + anchor.id + "' lies outside every room");
    }
  }
}

std::optional<std::string> assign_room(Vec2 p, const RoomLayout& layout) {
  for (const auto& room : layout.rooms) {
    if (point_in_polygon(p, room.polygon)) return room.id;
  }
  return std::nullopt;
}

}  // namespace cinnamon
