#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cinnamon {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

using Polygon = std::vector<Vec2>;

/// True when p lies inside the polygon or on its boundary.
bool point_in_polygon(Vec2 p, std::span<const Vec2> polygon);

/// True when p lies on one of the polygon's edges (within tol meters).
bool on_polygon_boundary(Vec2 p, std::span<const Vec2> polygon, double tol = 1e-12);

/// Edges may only meet at shared endpoints of consecutive edges.
bool is_simple_polygon(std::span<const Vec2> polygon);

double polygon_area(std::span<const Vec2> polygon);
Vec2 polygon_centroid(std::span<const Vec2> polygon);

struct Room {
  std::string id;
  Polygon polygon;
};

struct Anchor {
  std::string id;
  Vec2 position;
  double mount_height = 2.5;
};

/// Floor plan of one location: rooms and the ceiling-mounted anchors.
struct RoomLayout {
  std::vector<Room> rooms;
  std::vector<Anchor> anchors;

  const Room* find_room(const std::string& id) const;
  const Anchor* find_anchor(const std::string& id) const;

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;
};

/// Ray-casting room lookup; a point on a shared wall belongs to the first
/// room in layout order.
std::optional<std::string> assign_room(Vec2 p, const RoomLayout& layout);

}  // namespace cinnamon
