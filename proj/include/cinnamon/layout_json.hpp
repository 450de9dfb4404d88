#pragma once

#include <json.hpp>

#include "cinnamon/geometry.hpp"

namespace cinnamon {

// Layout wire format:
//   {"rooms":   [{"id": "...", "polygon": [[x, y], ...]}],
//    "anchors": [{"id": "...", "position": [x, y], "mount_height": 2.5}]}
// Parsing does not validate; call RoomLayout::validate() afterwards.

void to_json(nlohmann::json& j, const Vec2& v);
void from_json(const nlohmann::json& j, Vec2& v);
void to_json(nlohmann::json& j, const RoomLayout& layout);
void from_json(const nlohmann::json& j, RoomLayout& layout);

}  // namespace cinnamon
