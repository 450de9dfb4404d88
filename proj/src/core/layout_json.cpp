#include "cinnamon/layout_json.hpp"

namespace cinnamon {

void to_json(nlohmann::json& j, const Vec2& v) { j = nlohmann::json::array({v.x, v.y}); }

void from_json(const nlohmann::json& j, Vec2& v) {
  if (!j.is_array() || j.size() != 2) throw nlohmann::json::type_error::create(302, "point must be [x, y]", &j);
  v.x = j.at(0).get<double>();
  v.y = j.at(1).get<double>();
}

void to_json(nlohmann::json& j, const RoomLayout& layout) {
  j = nlohmann::json::object();
  auto& rooms = j["rooms"] = nlohmann::json::array();
  for (const auto& room : layout.rooms) rooms.push_back({{"id", room.id}, {"polygon", room.polygon}});
  auto& anchors = j["anchors"] = nlohmann::json::array();
  for (const auto& anchor : layout.anchors) {
    anchors.push_back(
        {{"id", anchor.id}, {"position", anchor.position}, {"mount_height", anchor.mount_height}});
  }
}

void from_json(const nlohmann::json& j, RoomLayout& layout) {
  layout.rooms.clear();
  layout.anchors.clear();
  for (const auto& r : j.at("rooms")) {
    layout.rooms.push_back({r.at("id").get<std::string>(), r.at("polygon").get<Polygon>()});
  }
  if (j.contains("anchors")) {
    for (const auto& a : j.at("anchors")) {
      layout.anchors.push_back({a.at("id").get<std::string>(), a.at("position").get<Vec2>(),
                                a.value("mount_height", 2.5)});
    }
  }
}

}  // namespace cinnamon
