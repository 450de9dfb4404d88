#pragma once

#include <optional>
#include <string>

#include <json.hpp>

namespace cinnamon::api {

/// Validates `instance` against a JSON Schema subset: type, enum, const,
/// required, properties, additionalProperties, items, minItems, maxItems,
/// minLength, minimum, maximum, anyOf and local "#/..." $ref resolved
/// against `root`. Returns the first violation as "<json pointer>: <reason>".
std::optional<std::string> validate_schema(const nlohmann::json& instance, const nlohmann::json& schema,
                                           const nlohmann::json& root);

inline std::optional<std::string> validate_schema(const nlohmann::json& instance, const nlohmann::json& schema) {
  return validate_schema(instance, schema, schema);
}

}  // namespace cinnamon::api
