#include "cinnamon/api/json_schema.hpp"

#include "cinnamon/errors.hpp"

namespace cinnamon::api {

using nlohmann::json;

namespace {

bool has_type(const json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "number") return v.is_number();
  if (type == "integer") {
    return v.is_number_integer() || (v.is_number_float() && v.get<double>() == static_cast<double>(v.get<long long>()));
  }
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  throw ValidationError("schema uses unknown type '" + type + "'");
}

const json& resolve(const json& schema, const json& root) {
  if (!schema.is_object() || !schema.contains("$ref")) return schema;
  const auto ref = schema.at("$ref").get<std::string>();
  if (ref.rfind("#", 0) != 0) throw ValidationError("only local $ref is supported: " + ref);
  try {
    return resolve(root.at(json::json_pointer(ref.substr(1))), root);
  } catch (const json::exception&) {
    throw ValidationError("unresolved $ref " + ref);
  }
}

std::optional<std::string> check(const json& v, const json& raw, const json& root, const std::string& at) {
  const json& s = resolve(raw, root);
  if (s.is_boolean()) {
    if (s.get<bool>()) return std::nullopt;
    return at + ": not allowed";
  }
  const auto fail = [&](const std::string& why) { return std::optional<std::string>(at + ": " + why); };

  if (s.contains("type")) {
    const auto& t = s.at("type");
    bool ok = false;
    if (t.is_string()) {
      ok = has_type(v, t.get<std::string>());
    } else {
      for (const auto& each : t) ok = ok || has_type(v, each.get<std::string>());
    }
    if (!ok) return fail("expected type " + t.dump());
  }
  if (s.contains("enum")) {
    bool found = false;
    for (const auto& e : s.at("enum")) found = found || e == v;
    if (!found) return fail("value " + v.dump() + " not in " + s.at("enum").dump());
  }
  if (s.contains("const") && s.at("const") != v) return fail("expected " + s.at("const").dump());
  if (s.contains("anyOf")) {
    bool any = false;
    for (const auto& alt : s.at("anyOf")) any = any || !check(v, alt, root, at);
    if (!any) return fail("matches none of the alternatives");
  }
  if (v.is_number()) {
    if (s.contains("minimum") && v.get<double>() < s.at("minimum").get<double>()) {
      return fail("below minimum " + s.at("minimum").dump());
    }
    if (s.contains("maximum") && v.get<double>() > s.at("maximum").get<double>()) {
      return fail("above maximum " + s.at("maximum").dump());
    }
  }
  if (v.is_string() && s.contains("minLength") &&
      v.get_ref<const std::string&>().size() < s.at("minLength").get<std::size_t>()) {
    return fail("shorter than " + s.at("minLength").dump());
  }
  if (v.is_array()) {
    if (s.contains("minItems") && v.size() < s.at("minItems").get<std::size_t>()) {
      return fail("fewer than " + s.at("minItems").dump() + " items");
    }
    if (s.contains("maxItems") && v.size() > s.at("maxItems").get<std::size_t>()) {
      return fail("more than " + s.at("maxItems").dump() + " items");
    }
    if (s.contains("items")) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (auto e = check(v[i], s.at("items"), root, at + "/" + std::to_string(i))) return e;
      }
    }
  }
  if (v.is_object()) {
    if (s.contains("required")) {
      for (const auto& key : s.at("required")) {
        if (!v.contains(key.get<std::string>())) return fail("missing '" + key.get<std::string>() + "'");
      }
    }
    const json empty = json::object();
    const auto& props = s.contains("properties") ? s.at("properties") : empty;
    for (const auto& [key, value] : v.items()) {
      const auto where = at + "/" + key;
      if (props.contains(key)) {
        if (auto e = check(value, props.at(key), root, where)) return e;
      } else if (s.contains("additionalProperties")) {
        const auto& extra = s.at("additionalProperties");
        if (extra.is_boolean() && !extra.get<bool>()) return fail("unexpected key '" + key + "'");
        if (auto e = check(value, extra, root, where)) return e;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> validate_schema(const json& instance, const json& schema, const json& root) {
  return check(instance, schema, root, "");
}

}  // namespace cinnamon::api
