#include "cinnamon/assessment/assessment.hpp"

#include <string>

#include "cinnamon/errors.hpp"

namespace cinnamon::assessment {

using nlohmann::json;

namespace {

PssuqScore subscale(const std::vector<std::optional<int>>& items, std::size_t first, std::size_t last) {
  PssuqScore s;
  int sum = 0;
  for (std::size_t i = first; i <= last; ++i) {
    if (!items[i]) continue;
    sum += *items[i];
    ++s.answered;
  }
  if (s.answered > 0) s.mean = static_cast<double>(sum) / s.answered;
  return s;
}

const json& items_of(const json& j) {
  if (j.is_array()) return j;
  if (j.is_object() && j.contains("items") && j.at("items").is_array()) return j.at("items");
  throw ParseError("answers must be an array or an object with an 'items' array");
}

template <class Response>
void read_meta(const json& j, Response& r) {
  if (!j.is_object()) return;
  if (j.contains("respondent_id")) {
    if (!j.at("respondent_id").is_string()) throw ParseError("respondent_id must be a string");
    r.respondent_id = j.at("respondent_id").get<std::string>();
  }
  if (j.contains("t")) {
    if (!j.at("t").is_number()) throw ParseError("t must be a number");
    r.t = j.at("t").get<double>();
  }
}

int integer_item(const json& v, std::size_t index) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    throw ParseError("item " + std::to_string(index + 1) + " must be an integer");
  }
  return v.get<int>();
}

json score_json(const PssuqScore& s) {
  return {{"mean", s.mean ? json(*s.mean) : json(nullptr)}, {"answered", s.answered}};
}

}  // namespace

GfiResult score_gfi(const GfiResponse& response) {
  if (response.items.size() != kGfiItems) {
    throw ValidationError("GFI needs exactly 15 items, got " + std::to_string(response.items.size()));
  }
  GfiResult r;
  for (std::size_t i = 0; i < kGfiItems; ++i) {
    const int v = response.items[i];
    if (v != 0 && v != 1) {
      throw ValidationError("GFI item " + std::to_string(i + 1) + " must be 0 or 1, got " + std::to_string(v));
    }
    r.total += v;
  }
  r.frail = r.total >= kGfiFrailThreshold;
  return r;
}

PssuqResult score_pssuq(const PssuqResponse& response) {
  if (response.items.size() != kPssuqItems) {
    throw ValidationError("PSSUQ needs exactly 16 slots, got " + std::to_string(response.items.size()));
  }
  for (std::size_t i = 0; i < kPssuqItems; ++i) {
    const auto& v = response.items[i];
    if (v && (*v < 1 || *v > 7)) {
      throw ValidationError("PSSUQ item " + std::to_string(i + 1) + " must be in 1..7, got " + std::to_string(*v));
    }
  }
  PssuqResult r;
  r.overall = subscale(response.items, 0, 15);
  if (r.overall.answered == 0) throw ValidationError("PSSUQ response has no answered items");
  r.sysuse = subscale(response.items, 0, 5);
  r.infoqual = subscale(response.items, 6, 11);
  r.interqual = subscale(response.items, 12, 14);
  return r;
}

GfiResponse gfi_from_json(const json& j) {
  GfiResponse r;
  const auto& items = items_of(j);
  for (std::size_t i = 0; i < items.size(); ++i) r.items.push_back(integer_item(items[i], i));
  read_meta(j, r);
  return r;
}

PssuqResponse pssuq_from_json(const json& j) {
  PssuqResponse r;
  const auto& items = items_of(j);
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].is_null()) {
      r.items.emplace_back();
    } else {
      r.items.emplace_back(integer_item(items[i], i));
    }
  }
  read_meta(j, r);
  return r;
}

json to_json(const GfiResult& r) { return {{"total", r.total}, {"frail", r.frail}}; }

json to_json(const PssuqResult& r) {
  return {{"overall", score_json(r.overall)},
          {"sysuse", score_json(r.sysuse)},
          {"infoqual", score_json(r.infoqual)},
          {"interqual", score_json(r.interqual)}};
}

}  // namespace cinnamon::assessment
