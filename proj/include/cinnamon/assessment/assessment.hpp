#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace cinnamon::assessment {

inline constexpr std::size_t kGfiItems = 15;
inline constexpr int kGfiFrailThreshold = 4;
inline constexpr std::size_t kPssuqItems = 16;

struct GfiResponse {
  std::vector<int> items;
  std::string respondent_id;
  double t = 0.0;
};

struct GfiResult {
  int total = 0;
  bool frail = false;
};

/// Slots hold 1..7, or nullopt when the item was skipped.
struct PssuqResponse {
  std::vector<std::optional<int>> items;
  std::string respondent_id;
  double t = 0.0;
};

struct PssuqScore {
  std::optional<double> mean;  // unset when every item in the subscale is unanswered
  int answered = 0;
};

struct PssuqResult {
  PssuqScore overall;    // items 1-16
  PssuqScore sysuse;     // items 1-6
  PssuqScore infoqual;   // items 7-12
  PssuqScore interqual;  // items 13-15
};

/// Throws ValidationError on a wrong item count or a value outside {0, 1}.
GfiResult score_gfi(const GfiResponse& response);

/// Throws ValidationError on a wrong slot count, a value outside 1..7,
/// or when all sixteen slots are unanswered.
PssuqResult score_pssuq(const PssuqResponse& response);

/// Answer documents are either a bare array of items or an object
/// {"items": [...], "respondent_id": ..., "t": ...}.
GfiResponse gfi_from_json(const nlohmann::json& j);
PssuqResponse pssuq_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GfiResult& r);
nlohmann::json to_json(const PssuqResult& r);

}  // namespace cinnamon::assessment
