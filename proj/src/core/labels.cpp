#include <string>

#include "cinnamon/activity.hpp"
#include "cinnamon/errors.hpp"
#include "cinnamon/readings.hpp"

namespace cinnamon {

std::string_view to_string(ActivityLabel label) {
  switch (label) {
    case ActivityLabel::FastWalk: return "FastWalk";
    case ActivityLabel::SlowWalk: return "SlowWalk";
    case ActivityLabel::Rest: return "Rest";
    case ActivityLabel::Stairs: return "Stairs";
  }
  return "?";
}

ActivityLabel parse_activity(std::string_view name) {
  for (auto label : kAllActivities) {
    if (to_string(label) == name) return label;
  }
  throw ValidationError("unknown activity label '" + std::string(name) + "'");
}

std::string_view to_string(Parameter p) {
  switch (p) {
    case Parameter::temperature_c: return "temperature_c";
    case Parameter::humidity_pct: return "humidity_pct";
    case Parameter::co2_ppm: return "co2_ppm";
    case Parameter::voc_ppb: return "voc_ppb";
    case Parameter::ambient_light_lux: return "ambient_light_lux";
    case Parameter::dust_ug_m3: return "dust_ug_m3";
    case Parameter::smoke_ppm: return "smoke_ppm";
    case Parameter::motion_bool: return "motion_bool";
    case Parameter::heart_rate_bpm: return "heart_rate_bpm";
  }
  return "?";
}

Parameter parse_parameter(std::string_view name) {
  for (auto p : kAllParameters) {
    if (to_string(p) == name) return p;
  }
  throw ValidationError("unknown parameter '" + std::string(name) + "'");
}

bool is_environment_parameter(Parameter p) { return p != Parameter::heart_rate_bpm; }

}  // namespace cinnamon
