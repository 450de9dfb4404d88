#pragma once

#include <array>
#include <string>
#include <string_view>

namespace cinnamon {

/// Enumeration order is the tie-break order used everywhere.
enum class ActivityLabel { FastWalk = 0, SlowWalk = 1, Rest = 2, Stairs = 3 };

inline constexpr std::size_t kActivityCount = 4;
inline constexpr std::array<ActivityLabel, kActivityCount> kAllActivities = {
    ActivityLabel::FastWalk, ActivityLabel::SlowWalk, ActivityLabel::Rest, ActivityLabel::Stairs};

std::string_view to_string(ActivityLabel label);

/// Throws ValidationError on an unknown name.
ActivityLabel parse_activity(std::string_view name);

inline std::size_t index_of(ActivityLabel label) { return static_cast<std::size_t>(label); }

}  // namespace cinnamon
