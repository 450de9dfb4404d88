#include "cinnamon/api/live.hpp"

#include <algorithm>

#include "cinnamon/har/features.hpp"
#include "cinnamon/sim/scenario.hpp"
#include "cinnamon/sim/simulator.hpp"

namespace cinnamon::api {

using nlohmann::json;

json to_json(const ActivityEstimate& a) {
  json scores = json::object();
  for (auto label : kAllActivities) scores[to_string(label)] = a.prediction.scores[index_of(label)];
  return {{"t", a.t}, {"wearable_id", a.wearable_id}, {"label", to_string(a.prediction.label)}, {"scores", scores}};
}

LiveTracker::LiveTracker(ChannelModel channel, ModelProvider model, double window_s)
    : channel_(channel), model_(std::move(model)), window_s_(window_s) {
  channel_.validate();
}

std::optional<localization::PositionEstimate> LiveTracker::add_rssi(const std::string& patient,
                                                                    const RoomLayout& layout,
                                                                    std::span<const RssiSample> samples) {
  if (samples.empty()) return std::nullopt;
  std::lock_guard lock(mutex_);
  std::optional<localization::PositionEstimate> latest;
  std::map<std::string, bool> touched;
  for (const auto& s : samples) {
    auto& buffer = rssi_[s.wearable_id];
    const auto at = std::upper_bound(buffer.begin(), buffer.end(), s.t,
                                     [](double t, const RssiSample& b) { return t < b.t; });
    buffer.insert(at, s);
    touched[s.wearable_id] = true;
  }
  for (const auto& [wearable, _] : touched) {
    auto& buffer = rssi_[wearable];
    const double newest = buffer.back().t;
    while (!buffer.empty() && buffer.front().t <= newest - window_s_) buffer.pop_front();
    const std::vector<RssiSample> window(buffer.begin(), buffer.end());
    auto estimates = localization::localize_stream(window, layout, channel_,
                                                   localization::KalmanParams::for_channel(channel_), window_s_);
    if (estimates.empty()) continue;
    auto& estimate = estimates.back();
    auto& current = positions_[patient];
    if (estimate.t >= current.t || current.wearable_id.empty()) current = estimate;
    latest = current;
  }
  return latest;
}

std::optional<ActivityEstimate> LiveTracker::add_imu(const std::string& patient, const std::string& wearable_id,
                                                     std::span<const ImuSample> samples) {
  if (samples.empty()) return std::nullopt;
  const std::size_t window_samples = static_cast<std::size_t>(har::kDefaultWindowS * sim::kImuRateHz + 0.5);
  std::vector<ImuSample> window;
  {
    std::lock_guard lock(mutex_);
    auto& buffer = imu_[wearable_id];
    for (auto s : samples) {
      s.session_id = wearable_id;
      const auto at = std::upper_bound(buffer.begin(), buffer.end(), s.t,
                                       [](double t, const ImuSample& b) { return t < b.t; });
      buffer.insert(at, s);
    }
    while (buffer.size() > window_samples) buffer.pop_front();
    if (buffer.size() < window_samples) return std::nullopt;
    window.assign(buffer.begin(), buffer.end());
  }
  const auto windows = har::make_windows(window);
  if (windows.empty()) return std::nullopt;
  const auto features = har::extract_features(windows.back());
  ActivityEstimate estimate{windows.back().samples.back().t, wearable_id, model_().predict(features)};
  std::lock_guard lock(mutex_);
  auto& current = activities_[patient];
  if (estimate.t >= current.t || current.wearable_id.empty()) current = estimate;
  return current;
}

std::optional<localization::PositionEstimate> LiveTracker::position(const std::string& patient) const {
  std::lock_guard lock(mutex_);
  auto it = positions_.find(patient);
  if (it == positions_.end()) return std::nullopt;
  return it->second;
}

std::optional<ActivityEstimate> LiveTracker::activity(const std::string& patient) const {
  std::lock_guard lock(mutex_);
  auto it = activities_.find(patient);
  if (it == activities_.end()) return std::nullopt;
  return it->second;
}

har::Model default_activity_model() {
  constexpr std::uint64_t kSeed = 42;
  const auto scenario = sim::default_scenario();
  const auto data = har::build_dataset(sim::emit_imu(scenario.activities, kSeed));
  return har::train(data, har::ModelKind::GB, {}, kSeed);
}

}  // namespace cinnamon::api
