#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "cinnamon/channel.hpp"
#include "cinnamon/geometry.hpp"
#include "cinnamon/har/model.hpp"
#include "cinnamon/localization/pipeline.hpp"
#include "cinnamon/readings.hpp"

namespace cinnamon::api {

struct ActivityEstimate {
  double t = 0.0;  // last sample of the classified window
  std::string wearable_id;
  har::Prediction prediction;
};

nlohmann::json to_json(const ActivityEstimate& a);

/// Latest position and activity per patient from streamed wearable data.
/// RSSI: the most recent `window_s` of samples per wearable are Kalman-filtered
/// and trilaterated after every batch. IMU: the most recent 3 s window is
/// classified once it holds a full, gap-free window.
class LiveTracker {
 public:
  using ModelProvider = std::function<const har::Model&()>;

  LiveTracker(ChannelModel channel, ModelProvider model, double window_s = localization::kDefaultWindowS);

  std::optional<localization::PositionEstimate> add_rssi(const std::string& patient, const RoomLayout& layout,
                                                         std::span<const RssiSample> samples);
  std::optional<ActivityEstimate> add_imu(const std::string& patient, const std::string& wearable_id,
                                          std::span<const ImuSample> samples);

  std::optional<localization::PositionEstimate> position(const std::string& patient) const;
  std::optional<ActivityEstimate> activity(const std::string& patient) const;

 private:
  ChannelModel channel_;
  ModelProvider model_;
  double window_s_;

  mutable std::mutex mutex_;
  std::map<std::string, std::deque<RssiSample>> rssi_;  // by wearable
  std::map<std::string, std::deque<ImuSample>> imu_;    // by wearable
  std::map<std::string, localization::PositionEstimate> positions_;
  std::map<std::string, ActivityEstimate> activities_;
};

/// GB classifier trained on the default simulated recording (seed 42).
har::Model default_activity_model();

}  // namespace cinnamon::api
