#include "cinnamon/localization/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "cinnamon/layout_json.hpp"

namespace cinnamon::localization {

double rssi_to_distance(double rssi_dbm, const ChannelModel& channel) {
  return channel.d0_m * std::pow(10.0, (channel.p0_dbm - rssi_dbm) / (10.0 * channel.path_loss_exponent));
}

double horizontal_distance(double slant_m, double mount_height_m) {
  const double squared = slant_m * slant_m - mount_height_m * mount_height_m;
  return std::max(std::sqrt(std::max(squared, 0.0)), 1e-6);
}

PositionEstimate trilaterate(std::span<const DistanceEstimate> distances, const RoomLayout& layout) {
  std::vector<RangeMeasurement> ranges;
  ranges.reserve(distances.size());
  double latest = 0.0;
  for (const auto& d : distances) {
    const Anchor* anchor = layout.find_anchor(d.anchor_id);
    if (!anchor) throw ValidationError("unknown anchor '" + d.anchor_id + "'");
    ranges.push_back({anchor->position, d.distance_m});
    latest = std::max(latest, d.t);
  }
  const auto result = trilaterate(ranges);
  PositionEstimate estimate;
  estimate.t = latest;
  estimate.xy = result.position;
  estimate.residual_rms_m = result.residual_rms_m;
  estimate.room_id = assign_room(result.position, layout);
  estimate.anchors_used = static_cast<int>(ranges.size());
  return estimate;
}

namespace {

struct AnchorSeries {
  std::size_t layout_index = 0;
  std::vector<double> rssi;
  double mean() const { return std::accumulate(rssi.begin(), rssi.end(), 0.0) / static_cast<double>(rssi.size()); }
};

PositionEstimate localize_window(std::span<const RssiSample* const> window, const RoomLayout& layout,
                                 const ChannelModel& channel,
                                 const std::optional<KalmanParams>& kalman) {
  std::map<std::string, AnchorSeries> per_anchor;
  for (const RssiSample* s : window) {
    const Anchor* anchor = layout.find_anchor(s->anchor_id);
    if (!anchor) continue;
    auto& series = per_anchor[s->anchor_id];
    series.layout_index = static_cast<std::size_t>(anchor - layout.anchors.data());
    series.rssi.push_back(s->rssi_dbm);
  }

  PositionEstimate estimate;
  estimate.t = window.back()->t;
  estimate.wearable_id = window.back()->wearable_id;

  struct Candidate {
    const std::string* id;
    const AnchorSeries* series;
    double mean;
  };
  std::vector<Candidate> candidates;
  for (const auto& [id, series] : per_anchor) candidates.push_back({&id, &series, series.mean()});
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.mean != b.mean) return a.mean > b.mean;
    return a.series->layout_index < b.series->layout_index;
  });
  if (candidates.size() > 3) candidates.resize(3);
  estimate.anchors_used = static_cast<int>(candidates.size());
  if (candidates.size() < 3) return estimate;

  std::vector<DistanceEstimate> distances;
  for (const auto& c : candidates) {
    const double rssi = kalman ? kalman_filter(c.series->rssi, *kalman).back() : c.series->rssi.back();
    const Anchor& anchor = layout.anchors[c.series->layout_index];
    const double slant = rssi_to_distance(rssi, channel);
    distances.push_back({estimate.t, *c.id, horizontal_distance(slant, anchor.mount_height)});
  }
  try {
    PositionEstimate solved = trilaterate(distances, layout);
    solved.wearable_id = estimate.wearable_id;
    solved.t = estimate.t;
    return solved;
  } catch (const CollinearAnchorsError&) {
    return estimate;
  }
}

}  // namespace

std::vector<PositionEstimate> localize_stream(std::span<const RssiSample> samples,
                                              const RoomLayout& layout,
                                              const ChannelModel& channel,
                                              const std::optional<KalmanParams>& kalman,
                                              double window_s) {
  if (!(window_s > 0.0) || !std::isfinite(window_s)) throw ValidationError("window_s must be > 0");
  channel.validate();
  if (kalman) kalman->validate();

  // Group by wearable in order of first appearance, time-ordered within.
  std::vector<std::string> wearables;
  std::map<std::string, std::vector<const RssiSample*>> by_wearable;
  for (const auto& s : samples) {
    auto [it, inserted] = by_wearable.try_emplace(s.wearable_id);
    if (inserted) wearables.push_back(s.wearable_id);
    it->second.push_back(&s);
  }

  std::vector<PositionEstimate> out;
  for (const auto& wearable : wearables) {
    auto& stream = by_wearable[wearable];
    std::stable_sort(stream.begin(), stream.end(),
                     [](const RssiSample* a, const RssiSample* b) { return a->t < b->t; });
    const double t0 = stream.front()->t;
    std::size_t begin = 0;
    while (begin < stream.size()) {
      const auto index = static_cast<long long>(std::floor((stream[begin]->t - t0) / window_s));
      const double window_end = t0 + static_cast<double>(index + 1) * window_s;
      std::size_t end = begin;
      while (end < stream.size() && stream[end]->t < window_end) ++end;
      if (end == begin) ++end;  // guards against rounding at the boundary
      out.push_back(localize_window(std::span(stream).subspan(begin, end - begin), layout, channel, kalman));
      begin = end;
    }
  }
  return out;
}

LocalizationReport evaluate_localization(std::span<const PositionEstimate> estimates,
                                         const GroundTruthTrack& truth) {
  const auto& track = truth.samples;
  struct Match {
    const PositionEstimate* estimate;
    const TrackSample* sample;
  };
  std::vector<Match> matches;
  for (const auto& e : estimates) {
    if (track.empty()) break;
    auto it = std::lower_bound(track.begin(), track.end(), e.t,
                               [](const TrackSample& s, double t) { return s.t < t; });
    const TrackSample* best = nullptr;
    if (it != track.end()) best = &*it;
    if (it != track.begin()) {
      const TrackSample* before = &*std::prev(it);
      if (!best || std::abs(before->t - e.t) <= std::abs(best->t - e.t)) best = before;
    }
    if (best && std::abs(best->t - e.t) <= kMatchToleranceS) matches.push_back({&e, best});
  }
  if (matches.empty()) throw ValidationError("no estimate lies within 0.5 s of the ground truth");

  LocalizationReport report;
  std::vector<std::string> rooms;
  bool uses_none = false;
  for (const auto& m : matches) {
    rooms.push_back(m.sample->room_id);
    if (m.estimate->room_id) rooms.push_back(*m.estimate->room_id);
    else uses_none = true;
  }
  std::sort(rooms.begin(), rooms.end());
  rooms.erase(std::unique(rooms.begin(), rooms.end()), rooms.end());
  if (uses_none) rooms.push_back("none");
  const auto index_of = [&](const std::string& id) {
    return static_cast<std::size_t>(std::find(rooms.begin(), rooms.end(), id) - rooms.begin());
  };
  report.rooms = rooms;
  report.confusion.assign(rooms.size(), std::vector<std::size_t>(rooms.size(), 0));

  std::vector<double> errors;
  std::size_t correct = 0;
  for (const auto& m : matches) {
    const auto truth_index = index_of(m.sample->room_id);
    const auto estimate_index = index_of(m.estimate->room_id.value_or("none"));
    ++report.confusion[truth_index][estimate_index];
    if (truth_index == estimate_index) ++correct;
    if (m.estimate->xy) errors.push_back(distance(*m.estimate->xy, m.sample->position));
  }
  report.n_estimates = matches.size();
  report.n_positioned = errors.size();
  report.room_accuracy = static_cast<double>(correct) / static_cast<double>(matches.size());
  if (!errors.empty()) {
    report.mean_position_error_m =
        std::accumulate(errors.begin(), errors.end(), 0.0) / static_cast<double>(errors.size());
    std::sort(errors.begin(), errors.end());
    const std::size_t mid = errors.size() / 2;
    report.median_position_error_m =
        errors.size() % 2 == 1 ? errors[mid] : 0.5 * (errors[mid - 1] + errors[mid]);
  }
  return report;
}

nlohmann::json LocalizationReport::to_json() const {
  return {{"n_estimates", n_estimates},
          {"n_positioned", n_positioned},
          {"mean_position_error_m", mean_position_error_m},
          {"median_position_error_m", median_position_error_m},
          {"room_accuracy", room_accuracy},
          {"rooms", rooms},
          {"per_room_confusion", confusion}};
}

nlohmann::json to_json(const PositionEstimate& e) {
  nlohmann::json j = {{"t", e.t},
                      {"wearable_id", e.wearable_id},
                      {"residual_rms_m", e.residual_rms_m},
                      {"anchors_used", e.anchors_used}};
  j["xy"] = e.xy ? nlohmann::json(*e.xy) : nlohmann::json(nullptr);
  j["room_id"] = e.room_id ? nlohmann::json(*e.room_id) : nlohmann::json(nullptr);
  return j;
}

}  // namespace cinnamon::localization
