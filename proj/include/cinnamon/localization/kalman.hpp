#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cinnamon/channel.hpp"

namespace cinnamon::localization {

/// Scalar random-walk Kalman parameters, in dBm units.
struct KalmanParams {
  double process_var_q = 0.01;
  double measurement_var_r = 4.0;
  std::optional<double> initial_estimate;  // first measurement when unset
  double initial_var = 4.0;

  void validate() const;

  /// q = 0.01, r = initial_var = shadow_sigma^2 (1.0 when the channel is noiseless).
  static KalmanParams for_channel(const ChannelModel& channel);
};

class ScalarKalmanFilter {
 public:
  explicit ScalarKalmanFilter(const KalmanParams& params);

  /// Predict then update with one measurement; returns the posterior estimate.
  double update(double measurement);

  double estimate() const { return estimate_; }
  double variance() const { return variance_; }

 private:
  KalmanParams params_;
  bool primed_ = false;
  double estimate_ = 0.0;
  double variance_ = 0.0;
};

/// Filters a whole series; output has the input's length.
/// Throws ValidationError on an empty series or invalid params.
std::vector<double> kalman_filter(std::span<const double> series, const KalmanParams& params);

}  // namespace cinnamon::localization
