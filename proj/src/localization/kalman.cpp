#include "cinnamon/localization/kalman.hpp"

#include <cmath>

#include "cinnamon/errors.hpp"

namespace cinnamon::localization {

void KalmanParams::validate() const {
  if (!(process_var_q >= 0.0) || !std::isfinite(process_var_q)) {
    throw ValidationError("kalman process_var_q must be >= 0");
  }
  if (!(measurement_var_r >= 0.0) || !std::isfinite(measurement_var_r)) {
    throw ValidationError("kalman measurement_var_r must be >= 0");
  }
  if (!(initial_var > 0.0) || !std::isfinite(initial_var)) {
    throw ValidationError("kalman initial_var must be > 0");
  }
  if (process_var_q == 0.0 && measurement_var_r == 0.0) {
    throw ValidationError("kalman q and r cannot both be zero");
  }
  if (initial_estimate && !std::isfinite(*initial_estimate)) {
    throw ValidationError("kalman initial_estimate must be finite");
  }
}

KalmanParams KalmanParams::for_channel(const ChannelModel& channel) {
  KalmanParams p;
  p.measurement_var_r = channel.shadow_sigma_db * channel.shadow_sigma_db;
  p.initial_var = p.measurement_var_r > 0.0 ? p.measurement_var_r : 1.0;
  return p;
}

ScalarKalmanFilter::ScalarKalmanFilter(const KalmanParams& params) : params_(params) {
  params_.validate();
}

double ScalarKalmanFilter::update(double measurement) {
  if (!primed_) {
    estimate_ = params_.initial_estimate.value_or(measurement);
    variance_ = params_.initial_var;
    primed_ = true;
  }
  const double predicted_var = variance_ + params_.process_var_q;
  const double gain = predicted_var / (predicted_var + params_.measurement_var_r);
  estimate_ += gain * (measurement - estimate_);
  variance_ = (1.0 - gain) * predicted_var;
  return estimate_;
}

std::vector<double> kalman_filter(std::span<const double> series, const KalmanParams& params) {
  if (series.empty()) throw ValidationError("kalman_filter needs a non-empty series");
  ScalarKalmanFilter filter(params);
  std::vector<double> out;
  out.reserve(series.size());
  for (double z : series) out.push_back(filter.update(z));
  return out;
}

}  // namespace cinnamon::localization
