#pragma once

namespace cinnamon {

/// Log-distance path loss with Gaussian shadowing, plus an optional
/// heavy-tail drop that mimics multipath fading.
struct ChannelModel {
  double p0_dbm = -45.0;              // RSSI at the reference distance
  double d0_m = 1.0;                  // reference distance
  double path_loss_exponent = 2.8;
  double shadow_sigma_db = 2.0;
  double outlier_probability = 0.05;  // chance of an extra -U(0, outlier_max_drop_db) dB
  double outlier_max_drop_db = 10.0;

  /// Noise-free RSSI at a 3-D distance.
  double mean_rssi(double distance_m) const;

  void validate() const;
};

}  // namespace cinnamon
