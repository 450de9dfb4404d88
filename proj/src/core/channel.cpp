#include "cinnamon/channel.hpp"

#include <algorithm>
#include <cmath>

#include "cinnamon/errors.hpp"

namespace cinnamon {

double ChannelModel::mean_rssi(double distance_m) const {
  const double d = std::max(distance_m, 1e-9);
  return p0_dbm - 10.0 * path_loss_exponent * std::log10(d / d0_m);
}

void ChannelModel::validate() const {
  if (!std::isfinite(p0_dbm)) throw ValidationError("channel p0_dbm must be finite");
  if (!(d0_m > 0.0) || !std::isfinite(d0_m)) throw ValidationError("channel d0_m must be > 0");
  if (!(path_loss_exponent > 0.0) || !std::isfinite(path_loss_exponent)) {
    throw ValidationError("channel path_loss_exponent must be > 0");
  }
  if (!(shadow_sigma_db >= 0.0) || !std::isfinite(shadow_sigma_db)) {
    throw ValidationError("channel shadow_sigma_db must be >= 0");
  }
  if (!(outlier_probability >= 0.0 && outlier_probability <= 1.0)) {
    throw ValidationError("channel outlier_probability must be in [0, 1]");
  }
  if (!(outlier_max_drop_db >= 0.0) || !std::isfinite(outlier_max_drop_db)) {
    throw ValidationError("channel outlier_max_drop_db must be >= 0");
  }
}

}  // namespace cinnamon
