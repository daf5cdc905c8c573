#include "spirec/pnp.hpp"

#include <cmath>

namespace spirec {

void PnpConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("PnpConfig: iterations must be >= 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("PnpConfig: gamma must be positive");
  if (sigma_schedule.size() != static_cast<std::size_t>(iterations))
    throw std::invalid_argument("PnpConfig: sigma_schedule length must equal iterations");
  for (std::size_t k = 0; k < sigma_schedule.size(); ++k) {
    if (sigma_schedule[k] < 0.0) throw std::invalid_argument("PnpConfig: sigma must be non-negative");
    if (k > 0 && sigma_schedule[k] > sigma_schedule[k - 1])
      throw std::invalid_argument("PnpConfig: sigma_schedule must be non-increasing");
  }
}

std::vector<double> geometric_sigma_schedule(int iterations, double sigma_max, double sigma_min) {
  if (iterations < 1) throw std::invalid_argument("geometric_sigma_schedule: iterations must be >= 1");
  if (!(sigma_min > 0.0 && sigma_min <= sigma_max))
    throw std::invalid_argument("geometric_sigma_schedule: need 0 < sigma_min <= sigma_max");
  std::vector<double> s(static_cast<std::size_t>(iterations));
  const double denom = std::max(iterations - 1, 1);
  for (int k = 0; k < iterations; ++k)
    s[static_cast<std::size_t>(k)] = sigma_max * std::pow(sigma_min / sigma_max, k / denom);
  return s;
}

Vector pnp_solve(const Vector& y, const DenseSensor& sensor, const DenoiserAdapter& denoiser,
                 const PnpConfig& cfg, const Vector* x_init) {
  cfg.validate();
  Vector x = x_init ? *x_init : sensor.pinv_apply(y);
  if (x.size() != sensor.cols()) throw std::invalid_argument("pnp_solve: x_init length mismatch");
  for (int k = 0; k < cfg.iterations; ++k) {
    x = (cfg.variant == PnpVariant::Gap) ? gap_update(sensor, x, y)
                                         : hqs_update(sensor, x, y, cfg.gamma);
    x = denoiser.denoise(x, cfg.sigma_schedule[static_cast<std::size_t>(k)]);
  }
  return x;
}

Matrix pnp_solve(const Matrix& Y, const SeparableSensor& sensor, const DenoiserAdapter& denoiser,
                 const PnpConfig& cfg, const Matrix* x_init) {
  cfg.validate();
  const Index side = sensor.sqrt_n();
  Matrix X = x_init ? *x_init : sensor.pinv_apply(Y);
  if (X.rows() != side || X.cols() != side) throw std::invalid_argument("pnp_solve: x_init shape mismatch");
  for (int k = 0; k < cfg.iterations; ++k) {
    X = (cfg.variant == PnpVariant::Gap) ? gap_update(sensor, X, Y)
                                         : hqs_update(sensor, X, Y, cfg.gamma);
    Vector flat = denoiser.denoise(vec(X), cfg.sigma_schedule[static_cast<std::size_t>(k)]);
    X = unvec(flat, side, side);
  }
  return X;
}

}  // namespace spirec
