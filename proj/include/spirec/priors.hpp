#pragma once

#include "spirec/core.hpp"
#include "spirec/schedule.hpp"

#include <functional>
#include <utility>

namespace spirec {

/// Pluggable prior: supplies the score of the noised marginal at timestep t.
/// Implementations must be immutable after construction; score evaluation is
/// pure and concurrently callable.
class ScorePrior {
 public:
  virtual ~ScorePrior() = default;
  virtual Vector score(const Vector& x_t, int t, const DiffusionSchedule& schedule) const = 0;
};

/// Diagonal Gaussian prior N(mean, diag(variance)). Under the forward
/// trajectory the noised marginal stays Gaussian with mean
/// sqrt(alpha_bar_t) * mean and variance alpha_bar_t * variance + 1 -
/// alpha_bar_t, so the score is available in closed form per coordinate.
class GaussianPrior final : public ScorePrior {
 public:
  GaussianPrior(Vector mean, Vector variance);

  Vector score(const Vector& x_t, int t, const DiffusionSchedule& schedule) const override;

  /// Log-density of the noised marginal, up to its normalization constant.
  double log_density(const Vector& x_t, int t, const DiffusionSchedule& schedule) const;

  const Vector& mean() const { return mean_; }
  const Vector& variance() const { return variance_; }

 private:
  Vector mean_, variance_;
};

/// Posterior-mean estimate of the clean signal from the score:
///   x0|t = (x_t + (1 - alpha_bar_t) * score) / sqrt(alpha_bar_t)
Vector tweedie_denoise(const ScorePrior& prior, const Vector& x_t, int t,
                       const DiffusionSchedule& schedule);

using DenoiserFn = std::function<Vector(const Vector& noisy, double sigma)>;

/// Turns a Gaussian denoiser into a score prior. The denoiser is evaluated
/// on the rescaled state x_t / sqrt(alpha_bar_t) at the effective noise
/// level sigma_eff = sqrt((1 - alpha_bar_t) / alpha_bar_t); the induced
/// score (sqrt(alpha_bar_t) * D - x_t) / (1 - alpha_bar_t) feeds back
/// through tweedie_denoise to reproduce the denoiser's output exactly.
class DenoiserAdapter final : public ScorePrior {
 public:
  explicit DenoiserAdapter(DenoiserFn denoiser) : denoiser_(std::move(denoiser)) {}

  Vector score(const Vector& x_t, int t, const DiffusionSchedule& schedule) const override;

  Vector denoise(const Vector& noisy, double sigma) const { return denoiser_(noisy, sigma); }

 private:
  DenoiserFn denoiser_;
};

/// Separable truncated-Gaussian smoothing, the concrete denoiser instance.
/// The kernel width is 10 * sigma pixels, truncated at radius
/// ceil(3 * width) with half-sample symmetric (reflective) boundaries;
/// sigma = 0 returns the input unchanged. The reflective scheme makes the
/// operator doubly stochastic: the image mean is preserved exactly and the
/// energy of zero-mean inputs cannot grow.
Matrix smoothing_denoiser(const Matrix& noisy, double sigma);

}  // namespace spirec
