#include "spirec/priors.hpp"

#include <cmath>
#include <vector>

namespace spirec {

namespace {

double alpha_bar_at(const DiffusionSchedule& schedule, int t) {
  if (t < 0 || t > schedule.T) throw std::invalid_argument("timestep out of range");
  return schedule.alpha_bar[static_cast<std::size_t>(t)];
}

constexpr double kBlurWidthPerSigma = 10.0;

}  // namespace

GaussianPrior::GaussianPrior(Vector mean, Vector variance)
    : mean_(std::move(mean)), variance_(std::move(variance)) {
  if (mean_.size() != variance_.size())
    throw std::invalid_argument("GaussianPrior: mean and variance lengths differ");
  if ((variance_.array() <= 0.0).any())
    throw std::invalid_argument("GaussianPrior: variances must be positive");
}

Vector GaussianPrior::score(const Vector& x_t, int t, const DiffusionSchedule& schedule) const {
  if (x_t.size() != mean_.size()) throw std::invalid_argument("GaussianPrior::score: shape mismatch");
  const double a = alpha_bar_at(schedule, t);
  const double sqrt_a = std::sqrt(a);
  Vector marginal_var = a * variance_.array() + (1.0 - a);
  return -((x_t - sqrt_a * mean_).array() / marginal_var.array()).matrix();
}

double GaussianPrior::log_density(const Vector& x_t, int t, const DiffusionSchedule& schedule) const {
  if (x_t.size() != mean_.size()) throw std::invalid_argument("GaussianPrior::log_density: shape mismatch");
  const double a = alpha_bar_at(schedule, t);
  const double sqrt_a = std::sqrt(a);
  double acc = 0.0;
  for (Index i = 0; i < x_t.size(); ++i) {
    const double var = a * variance_[i] + (1.0 - a);
    const double d = x_t[i] - sqrt_a * mean_[i];
    acc += -0.5 * d * d / var - 0.5 * std::log(var);
  }
  return acc;
}

Vector tweedie_denoise(const ScorePrior& prior, const Vector& x_t, int t,
                       const DiffusionSchedule& schedule) {
  const double a = alpha_bar_at(schedule, t);
  if (!(a > 0.0)) throw std::invalid_argument("tweedie_denoise: alpha_bar[t] must be positive");
  Vector s = prior.score(x_t, t, schedule);
  return (x_t + (1.0 - a) * s) / std::sqrt(a);
}

Vector DenoiserAdapter::score(const Vector& x_t, int t, const DiffusionSchedule& schedule) const {
  const double a = alpha_bar_at(schedule, t);
  if (!(a > 0.0 && a < 1.0))
    throw std::invalid_argument("DenoiserAdapter::score: alpha_bar[t] must lie strictly in (0, 1)");
  const double sqrt_a = std::sqrt(a);
  const double sigma_eff = std::sqrt((1.0 - a) / a);
  Vector clean = denoiser_(x_t / sqrt_a, sigma_eff);
  if (clean.size() != x_t.size())
    throw std::invalid_argument("DenoiserAdapter::score: denoiser changed the signal length");
  return (sqrt_a * clean - x_t) / (1.0 - a);
}

namespace {

std::vector<double> gaussian_kernel(double width) {
  const int radius = static_cast<int>(std::ceil(3.0 * width));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * (i / width) * (i / width));
    k[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (auto& v : k) v /= sum;
  return k;
}

// Half-sample symmetric index: ... x1 x0 | x0 x1 ... xn-1 | xn-1 xn-2 ...
Index reflect(Index i, Index n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - 1 - i;
  }
  return i;
}

Matrix convolve_rows(const Matrix& X, const std::vector<double>& k) {
  const Index radius = static_cast<Index>(k.size() / 2);
  Matrix out(X.rows(), X.cols());
  for (Index r = 0; r < X.rows(); ++r) {
    for (Index c = 0; c < X.cols(); ++c) {
      double acc = 0.0;
      for (Index d = -radius; d <= radius; ++d)
        acc += k[static_cast<std::size_t>(d + radius)] * X(r, reflect(c + d, X.cols()));
      out(r, c) = acc;
    }
  }
  return out;
}

}  // namespace

Matrix smoothing_denoiser(const Matrix& noisy, double sigma) {
  if (sigma < 0.0) throw std::invalid_argument("smoothing_denoiser: sigma must be non-negative");
  if (sigma == 0.0) return noisy;
  const double width = kBlurWidthPerSigma * sigma;
  const auto kernel = gaussian_kernel(width);
  Matrix tmp = convolve_rows(noisy, kernel);
  return convolve_rows(tmp.transpose(), kernel).transpose();
}

}  // namespace spirec
