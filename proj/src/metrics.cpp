#include "spirec/metrics.hpp"

#include <array>
#include <cmath>

namespace spirec {

namespace {

constexpr int kWindow = 11;
constexpr int kRadius = kWindow / 2;
constexpr double kWindowSigma = 1.5;

const std::array<double, kWindow * kWindow>& ssim_window() {
  static const auto w = [] {
    std::array<double, kWindow * kWindow> win{};
    double sum = 0.0;
    for (int i = 0; i < kWindow; ++i)
      for (int j = 0; j < kWindow; ++j) {
        const double di = i - kRadius, dj = j - kRadius;
        const double v = std::exp(-(di * di + dj * dj) / (2.0 * kWindowSigma * kWindowSigma));
        win[static_cast<std::size_t>(i * kWindow + j)] = v;
        sum += v;
      }
    for (auto& v : win) v /= sum;
    return win;
  }();
  return w;
}

}  // namespace

double psnr(const Matrix& reference, const Matrix& test, double peak) {
  if (reference.rows() != test.rows() || reference.cols() != test.cols())
    throw std::invalid_argument("psnr: shape mismatch");
  if (!(peak > 0.0)) throw std::invalid_argument("psnr: peak must be positive");
  const double mse = (reference - test).squaredNorm() / static_cast<double>(reference.size());
  if (mse == 0.0) return 99.0;
  return 10.0 * std::log10(peak * peak / mse);
}

double ssim(const Matrix& reference, const Matrix& test) {
  if (reference.rows() != test.rows() || reference.cols() != test.cols())
    throw std::invalid_argument("ssim: shape mismatch");
  if (reference.rows() < kWindow || reference.cols() < kWindow)
    throw std::invalid_argument("ssim: image smaller than the 11x11 window");

  constexpr double kC1 = 0.01 * 0.01;  // (0.01 * peak)^2, peak = 1
  constexpr double kC2 = 0.03 * 0.03;
  const auto& win = ssim_window();

  double acc = 0.0;
  long count = 0;
  for (Index r = kRadius; r + kRadius < reference.rows(); ++r) {
    for (Index c = kRadius; c + kRadius < reference.cols(); ++c) {
      double mx = 0.0, my = 0.0;
      for (int i = 0; i < kWindow; ++i)
        for (int j = 0; j < kWindow; ++j) {
          const double wij = win[static_cast<std::size_t>(i * kWindow + j)];
          mx += wij * reference(r + i - kRadius, c + j - kRadius);
          my += wij * test(r + i - kRadius, c + j - kRadius);
        }
      double vx = 0.0, vy = 0.0, cov = 0.0;
      for (int i = 0; i < kWindow; ++i)
        for (int j = 0; j < kWindow; ++j) {
          const double wij = win[static_cast<std::size_t>(i * kWindow + j)];
          const double dx = reference(r + i - kRadius, c + j - kRadius) - mx;
          const double dy = test(r + i - kRadius, c + j - kRadius) - my;
          vx += wij * dx * dx;
          vy += wij * dy * dy;
          cov += wij * dx * dy;
        }
      const double num = (2.0 * mx * my + kC1) * (2.0 * cov + kC2);
      const double den = (mx * mx + my * my + kC1) * (vx + vy + kC2);
      acc += num / den;
      ++count;
    }
  }
  return acc / static_cast<double>(count);
}

}  // namespace spirec
