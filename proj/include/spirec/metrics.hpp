#pragma once

#include "spirec/core.hpp"

#include <string>
#include <vector>

namespace spirec {

struct MetricReport {
  double psnr_db = 0.0;
  double ssim = 0.0;
  struct PerImage {
    std::string id;
    double psnr_db;
    double ssim;
  };
  std::vector<PerImage> per_image;
};

/// 10 log10(peak^2 / MSE). Identical images return the 99 dB cap (finite,
/// CSV-safe) instead of infinity.
double psnr(const Matrix& reference, const Matrix& test, double peak = 1.0);

/// Mean local structural similarity over all fully-valid 11x11 windows,
/// Gaussian-weighted (sigma 1.5), constants C1 = (0.01 peak)^2 and
/// C2 = (0.03 peak)^2 with peak = 1. Requires min dimension >= 11.
double ssim(const Matrix& reference, const Matrix& test);

}  // namespace spirec
