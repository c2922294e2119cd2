#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "wavedenoise/error.hpp"
#include "wavedenoise/image.hpp"

namespace wavedenoise {

inline constexpr std::size_t kSsimWindow = 11;
inline constexpr double kSsimGaussianSigma = 1.5;
inline constexpr double kSsimK1 = 0.01;
inline constexpr double kSsimK2 = 0.03;

/// Returned by psnr() for identical images.
inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

struct QualityReport {
  double mse = 0.0;
  double psnr_db = kInfinitePsnr;
  double ssim = 1.0;
};

namespace detail {
inline void require_same_shape(const Image& x, const Image& y, const char* what) {
  if (!x.same_shape(y)) {
    throw Error(ErrorCode::ShapeMismatch,
                std::string(what) + ": " + std::to_string(x.width()) + "x" +
                    std::to_string(x.height()) + " vs " + std::to_string(y.width()) + "x" +
                    std::to_string(y.height()));
  }
}

// Normalised 1D Gaussian; the 2D window is its outer product.
inline std::array<double, kSsimWindow> ssim_kernel() {
  std::array<double, kSsimWindow> k{};
  const double centre = (kSsimWindow - 1) / 2.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < kSsimWindow; ++i) {
    const double d = static_cast<double>(i) - centre;
    k[i] = std::exp(-(d * d) / (2.0 * kSsimGaussianSigma * kSsimGaussianSigma));
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Valid-region separable filtering: output is (w - 10) x (h - 10).
inline std::vector<double> gaussian_filter_valid(const std::vector<double>& in, std::size_t w,
                                                 std::size_t h,
                                                 const std::array<double, kSsimWindow>& k) {
  const std::size_t ow = w - kSsimWindow + 1;
  const std::size_t oh = h - kSsimWindow + 1;
  std::vector<double> rows(ow * h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (std::size_t i = 0; i < kSsimWindow; ++i) acc += k[i] * in[y * w + x + i];
      rows[y * ow + x] = acc;
    }
  }
  std::vector<double> out(ow * oh);
  for (std::size_t y = 0; y < oh; ++y) {
    for (std::size_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (std::size_t i = 0; i < kSsimWindow; ++i) acc += k[i] * rows[(y + i) * ow + x];
      out[y * ow + x] = acc;
    }
  }
  return out;
}
}  // namespace detail

inline double mse(const Image& x, const Image& y) {
  detail::require_same_shape(x, y, "mse");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x.pixels()[i] - y.pixels()[i];
    acc += d * d;
  }
  return acc / static_cast<double>(x.size());
}

inline double psnr_from_mse(double mse_value, double peak = kPeakValue) noexcept {
  if (mse_value == 0.0) return kInfinitePsnr;
  return 10.0 * std::log10(peak * peak / mse_value);
}

/// 10 log10(peak^2 / MSE); kInfinitePsnr when the images are identical.
inline double psnr(const Image& x, const Image& y, double peak = kPeakValue) {
  return psnr_from_mse(mse(x, y), peak);
}

/// Mean SSIM over the valid region, 11x11 Gaussian window (sigma 1.5),
/// constants (0.01 * 255)^2 and (0.03 * 255)^2.
inline double ssim(const Image& x, const Image& y) {
  detail::require_same_shape(x, y, "ssim");
  if (x.width() < kSsimWindow || x.height() < kSsimWindow) {
    throw Error(ErrorCode::ImageTooSmall, "ssim needs both dimensions >= 11");
  }
  const std::size_t w = x.width();
  const std::size_t h = x.height();
  const std::size_t n = x.size();
  std::vector<double> xs(x.pixels().begin(), x.pixels().end());
  std::vector<double> ys(y.pixels().begin(), y.pixels().end());
  std::vector<double> xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    xx[i] = xs[i] * xs[i];
    yy[i] = ys[i] * ys[i];
    xy[i] = xs[i] * ys[i];
  }
  const auto k = detail::ssim_kernel();
  const auto mu_x = detail::gaussian_filter_valid(xs, w, h, k);
  const auto mu_y = detail::gaussian_filter_valid(ys, w, h, k);
  const auto e_xx = detail::gaussian_filter_valid(xx, w, h, k);
  const auto e_yy = detail::gaussian_filter_valid(yy, w, h, k);
  const auto e_xy = detail::gaussian_filter_valid(xy, w, h, k);

  const double c1 = (kSsimK1 * kPeakValue) * (kSsimK1 * kPeakValue);
  const double c2 = (kSsimK2 * kPeakValue) * (kSsimK2 * kPeakValue);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_x.size(); ++i) {
    const double mx = mu_x[i];
    const double my = mu_y[i];
    const double vx = e_xx[i] - mx * mx;
    const double vy = e_yy[i] - my * my;
    const double cov = e_xy[i] - mx * my;
    total += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) /
             ((mx * mx + my * my + c1) * (vx + vy + c2));
  }
  return total / static_cast<double>(mu_x.size());
}

inline QualityReport evaluate_quality(const Image& reference, const Image& test) {
  QualityReport r;
  r.mse = mse(reference, test);
  r.psnr_db = psnr_from_mse(r.mse);
  r.ssim = ssim(reference, test);
  return r;
}

}  // namespace wavedenoise
