#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wavedenoise/error.hpp"

namespace wavedenoise {

/// Peak value of the nominal 8-bit intensity range.
inline constexpr double kPeakValue = 255.0;

/// Row-major 2D grid of real values. Used for wavelet subbands, where no
/// finiteness or range constraint applies.
struct Grid {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> data;

  Grid() = default;
  Grid(std::size_t w, std::size_t h, double fill = 0.0) : width(w), height(h), data(w * h, fill) {}

  double& operator()(std::size_t x, std::size_t y) { return data[y * width + x]; }
  double operator()(std::size_t x, std::size_t y) const { return data[y * width + x]; }

  std::size_t size() const noexcept { return data.size(); }
  bool operator==(const Grid&) const = default;
};

/// Grayscale image with real-valued pixels, nominally in [0, 255].
///
/// Width and height are at least 1 and every pixel is finite. Values are not
/// clamped to the nominal range; quantization happens only when saving.
class Image {
 public:
  Image(std::size_t width, std::size_t height, double fill = 0.0)
      : width_(width), height_(height), pixels_(width * height, fill) {
    check_shape();
    if (!std::isfinite(fill)) throw Error(ErrorCode::InvalidArgument, "non-finite fill value");
  }

  Image(std::size_t width, std::size_t height, std::vector<double> pixels)
      : width_(width), height_(height), pixels_(std::move(pixels)) {
    check_shape();
    if (pixels_.size() != width_ * height_) {
      throw Error(ErrorCode::ShapeMismatch,
                  "pixel count " + std::to_string(pixels_.size()) + " != " +
                      std::to_string(width_) + "x" + std::to_string(height_));
    }
    for (double v : pixels_) {
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite pixel value");
    }
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  std::span<const double> pixels() const noexcept { return pixels_; }

  double operator()(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }

  /// Mutable access. Callers must keep values finite.
  double& operator()(std::size_t x, std::size_t y) { return pixels_[y * width_ + x]; }
  std::span<double> mutable_pixels() noexcept { return pixels_; }

  bool same_shape(const Image& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  bool operator==(const Image&) const = default;

 private:
  void check_shape() const {
    if (width_ == 0 || height_ == 0) {
      throw Error(ErrorCode::InvalidArgument, "image dimensions must be positive");
    }
  }

  std::size_t width_;
  std::size_t height_;
  std::vector<double> pixels_;
};

}  // namespace wavedenoise
