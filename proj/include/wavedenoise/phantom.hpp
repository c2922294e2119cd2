#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "wavedenoise/image.hpp"
#include "wavedenoise/imgio.hpp"
#include "wavedenoise/noise.hpp"

// Synthetic axial brain-slice phantoms. They stand in for an MRI corpus in
// tests and demos: dark background, bright scalp, dark skull, folded cortex
// with thin CSF sulci, white matter, ventricles and an optional lesion, under
// a smooth bias field plus a little acquisition grain inside the head.

namespace wavedenoise {

namespace detail {

struct Ellipse {
  double cx, cy, rx, ry, angle;

  // Normalised radial coordinate; < 1 inside.
  double radius(double x, double y) const noexcept {
    const double dx = x - cx;
    const double dy = y - cy;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double u = (c * dx + s * dy) / rx;
    const double v = (-s * dx + c * dy) / ry;
    return std::sqrt(u * u + v * v);
  }

  double theta(double x, double y) const noexcept { return std::atan2(y - cy, x - cx); }
};

// Soft step from 1 (inside) to 0 (outside) at r = 1; `sharpness` is the
// number of transition widths per unit of normalised radius.
inline double inside(double r, double sharpness) noexcept {
  return 1.0 / (1.0 + std::exp((r - 1.0) * sharpness));
}

}  // namespace detail

/// Deterministic brain-slice phantom, min-max normalised to [0, 255].
inline Image make_brain_phantom(std::size_t width, std::size_t height, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };

  const double w = static_cast<double>(width);
  const double h = static_cast<double>(height);
  const double scale = std::min(w, h);

  const detail::Ellipse head{w * uniform(0.47, 0.53), h * uniform(0.47, 0.53),
                             scale * uniform(0.34, 0.40), scale * uniform(0.42, 0.46),
                             uniform(-0.15, 0.15)};
  const double skull_outer = uniform(0.91, 0.94);
  const double brain_outer = uniform(0.85, 0.88);
  const double white_outer = uniform(0.62, 0.70);
  const int folds = static_cast<int>(uniform(9.0, 15.0));
  const double fold_depth = uniform(0.06, 0.10);
  const double fold_phase = uniform(0.0, 2.0 * std::numbers::pi);
  const double fold_fine = uniform(0.02, 0.04);

  const double vent_dx = head.rx * uniform(0.10, 0.16);
  const double vent_dy = head.ry * uniform(-0.08, 0.04);
  const double vent_rx = head.rx * uniform(0.06, 0.10);
  const double vent_ry = head.ry * uniform(0.16, 0.24);
  const detail::Ellipse vent_left{head.cx - vent_dx, head.cy + vent_dy, vent_rx, vent_ry,
                                  head.angle + uniform(0.1, 0.3)};
  const detail::Ellipse vent_right{head.cx + vent_dx, head.cy + vent_dy, vent_rx, vent_ry,
                                   head.angle - uniform(0.1, 0.3)};

  const bool has_lesion = rng.uniform() < 0.7;
  const double lesion_angle = uniform(0.0, 2.0 * std::numbers::pi);
  const double lesion_dist = uniform(0.25, 0.5);
  const double lesion_r = scale * uniform(0.04, 0.08);
  const detail::Ellipse lesion{head.cx + lesion_dist * head.rx * std::cos(lesion_angle),
                               head.cy + lesion_dist * head.ry * std::sin(lesion_angle),
                               lesion_r, lesion_r * uniform(0.7, 1.0), uniform(0.0, 3.0)};

  const double scalp_level = uniform(150, 190);
  const double skull_level = uniform(20, 40);
  const double gray_level = uniform(95, 115);
  const double white_level = uniform(150, 170);
  const double csf_level = uniform(25, 45);
  const double lesion_level = uniform(190, 230);
  const double bias_ax = uniform(-0.12, 0.12);
  const double bias_ay = uniform(-0.12, 0.12);
  const double texture_freq = uniform(0.18, 0.30);
  const double texture_amp = uniform(3.0, 6.0);
  const double grain_sigma = uniform(2.0, 4.0);

  GaussianStream grain(seed ^ 0x5eedULL);
  constexpr double kEdgePx = 0.5;
  constexpr double kSulcusSharpness = 40.0;
  std::vector<double> px(width * height, 0.0);
  for (std::size_t iy = 0; iy < height; ++iy) {
    for (std::size_t ix = 0; ix < width; ++ix) {
      const double x = static_cast<double>(ix) + 0.5;
      const double y = static_cast<double>(iy) + 0.5;
      const double r = head.radius(x, y);
      const double t = head.theta(x, y);
      const double edge_scale = std::min(head.rx, head.ry) / kEdgePx;
      const double sulcus = std::pow(
          std::abs(std::cos(0.5 * (folds * t + fold_phase))), kSulcusSharpness);

      const double head_m = detail::inside(r, edge_scale);
      const double skull_m = detail::inside(r / skull_outer, edge_scale * skull_outer);
      const double brain_m = detail::inside(r / brain_outer, edge_scale * brain_outer);
      const double folded = white_outer * (1.0 + fold_depth * std::sin(folds * t + fold_phase) +
                                           fold_fine * std::sin(3 * folds * t - 2.0 * fold_phase));
      const double white_m = detail::inside(r / folded, edge_scale * folded);
      const double vent_m = std::max(detail::inside(vent_left.radius(x, y), vent_rx),
                                     detail::inside(vent_right.radius(x, y), vent_rx));
      const double texture =
          texture_amp * std::sin(texture_freq * x + 1.7 * std::sin(0.05 * y)) *
          std::cos(texture_freq * 0.8 * y + 1.3 * std::cos(0.04 * x));

      double v = scalp_level * head_m;
      v += (skull_level - scalp_level) * skull_m;
      v += (gray_level + texture - skull_level) * brain_m;
      v += (white_level - gray_level) * white_m * brain_m;
      v += (csf_level - v) * sulcus * brain_m * (1.0 - white_m);
      v += (csf_level - v) * vent_m * brain_m;
      if (has_lesion) {
        const double lr = lesion.radius(x, y);
        const double core = detail::inside(lr, lesion_r);
        const double rim = detail::inside(lr / 1.35, lesion_r * 1.35) - core;
        v += (lesion_level - v) * core * brain_m;
        v += (csf_level + 30.0 - v) * 0.6 * rim * brain_m;
      }
      const double bias = 1.0 + bias_ax * (x / w - 0.5) + bias_ay * (y / h - 0.5);
      px[iy * width + ix] = std::max(v * bias + grain_sigma * head_m * grain.next(), 0.0);
    }
  }
  return normalize(Image(width, height, std::move(px)));
}

}  // namespace wavedenoise
