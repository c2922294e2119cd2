#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wavedenoise/error.hpp"
#include "wavedenoise/filters.hpp"
#include "wavedenoise/image.hpp"

namespace wavedenoise {

enum class SubbandKind { LL, LH, HL, HH };

constexpr std::string_view to_string(SubbandKind kind) noexcept {
  switch (kind) {
    case SubbandKind::LL: return "LL";
    case SubbandKind::LH: return "LH";
    case SubbandKind::HL: return "HL";
    case SubbandKind::HH: return "HH";
  }
  return "?";
}

/// One coefficient grid of a 2D decomposition.
///
/// LH is low-pass along rows and high-pass along columns (horizontal
/// detail), HL the reverse (vertical detail), HH diagonal detail.
struct Subband {
  SubbandKind kind = SubbandKind::LL;
  int level = 1;
  Grid coeffs;
};

struct DetailLevel {
  Subband lh;
  Subband hl;
  Subband hh;
};

/// Multilevel decomposition. details[k] holds level k + 1 (finest first).
struct Pyramid {
  Subband approx;
  std::vector<DetailLevel> details;
  std::size_t original_width = 0;
  std::size_t original_height = 0;
  std::string filter_bank_name;

  int depth() const noexcept { return static_cast<int>(details.size()); }
};

/// Coefficient count per band for a signal of length n.
constexpr std::size_t half_length(std::size_t n) noexcept { return (n + 1) / 2; }

/// Length of an axis after `level` halvings.
constexpr std::size_t level_length(std::size_t n, int level) noexcept {
  for (int i = 0; i < level; ++i) n = half_length(n);
  return n;
}

namespace detail {

inline std::size_t fold_index(long long p, std::size_t m, Boundary boundary) noexcept {
  const auto len = static_cast<long long>(m);
  if (boundary == Boundary::Periodic) {
    const long long q = p % len;
    return static_cast<std::size_t>(q < 0 ? q + len : q);
  }
  if (m == 1) return 0;
  const long long period = 2 * len - 2;
  long long q = p % period;
  if (q < 0) q += period;
  return static_cast<std::size_t>(q < len ? q : period - q);
}

// Alignment of each band on the even-length working grid. Coefficient k of
// a band sits at position 2k + phase; analysis reads x[2k + phase + dec_offset - i]
// against tap i, synthesis reads u[n + rec_offset - i].
struct BandAlignment {
  long long phase;
  long long dec_offset;
  long long rec_offset;
};

struct BankAlignment {
  BandAlignment lo;
  BandAlignment hi;
};

inline BankAlignment alignment(const FilterBank& fb) noexcept {
  if (fb.boundary == Boundary::Periodic) {
    const auto half = static_cast<long long>(fb.dec_lo.size() / 2);
    return {{0, half, half - 1}, {0, half, half - 1}};
  }
  auto centre = [](const std::vector<double>& f) { return static_cast<long long>(f.size() / 2); };
  return {{0, centre(fb.dec_lo), centre(fb.rec_lo)},
          {1, centre(fb.dec_hi), centre(fb.rec_hi)}};
}

// Copy of `x` (length m) padded by `margin` extension samples on each side.
inline std::vector<double> extend(std::span<const double> x, std::size_t margin, Boundary boundary) {
  const std::size_t m = x.size();
  std::vector<double> ext(m + 2 * margin);
  for (std::size_t i = 0; i < ext.size(); ++i) {
    const long long p = static_cast<long long>(i) - static_cast<long long>(margin);
    ext[i] = x[fold_index(p, m, boundary)];
  }
  return ext;
}

inline void analyse_band(std::span<const double> ext, std::size_t margin,
                         std::span<const double> taps, const BandAlignment& band,
                         std::span<double> out) {
  for (std::size_t k = 0; k < out.size(); ++k) {
    const long long base = static_cast<long long>(margin) + 2 * static_cast<long long>(k) +
                           band.phase + band.dec_offset;
    double acc = 0.0;
    for (std::size_t i = 0; i < taps.size(); ++i) {
      acc += taps[i] * ext[static_cast<std::size_t>(base - static_cast<long long>(i))];
    }
    out[k] = acc;
  }
}

inline void synthesise_band(std::span<const double> coeffs, std::span<const double> taps,
                            const BandAlignment& band, Boundary boundary, std::span<double> out) {
  const std::size_t m = out.size();
  std::vector<double> up(m, 0.0);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    up[2 * k + static_cast<std::size_t>(band.phase)] = coeffs[k];
  }
  const std::size_t margin = taps.size() + 2;
  const std::vector<double> ext = extend(up, margin, boundary);
  for (std::size_t n = 0; n < m; ++n) {
    const long long base = static_cast<long long>(margin + n) + band.rec_offset;
    double acc = 0.0;
    for (std::size_t i = 0; i < taps.size(); ++i) {
      acc += taps[i] * ext[static_cast<std::size_t>(base - static_cast<long long>(i))];
    }
    out[n] += acc;
  }
}

}  // namespace detail

struct DwtBands {
  std::vector<double> approx;
  std::vector<double> detail;
};

/// Single-level analysis. Both outputs have ceil(n/2) samples; odd-length
/// input is padded by repeating its last sample.
inline DwtBands dwt1d(std::span<const double> signal, const FilterBank& fb) {
  if (signal.empty()) throw Error(ErrorCode::InvalidArgument, "dwt1d on an empty signal");
  const std::size_t half = half_length(signal.size());
  std::vector<double> work(signal.begin(), signal.end());
  if (work.size() % 2 == 1) work.push_back(work.back());

  const detail::BankAlignment align = detail::alignment(fb);
  const std::size_t margin = fb.max_filter_length() + 2;
  const std::vector<double> ext = detail::extend(work, margin, fb.boundary);

  DwtBands out{std::vector<double>(half), std::vector<double>(half)};
  detail::analyse_band(ext, margin, fb.dec_lo, align.lo, out.approx);
  detail::analyse_band(ext, margin, fb.dec_hi, align.hi, out.detail);
  return out;
}

/// Single-level synthesis, cropped to target_len.
inline std::vector<double> idwt1d(std::span<const double> approx, std::span<const double> detail,
                                  const FilterBank& fb, std::size_t target_len) {
  if (target_len == 0 || approx.size() != half_length(target_len) ||
      detail.size() != half_length(target_len)) {
    throw Error(ErrorCode::ShapeMismatch,
                "idwt1d: band lengths " + std::to_string(approx.size()) + "/" +
                    std::to_string(detail.size()) + " do not match target length " +
                    std::to_string(target_len));
  }
  const detail::BankAlignment align = detail::alignment(fb);
  std::vector<double> out(2 * approx.size(), 0.0);
  detail::synthesise_band(approx, fb.rec_lo, align.lo, fb.boundary, out);
  detail::synthesise_band(detail, fb.rec_hi, align.hi, fb.boundary, out);
  out.resize(target_len);
  return out;
}

/// Deepest legal decomposition: floor(log2(min_dim / (L - 1))) for the
/// longest analysis filter L, never below 1.
inline int max_depth(std::size_t width, std::size_t height, const FilterBank& fb) {
  const std::size_t min_dim = std::min(width, height);
  const std::size_t span = fb.max_filter_length() - 1;
  int depth = 0;
  while (span * (std::size_t{1} << (depth + 1)) <= min_dim) ++depth;
  return std::max(depth, 1);
}

namespace detail {

struct LevelBands {
  Grid ll, lh, hl, hh;
};

inline void split_columns(const Grid& in, const FilterBank& fb, Grid& lo, Grid& hi) {
  const std::size_t ch = half_length(in.height);
  lo = Grid(in.width, ch);
  hi = Grid(in.width, ch);
  std::vector<double> column(in.height);
  for (std::size_t x = 0; x < in.width; ++x) {
    for (std::size_t y = 0; y < in.height; ++y) column[y] = in(x, y);
    const DwtBands bands = dwt1d(column, fb);
    for (std::size_t y = 0; y < ch; ++y) {
      lo(x, y) = bands.approx[y];
      hi(x, y) = bands.detail[y];
    }
  }
}

inline Grid merge_columns(const Grid& lo, const Grid& hi, const FilterBank& fb,
                          std::size_t height) {
  Grid out(lo.width, height);
  std::vector<double> a(lo.height);
  std::vector<double> d(hi.height);
  for (std::size_t x = 0; x < lo.width; ++x) {
    for (std::size_t y = 0; y < lo.height; ++y) {
      a[y] = lo(x, y);
      d[y] = hi(x, y);
    }
    const std::vector<double> column = idwt1d(a, d, fb, height);
    for (std::size_t y = 0; y < height; ++y) out(x, y) = column[y];
  }
  return out;
}

// Rows first, then columns.
inline LevelBands analyse_level(const Grid& in, const FilterBank& fb) {
  const std::size_t cw = half_length(in.width);
  Grid row_lo(cw, in.height);
  Grid row_hi(cw, in.height);
  for (std::size_t y = 0; y < in.height; ++y) {
    const std::span<const double> row(in.data.data() + y * in.width, in.width);
    const DwtBands bands = dwt1d(row, fb);
    std::copy(bands.approx.begin(), bands.approx.end(), row_lo.data.begin() + y * cw);
    std::copy(bands.detail.begin(), bands.detail.end(), row_hi.data.begin() + y * cw);
  }
  LevelBands out;
  split_columns(row_lo, fb, out.ll, out.lh);
  split_columns(row_hi, fb, out.hl, out.hh);
  return out;
}

inline Grid synthesise_level(const Grid& ll, const Grid& lh, const Grid& hl, const Grid& hh,
                             const FilterBank& fb, std::size_t width, std::size_t height) {
  const Grid row_lo = merge_columns(ll, lh, fb, height);
  const Grid row_hi = merge_columns(hl, hh, fb, height);
  Grid out(width, height);
  for (std::size_t y = 0; y < height; ++y) {
    const std::span<const double> a(row_lo.data.data() + y * row_lo.width, row_lo.width);
    const std::span<const double> d(row_hi.data.data() + y * row_hi.width, row_hi.width);
    const std::vector<double> row = idwt1d(a, d, fb, width);
    std::copy(row.begin(), row.end(), out.data.begin() + y * width);
  }
  return out;
}

}  // namespace detail

/// Multilevel decomposition without the max_depth guard; only requires
/// depth >= 1. decompose() is the checked entry point.
inline Pyramid decompose_levels(const Grid& input, const FilterBank& fb, int depth) {
  if (depth < 1) throw Error(ErrorCode::InvalidArgument, "depth must be at least 1");
  if (input.width == 0 || input.height == 0 || input.data.size() != input.width * input.height) {
    throw Error(ErrorCode::ShapeMismatch, "decompose: malformed input grid");
  }
  Pyramid pyr;
  pyr.original_width = input.width;
  pyr.original_height = input.height;
  pyr.filter_bank_name = fb.name;
  pyr.details.reserve(static_cast<std::size_t>(depth));

  Grid current = input;
  for (int level = 1; level <= depth; ++level) {
    detail::LevelBands bands = detail::analyse_level(current, fb);
    pyr.details.push_back(DetailLevel{{SubbandKind::LH, level, std::move(bands.lh)},
                                      {SubbandKind::HL, level, std::move(bands.hl)},
                                      {SubbandKind::HH, level, std::move(bands.hh)}});
    current = std::move(bands.ll);
  }
  pyr.approx = Subband{SubbandKind::LL, depth, std::move(current)};
  return pyr;
}

inline Grid to_grid(const Image& img) {
  Grid g;
  g.width = img.width();
  g.height = img.height();
  g.data.assign(img.pixels().begin(), img.pixels().end());
  return g;
}

/// Separable multilevel 2D decomposition; rejects depth above max_depth().
inline Pyramid decompose(const Image& img, const FilterBank& fb, int depth) {
  if (depth < 1) throw Error(ErrorCode::InvalidArgument, "depth must be at least 1");
  const int limit = max_depth(img.width(), img.height(), fb);
  if (depth > limit) throw DepthTooLarge(depth, limit);
  return decompose_levels(to_grid(img), fb, depth);
}

/// Check that every subband has the shape implied by original dimensions.
inline void validate_pyramid(const Pyramid& pyr) {
  if (pyr.details.empty()) throw Error(ErrorCode::ShapeMismatch, "pyramid has no levels");
  if (pyr.original_width == 0 || pyr.original_height == 0) {
    throw Error(ErrorCode::ShapeMismatch, "pyramid has a zero original dimension");
  }
  auto check = [&](const Subband& band, int level, SubbandKind kind) {
    const std::size_t w = level_length(pyr.original_width, level);
    const std::size_t h = level_length(pyr.original_height, level);
    if (band.kind != kind || band.level != level || band.coeffs.width != w ||
        band.coeffs.height != h || band.coeffs.data.size() != w * h) {
      throw Error(ErrorCode::ShapeMismatch,
                  std::string("subband ") + std::string(to_string(kind)) + " at level " +
                      std::to_string(level) + " is " + std::to_string(band.coeffs.width) + "x" +
                      std::to_string(band.coeffs.height) + ", expected " + std::to_string(w) +
                      "x" + std::to_string(h));
    }
  };
  for (std::size_t k = 0; k < pyr.details.size(); ++k) {
    const int level = static_cast<int>(k) + 1;
    check(pyr.details[k].lh, level, SubbandKind::LH);
    check(pyr.details[k].hl, level, SubbandKind::HL);
    check(pyr.details[k].hh, level, SubbandKind::HH);
  }
  check(pyr.approx, pyr.depth(), SubbandKind::LL);
}

inline Grid reconstruct_grid(const Pyramid& pyr) {
  validate_pyramid(pyr);
  const FilterBank fb = get_filter_bank(pyr.filter_bank_name);
  Grid current = pyr.approx.coeffs;
  for (int level = pyr.depth(); level >= 1; --level) {
    const DetailLevel& d = pyr.details[static_cast<std::size_t>(level - 1)];
    current = detail::synthesise_level(current, d.lh.coeffs, d.hl.coeffs, d.hh.coeffs, fb,
                                       level_length(pyr.original_width, level - 1),
                                       level_length(pyr.original_height, level - 1));
  }
  return current;
}

/// Inverse of decompose().
inline Image reconstruct(const Pyramid& pyr) {
  Grid g = reconstruct_grid(pyr);
  return Image(g.width, g.height, std::move(g.data));
}

/// Visit every detail subband, finest level first, in LH, HL, HH order.
template <typename Pyr, typename Fn>
void for_each_detail(Pyr& pyr, Fn&& fn) {
  for (auto& level : pyr.details) {
    fn(level.lh);
    fn(level.hl);
    fn(level.hh);
  }
}

}  // namespace wavedenoise
