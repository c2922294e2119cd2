#pragma once

#include <algorithm>
#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wavedenoise/error.hpp"

namespace wavedenoise {

/// How a filter bank extends a finite signal past its ends.
enum class Boundary {
  /// Circular wrap. Keeps orthogonal banks orthogonal on even lengths.
  Periodic,
  /// Mirror about the end samples without repeating them. Pairs with
  /// odd-length linear-phase filters.
  WholePointSymmetric,
};

/// Analysis and synthesis filters of one wavelet family.
///
/// Orthogonal families store causal taps (rec filters are the time reversal
/// of the dec filters). Symmetric biorthogonal families store odd-length
/// taps centred on their middle element, so each filter can have its own
/// length.
struct FilterBank {
  std::string name;
  std::vector<double> dec_lo;
  std::vector<double> dec_hi;
  std::vector<double> rec_lo;
  std::vector<double> rec_hi;
  int vanishing_moments_psi = 0;
  int vanishing_moments_phi = 0;
  bool orthogonal = false;
  Boundary boundary = Boundary::Periodic;

  std::size_t max_filter_length() const noexcept {
    return std::max(dec_lo.size(), dec_hi.size());
  }
};

namespace detail {

// Daubechies 3 scaling filter (decomposition, causal order).
inline constexpr std::array<double, 6> kDb3DecLo = {
    0.03522629188570953,  -0.08544127388202666, -0.13501102001025458,
    0.45987750211849154,  0.8068915093110925,   0.33267055295008263,
};

// Symlet 4 scaling filter (decomposition, causal order).
inline constexpr std::array<double, 8> kSym4DecLo = {
    -0.07576571478927333, -0.02963552764599851, 0.49761866763201545, 0.8037387518059161,
    0.29785779560527736,  -0.09921954357684722, -0.012603967262037833, 0.0322231006040427,
};

// CDF biorthogonal 6.8, centred odd-length taps.
inline constexpr std::array<double, 17> kBior68DecLo = {
    0.0019088317364812906, -0.0019142861290887667, -0.016990639867602342,
    0.01193456527972926,   0.04973290349094079,    -0.07726317316720414,
    -0.09405920349573646,  0.4207962846098268,     0.8259229974584023,
    0.4207962846098268,    -0.09405920349573646,   -0.07726317316720414,
    0.04973290349094079,   0.01193456527972926,    -0.016990639867602342,
    -0.0019142861290887667, 0.0019088317364812906,
};

inline constexpr std::array<double, 11> kBior68DecHi = {
    0.014426282505624435, -0.014467504896790148, -0.07872200106262882, 0.04036797903033992,
    0.41784910915027457,  -0.7589077294536541,   0.41784910915027457,  0.04036797903033992,
    -0.07872200106262882, -0.014467504896790148, 0.014426282505624435,
};

inline constexpr std::array<double, 11> kBior68RecLo = {
    0.014426282505624435, 0.014467504896790148, -0.07872200106262882, -0.04036797903033992,
    0.41784910915027457,  0.7589077294536541,   0.41784910915027457,  -0.04036797903033992,
    -0.07872200106262882, 0.014467504896790148, 0.014426282505624435,
};

inline constexpr std::array<double, 17> kBior68RecHi = {
    -0.0019088317364812906, -0.0019142861290887667, 0.016990639867602342,
    0.01193456527972926,    -0.04973290349094079,   -0.07726317316720414,
    0.09405920349573646,    0.4207962846098268,     -0.8259229974584023,
    0.4207962846098268,     0.09405920349573646,    -0.07726317316720414,
    -0.04973290349094079,   0.01193456527972926,    0.016990639867602342,
    -0.0019142861290887667, -0.0019088317364812906,
};

// Quadrature mirror completion of an orthogonal scaling filter.
inline FilterBank orthogonal_bank(std::string name, std::span<const double> dec_lo, int moments) {
  const std::size_t n = dec_lo.size();
  FilterBank fb;
  fb.name = std::move(name);
  fb.dec_lo.assign(dec_lo.begin(), dec_lo.end());
  fb.dec_hi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double tap = dec_lo[n - 1 - i];
    fb.dec_hi[i] = (i % 2 == 0) ? -tap : tap;
  }
  fb.rec_lo.assign(fb.dec_lo.rbegin(), fb.dec_lo.rend());
  fb.rec_hi.assign(fb.dec_hi.rbegin(), fb.dec_hi.rend());
  fb.vanishing_moments_psi = moments;
  fb.vanishing_moments_phi = 0;
  fb.orthogonal = true;
  fb.boundary = Boundary::Periodic;
  return fb;
}

}  // namespace detail

inline constexpr std::array<std::string_view, 3> kSupportedWavelets = {"db3", "sym4", "bior6.8"};

inline bool is_supported_wavelet(std::string_view name) noexcept {
  return std::find(kSupportedWavelets.begin(), kSupportedWavelets.end(), name) !=
         kSupportedWavelets.end();
}

inline FilterBank get_filter_bank(std::string_view name) {
  if (name == "db3") return detail::orthogonal_bank("db3", detail::kDb3DecLo, 3);
  if (name == "sym4") return detail::orthogonal_bank("sym4", detail::kSym4DecLo, 4);
  if (name == "bior6.8") {
    FilterBank fb;
    fb.name = "bior6.8";
    fb.dec_lo.assign(detail::kBior68DecLo.begin(), detail::kBior68DecLo.end());
    fb.dec_hi.assign(detail::kBior68DecHi.begin(), detail::kBior68DecHi.end());
    fb.rec_lo.assign(detail::kBior68RecLo.begin(), detail::kBior68RecLo.end());
    fb.rec_hi.assign(detail::kBior68RecHi.begin(), detail::kBior68RecHi.end());
    // dec_hi kills degree < 6; the synthesis wavelet (rec_hi) kills degree < 8.
    fb.vanishing_moments_psi = 6;
    fb.vanishing_moments_phi = 8;
    fb.orthogonal = false;
    fb.boundary = Boundary::WholePointSymmetric;
    return fb;
  }
  throw Error(ErrorCode::UnknownWavelet,
              "unknown wavelet '" + std::string(name) + "' (expected db3, sym4 or bior6.8)");
}

}  // namespace wavedenoise
