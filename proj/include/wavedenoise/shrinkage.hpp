#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wavedenoise/dwt.hpp"
#include "wavedenoise/error.hpp"
#include "wavedenoise/filters.hpp"
#include "wavedenoise/image.hpp"

namespace wavedenoise {

enum class ThresholdMethod { Bayes, Universal };
enum class ShrinkageMode { Hard, Soft };

constexpr std::string_view to_string(ThresholdMethod m) noexcept {
  return m == ThresholdMethod::Bayes ? "bayes" : "universal";
}
constexpr std::string_view to_string(ShrinkageMode m) noexcept {
  return m == ShrinkageMode::Hard ? "hard" : "soft";
}

namespace detail {
inline std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}
}  // namespace detail

inline ThresholdMethod parse_threshold_method(std::string_view text) {
  const std::string s = detail::to_lower(text);
  if (s == "bayes") return ThresholdMethod::Bayes;
  if (s == "universal") return ThresholdMethod::Universal;
  throw Error(ErrorCode::InvalidArgument,
              "unknown threshold method '" + std::string(text) + "' (expected bayes or universal)");
}

inline ShrinkageMode parse_shrinkage_mode(std::string_view text) {
  const std::string s = detail::to_lower(text);
  if (s == "hard") return ShrinkageMode::Hard;
  if (s == "soft") return ShrinkageMode::Soft;
  throw Error(ErrorCode::InvalidArgument,
              "unknown shrinkage mode '" + std::string(text) + "' (expected hard or soft)");
}

/// Where the noise standard deviation comes from: a known value, or the
/// median absolute deviation of the finest diagonal subband.
class NoiseSigmaPolicy {
 public:
  static NoiseSigmaPolicy known(double sigma) {
    if (!std::isfinite(sigma) || sigma < 0.0) {
      throw Error(ErrorCode::DomainError, "known noise sigma must be finite and non-negative");
    }
    return NoiseSigmaPolicy(sigma);
  }
  static NoiseSigmaPolicy estimate_mad() { return NoiseSigmaPolicy(std::nullopt); }

  bool is_known() const noexcept { return sigma_.has_value(); }
  double sigma() const { return sigma_.value(); }

 private:
  explicit NoiseSigmaPolicy(std::optional<double> sigma) : sigma_(sigma) {}
  std::optional<double> sigma_;
};

struct DenoiseConfig {
  std::string wavelet = "bior6.8";
  int depth = 2;
  ThresholdMethod method = ThresholdMethod::Universal;
  ShrinkageMode mode = ShrinkageMode::Hard;
  NoiseSigmaPolicy sigma_policy = NoiseSigmaPolicy::estimate_mad();
};

/// sigma * sqrt(2 ln n).
inline double universal_threshold(double sigma_noise, std::size_t n) {
  if (n < 2) throw Error(ErrorCode::DomainError, "universal threshold needs n >= 2");
  if (!(sigma_noise >= 0.0)) throw Error(ErrorCode::DomainError, "noise sigma must be >= 0");
  return sigma_noise * std::sqrt(2.0 * std::log(static_cast<double>(n)));
}

/// Population (divide-by-N) variance.
inline double population_variance(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptySubband, "variance of an empty subband");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double acc = 0.0;
  for (double v : values) acc += (v - mean) * (v - mean);
  return acc / static_cast<double>(values.size());
}

/// Per-subband Bayes threshold sigma_noise^2 / sigma_signal, where
/// sigma_signal = sqrt(max(Var(c) - sigma_noise^2, 0)). Falls back to
/// max|c| when the subband carries no signal variance.
inline double bayes_threshold(std::span<const double> coeffs, double sigma_noise) {
  if (coeffs.empty()) throw Error(ErrorCode::EmptySubband, "Bayes threshold of an empty subband");
  if (!(sigma_noise >= 0.0)) throw Error(ErrorCode::DomainError, "noise sigma must be >= 0");
  const double noise_var = sigma_noise * sigma_noise;
  const double signal_sigma = std::sqrt(std::max(population_variance(coeffs) - noise_var, 0.0));
  if (signal_sigma > 0.0) return noise_var / signal_sigma;
  double peak = 0.0;
  for (double c : coeffs) peak = std::max(peak, std::abs(c));
  return peak;
}

/// median(|HH1|) / 0.6745.
inline double estimate_sigma_mad(const Pyramid& pyr) {
  if (pyr.details.empty()) throw Error(ErrorCode::EmptySubband, "pyramid has no detail levels");
  const std::vector<double>& hh = pyr.details.front().hh.coeffs.data;
  if (hh.empty()) throw Error(ErrorCode::EmptySubband, "finest HH subband is empty");
  std::vector<double> mags(hh.size());
  std::transform(hh.begin(), hh.end(), mags.begin(), [](double c) { return std::abs(c); });
  const std::size_t mid = mags.size() / 2;
  std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(mid), mags.end());
  double median = mags[mid];
  if (mags.size() % 2 == 0) {
    const double lower = *std::max_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(mid));
    median = 0.5 * (lower + median);
  }
  return median / 0.6745;
}

inline double shrink(double c, double tau, ShrinkageMode mode) noexcept {
  const double mag = std::abs(c);
  if (mag <= tau) return 0.0;
  if (mode == ShrinkageMode::Hard) return c;
  return std::copysign(mag - tau, c);
}

inline void apply_threshold_in_place(std::span<double> coeffs, double tau, ShrinkageMode mode) {
  if (!(tau >= 0.0)) throw Error(ErrorCode::DomainError, "threshold must be non-negative");
  for (double& c : coeffs) c = shrink(c, tau, mode);
}

/// Hard: keep c when |c| > tau. Soft: sign(c) (|c| - tau) when |c| > tau.
/// Everything else becomes zero.
inline std::vector<double> apply_threshold(std::span<const double> coeffs, double tau,
                                           ShrinkageMode mode) {
  std::vector<double> out(coeffs.begin(), coeffs.end());
  apply_threshold_in_place(out, tau, mode);
  return out;
}

struct SubbandThreshold {
  SubbandKind kind;
  int level;
  double tau;
};

/// Denoised image together with the noise level used and the threshold
/// applied to each detail subband (finest level first).
struct DenoiseResult {
  Image image;
  double sigma = 0.0;
  bool sigma_estimated = false;
  std::vector<SubbandThreshold> thresholds;
};

inline double resolve_sigma(const NoiseSigmaPolicy& policy, const Pyramid& pyr) {
  return policy.is_known() ? policy.sigma() : estimate_sigma_mad(pyr);
}

/// Decompose, threshold every detail subband, reconstruct. The approximation
/// band is left untouched and the output is not clipped.
inline DenoiseResult denoise_detailed(const Image& img, const DenoiseConfig& cfg) {
  const FilterBank fb = get_filter_bank(cfg.wavelet);
  Pyramid pyr = decompose(img, fb, cfg.depth);
  const double sigma = resolve_sigma(cfg.sigma_policy, pyr);

  std::optional<double> global_tau;
  if (cfg.method == ThresholdMethod::Universal) global_tau = universal_threshold(sigma, img.size());

  std::vector<SubbandThreshold> thresholds;
  thresholds.reserve(pyr.details.size() * 3);
  for_each_detail(pyr, [&](Subband& band) {
    const double tau = global_tau ? *global_tau : bayes_threshold(band.coeffs.data, sigma);
    apply_threshold_in_place(band.coeffs.data, tau, cfg.mode);
    thresholds.push_back({band.kind, band.level, tau});
  });

  return DenoiseResult{reconstruct(pyr), sigma, !cfg.sigma_policy.is_known(), std::move(thresholds)};
}

inline Image denoise(const Image& img, const DenoiseConfig& cfg) {
  return denoise_detailed(img, cfg).image;
}

}  // namespace wavedenoise
