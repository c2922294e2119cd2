#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "wavedenoise/metrics.hpp"
#include "wavedenoise/noise.hpp"

using namespace wavedenoise;
using testing_support::oracle_mse;
using testing_support::oracle_ssim;
using testing_support::random_image;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InvalidArgument;
}

Image inverted(const Image& x) {
  std::vector<double> px(x.pixels().begin(), x.pixels().end());
  for (double& v : px) v = 255.0 - v;
  return Image(x.width(), x.height(), std::move(px));
}

}  // namespace

TEST(Mse, Examples) {
  const Image x(2, 1, std::vector<double>{0.0, 0.0});
  const Image y(2, 1, std::vector<double>{3.0, 4.0});
  EXPECT_EQ(mse(x, x), 0.0);
  EXPECT_DOUBLE_EQ(mse(x, y), 12.5);
  EXPECT_EQ(code_of([] { mse(Image(2, 2), Image(2, 3)); }), ErrorCode::ShapeMismatch);
}

TEST(Psnr, Examples) {
  EXPECT_NEAR(psnr_from_mse(100.0), 28.1308, 1e-3);
  EXPECT_NEAR(psnr_from_mse(100.0), 28.130803608679106, 1e-12);
  const Image img = random_image(16, 16, 1);
  EXPECT_EQ(psnr(img, img), kInfinitePsnr);
  EXPECT_TRUE(std::isinf(psnr(img, img)));
  EXPECT_NEAR(psnr(Image(8, 8, 0.0), Image(8, 8, 255.0)), 0.0, 1e-12);
  EXPECT_EQ(code_of([] { psnr(Image(2, 2), Image(3, 2)); }), ErrorCode::ShapeMismatch);
}

TEST(Psnr, StrictlyDecreasesWithError) {
  const Image base = random_image(32, 32, 2);
  std::vector<double> px(base.pixels().begin(), base.pixels().end());
  double previous = kInfinitePsnr;
  for (std::size_t i = 0; i < px.size(); i += 37) {
    px[i] += 9.0;
    const double p = psnr(base, Image(32, 32, px));
    EXPECT_LT(p, previous);
    previous = p;
  }
}

TEST(Ssim, IdenticalImagesScoreOne) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Image img = random_image(11 + seed * 7, 13 + seed * 3, seed);
    EXPECT_NEAR(ssim(img, img), 1.0, 1e-12);
  }
  EXPECT_NEAR(ssim(Image(20, 20, 0.0), Image(20, 20, 0.0)), 1.0, 1e-12);
}

TEST(Ssim, InvertedTextureIsNegative) {
  const Image x = testing_support::textured_image(48, 40);
  EXPECT_LT(ssim(x, inverted(x)), 0.0);
}

TEST(Ssim, MatchesBruteForceOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Image x = random_image(32, 32, 100 + seed);
    const Image y = random_image(32, 32, 200 + seed);
    EXPECT_NEAR(ssim(x, y), oracle_ssim(x, y), 1e-9);
    const Image noisy = add_gaussian_noise(x, {0.0, 15.0, seed});
    EXPECT_NEAR(ssim(x, noisy), oracle_ssim(x, noisy), 1e-9);
    EXPECT_NEAR(mse(x, y), oracle_mse(x, y), 1e-9);
  }
}

TEST(Ssim, SingleWindowMatchesGlobalWeightedStatistics) {
  // An 11x11 pair has exactly one valid window.
  const Image x = random_image(11, 11, 5);
  const Image y = random_image(11, 11, 6);
  EXPECT_NEAR(ssim(x, y), oracle_ssim(x, y), 1e-9);
}

TEST(Ssim, Errors) {
  EXPECT_EQ(code_of([] { ssim(Image(10, 30), Image(10, 30)); }), ErrorCode::ImageTooSmall);
  EXPECT_EQ(code_of([] { ssim(Image(30, 30), Image(30, 31)); }), ErrorCode::ShapeMismatch);
}

TEST(Ssim, SymmetricAndBounded) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Image x = random_image(24, 19, seed);
    const Image y = seed % 2 ? inverted(x) : random_image(24, 19, seed + 1000);
    const double s = ssim(x, y);
    EXPECT_NEAR(s, ssim(y, x), 1e-12);
    EXPECT_GE(s, -1.0);
    EXPECT_LE(s, 1.0);
    EXPECT_EQ(mse(x, y), mse(y, x));
  }
}

TEST(NoisyPsnr, MatchesExpectedMse) {
  const Image clean = testing_support::textured_image(256, 256);
  for (double sigma : {10.0, 15.0, 25.0}) {
    const double expected = 10.0 * std::log10(255.0 * 255.0 / (sigma * sigma));
    EXPECT_NEAR(psnr(add_gaussian_noise(clean, {0.0, sigma, 17}), clean), expected, 0.3) << sigma;
  }
  EXPECT_NEAR(10.0 * std::log10(255.0 * 255.0 / 625.0), 20.172003435238352, 1e-12);
}

TEST(EvaluateQuality, BundlesAllMetrics) {
  const Image x = random_image(20, 20, 1);
  const Image y = random_image(20, 20, 2);
  const QualityReport q = evaluate_quality(x, y);
  EXPECT_EQ(q.mse, mse(x, y));
  EXPECT_EQ(q.psnr_db, psnr(x, y));
  EXPECT_EQ(q.ssim, ssim(x, y));
}
