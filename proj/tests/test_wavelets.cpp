#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "test_support.hpp"
#include "wavedenoise/dwt.hpp"

using namespace wavedenoise;

namespace {

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double norm2(const std::vector<double>& v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

double energy(const Pyramid& pyr) {
  double e = 0.0;
  for (double c : pyr.approx.coeffs.data) e += c * c;
  for_each_detail(pyr, [&](const Subband& band) {
    for (double c : band.coeffs.data) e += c * c;
  });
  return e;
}

// Normalized moment of taps against the monomial t^k on the filter support.
double moment(const std::vector<double>& taps, int k) {
  const double centre = 0.5 * static_cast<double>(taps.size() - 1);
  double acc = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < taps.size(); ++i) {
    const double t = (static_cast<double>(i) - centre) / centre;
    acc += taps[i] * std::pow(t, k);
    scale += std::abs(taps[i]);
  }
  return acc / scale;
}

class EachWavelet : public ::testing::TestWithParam<std::string> {};

}  // namespace

TEST(FilterBank, Db3ScalingFilter) {
  const FilterBank fb = get_filter_bank("db3");
  ASSERT_EQ(fb.dec_lo.size(), 6u);
  EXPECT_NEAR(std::accumulate(fb.dec_lo.begin(), fb.dec_lo.end(), 0.0), std::sqrt(2.0), 1e-10);
  EXPECT_TRUE(fb.orthogonal);
}

TEST(FilterBank, Bior68Lengths) {
  const FilterBank fb = get_filter_bank("bior6.8");
  EXPECT_EQ(fb.dec_lo.size(), 17u);
  EXPECT_EQ(fb.rec_lo.size(), 11u);
  EXPECT_EQ(fb.dec_hi.size(), 11u);
  EXPECT_EQ(fb.rec_hi.size(), 17u);
  EXPECT_FALSE(fb.orthogonal);
}

TEST(FilterBank, UnknownName) {
  try {
    get_filter_bank("haar2");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownWavelet);
  }
}

TEST(FilterBank, OrthogonalFamiliesAreTimeReversedAndUnitNorm) {
  for (const char* name : {"db3", "sym4"}) {
    const FilterBank fb = get_filter_bank(name);
    EXPECT_EQ(fb.rec_lo, std::vector<double>(fb.dec_lo.rbegin(), fb.dec_lo.rend())) << name;
    EXPECT_EQ(fb.rec_hi, std::vector<double>(fb.dec_hi.rbegin(), fb.dec_hi.rend())) << name;
    for (const auto* taps : {&fb.dec_lo, &fb.dec_hi, &fb.rec_lo, &fb.rec_hi}) {
      EXPECT_NEAR(norm2(*taps), 1.0, 1e-10) << name;
    }
    // Even shifts of the scaling filter are orthogonal.
    const auto& h = fb.dec_lo;
    for (std::size_t s = 2; s < h.size(); s += 2) {
      double dot = 0.0;
      for (std::size_t i = 0; i + s < h.size(); ++i) dot += h[i] * h[i + s];
      EXPECT_NEAR(dot, 0.0, 1e-10) << name << " shift " << s;
    }
  }
}

TEST(FilterBank, VanishingMomentCounts) {
  EXPECT_EQ(get_filter_bank("db3").vanishing_moments_psi, 3);
  EXPECT_EQ(get_filter_bank("sym4").vanishing_moments_psi, 4);
  EXPECT_EQ(get_filter_bank("bior6.8").vanishing_moments_psi, 6);
  EXPECT_EQ(get_filter_bank("bior6.8").vanishing_moments_phi, 8);
}

TEST_P(EachWavelet, HighpassAnnihilatesLowDegreePolynomials) {
  const FilterBank fb = get_filter_bank(GetParam());
  for (int k = 0; k < fb.vanishing_moments_psi; ++k) {
    EXPECT_LT(std::abs(moment(fb.dec_hi, k)), 1e-6) << "degree " << k;
  }
  // The next degree is not annihilated.
  EXPECT_GT(std::abs(moment(fb.dec_hi, fb.vanishing_moments_psi)), 1e-6);
}

TEST(FilterBank, Bior68SynthesisHighpassMoments) {
  const FilterBank fb = get_filter_bank("bior6.8");
  for (int k = 0; k < fb.vanishing_moments_phi; ++k) {
    EXPECT_LT(std::abs(moment(fb.rec_hi, k)), 1e-6) << "degree " << k;
  }
}

TEST_P(EachWavelet, ConstantSignalHasNoDetail) {
  const FilterBank fb = get_filter_bank(GetParam());
  const std::vector<double> x(4, 5.0);
  const DwtBands bands = dwt1d(x, fb);
  for (double d : bands.detail) EXPECT_NEAR(d, 0.0, 1e-10);
}

TEST(Dwt1d, Db3RampInteriorDetailVanishes) {
  const FilterBank fb = get_filter_bank("db3");
  const std::vector<double> ramp = testing_support::polynomial(8, 1);
  const DwtBands bands = dwt1d(ramp, fb);
  ASSERT_EQ(bands.detail.size(), 4u);
  // Coefficients whose taps stay inside the signal.
  for (std::size_t k : {1u, 2u}) EXPECT_NEAR(bands.detail[k], 0.0, 1e-8) << k;
}

TEST_P(EachWavelet, InteriorDetailOfPolynomialsVanishes) {
  const FilterBank fb = get_filter_bank(GetParam());
  const std::size_t n = 96;
  for (int degree = 0; degree < fb.vanishing_moments_psi; ++degree) {
    std::vector<double> x = testing_support::polynomial(n, degree);
    for (double& v : x) v /= std::pow(static_cast<double>(n), degree);
    const DwtBands bands = dwt1d(x, fb);
    const std::size_t guard = fb.max_filter_length();
    for (std::size_t k = guard; k + guard < bands.detail.size(); ++k) {
      EXPECT_NEAR(bands.detail[k], 0.0, 1e-9) << "degree " << degree << " k " << k;
    }
  }
}

TEST_P(EachWavelet, LengthOneSignal) {
  const FilterBank fb = get_filter_bank(GetParam());
  const std::vector<double> x{3.0};
  const DwtBands bands = dwt1d(x, fb);
  EXPECT_EQ(bands.approx.size(), 1u);
  EXPECT_EQ(bands.detail.size(), 1u);
  EXPECT_NEAR(idwt1d(bands.approx, bands.detail, fb, 1)[0], 3.0, 1e-8);
}

TEST_P(EachWavelet, PerfectReconstructionShortSignal) {
  const FilterBank fb = get_filter_bank(GetParam());
  const std::vector<double> x{1.0, -2.0, 3.0, 0.5};
  const DwtBands bands = dwt1d(x, fb);
  EXPECT_LT(max_abs_diff(idwt1d(bands.approx, bands.detail, fb, x.size()), x), 1e-8);
}

TEST_P(EachWavelet, PerfectReconstructionAllLengths) {
  const FilterBank fb = get_filter_bank(GetParam());
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-100.0, 100.0);
  for (std::size_t n = 1; n <= 70; ++n) {
    std::vector<double> x(n);
    for (double& v : x) v = dist(rng);
    const DwtBands bands = dwt1d(x, fb);
    ASSERT_EQ(bands.approx.size(), (n + 1) / 2);
    EXPECT_LT(max_abs_diff(idwt1d(bands.approx, bands.detail, fb, n), x), 1e-8) << "n = " << n;
  }
}

TEST_P(EachWavelet, ZeroBandsGiveZeroSignal) {
  const FilterBank fb = get_filter_bank(GetParam());
  const std::vector<double> zeros(5, 0.0);
  for (double v : idwt1d(zeros, zeros, fb, 10)) EXPECT_EQ(v, 0.0);
}

TEST_P(EachWavelet, MismatchedBandLengths) {
  const FilterBank fb = get_filter_bank(GetParam());
  const std::vector<double> a(3, 0.0), d(2, 0.0);
  try {
    idwt1d(a, d, fb, 6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
}

TEST(MaxDepth, Formula) {
  EXPECT_EQ(max_depth(8, 8, get_filter_bank("db3")), 1);
  EXPECT_EQ(max_depth(256, 256, get_filter_bank("db3")), 5);
  EXPECT_EQ(max_depth(256, 256, get_filter_bank("sym4")), 5);
  EXPECT_EQ(max_depth(256, 256, get_filter_bank("bior6.8")), 4);
  EXPECT_EQ(max_depth(64, 64, get_filter_bank("bior6.8")), 2);
  EXPECT_EQ(max_depth(33, 47, get_filter_bank("bior6.8")), 1);
  EXPECT_EQ(max_depth(47, 33, get_filter_bank("db3")), 2);
}

TEST_P(EachWavelet, SubbandShapes64) {
  const FilterBank fb = get_filter_bank(GetParam());
  const Pyramid pyr = decompose(testing_support::random_image(64, 64, 1), fb, 2);
  ASSERT_EQ(pyr.depth(), 2);
  for (const Subband* b : {&pyr.details[0].lh, &pyr.details[0].hl, &pyr.details[0].hh}) {
    EXPECT_EQ(b->coeffs.width, 32u);
    EXPECT_EQ(b->coeffs.height, 32u);
    EXPECT_EQ(b->level, 1);
  }
  for (const Subband* b : {&pyr.details[1].lh, &pyr.details[1].hl, &pyr.details[1].hh}) {
    EXPECT_EQ(b->coeffs.width, 16u);
    EXPECT_EQ(b->coeffs.height, 16u);
    EXPECT_EQ(b->level, 2);
  }
  EXPECT_EQ(pyr.approx.kind, SubbandKind::LL);
  EXPECT_EQ(pyr.approx.level, 2);
  EXPECT_EQ(pyr.approx.coeffs.width, 16u);
  EXPECT_EQ(pyr.filter_bank_name, GetParam());
}

TEST_P(EachWavelet, ConstantImageHasNoDetail) {
  const FilterBank fb = get_filter_bank(GetParam());
  for (std::size_t side : {8u, 40u}) {
    const int depth = side == 8 ? 1 : max_depth(side, side, fb);
    const Pyramid pyr = decompose(Image(side, side, 93.0), fb, depth);
    for_each_detail(pyr, [&](const Subband& band) {
      for (double c : band.coeffs.data) EXPECT_NEAR(c, 0.0, 1e-9);
    });
  }
}

TEST(Decompose, DepthTooLargeReportsMaximum) {
  try {
    decompose(Image(8, 8, 1.0), get_filter_bank("db3"), 5);
    FAIL();
  } catch (const DepthTooLarge& e) {
    EXPECT_EQ(e.code(), ErrorCode::DepthTooLarge);
    EXPECT_EQ(e.max_depth(), 1);
    EXPECT_EQ(e.requested(), 5);
    EXPECT_NE(std::string(e.what()).find("maximum depth 1"), std::string::npos);
  }
  EXPECT_THROW(decompose(Image(8, 8, 1.0), get_filter_bank("db3"), 0), Error);
}

TEST_P(EachWavelet, RoundTripOddDimensions) {
  const FilterBank fb = get_filter_bank(GetParam());
  const Image img = testing_support::random_image(33, 47, 3);
  for (int depth = 1; depth <= 3; ++depth) {
    const Pyramid pyr = decompose_levels(to_grid(img), fb, depth);
    const Image back = reconstruct(pyr);
    ASSERT_TRUE(back.same_shape(img));
    EXPECT_LT(max_abs_diff(back.pixels(), img.pixels()), 1e-8) << "depth " << depth;
  }
}

TEST_P(EachWavelet, RoundTripAllLegalDepths) {
  const FilterBank fb = get_filter_bank(GetParam());
  for (auto [w, h] : {std::pair<std::size_t, std::size_t>{256, 256}, {161, 200}, {130, 97}}) {
    const Image img = testing_support::random_image(w, h, w * h);
    for (int depth = 1; depth <= std::min(5, max_depth(w, h, fb)); ++depth) {
      EXPECT_LT(max_abs_diff(reconstruct(decompose(img, fb, depth)).pixels(), img.pixels()), 1e-8)
          << w << "x" << h << " depth " << depth;
    }
  }
}

TEST_P(EachWavelet, ZeroPyramidReconstructsToZero) {
  const FilterBank fb = get_filter_bank(GetParam());
  Pyramid pyr = decompose(testing_support::random_image(40, 36, 8), fb, 1);
  std::fill(pyr.approx.coeffs.data.begin(), pyr.approx.coeffs.data.end(), 0.0);
  for_each_detail(pyr, [](Subband& b) { std::fill(b.coeffs.data.begin(), b.coeffs.data.end(), 0.0); });
  for (double v : reconstruct(pyr).pixels()) EXPECT_EQ(v, 0.0);
}

TEST_P(EachWavelet, TamperedPyramidIsRejected) {
  const FilterBank fb = get_filter_bank(GetParam());
  Pyramid pyr = decompose(testing_support::random_image(64, 64, 8), fb, 2);
  pyr.details[1].lh.coeffs = Grid(17, 16);
  try {
    reconstruct(pyr);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
}

TEST(Decompose, EnergyPreservedForOrthogonalFamilies) {
  for (const char* name : {"db3", "sym4"}) {
    const FilterBank fb = get_filter_bank(name);
    for (auto [w, h] : {std::pair<std::size_t, std::size_t>{64, 64}, {96, 128}, {256, 160}}) {
      const Image img = testing_support::random_image(w, h, w + h, -50.0, 200.0);
      double pixels = 0.0;
      for (double v : img.pixels()) pixels += v * v;
      for (int depth = 1; depth <= max_depth(w, h, fb); ++depth) {
        if (w % (1u << depth) || h % (1u << depth)) continue;
        const double e = energy(decompose(img, fb, depth));
        EXPECT_NEAR(e / pixels, 1.0, 1e-8) << name << " " << w << "x" << h << " depth " << depth;
      }
    }
  }
}

TEST_P(EachWavelet, ShapeLaw) {
  const FilterBank fb = get_filter_bank(GetParam());
  const std::size_t w = 203, h = 171;
  const Pyramid pyr = decompose(testing_support::random_image(w, h, 2), fb, max_depth(w, h, fb));
  for (int k = 1; k <= pyr.depth(); ++k) {
    const std::size_t ew = static_cast<std::size_t>(std::ceil(w / std::pow(2.0, k)));
    const std::size_t eh = static_cast<std::size_t>(std::ceil(h / std::pow(2.0, k)));
    const DetailLevel& lvl = pyr.details[static_cast<std::size_t>(k - 1)];
    for (const Subband* b : {&lvl.lh, &lvl.hl, &lvl.hh}) {
      EXPECT_EQ(b->coeffs.width, ew) << "level " << k;
      EXPECT_EQ(b->coeffs.height, eh) << "level " << k;
    }
  }
  EXPECT_EQ(pyr.approx.coeffs.width, pyr.details.back().hh.coeffs.width);
}

TEST_P(EachWavelet, Linearity) {
  const FilterBank fb = get_filter_bank(GetParam());
  const Image x = testing_support::random_image(50, 43, 21);
  const Image y = testing_support::random_image(50, 43, 22);
  const double a = 1.75, b = -0.4;
  std::vector<double> mix(x.size());
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a * x.pixels()[i] + b * y.pixels()[i];
  const int depth = max_depth(50, 43, fb);
  const Pyramid pm = decompose(Image(50, 43, std::move(mix)), fb, depth);
  const Pyramid px = decompose(x, fb, depth);
  const Pyramid py = decompose(y, fb, depth);

  auto check = [&](const Grid& m, const Grid& gx, const Grid& gy) {
    for (std::size_t i = 0; i < m.data.size(); ++i) {
      EXPECT_NEAR(m.data[i], a * gx.data[i] + b * gy.data[i], 1e-9);
    }
  };
  check(pm.approx.coeffs, px.approx.coeffs, py.approx.coeffs);
  for (std::size_t k = 0; k < pm.details.size(); ++k) {
    check(pm.details[k].lh.coeffs, px.details[k].lh.coeffs, py.details[k].lh.coeffs);
    check(pm.details[k].hl.coeffs, px.details[k].hl.coeffs, py.details[k].hl.coeffs);
    check(pm.details[k].hh.coeffs, px.details[k].hh.coeffs, py.details[k].hh.coeffs);
  }
}

TEST(Decompose, OrientationOfDetailBands) {
  // Horizontal stripes vary along y only: row filtering sees constants, so
  // all energy lands in row-low/column-high (LH).
  const FilterBank fb = get_filter_bank("db3");
  std::vector<double> px(32 * 32);
  for (std::size_t y = 0; y < 32; ++y) {
    for (std::size_t x = 0; x < 32; ++x) px[y * 32 + x] = (y % 2) ? 200.0 : 20.0;
  }
  const Pyramid pyr = decompose(Image(32, 32, std::move(px)), fb, 1);
  double lh = 0.0, hl = 0.0, hh = 0.0;
  for (double c : pyr.details[0].lh.coeffs.data) lh += c * c;
  for (double c : pyr.details[0].hl.coeffs.data) hl += c * c;
  for (double c : pyr.details[0].hh.coeffs.data) hh += c * c;
  EXPECT_GT(lh, 1.0);
  EXPECT_NEAR(hl, 0.0, 1e-12);
  EXPECT_NEAR(hh, 0.0, 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Families, EachWavelet, ::testing::Values("db3", "sym4", "bior6.8"),
                         [](const auto& info) {
                           std::string n = info.param;
                           std::replace(n.begin(), n.end(), '.', '_');
                           return n;
                         });
