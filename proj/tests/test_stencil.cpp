#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "pdelin/stencil.hpp"

using namespace pdelin;

TEST(Stencil, LowOrderWeights) {
  const Stencil s1 = make_stencil(1);
  EXPECT_EQ(s1.k(), 1);
  EXPECT_DOUBLE_EQ(s1.r(-1), 1.0);
  EXPECT_DOUBLE_EQ(s1.r(0), -2.0);
  EXPECT_DOUBLE_EQ(s1.r(1), 1.0);
  EXPECT_EQ(s1.r(2), 0.0);

  const auto e2 = make_exact_stencil(2);
  EXPECT_EQ(e2[0], Rational(-5, 2));
  EXPECT_EQ(e2[1], Rational(4, 3));
  EXPECT_EQ(e2[2], Rational(-1, 12));
}

TEST(Stencil, ExactWeightsMatchMomentEquations) {
  for (int k = 1; k <= 16; ++k) {
    EXPECT_EQ(make_exact_stencil(k), oracle::stencil_by_moments(k)) << "k=" << k;
  }
}

TEST(Stencil, FloatWeightsTrackExact) {
  for (int k = 1; k <= 40; ++k) {
    const Stencil s = make_stencil(k);
    const auto e = make_exact_stencil(k);
    for (int j = 0; j <= k; ++j) {
      const double ref = static_cast<double>(e[static_cast<std::size_t>(j)]);
      EXPECT_NEAR(s.r(j), ref, 1e-13 * std::max(1.0, std::abs(ref))) << "k=" << k << " j=" << j;
      EXPECT_EQ(s.r(j), s.r(-j));
    }
  }
}

TEST(Stencil, ExactIdentitiesHold) {
  for (int k = 1; k <= 30; ++k) {
    const auto id = check_exact_identities(k);
    EXPECT_TRUE(id.symmetric) << k;
    EXPECT_TRUE(id.zero_sum) << k;
    EXPECT_TRUE(id.bounded) << k;
    EXPECT_TRUE(id.second_moment) << k;
  }
}

TEST(Stencil, SecondMomentIsPlusOne) {
  EXPECT_TRUE(verify_second_moment(make_stencil(1), 0.0));
  for (int k = 2; k <= 20; ++k) EXPECT_TRUE(verify_second_moment(make_stencil(k), 1e-10)) << k;
  const Stencil wrong = Stencil::from_coefficients({-1.0, 2.0, -1.0});
  EXPECT_FALSE(verify_second_moment(wrong, 1e-10));
}

TEST(Stencil, ClosedFormCoversNegativeIndices) {
  EXPECT_EQ(exact_weight_closed_form(3, -2), exact_weight_closed_form(3, 2));
  EXPECT_EQ(exact_weight_closed_form(3, 1), Rational(3, 2));
  EXPECT_THROW(exact_weight_closed_form(3, 0), InvalidArgument);
  EXPECT_THROW(exact_weight_closed_form(3, 4), InvalidArgument);
}

TEST(Stencil, TruncationErrorWithinEnvelope) {
  const double h = 0.1, x = 0.7;
  for (int k = 1; k <= 4; ++k) {
    const Stencil s = make_stencil(k);
    double approx = 0.0;
    for (int j = -k; j <= k; ++j) approx += s.r(j) * std::sin(x + j * h);
    const double err = std::abs(approx / (h * h) + std::sin(x));
    EXPECT_LE(err, truncation_error_bound(s, h, 1.0)) << k;
  }
  EXPECT_EQ(truncation_error_bound(make_stencil(2), 0.1, 0.0), 0.0);
  EXPECT_THROW(truncation_error_bound(make_stencil(2), 0.0, 1.0), InvalidArgument);
}

TEST(Stencil, RejectsBadInput) {
  EXPECT_THROW(make_stencil(0), InvalidArgument);
  EXPECT_THROW(make_exact_stencil(-1), InvalidArgument);
  EXPECT_THROW(Stencil::from_coefficients({1.0, -2.0}), InvalidArgument);
  EXPECT_THROW(make_stencil(800), PrecisionExhausted);
}
