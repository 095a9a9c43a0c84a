#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cjgsvd/error.hpp"
#include "cjgsvd/filter.hpp"

namespace cjgsvd {
namespace {

constexpr double kPi = std::numbers::pi;

// Reference values below were computed once in 30-digit arithmetic and frozen.

TEST(Interval, AnglesAndContainment) {
  const auto iv = make_interval(0.7, 0.8);
  EXPECT_NEAR(iv.alpha, std::acos(2 * 0.49 - 1), 1e-15);
  EXPECT_NEAR(iv.beta, std::acos(2 * 0.64 - 1), 1e-15);
  EXPECT_NEAR(iv.alpha - iv.beta, 0.303795442781719, 1e-14);
  EXPECT_TRUE(iv.contains(0.7));
  EXPECT_TRUE(iv.contains(0.8));
  EXPECT_FALSE(iv.contains(0.69999));
  EXPECT_NEAR(iv.angle_of(0.75), std::acos(2 * 0.5625 - 1), 1e-15);
}

TEST(Interval, RejectsBadEndpoints) {
  EXPECT_THROW(make_interval(0.8, 0.7), InvalidArgument);
  EXPECT_THROW(make_interval(0.5, 0.5), InvalidArgument);
  EXPECT_THROW(make_interval(0.0, 0.5), InvalidArgument);
  EXPECT_THROW(make_interval(0.5, 1.0), InvalidArgument);
  EXPECT_THROW(make_interval(std::nan(""), 0.5), InvalidArgument);
}

TEST(Jackson, SmallDegrees) {
  const auto r1 = jackson_factors(1);
  ASSERT_EQ(r1.size(), 2u);
  EXPECT_NEAR(r1[0], 1.0, 1e-15);
  EXPECT_NEAR(r1[1], 0.5, 1e-15);

  const auto r4 = jackson_factors(4);
  const double want[] = {1.0, 0.8660254037844386, 0.5833333333333333, 0.28867513459481287,
                         0.08333333333333333};
  for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(r4[j], want[j], 1e-15) << j;
}

TEST(Jackson, DecreasingInUnitRange) {
  const auto r = jackson_factors(60);
  EXPECT_DOUBLE_EQ(r[0], 1.0);
  for (std::size_t j = 1; j < r.size(); ++j) {
    EXPECT_LT(r[j], r[j - 1]);
    EXPECT_GT(r[j], 0.0);
  }
}

TEST(StepCoeffs, LeadingTerms) {
  const auto iv = make_interval(0.7, 0.8);
  const auto eta = cheb_step_coeffs(iv, 3);
  EXPECT_NEAR(eta[0], 0.0967010928150031, 1e-14);
  EXPECT_NEAR(eta[1], 2.0 * (std::sin(iv.alpha) - std::sin(iv.beta)) / kPi, 1e-15);
  EXPECT_NEAR(eta[3], 2.0 * (std::sin(3 * iv.alpha) - std::sin(3 * iv.beta)) / (3 * kPi), 1e-15);
}

TEST(MakeFilter, WeightsAreProducts) {
  const auto iv = make_interval(0.3, 0.6);
  const auto f = make_filter(iv, 12);
  const auto rho = jackson_factors(12);
  const auto eta = cheb_step_coeffs(iv, 12);
  ASSERT_EQ(f.weights.size(), 13u);
  for (std::size_t j = 0; j <= 12; ++j) EXPECT_DOUBLE_EQ(f.weights[j], rho[j] * eta[j]);
  EXPECT_EQ(f.d, 12u);
}

TEST(PsiEval, FrozenDegree95Values) {
  const auto f = make_filter(make_interval(0.7, 0.8), 95);
  const std::pair<double, double> cases[] = {
      {-0.02, 0.499905948143399}, {0.0, 0.735949960958500},  {0.1, 0.997745012863374},
      {0.28, 0.499905965646092},  {0.5, 1.78855640685663e-4}, {-0.5, 1.59174551835926e-5},
      {0.9, 3.17107829113849e-6}};
  for (auto [x, want] : cases) EXPECT_NEAR(psi_eval(f, x), want, 1e-12) << x;
}

TEST(PsiEval, ClampsOutsideUnitInterval) {
  const auto f = make_filter(make_interval(0.7, 0.8), 30);
  EXPECT_EQ(psi_eval(f, 1.5), psi_eval(f, 1.0));
  EXPECT_EQ(psi_eval(f, -3.0), psi_eval(f, -1.0));
}

TEST(PsiEval, MatchesCosineSum) {
  const auto f = make_filter(make_interval(0.25, 0.9), 40);
  for (double x : {-0.9, -0.3, 0.0, 0.41, 0.77}) {
    const double t = std::acos(x);
    double sum = 0.0;
    for (std::size_t j = 0; j <= f.d; ++j) sum += f.weights[j] * std::cos(double(j) * t);
    EXPECT_NEAR(psi_eval(f, x), sum, 1e-13);
  }
}

TEST(PsiEval, StaysInUnitInterval) {
  // Jackson damping keeps the approximation nonnegative and below one.
  const auto f = make_filter(make_interval(0.35, 0.55), 80);
  for (int i = 0; i <= 2000; ++i) {
    const double x = -1.0 + i / 1000.0;
    const double v = psi_eval(f, x);
    EXPECT_GE(v, -1e-14);
    EXPECT_LE(v, 1.0 + 1e-14);
  }
}

TEST(StepValue, EndpointsAreHalf) {
  const auto iv = make_interval(0.7, 0.8);
  EXPECT_EQ(step_value(iv, iv.alpha), 0.5);
  EXPECT_EQ(step_value(iv, iv.beta), 0.5);
  EXPECT_EQ(step_value(iv, 0.5 * (iv.alpha + iv.beta)), 1.0);
  EXPECT_EQ(step_value(iv, iv.alpha + 0.1), 0.0);
  EXPECT_EQ(step_value(iv, iv.beta - 0.1), 0.0);
}

TEST(SelectDegree, FrozenValues) {
  EXPECT_EQ(select_degree(make_interval(0.7, 0.8), 2.0), 95u);
  EXPECT_EQ(select_degree(make_interval(0.4, 0.45), 1.0), 185u);
}

TEST(SelectDegree, GrowsWithMultiplier) {
  const auto iv = make_interval(0.5, 0.6);
  EXPECT_LT(select_degree(iv, 1.0), select_degree(iv, 3.0));
  EXPECT_LT(select_degree(iv, 3.0), select_degree(iv, 10.0));
}

TEST(SelectDegree, MultiplierRange) {
  const auto iv = make_interval(0.7, 0.8);
  EXPECT_THROW(select_degree(iv, 0.5), InvalidArgument);
  EXPECT_THROW(select_degree(iv, 10.5), InvalidArgument);
  EXPECT_NO_THROW(select_degree(iv, 1.0));
  EXPECT_NO_THROW(select_degree(iv, 10.0));
}

TEST(PointwiseBound, FrozenValues) {
  EXPECT_NEAR(pointwise_bound(98, 1.0), 4.80694596787652e-4, 1e-17);
  EXPECT_NEAR(pointwise_bound(98, 0.5), 16 * 4.80694596787652e-4, 1e-16);
  EXPECT_THROW(pointwise_bound(10, 0.0), InvalidArgument);
}

TEST(PointwiseBound, HoldsAwayFromEndpoints) {
  const auto iv = make_interval(0.45, 0.7);
  for (std::size_t d : {40u, 120u}) {
    const auto f = make_filter(iv, d);
    for (int i = 1; i < 400; ++i) {
      const double t = kPi * i / 400.0;
      const double gap = std::min(std::abs(t - iv.alpha), std::abs(t - iv.beta));
      if (gap < 1e-3) continue;
      EXPECT_LE(std::abs(step_value(iv, t) - psi_eval(f, std::cos(t))), pointwise_bound(d, gap))
          << "d=" << d << " theta=" << t;
    }
  }
}

TEST(MinDegree, FrozenValues) {
  EXPECT_EQ(min_degree_for_separation(0.2), 105u);
  EXPECT_EQ(min_degree_for_separation(0.1), 266u);
  EXPECT_EQ(min_degree_for_separation(kPi), 1u);
  EXPECT_THROW(min_degree_for_separation(0.0), InvalidArgument);
}

TEST(SpectralMap, DefaultIsIdentityOnSquares) {
  const SpectralMap m;
  EXPECT_TRUE(m.is_identity());
  EXPECT_NEAR(m(0.6), 2 * 0.36 - 1, 1e-15);
  EXPECT_EQ(SpectralMap(Weights{}), m);
}

TEST(SpectralMap, GeneralWeightsAreMonotoneOntoUnitInterval) {
  const SpectralMap m(Weights{2.0, 0.5, 1.5, 3.0});
  EXPECT_FALSE(m.is_identity());
  EXPECT_NEAR(m.lower(), -3.0 / 0.5, 1e-15);
  EXPECT_NEAR(m.upper(), 1.5 / 2.0, 1e-15);
  EXPECT_NEAR(m(0.0), -1.0, 1e-15);
  EXPECT_NEAR(m(1.0), 1.0, 1e-15);
  double prev = -2.0;
  for (int i = 0; i <= 100; ++i) {
    const double v = m(i / 100.0);
    EXPECT_GT(v, prev);
    prev = v;
  }
  const auto iv = make_interval(0.3, 0.5, m);
  EXPECT_GT(iv.alpha, iv.beta);
}

TEST(SpectralMap, InvalidWeights) {
  EXPECT_THROW(SpectralMap(Weights{0.0, 1.0, 1.0, 1.0}), UnboundedSpectrum);
  EXPECT_THROW(SpectralMap(Weights{1.0, 0.0, 1.0, 1.0}), UnboundedSpectrum);
  EXPECT_THROW(SpectralMap(Weights{-1.0, 1.0, 1.0, 1.0}), InvalidArgument);
  EXPECT_THROW(SpectralMap(Weights{1.0, 1.0, 0.0, 0.0}), InvalidArgument);
}

}  // namespace
}  // namespace cjgsvd
