#include "lsdlab/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace lsdlab;

TEST(GaussHermite, GaussianMoments) {
  const auto one = integrate_gamma([](const Vec&) { return 1.0; }, 1);
  EXPECT_NEAR(one.value, 1.0, 1e-14);

  const auto x2 = integrate_gamma([](const Vec& x) { return x(0) * x(0); }, 1);
  EXPECT_NEAR(x2.value, 1.0, 1e-13);

  const auto x4 = integrate_gamma(
      [](const Vec& x) { return std::pow(x(0), 4); }, 1);
  EXPECT_NEAR(x4.value, 3.0, 1e-12);
}

TEST(GaussHermite, GaussianGrowthIntegrand) {
  // int e^{a x^2} dgamma = 1/sqrt(1-2a); the hardest ratio the corpus
  // produces has a = 3/8
  const double a = 0.375;
  const auto v = integrate_gamma(
      [&](const Vec& x) { return std::exp(a * x(0) * x(0)); }, 1);
  EXPECT_NEAR(v.value, 1.0 / std::sqrt(1.0 - 2.0 * a), 1e-10);
  EXPECT_LT(v.error, 1e-10);
}

TEST(GaussHermite, TensorRule2D) {
  const auto v = integrate_gamma(
      [](const Vec& x) { return x(0) * x(0) * x(1) * x(1); }, 2);
  EXPECT_NEAR(v.value, 1.0, 1e-12);
}

TEST(GaussHermite, RuleCacheIsStable) {
  const auto& r1 = gauss_hermite(64);
  const auto& r2 = gauss_hermite(64);
  EXPECT_EQ(&r1, &r2);
  double mass = 0.0;
  for (double w : r1.weights) mass += w;
  EXPECT_NEAR(mass, 1.0, 1e-14);
}

TEST(GaussLegendre, ExactOnPolynomials) {
  const auto& gl = gauss_legendre(16);
  double acc = 0.0;
  for (int i = 0; i < gl.order(); ++i)
    acc += gl.weights[i] * std::pow(gl.nodes[i], 6);
  EXPECT_NEAR(acc, 2.0 / 7.0, 1e-14);
}

TEST(Adaptive, SmoothIntegrals) {
  const auto s = integrate_adaptive([](double x) { return std::sin(x); }, 0.0,
                                    std::numbers::pi, 1e-12);
  EXPECT_NEAR(s.value, 2.0, 1e-12);

  const auto e = integrate_adaptive([](double x) { return std::exp(x); }, 0.0,
                                    1.0, 1e-12);
  EXPECT_NEAR(e.value, std::numbers::e - 1.0, 1e-12);
}

TEST(Adaptive, EmptyInterval) {
  const auto v = integrate_adaptive([](double) { return 1.0; }, 1.0, 1.0, 1e-9);
  EXPECT_EQ(v.value, 0.0);
}

TEST(Adaptive, ReportsFailureOnDivergentIntegrand) {
  EXPECT_THROW(
      integrate_adaptive([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-10, 200),
      tolerance_error);
}

TEST(NormalQuantile, RoundTripsWithCdf) {
  for (double p : {1e-12, 1e-6, 0.025, 0.5, 0.8, 1.0 - 1e-7}) {
    const double z = normal_quantile(p);
    EXPECT_NEAR(normal_cdf(z), p, 1e-14 + 1e-12 * p) << "p=" << p;
  }
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-12);
  EXPECT_THROW(normal_quantile(0.0), precondition_error);
  EXPECT_THROW(normal_quantile(1.0), precondition_error);
}

TEST(PairwiseSum, MatchesSequentialOnWellConditionedData) {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / (1.0 + i);
  double seq = 0.0;
  for (double x : v) seq += x;
  EXPECT_NEAR(pairwise_sum(v), seq, 1e-12);
}

TEST(FillValues, ThreadCountDoesNotChangeBytes) {
  auto f = [](std::size_t i) { return std::sin(0.1 * i) / (1.0 + i); };
  std::vector<double> a(5000), b(5000);
  fill_values(a, f, 1);
  fill_values(b, f, 4);
  EXPECT_EQ(a, b);

  const auto g = [](const Vec& x) { return std::cos(x(0)); };
  QuadratureConfig two_threads;
  two_threads.threads = 2;
  EXPECT_EQ(integrate_gamma(g, 1, {}).value,
            integrate_gamma(g, 1, two_threads).value);
}

TEST(MonteCarlo, SeededAndDeterministic) {
  QuadratureConfig cfg;
  cfg.mc_samples = 200000;
  const auto g = [](const Vec& x) { return x.squaredNorm(); };
  const auto v1 = integrate_gamma(g, 3, cfg);
  const auto v2 = integrate_gamma(g, 3, cfg);
  EXPECT_EQ(v1.value, v2.value);
  EXPECT_NEAR(v1.value, 3.0, 4.0 * v1.error);
  cfg.mc_seed += 1;
  const auto v3 = integrate_gamma(g, 3, cfg);
  EXPECT_NE(v1.value, v3.value);
}

TEST(QuadratureConfig, Validation) {
  QuadratureConfig cfg;
  cfg.gh_order = 4;
  EXPECT_THROW(cfg.validate(), precondition_error);
  cfg = {};
  cfg.gh_order = 300;  // doubling would overflow the tail evaluation
  EXPECT_THROW(cfg.validate(), precondition_error);
  cfg = {};
  cfg.adaptive_tol = 0.5;
  EXPECT_THROW(cfg.validate(), precondition_error);
  cfg = {};
  EXPECT_NO_THROW(cfg.validate());
}
