#pragma once

// Wasserstein-2 distances. In one dimension the optimal coupling is the
// quantile coupling, so W2(mu, nu)^2 = E_mu[(X - T(X))^2] with the monotone
// map T = F_nu^{-1} o F_mu; both CDFs are evaluated through erfc and stay
// accurate in either tail, and quantiles are inverted on whichever tail is
// the well-conditioned one.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "lsdlab/common.hpp"
#include "lsdlab/density.hpp"
#include "lsdlab/ou.hpp"
#include "lsdlab/quadrature.hpp"

namespace lsdlab {

struct W2Result {
  double value = 0.0;
  std::string method;
  double error = 0.0;
};

namespace detail {

/// Solves F_mix(x) = p by bisection; q = 1 - p supplied separately so the
/// residual can be formed on the small side.
inline double mixture_quantile(const GaussianMixture& mix, double p, double q) {
  const bool lower = p <= 0.5;
  const double z = lower ? normal_quantile(std::max(p, 1e-310))
                         : -normal_quantile(std::max(q, 1e-310));
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < mix.size(); ++k) {
    const double m = mix.mean(k)(0);
    const double s = std::sqrt(mix.cov(k)(0, 0));
    lo = std::min(lo, m + s * z);
    hi = std::max(hi, m + s * z);
  }
  lo -= 1e-9 * (1.0 + std::abs(lo));
  hi += 1e-9 * (1.0 + std::abs(hi));
  for (int iter = 0; iter < 200 && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double resid = lower ? mix.cdf1(mid) - p : q - mix.sf1(mid);
    if (resid < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Monotone transport map from mu to gamma at x, via the two-sided CDF.
inline double map_to_gamma(const GaussianMixture& mix, double x) {
  const double p = mix.cdf1(x);
  const double q = mix.sf1(x);
  if (p <= q) return normal_quantile(std::max(p, 1e-310));
  return -normal_quantile(std::max(q, 1e-310));
}

}  // namespace detail

/// W2(mu, gamma) in one dimension through the quantile coupling.
inline W2Result w2_1d(const RelativeDensity& d,
                      const QuadratureConfig& cfg = {}) {
  if (d.dim() != 1) throw precondition_error("w2_1d requires dimension 1");
  W2Result out;
  out.method = "quantile-1d";
  if (d.is_mixture()) {
    const auto& mix = d.mixture();
    const ValueWithError sq = expect(
        mix,
        [&](const Vec& x) {
          const double t = x(0) - detail::map_to_gamma(mix, x(0));
          return t * t;
        },
        cfg);
    out.value = std::sqrt(std::max(0.0, sq.value));
    out.error = out.value > 1e-8 ? 0.5 * sq.error / out.value
                                 : std::sqrt(std::max(0.0, sq.error));
    return out;
  }
  const auto& tab = d.tabulated();
  const double total = tab.cdf(tab.xmax());
  const double sq = tab.integrate([&](double x) {
    const double p = std::clamp(tab.cdf(x) / total, 1e-300, 1.0 - 1e-16);
    const double t = x - normal_quantile(p);
    return t * t;
  });
  out.value = std::sqrt(std::max(0.0, sq));
  out.error = 1e-6 * (1.0 + out.value);
  return out;
}

/// Closed-form W2 between N(m, Sigma) and the standard Gaussian:
/// (|m|^2 + tr(Sigma + Id - 2 Sigma^{1/2}))^{1/2}.
inline W2Result w2_gaussian(const Vec& mean, const Mat& cov) {
  const int n = static_cast<int>(mean.size());
  if (cov.rows() != n || cov.cols() != n)
    throw precondition_error("w2_gaussian: shape mismatch");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (cov + cov.transpose()));
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw precondition_error("w2_gaussian: covariance must be positive definite");
  double tr = static_cast<double>(n) + cov.trace();
  for (int i = 0; i < n; ++i) tr -= 2.0 * std::sqrt(es.eigenvalues()(i));
  W2Result out;
  out.method = "gaussian-closed-form";
  out.value = std::sqrt(std::max(0.0, mean.squaredNorm() + tr));
  out.error = 0.0;
  return out;
}

/// W2(mu, gamma) by whichever method applies: quantile coupling in 1-D,
/// the Gaussian closed form for single-component mixtures in any dimension.
inline W2Result w2_to_gamma(const RelativeDensity& d,
                            const QuadratureConfig& cfg = {}) {
  if (d.dim() == 1) return w2_1d(d, cfg);
  const auto& mix = d.mixture();
  if (mix.size() != 1)
    throw precondition_error(
        "W2 in dimension >= 2 is available for Gaussian mu only");
  return w2_gaussian(mix.mean(0), mix.cov(0));
}

/// w(t) = W2(mu, mu_t) along the OU flow (1-D mixtures).
inline std::vector<std::pair<double, W2Result>> w2_flow(
    const RelativeDensity& d, const std::vector<double>& ts,
    const QuadratureConfig& cfg = {}) {
  if (d.dim() != 1 || !d.is_mixture())
    throw precondition_error("w2_flow requires a 1-D mixture density");
  const auto& mix = d.mixture();
  std::vector<std::pair<double, W2Result>> out;
  out.reserve(ts.size());
  for (double t : ts) {
    if (!(t >= 0.0)) throw precondition_error("w2_flow: t must be >= 0");
    const GaussianMixture target = evolve_mixture(mix, t);
    const ValueWithError sq = expect(
        mix,
        [&](const Vec& x) {
          const double p = mix.cdf1(x(0));
          const double q = mix.sf1(x(0));
          const double mapped = detail::mixture_quantile(target, p, q);
          const double diff = x(0) - mapped;
          return diff * diff;
        },
        cfg);
    W2Result r;
    r.method = "flow-grid";
    r.value = std::sqrt(std::max(0.0, sq.value));
    r.error = r.value > 1e-8 ? 0.5 * sq.error / r.value
                             : std::sqrt(std::max(0.0, sq.error));
    out.emplace_back(t, r);
  }
  return out;
}

}  // namespace lsdlab
