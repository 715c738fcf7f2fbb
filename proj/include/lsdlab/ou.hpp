#pragma once

// Ornstein-Uhlenbeck evolution of Gaussian mixtures and the posterior
// machinery for X_t = e^{-t} X + sqrt(1 - e^{-2t}) N: the conditional mean
// E(X | X_t = x), the conditional covariance Z_t(x) = Cov(X | X_t = x), and
// the MMSE representation of the Fisher information. Everything here is
// closed-form Gaussian algebra per component; responsibilities are computed
// in log space with max subtraction.

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "lsdlab/common.hpp"
#include "lsdlab/density.hpp"

namespace lsdlab {

/// Exact OU pushforward of a mixture: component means scale by e^{-t},
/// covariances become e^{-2t} Sigma_k + (1 - e^{-2t}) Id.
inline GaussianMixture evolve_mixture(const GaussianMixture& mix, double t) {
  if (!(t >= 0.0)) throw precondition_error("evolve: t must be >= 0");
  const double e = std::exp(-t);
  const double e2 = e * e;
  const int n = mix.dim();
  std::vector<MixtureComponent> cs(mix.size());
  for (int k = 0; k < mix.size(); ++k) {
    cs[k].weight = mix.weight(k);
    cs[k].mean = e * mix.mean(k);
    cs[k].cov = e2 * mix.cov(k) + (1.0 - e2) * Mat::Identity(n, n);
  }
  return GaussianMixture(n, std::move(cs));
}

struct EvolvedDensity {
  GaussianMixture base;
  double t = 0.0;
  GaussianMixture evolved;
};

inline EvolvedDensity evolve(const RelativeDensity& d, double t) {
  const GaussianMixture& base = d.mixture();
  return {base, t, evolve_mixture(base, t)};
}

/// Conditional law of X given X_t = x for a mixture at a fixed time t > 0.
class PosteriorState {
 public:
  PosteriorState(const GaussianMixture& base, double t) : base_(base), t_(t) {
    if (!(t > 0.0))
      throw precondition_error(
          "conditioning at t = 0 is degenerate (Z_0 = 0)");
    const int n = base.dim();
    const double e = std::exp(-t);
    const Mat id = Mat::Identity(n, n);
    comps_.resize(base.size());
    for (int k = 0; k < base.size(); ++k) {
      Comp& c = comps_[k];
      c.mean_t = e * base.mean(k);
      const Mat st = e * e * base.cov(k) + (1.0 - e * e) * id;
      Eigen::LLT<Mat> llt(st);
      c.st_inv = llt.solve(id);
      c.gain = e * base.cov(k) * c.st_inv;
      c.cond_cov = base.cov(k) - e * c.gain * base.cov(k);
      c.cond_cov = 0.5 * (c.cond_cov + c.cond_cov.transpose()).eval();
      double logdet = 0.0;
      for (int i = 0; i < n; ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
      c.log_norm = std::log(base.weight(k)) - 0.5 * logdet -
                   0.5 * n * std::log(2.0 * std::numbers::pi);
    }
  }

  double t() const { return t_; }
  int dim() const { return base_.dim(); }

  /// Posterior weights of the components given X_t = x.
  Vec responsibilities(const Vec& x) const {
    const int K = static_cast<int>(comps_.size());
    Vec r(K);
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
      const Vec d = x - comps_[k].mean_t;
      r(k) = comps_[k].log_norm - 0.5 * d.dot(comps_[k].st_inv * d);
      best = std::max(best, r(k));
    }
    double acc = 0.0;
    for (int k = 0; k < K; ++k) {
      r(k) = std::exp(r(k) - best);
      acc += r(k);
    }
    return r / acc;
  }

  /// u(x) = E(X | X_t = x) = P_t(xf)(x) / P_t f(x).
  Vec conditional_mean(const Vec& x) const {
    const Vec r = responsibilities(x);
    Vec u = Vec::Zero(dim());
    for (std::size_t k = 0; k < comps_.size(); ++k)
      u += r(k) * component_mean(k, x);
    return u;
  }

  /// Z_t(x) = Cov(X | X_t = x), by the law of total variance over the
  /// components; symmetric positive semi-definite.
  Mat conditional_cov(const Vec& x) const {
    const Vec r = responsibilities(x);
    Vec u = Vec::Zero(dim());
    Mat second = Mat::Zero(dim(), dim());
    for (std::size_t k = 0; k < comps_.size(); ++k) {
      const Vec uk = component_mean(k, x);
      second += r(k) * (comps_[k].cond_cov + uk * uk.transpose());
      u += r(k) * uk;
    }
    Mat z = second - u * u.transpose();
    return 0.5 * (z + z.transpose());
  }

 private:
  struct Comp {
    Vec mean_t;
    Mat gain;      // e^{-t} Sigma_k S_{t,k}^{-1}
    Mat cond_cov;  // Sigma_k - e^{-2t} Sigma_k S_{t,k}^{-1} Sigma_k
    Mat st_inv;
    double log_norm = 0.0;
  };

  Vec component_mean(std::size_t k, const Vec& x) const {
    return base_.mean(static_cast<int>(k)) +
           comps_[k].gain * (x - comps_[k].mean_t);
  }

  GaussianMixture base_;
  double t_;
  std::vector<Comp> comps_;
};

inline Vec conditional_mean(const RelativeDensity& d, double t, const Vec& x) {
  return PosteriorState(d.mixture(), t).conditional_mean(x);
}

inline Mat conditional_cov(const RelativeDensity& d, double t, const Vec& x) {
  return PosteriorState(d.mixture(), t).conditional_cov(x);
}

/// E |E(X|X_t) - e^{-t} X_t|^2, the MMSE against the linear estimator; equals
/// 4 sinh^2(t) I(P_t f).
inline double mmse_fisher(const RelativeDensity& d, double t,
                          const QuadratureConfig& cfg = {}) {
  const GaussianMixture evolved = evolve_mixture(d.mixture(), t);
  const PosteriorState post(d.mixture(), t);
  const double e = std::exp(-t);
  const auto integrand = [&](const Vec& x) {
    return (post.conditional_mean(x) - e * x).squaredNorm();
  };
  const ValueWithError r = expect(evolved, integrand, cfg);
  if (r.error > 1e-6 * (1.0 + std::abs(r.value)))
    throw tolerance_error("mmse_fisher: quadrature did not converge", r.error);
  return r.value;
}

}  // namespace lsdlab
