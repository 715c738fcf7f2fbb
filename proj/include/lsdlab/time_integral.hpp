#pragma once

// Time-axis quadrature for the deficit identity
//   delta(f) = int_0^inf E|Z_t - (1-e^{-2t}) Id|^2 / (16 sinh^4 t) dt.
// The integrand is evaluated in its Hessian form on [0, t_split] (the MMSE
// form is 0/0 there), in its MMSE form on [t_split, t_max] under the
// substitution s = e^{-2t}, and the tail beyond t_max is bounded by the
// e^{-4t} decay of the integrand and charged to the error budget.

#include <cmath>

#include "lsdlab/common.hpp"
#include "lsdlab/density.hpp"
#include "lsdlab/ou.hpp"
#include "lsdlab/quadrature.hpp"

namespace lsdlab {

struct TimeQuadrature {
  double t_split = 0.05;
  double t_max = 12.0;
  double tol = 1e-9;
  int small_t_order = 16;

  void validate() const {
    if (!(t_split > 0.0 && t_max > t_split))
      throw precondition_error("time quadrature needs 0 < t_split < t_max");
    if (!(tol > 0.0 && tol <= 1e-2))
      throw precondition_error("time tolerance must lie in (0, 1e-2]");
    if (small_t_order < 4)
      throw precondition_error("small-t order must be >= 4");
  }
};

/// int P_t f |Hess log P_t f|^2 dgamma, evaluated as an expectation of the
/// squared Hessian of the log relative density under the evolved measure.
inline double hessian_form_integrand(const RelativeDensity& d, double t,
                                     int order, int threads = 1) {
  const GaussianMixture mt = evolve_mixture(d.mixture(), t);
  const int n = mt.dim();
  const Mat id = Mat::Identity(n, n);
  return expect_fixed(
      mt,
      [&](const Vec& x) {
        return (mt.hess_log_density(x) + id).squaredNorm();
      },
      order, threads);
}

/// E|Z_t - (1-e^{-2t}) Id|^2 / (16 sinh^4 t).
inline double mmse_form_integrand(const RelativeDensity& d, double t,
                                  int order, int threads = 1) {
  const GaussianMixture mt = evolve_mixture(d.mixture(), t);
  const PosteriorState post(d.mixture(), t);
  const double c = 1.0 - std::exp(-2.0 * t);
  const int n = mt.dim();
  const Mat id = Mat::Identity(n, n);
  const double sh = std::sinh(t);
  const double raw = expect_fixed(
      mt,
      [&](const Vec& x) {
        return (post.conditional_cov(x) - c * id).squaredNorm();
      },
      order, threads);
  return raw / (16.0 * sh * sh * sh * sh);
}

namespace detail {

struct DeficitParts {
  double small = 0.0;
  double mid = 0.0;
  double mid_error = 0.0;
};

inline DeficitParts deficit_parts(const RelativeDensity& d,
                                  const TimeQuadrature& tq, int order,
                                  int threads) {
  DeficitParts parts;
  const QuadratureRule& gl = gauss_legendre(tq.small_t_order);
  for (int i = 0; i < gl.order(); ++i) {
    const double t = 0.5 * tq.t_split * (gl.nodes[i] + 1.0);
    parts.small +=
        0.5 * tq.t_split * gl.weights[i] * hessian_form_integrand(d, t, order, threads);
  }
  const double s_lo = std::exp(-2.0 * tq.t_max);
  const double s_hi = std::exp(-2.0 * tq.t_split);
  const ValueWithError mid = integrate_adaptive(
      [&](double s) {
        const double t = -0.5 * std::log(s);
        return mmse_form_integrand(d, t, order, threads) / (2.0 * s);
      },
      s_lo, s_hi, tq.tol);
  parts.mid = mid.value;
  parts.mid_error = mid.error;
  return parts;
}

}  // namespace detail

/// The full deficit integral with an error budget that covers the adaptive
/// estimate, spatial order doubling, and the analytic tail bound.
inline ValueWithError deficit_time_integral(const RelativeDensity& d,
                                            const TimeQuadrature& tq = {},
                                            const QuadratureConfig& cfg = {}) {
  tq.validate();
  cfg.validate();
  if (!d.is_mixture())
    throw family_error("deficit_time_integral requires a mixture density");
  const int order = cfg.order_for(d.dim());
  const auto coarse = detail::deficit_parts(d, tq, order, cfg.threads);
  const auto fine = detail::deficit_parts(d, tq, 2 * order, cfg.threads);
  // tail: integrand decays at least like e^{-4(t - t_max)} past t_max
  const double tail = mmse_form_integrand(d, tq.t_max, order, cfg.threads) / 4.0;
  const double value = fine.small + fine.mid;
  const double error = std::abs(value - (coarse.small + coarse.mid)) +
                       fine.mid_error + tail;
  if (error > std::max(tq.tol * 100.0, 1e-4 * (1.0 + std::abs(value))))
    throw tolerance_error("deficit_time_integral: error budget too large",
                          error);
  return {value, error};
}

}  // namespace lsdlab
