#pragma once

// Entropy H(f) = int f log f dgamma, Fisher information
// I(f) = int |grad f|^2 / f dgamma, the log-Sobolev deficit
// delta(f) = I/2 - H, and the semigroup representation facts: the MMSE
// route to the deficit, de Bruijn, Fisher decay, and the rho(t) functional.

#include <cmath>
#include <vector>

#include "lsdlab/common.hpp"
#include "lsdlab/density.hpp"
#include "lsdlab/ou.hpp"
#include "lsdlab/quadrature.hpp"
#include "lsdlab/time_integral.hpp"

namespace lsdlab {

struct FunctionalReport {
  double entropy = 0.0;
  double fisher = 0.0;
  double deficit = 0.0;
  double entropy_error = 0.0;
  double fisher_error = 0.0;
  double deficit_error = 0.0;
};

/// H(f) = E_mu[log f]; the integrand is the log relative density evaluated
/// directly in log space.
inline ValueWithError entropy(const RelativeDensity& d,
                              const QuadratureConfig& cfg = {}) {
  const ValueWithError r =
      expect(d, [&](const Vec& x) { return d.log_value(x); }, cfg);
  if (r.error > 1e-5 * (1.0 + std::abs(r.value)))
    throw tolerance_error("entropy: quadrature did not converge", r.error);
  return r;
}

/// I(f) = E_mu[|grad log f|^2].
inline ValueWithError fisher(const RelativeDensity& d,
                             const QuadratureConfig& cfg = {}) {
  const ValueWithError r =
      expect(d, [&](const Vec& x) { return d.grad_log(x).squaredNorm(); }, cfg);
  if (r.error > 1e-5 * (1.0 + std::abs(r.value)))
    throw tolerance_error("fisher: quadrature did not converge", r.error);
  return r;
}

inline FunctionalReport deficit(const RelativeDensity& d,
                                const QuadratureConfig& cfg = {}) {
  const ValueWithError h = entropy(d, cfg);
  const ValueWithError i = fisher(d, cfg);
  FunctionalReport rep;
  rep.entropy = h.value;
  rep.fisher = i.value;
  rep.deficit = 0.5 * i.value - h.value;
  rep.entropy_error = h.error;
  rep.fisher_error = i.error;
  rep.deficit_error = 0.5 * i.error + h.error;
  return rep;
}

/// The deficit through the conditional-covariance identity; agrees with
/// deficit(d) within the combined budgets.
inline ValueWithError deficit_via_mmse(const RelativeDensity& d,
                                       const TimeQuadrature& tq = {},
                                       const QuadratureConfig& cfg = {}) {
  return deficit_time_integral(d, tq, cfg);
}

/// Fisher information along the flow, I(P_t f).
inline ValueWithError evolved_fisher(const RelativeDensity& d, double t,
                                     const QuadratureConfig& cfg = {}) {
  if (t == 0.0) return fisher(d, cfg);
  return fisher(RelativeDensity(evolve_mixture(d.mixture(), t)), cfg);
}

struct DeBruijnResult {
  double entropy = 0.0;
  double time_integral = 0.0;
  double discrepancy = 0.0;
  double error_budget = 0.0;
};

/// H(f) versus int_0^inf I(P_t f) dt, each side computed independently.
inline DeBruijnResult debruijn_check(const RelativeDensity& d,
                                     const TimeQuadrature& tq = {},
                                     const QuadratureConfig& cfg = {}) {
  const ValueWithError h = entropy(d, cfg);
  const int order = cfg.order_for(d.dim());
  // substitution s = e^{-2t}: the integrand extends continuously to s = 0
  const auto rhs = integrate_adaptive(
      [&](double s) {
        const double t = -0.5 * std::log(s);
        const GaussianMixture mt = evolve_mixture(d.mixture(), t);
        const RelativeDensity dt(mt);
        const double it = expect_fixed(
            mt, [&](const Vec& x) { return dt.grad_log(x).squaredNorm(); },
            order, cfg.threads);
        return it / (2.0 * s);
      },
      0.0, 1.0, std::max(tq.tol, 1e-10));
  DeBruijnResult res;
  res.entropy = h.value;
  res.time_integral = rhs.value;
  res.discrepancy = h.value - rhs.value;
  res.error_budget = h.error + rhs.error;
  return res;
}

struct FisherDecayPoint {
  double t = 0.0;
  double fisher_t = 0.0;
  double bound = 0.0;  // e^{-2t} I(f)
};

/// Checks I(P_t f) <= e^{-2t} I(f) at each requested time. A violation
/// beyond tolerance signals an implementation bug.
inline std::vector<FisherDecayPoint> fisher_decay_check(
    const RelativeDensity& d, const std::vector<double>& ts,
    const QuadratureConfig& cfg = {}) {
  const double i0 = fisher(d, cfg).value;
  const double tol = 1e-10 * std::max(1.0, i0);
  std::vector<FisherDecayPoint> out;
  out.reserve(ts.size());
  for (double t : ts) {
    if (!(t >= 0.0)) throw precondition_error("fisher_decay_check: t >= 0");
    FisherDecayPoint p;
    p.t = t;
    p.fisher_t = evolved_fisher(d, t, cfg).value;
    p.bound = std::exp(-2.0 * t) * i0;
    if (p.fisher_t > p.bound + tol)
      throw inequality_violation(
          "fisher decay violated: I(P_t f) > e^{-2t} I(f)");
    out.push_back(p);
  }
  return out;
}

/// rho(t) = sup_{|alpha|=1} E[(E(alpha.X | X_t))^2], the largest eigenvalue
/// of M_t = E[u(X_t) u(X_t)^T]. Requires a centered density and t > 0.
inline double rho(const RelativeDensity& d, double t,
                  const QuadratureConfig& cfg = {}) {
  if (!d.centered())
    throw precondition_error("rho requires a centered density");
  if (!(t > 0.0)) throw precondition_error("rho requires t > 0");
  const GaussianMixture evolved = evolve_mixture(d.mixture(), t);
  const PosteriorState post(d.mixture(), t);
  const int n = d.dim();
  const RelativeDensity de(evolved);
  const Vec flat = expect_vec(
      de,
      [&](const Vec& x) {
        const Vec u = post.conditional_mean(x);
        Vec v(n * n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) v(i * n + j) = u(i) * u(j);
        return v;
      },
      cfg.order_for(n));
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = flat(i * n + j);
  m = 0.5 * (m + m.transpose()).eval();

  // power iteration on the symmetric PSD matrix M_t
  Vec v = Vec::Ones(n).normalized();
  double lambda = 0.0;
  for (int iter = 0; iter < 10000; ++iter) {
    Vec w = m * v;
    const double norm = w.norm();
    if (norm < 1e-300) return 0.0;
    w /= norm;
    lambda = w.dot(m * w);
    if ((m * w - lambda * w).norm() <= 1e-10 * std::max(1.0, lambda)) {
      return lambda;
    }
    v = w;
  }
  throw tolerance_error("rho: power iteration did not converge", lambda);
}

struct ScaledFisherPoint {
  double t = 0.0;
  double scaled = 0.0;  // e^{2t} I(P_t f)
};

/// e^{2t} I(P_t f) along the flow for centered f; the sequence must be
/// nonincreasing (checked past t = 1) and fall below 1e-3 I(f) by the last
/// requested time.
inline std::vector<ScaledFisherPoint> scaled_fisher_limit_check(
    const RelativeDensity& d, const std::vector<double>& ts,
    const QuadratureConfig& cfg = {}) {
  if (!d.centered())
    throw precondition_error(
        "scaled_fisher_limit_check requires a centered density");
  const double i0 = fisher(d, cfg).value;
  std::vector<ScaledFisherPoint> out;
  out.reserve(ts.size());
  for (double t : ts) {
    ScaledFisherPoint p;
    p.t = t;
    p.scaled = std::exp(2.0 * t) * evolved_fisher(d, t, cfg).value;
    out.push_back(p);
  }
  const double tol = 1e-9 * std::max(1.0, i0);
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i - 1].t >= 1.0 && out[i].scaled > out[i - 1].scaled + tol)
      throw inequality_violation(
          "e^{2t} I(P_t f) increased along the flow");
  }
  if (!out.empty() && out.back().scaled > 1e-3 * i0 + 1e-12)
    throw inequality_violation(
        "e^{2t} I(P_t f) did not fall below 1e-3 I(f)");
  return out;
}

}  // namespace lsdlab
