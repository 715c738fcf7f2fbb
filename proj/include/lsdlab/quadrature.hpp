#pragma once

// Quadrature engines used throughout the library: cached Gauss-Hermite rules
// for integrals against the standard Gaussian, Gauss-Legendre rules for
// finite intervals, an adaptive Gauss-Kronrod driver, and a seeded Monte
// Carlo fallback for dimension >= 3.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>
#include <random>
#include <thread>
#include <unordered_map>
#include <vector>

#include "lsdlab/common.hpp"

namespace lsdlab {

struct QuadratureConfig {
  int gh_order = 128;     // 1-D Gauss-Hermite order
  int gh_order_nd = 64;   // per-axis order for tensor rules in dimension 2
  double adaptive_tol = 1e-9;
  long mc_samples = 1000000;  // dimension >= 3 fallback
  std::uint64_t mc_seed = 0x1d5eedULL;
  int threads = 1;

  int order_for(int dim) const { return dim <= 1 ? gh_order : gh_order_nd; }

  void validate() const {
    // the error estimate doubles the order internally; 512-point rules are
    // the largest whose tail evaluation stays in floating-point range
    if (gh_order < 8 || gh_order_nd < 8 || gh_order > 256 || gh_order_nd > 256)
      throw precondition_error("quadrature orders must lie in [8, 256]");
    if (!(adaptive_tol > 0.0 && adaptive_tol <= 1e-2))
      throw precondition_error("adaptive tolerance must lie in (0, 1e-2]");
    if (mc_samples < 1000)
      throw precondition_error("Monte Carlo sample count too small");
    if (threads < 1) throw precondition_error("threads must be >= 1");
  }
};

// ---------------------------------------------------------------------------
// Scalar normal distribution helpers.

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

inline double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

/// Inverse of the standard normal CDF (Wichura's AS 241, double precision).
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw precondition_error("normal_quantile: p must lie in (0,1)");
  const double q = p - 0.5;
  double r;
  if (std::abs(q) <= 0.425) {
    r = 0.180625 - q * q;
    return q *
           (((((((2509.0809287301226727 * r + 33430.575583588128105) * r +
                 67265.770927008700853) *
                    r +
                45921.953931549871457) *
                   r +
               13731.693765509461125) *
                  r +
              1971.5909503065514427) *
                 r +
             133.14166789178437745) *
                r +
            3.387132872796366608) /
           (((((((5226.495278852545703 * r + 28729.085735721942674) * r +
                 39307.89580009271061) *
                    r +
                21213.794301586595867) *
                   r +
               5394.1960214247511077) *
                  r +
              687.1870074920579083) *
                 r +
             42.313330701600911252) *
                r +
            1.0);
  }
  r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
                0.24178072517745061177) *
                   r +
               1.27045825245236838258) *
                  r +
              3.64784832476320460504) *
                 r +
             5.7694972214606914055) *
                r +
            4.6303378461565452959) *
               r +
           1.42343711074968357734) /
          (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
                0.0151986665636164571966) *
                   r +
               0.14810397642748007459) *
                  r +
              0.68976733498510000455) *
                 r +
             1.6763848301838038494) *
                r +
            2.05319162663775882187) *
               r +
           1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                0.0012426609473880784386) *
                   r +
               0.026532189526576123093) *
                  r +
              0.29656057182850489123) *
                 r +
             1.7848265399172913358) *
                r +
            5.4637849111641143699) *
               r +
           6.6579046435011037772) /
          (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) *
                    r +
                1.8463183175100546818e-5) *
                   r +
               7.868691311456132591e-4) *
                  r +
              0.0148753612908506148525) *
                 r +
             0.13692988092273580531) *
                r +
            0.59983220655588793769) *
               r +
           1.0);
  }
  return q < 0.0 ? -val : val;
}

// ---------------------------------------------------------------------------
// Deterministic summation.

/// Pairwise sum; result does not depend on how the values were produced.
inline double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

/// Fills buf[i] = f(i), optionally chunked over threads. The buffer contents
/// (and any downstream pairwise sum) are independent of the thread count.
template <class F>
void fill_values(std::vector<double>& buf, F&& f, int threads) {
  const std::size_t n = buf.size();
  if (threads <= 1 || n < 256) {
    for (std::size_t i = 0; i < n; ++i) buf[i] = f(i);
    return;
  }
  const int nt = std::min<int>(threads, static_cast<int>(n));
  std::vector<std::thread> pool;
  pool.reserve(nt);
  const std::size_t chunk = (n + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) buf[i] = f(i);
    });
  }
  for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// Quadrature rules.

/// Nodes and weights for a normalized weight function (weights sum to the
/// total mass of the measure; 1 for gamma, 2 for Legendre on [-1,1]).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order() const { return static_cast<int>(nodes.size()); }
};

namespace detail {

// Hermite functions psi_k(x) = He_k(x) e^{-x^2/4} / sqrt(k! sqrt(2 pi)):
// the recurrence stays in floating-point range where the raw polynomials
// overflow, which keeps the far-tail weights accurate.
inline void hermite_functions(int m, double x, std::vector<double>& psi) {
  psi.resize(m + 1);
  psi[0] = std::exp(-0.25 * x * x) / std::pow(2.0 * std::numbers::pi, 0.25);
  if (m >= 1) psi[1] = x * psi[0];
  for (int k = 1; k < m; ++k)
    psi[k + 1] =
        (x * psi[k] - std::sqrt(static_cast<double>(k)) * psi[k - 1]) /
        std::sqrt(static_cast<double>(k + 1));
}

inline QuadratureRule build_gauss_hermite(int m) {
  // nodes: Golub-Welsch eigenvalues (absolute accuracy ~1e-15) with Newton
  // polish on He_m; weights: w_i = phi(x_i) / sum_{k<m} psi_k(x_i)^2, which
  // is stable down to weights near the double-precision floor.
  Mat jacobi = Mat::Zero(m, m);
  for (int k = 1; k < m; ++k) {
    const double b = std::sqrt(static_cast<double>(k));
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(jacobi, Eigen::EigenvaluesOnly);
  QuadratureRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  std::vector<double> psi;
  for (int i = 0; i < m; ++i) {
    double x = es.eigenvalues()(i);
    for (int iter = 0; iter < 3; ++iter) {
      hermite_functions(m, x, psi);
      // at a root of He_m: d psi_m / dx = sqrt(m) psi_{m-1} - (x/2) psi_m
      const double deriv =
          std::sqrt(static_cast<double>(m)) * psi[m - 1] - 0.5 * x * psi[m];
      if (deriv == 0.0) break;
      const double dx = psi[m] / deriv;
      x -= dx;
      if (std::abs(dx) < 1e-15 * (1.0 + std::abs(x))) break;
    }
    hermite_functions(m, x, psi);
    double denom = 0.0;
    for (int k = 0; k < m; ++k) denom += psi[k] * psi[k];
    rule.nodes[i] = x;
    rule.weights[i] =
        std::exp(-0.5 * x * x) / (std::sqrt(2.0 * std::numbers::pi) * denom);
  }
  return rule;
}

inline QuadratureRule build_gauss_legendre(int m) {
  QuadratureRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < m; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = m * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[m - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[m - 1 - i] = w;
  }
  return rule;
}

template <QuadratureRule (*Builder)(int)>
const QuadratureRule& cached_rule(int order) {
  static std::mutex mu;
  static std::unordered_map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<QuadratureRule>(Builder(order));
  return *slot;
}

}  // namespace detail

/// Gauss-Hermite rule for integration against gamma: sum w_i g(x_i) ~ E_gamma[g].
inline const QuadratureRule& gauss_hermite(int order) {
  if (order < 1) throw precondition_error("gauss_hermite: order must be >= 1");
  return detail::cached_rule<detail::build_gauss_hermite>(order);
}

/// Gauss-Legendre rule on [-1, 1].
inline const QuadratureRule& gauss_legendre(int order) {
  if (order < 1) throw precondition_error("gauss_legendre: order must be >= 1");
  return detail::cached_rule<detail::build_gauss_legendre>(order);
}

// ---------------------------------------------------------------------------
// Integration against the standard Gaussian.

namespace detail {

class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // Box-Muller on 53-bit uniforms; bit-reproducible for a fixed seed.
    const double u1 = ((rng_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = (rng_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  void fill(Vec& z) {
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = (*this)();
  }

 private:
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Runs g over the tensor Gauss-Hermite grid in `dim` axes. The callback
/// receives a scratch vector valid only for the duration of the call.
template <class F>
double gamma_fixed_order(F&& g, int dim, int order, int threads) {
  const QuadratureRule& rule = gauss_hermite(order);
  const int m = rule.order();
  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(m);
  std::vector<double> vals(total);
  fill_values(
      vals,
      [&](std::size_t flat) {
        thread_local Vec x;
        x.resize(dim);
        std::size_t rem = flat;
        double w = 1.0;
        for (int d = 0; d < dim; ++d) {
          const std::size_t i = rem % m;
          rem /= m;
          x(d) = rule.nodes[i];
          w *= rule.weights[i];
        }
        return w * g(static_cast<const Vec&>(x));
      },
      threads);
  return pairwise_sum(vals);
}

template <class F>
ValueWithError gamma_monte_carlo(F&& g, int dim, const QuadratureConfig& cfg) {
  NormalSampler sampler(cfg.mc_seed);
  const long n = cfg.mc_samples;
  Vec z(dim);
  double sum = 0.0, sumsq = 0.0;
  for (long i = 0; i < n; ++i) {
    sampler.fill(z);
    const double v = g(static_cast<const Vec&>(z));
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / n;
  const double var = std::max(0.0, sumsq / n - mean * mean);
  // 99% confidence half-width as the reported error budget.
  const double err = 2.5758293035489004 * std::sqrt(var / n);
  return {mean, err};
}

}  // namespace detail

/// E_gamma[g] at a fixed Gauss-Hermite order (no error estimate).
template <class F>
double integrate_gamma_fixed(F&& g, int dim, int order, int threads = 1) {
  return detail::gamma_fixed_order(g, dim, order, threads);
}

/// E_gamma[g] with an error estimate from order doubling (Gauss-Hermite,
/// dimensions 1 and 2) or a 99% confidence interval (Monte Carlo, >= 3).
template <class F>
ValueWithError integrate_gamma(F&& g, int dim, const QuadratureConfig& cfg = {}) {
  cfg.validate();
  if (dim >= 3) return detail::gamma_monte_carlo(g, dim, cfg);
  const int order = cfg.order_for(dim);
  const double coarse = detail::gamma_fixed_order(g, dim, order, cfg.threads);
  const double fine = detail::gamma_fixed_order(g, dim, 2 * order, cfg.threads);
  return {fine, std::abs(fine - coarse)};
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod (7-15) on finite intervals.

namespace detail {

// QUADPACK dqk15 constants.
inline constexpr double kGK15Nodes[8] = {
    0.9914553711208126392068547, 0.9491079123427585245261897,
    0.8648644233597690727897128, 0.7415311855993944398638648,
    0.5860872354676911302941448, 0.4058451513773971669066064,
    0.2077849550078984676006894, 0.0};
inline constexpr double kGK15WeightsK[8] = {
    0.0229353220105292249637320, 0.0630920926299785532907007,
    0.1047900103222501838398763, 0.1406532597155259187451896,
    0.1690047266392679028265834, 0.1903505780647854099132564,
    0.2044329400752988924141620, 0.2094821410847278280129992};
inline constexpr double kGK15WeightsG[4] = {
    0.1294849661688696932706114, 0.2797053914892766679014678,
    0.3818300505051189449503698, 0.4179591836734693877551020};

struct GKInterval {
  double a, b, value, error;
  bool operator<(const GKInterval& o) const { return error < o.error; }
};

template <class F>
GKInterval gk15(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double resk = 0.0, resg = 0.0;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kGK15Nodes[i];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    resk += kGK15WeightsK[i] * (f1 + f2);
    if (i % 2 == 1) resg += kGK15WeightsG[i / 2] * (f1 + f2);
  }
  const double fc = f(c);
  resk += kGK15WeightsK[7] * fc;
  resg += kGK15WeightsG[3] * fc;
  return {a, b, resk * h, std::abs((resk - resg) * h)};
}

}  // namespace detail

/// Adaptive integral of f over [a, b]; stops when the accumulated error
/// estimate drops below tol * (1 + |value|). Throws tolerance_error if the
/// interval budget is exhausted first.
template <class F>
ValueWithError integrate_adaptive(F&& f, double a, double b, double tol,
                                  int max_intervals = 4000) {
  if (!(b > a)) return {0.0, 0.0};
  std::priority_queue<detail::GKInterval> queue;
  queue.push(detail::gk15(f, a, b));
  double total = queue.top().value;
  double err = queue.top().error;
  int used = 1;
  while (err > tol * (1.0 + std::abs(total)) && used < max_intervals) {
    const detail::GKInterval worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = detail::gk15(f, worst.a, mid);
    const auto right = detail::gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++used;
  }
  if (err > tol * (1.0 + std::abs(total)) && err > 1e-14 * (1.0 + std::abs(total)))
    throw tolerance_error("integrate_adaptive: tolerance not reached", err);
  return {total, err};
}

}  // namespace lsdlab
