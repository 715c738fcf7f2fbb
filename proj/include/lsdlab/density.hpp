#pragma once

// Density families relative to the standard Gaussian gamma: Gaussian
// mixtures (the canonical family, closed under Ornstein-Uhlenbeck
// evolution) and a tabulated 1-D family used for kernel robustness tests.
// All values are immutable after construction; moments are computed once
// at construction time and shared freely across threads.

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <variant>
#include <vector>

#include "lsdlab/common.hpp"
#include "lsdlab/quadrature.hpp"

namespace lsdlab {

struct MixtureComponent {
  double weight = 1.0;
  Vec mean;
  Mat cov;
};

inline constexpr int kMaxDim = 8;
inline constexpr double kMinCovEigenvalue = 1e-10;

/// Weighted mixture of Gaussians on R^n, stored with per-component
/// factorizations of the covariances.
class GaussianMixture {
 public:
  GaussianMixture(int dim, std::vector<MixtureComponent> components)
      : dim_(dim) {
    if (dim < 1 || dim > kMaxDim)
      throw precondition_error("mixture dimension must lie in [1, 8]");
    if (components.empty())
      throw precondition_error("mixture needs at least one component");
    double total = 0.0;
    comps_.reserve(components.size());
    for (auto& c : components) {
      if (!(c.weight > 0.0 && c.weight <= 1.0))
        throw precondition_error("component weights must lie in (0, 1]");
      if (c.mean.size() != dim || c.cov.rows() != dim || c.cov.cols() != dim)
        throw precondition_error("component shape does not match dimension");
      if ((c.cov - c.cov.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw precondition_error("component covariance is not symmetric");
      Mat sym = 0.5 * (c.cov + c.cov.transpose());
      Eigen::SelfAdjointEigenSolver<Mat> es(sym);
      if (es.eigenvalues().minCoeff() <= kMinCovEigenvalue)
        throw precondition_error(
            "component covariance has eigenvalue <= 1e-10");
      total += c.weight;
      Comp comp;
      comp.weight = c.weight;
      comp.log_weight = std::log(c.weight);
      comp.mean = std::move(c.mean);
      comp.cov = std::move(sym);
      comp.llt.compute(comp.cov);
      comp.inv = comp.llt.solve(Mat::Identity(dim, dim));
      double logdet = 0.0;
      for (int i = 0; i < dim; ++i)
        logdet += 2.0 * std::log(comp.llt.matrixL()(i, i));
      comp.log_norm =
          -0.5 * logdet - 0.5 * dim * std::log(2.0 * std::numbers::pi);
      comps_.push_back(std::move(comp));
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw precondition_error("mixture weights must sum to 1");
  }

  static GaussianMixture standard(int dim) {
    return single(Vec::Zero(dim), Mat::Identity(dim, dim));
  }

  static GaussianMixture single(Vec mean, Mat cov) {
    const int n = static_cast<int>(mean.size());
    std::vector<MixtureComponent> c(1);
    c[0].weight = 1.0;
    c[0].mean = std::move(mean);
    c[0].cov = std::move(cov);
    return GaussianMixture(n, std::move(c));
  }

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(comps_.size()); }

  double weight(int k) const { return comps_[k].weight; }
  const Vec& mean(int k) const { return comps_[k].mean; }
  const Mat& cov(int k) const { return comps_[k].cov; }
  const Mat& cov_inverse(int k) const { return comps_[k].inv; }
  const Eigen::LLT<Mat>& cov_llt(int k) const { return comps_[k].llt; }

  /// log of the Lebesgue density, via log-sum-exp over the components.
  double log_density(const Vec& x) const {
    double best = -std::numeric_limits<double>::infinity();
    thread_local std::vector<double> terms;
    terms.resize(comps_.size());
    for (std::size_t k = 0; k < comps_.size(); ++k) {
      terms[k] = log_component(k, x);
      best = std::max(best, terms[k]);
    }
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - best);
    return best + std::log(acc);
  }

  /// Posterior component weights at x (sum to 1).
  Vec responsibilities(const Vec& x) const {
    Vec r(size());
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < size(); ++k) {
      r(k) = log_component(k, x);
      best = std::max(best, r(k));
    }
    double acc = 0.0;
    for (int k = 0; k < size(); ++k) {
      r(k) = std::exp(r(k) - best);
      acc += r(k);
    }
    return r / acc;
  }

  Vec grad_log_density(const Vec& x) const {
    const Vec r = responsibilities(x);
    Vec g = Vec::Zero(dim_);
    for (int k = 0; k < size(); ++k)
      g += r(k) * (comps_[k].inv * (comps_[k].mean - x));
    return g;
  }

  Mat hess_log_density(const Vec& x) const {
    const Vec r = responsibilities(x);
    Mat h = Mat::Zero(dim_, dim_);
    Vec gbar = Vec::Zero(dim_);
    for (int k = 0; k < size(); ++k) {
      const Vec gk = comps_[k].inv * (comps_[k].mean - x);
      h += r(k) * (gk * gk.transpose() - comps_[k].inv);
      gbar += r(k) * gk;
    }
    h -= gbar * gbar.transpose();
    return h;
  }

  Vec barycenter() const {
    Vec b = Vec::Zero(dim_);
    for (const auto& c : comps_) b += c.weight * c.mean;
    return b;
  }

  Mat covariance() const {
    const Vec b = barycenter();
    Mat m = Mat::Zero(dim_, dim_);
    for (const auto& c : comps_)
      m += c.weight * (c.cov + c.mean * c.mean.transpose());
    return m - b * b.transpose();
  }

  double second_moment() const {
    double s = 0.0;
    for (const auto& c : comps_)
      s += c.weight * (c.cov.trace() + c.mean.squaredNorm());
    return s;
  }

  /// Same mixture with every component mean translated by delta.
  GaussianMixture shifted(const Vec& delta) const {
    std::vector<MixtureComponent> cs(comps_.size());
    for (std::size_t k = 0; k < comps_.size(); ++k) {
      cs[k].weight = comps_[k].weight;
      cs[k].mean = comps_[k].mean + delta;
      cs[k].cov = comps_[k].cov;
    }
    return GaussianMixture(dim_, std::move(cs));
  }

  // 1-D CDF and survival function, accurate in both tails.
  double cdf1(double x) const {
    require_1d();
    double acc = 0.0;
    for (const auto& c : comps_)
      acc += c.weight * normal_cdf((x - c.mean(0)) / std::sqrt(c.cov(0, 0)));
    return acc;
  }

  double sf1(double x) const {
    require_1d();
    double acc = 0.0;
    for (const auto& c : comps_)
      acc += c.weight * normal_sf((x - c.mean(0)) / std::sqrt(c.cov(0, 0)));
    return acc;
  }

 private:
  struct Comp {
    double weight = 0.0;
    double log_weight = 0.0;
    Vec mean;
    Mat cov;
    Mat inv;
    Eigen::LLT<Mat> llt;
    double log_norm = 0.0;
  };

  double log_component(std::size_t k, const Vec& x) const {
    const Comp& c = comps_[k];
    const Vec d = x - c.mean;
    return c.log_weight + c.log_norm - 0.5 * d.dot(c.inv * d);
  }

  void require_1d() const {
    if (dim_ != 1) throw precondition_error("operation requires dimension 1");
  }

  int dim_;
  std::vector<Comp> comps_;
};

// ---------------------------------------------------------------------------
// Tabulated 1-D Lebesgue density on a strictly increasing grid, interpolated
// with a natural cubic spline. Auxiliary family; zero outside the grid.

class Tabulated1D {
 public:
  Tabulated1D(std::vector<double> grid, std::vector<double> values)
      : x_(std::move(grid)), y_(std::move(values)) {
    const std::size_t n = x_.size();
    if (n < 8 || y_.size() != n)
      throw precondition_error("tabulated density needs >= 8 grid points");
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (!(x_[i + 1] > x_[i]))
        throw precondition_error("grid must be strictly increasing");
    for (double v : y_)
      if (v < 0.0) throw precondition_error("density values must be >= 0");
    if (y_.front() >= 1e-12 || y_.back() >= 1e-12)
      throw precondition_error(
          "support must be contained in the grid (boundary values < 1e-12)");
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
      mass += 0.5 * (x_[i + 1] - x_[i]) * (y_[i] + y_[i + 1]);
    if (std::abs(mass - 1.0) > 1e-6)
      throw precondition_error("trapezoidal mass deviates from 1 beyond 1e-6");
    build_spline();
  }

  double xmin() const { return x_.front(); }
  double xmax() const { return x_.back(); }
  const std::vector<double>& grid() const { return x_; }
  const std::vector<double>& values() const { return y_; }

  double density(double x) const {
    if (x <= x_.front() || x >= x_.back()) return 0.0;
    const std::size_t i = cell(x);
    const double a = x - x_[i], b = x_[i + 1] - x;
    const double h = x_[i + 1] - x_[i];
    const double A = b / h, B = a / h;
    return A * y_[i] + B * y_[i + 1] +
           ((A * A * A - A) * y2_[i] + (B * B * B - B) * y2_[i + 1]) * h * h /
               6.0;
  }

  double density_deriv(double x) const {
    if (x <= x_.front() || x >= x_.back()) return 0.0;
    const std::size_t i = cell(x);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - x) / h, B = (x - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           ((3.0 * B * B - 1.0) * y2_[i + 1] - (3.0 * A * A - 1.0) * y2_[i]) *
               h / 6.0;
  }

  double density_deriv2(double x) const {
    if (x <= x_.front() || x >= x_.back()) return 0.0;
    const std::size_t i = cell(x);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - x) / h, B = (x - x_[i]) / h;
    return A * y2_[i] + B * y2_[i + 1];
  }

  /// Composite per-cell Simpson integral of g(x) p(x), midpoints from the
  /// spline. Points with vanishing density contribute nothing, so g may be
  /// singular there (log f at the support boundary).
  template <class F>
  double integrate(F&& g) const {
    auto term = [&](double x, double p) { return p > 0.0 ? g(x) * p : 0.0; };
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
      const double h = x_[i + 1] - x_[i];
      const double xm = 0.5 * (x_[i] + x_[i + 1]);
      acc += h / 6.0 *
             (term(x_[i], y_[i]) + 4.0 * term(xm, density(xm)) +
              term(x_[i + 1], y_[i + 1]));
    }
    return acc;
  }

  /// Integral of p over (-inf, x].
  double cdf(double x) const {
    if (x <= x_.front()) return 0.0;
    if (x >= x_.back()) return cdf_.back();
    const std::size_t i = cell(x);
    return cdf_[i] + simpson_density(x_[i], x);
  }

  /// Integral of y p(y) over [x, +inf), used by the Stein kernel.
  double tail_first_moment(double x) const {
    if (x <= x_.front()) return tail_ym_.front();
    if (x >= x_.back()) return 0.0;
    const std::size_t i = cell(x);
    return tail_ym_[i + 1] + simpson_moment(x, x_[i + 1]);
  }

  /// Integral of y p(y) over (-inf, x]; for x < 0 this route avoids the
  /// cancellation the tail accumulation suffers on centered densities.
  double head_first_moment(double x) const {
    if (x <= x_.front()) return 0.0;
    if (x >= x_.back()) return head_ym_.back();
    const std::size_t i = cell(x);
    return head_ym_[i] + simpson_moment(x_[i], x);
  }

 private:
  std::size_t cell(double x) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin());
    return std::min(std::max<std::size_t>(i, 1) - 1, x_.size() - 2);
  }

  double simpson_density(double a, double b) const {
    const double xm = 0.5 * (a + b);
    return (b - a) / 6.0 * (density(a) + 4.0 * density(xm) + density(b));
  }

  double simpson_moment(double a, double b) const {
    const double xm = 0.5 * (a + b);
    return (b - a) / 6.0 *
           (a * density(a) + 4.0 * xm * density(xm) + b * density(b));
  }

  void build_spline() {
    const std::size_t n = x_.size();
    y2_.assign(n, 0.0);
    std::vector<double> u(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double sig = (x_[i] - x_[i - 1]) / (x_[i + 1] - x_[i - 1]);
      const double p = sig * y2_[i - 1] + 2.0;
      y2_[i] = (sig - 1.0) / p;
      u[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]) -
             (y_[i] - y_[i - 1]) / (x_[i] - x_[i - 1]);
      u[i] = (6.0 * u[i] / (x_[i + 1] - x_[i - 1]) - sig * u[i - 1]) / p;
    }
    for (std::size_t k = n - 1; k-- > 1;) y2_[k] = y2_[k] * y2_[k + 1] + u[k];
    y2_[0] = y2_[n - 1] = 0.0;

    cdf_.assign(n, 0.0);
    tail_ym_.assign(n, 0.0);
    head_ym_.assign(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
      cdf_[i] = cdf_[i - 1] + simpson_density(x_[i - 1], x_[i]);
      head_ym_[i] = head_ym_[i - 1] + simpson_moment(x_[i - 1], x_[i]);
    }
    for (std::size_t i = n - 1; i-- > 0;)
      tail_ym_[i] = tail_ym_[i + 1] + simpson_moment(x_[i], x_[i + 1]);
  }

  std::vector<double> x_, y_, y2_, cdf_, tail_ym_, head_ym_;
};

// ---------------------------------------------------------------------------
// RelativeDensity: a probability density f with respect to gamma.

class RelativeDensity {
 public:
  explicit RelativeDensity(GaussianMixture m) : backing_(std::move(m)) {
    const auto& mix = std::get<GaussianMixture>(backing_);
    barycenter_ = mix.barycenter();
    covariance_ = mix.covariance();
    second_moment_ = mix.second_moment();
  }

  explicit RelativeDensity(Tabulated1D t) : backing_(std::move(t)) {
    const auto& tab = std::get<Tabulated1D>(backing_);
    const double m1 = tab.integrate([](double x) { return x; });
    const double m2 = tab.integrate([](double x) { return x * x; });
    barycenter_ = Vec::Constant(1, m1);
    covariance_ = Mat::Constant(1, 1, m2 - m1 * m1);
    second_moment_ = m2;
  }

  int dim() const {
    return is_mixture() ? mixture().dim() : 1;
  }

  bool is_mixture() const {
    return std::holds_alternative<GaussianMixture>(backing_);
  }

  const GaussianMixture& mixture() const {
    if (!is_mixture())
      throw family_error("operation supports only mixture-backed densities");
    return std::get<GaussianMixture>(backing_);
  }

  const Tabulated1D& tabulated() const {
    if (is_mixture())
      throw family_error("density is not tabulated");
    return std::get<Tabulated1D>(backing_);
  }

  /// log f(x) where f = dmu/dgamma.
  double log_value(const Vec& x) const {
    const double half_log2pi = 0.5 * std::log(2.0 * std::numbers::pi);
    if (is_mixture())
      return mixture().log_density(x) + 0.5 * x.squaredNorm() +
             dim() * half_log2pi;
    const double p = tabulated().density(x(0));
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(p) + 0.5 * x.squaredNorm() + half_log2pi;
  }

  double value(const Vec& x) const {
    const double lv = log_value(x);
    return std::isfinite(lv) ? std::exp(lv) : 0.0;
  }

  Vec grad_log(const Vec& x) const {
    if (is_mixture()) return mixture().grad_log_density(x) + x;
    const auto& tab = tabulated();
    const double p = tab.density(x(0));
    Vec g(1);
    g(0) = (p > 0.0 ? tab.density_deriv(x(0)) / p : 0.0) + x(0);
    return g;
  }

  Mat hess_log(const Vec& x) const {
    if (is_mixture())
      return mixture().hess_log_density(x) + Mat::Identity(dim(), dim());
    const auto& tab = tabulated();
    const double p = tab.density(x(0));
    Mat h(1, 1);
    if (p > 0.0) {
      const double lp = tab.density_deriv(x(0)) / p;
      h(0, 0) = tab.density_deriv2(x(0)) / p - lp * lp + 1.0;
    } else {
      h(0, 0) = 1.0;
    }
    return h;
  }

  Vec grad(const Vec& x) const { return value(x) * grad_log(x); }

  Mat hess(const Vec& x) const {
    const Vec gl = grad_log(x);
    return value(x) * (hess_log(x) + gl * gl.transpose());
  }

  const Vec& barycenter() const { return barycenter_; }
  const Mat& covariance() const { return covariance_; }
  double second_moment() const { return second_moment_; }

  bool centered(double tol = 1e-9) const {
    return barycenter_.lpNorm<Eigen::Infinity>() <= tol;
  }

 private:
  std::variant<GaussianMixture, Tabulated1D> backing_;
  Vec barycenter_;
  Mat covariance_;
  double second_moment_;
};

// ---------------------------------------------------------------------------
// Expectations against mu (the measure f dgamma itself).

namespace detail {

template <class F>
double expect_mixture_fixed(const GaussianMixture& mix, F&& g, int order,
                            int threads) {
  const QuadratureRule& rule = gauss_hermite(order);
  const int m = rule.order();
  const int dim = mix.dim();
  std::size_t per = 1;
  for (int d = 0; d < dim; ++d) per *= static_cast<std::size_t>(m);
  std::vector<Mat> chol(mix.size());
  for (int k = 0; k < mix.size(); ++k) chol[k] = mix.cov_llt(k).matrixL();
  std::vector<double> vals(per * mix.size());
  fill_values(
      vals,
      [&](std::size_t flat) {
        const int k = static_cast<int>(flat / per);
        std::size_t rem = flat % per;
        thread_local Vec z, x;
        z.resize(dim);
        double w = 1.0;
        for (int d = 0; d < dim; ++d) {
          const std::size_t i = rem % m;
          rem /= m;
          z(d) = rule.nodes[i];
          w *= rule.weights[i];
        }
        x = mix.mean(k) + chol[k] * z;
        return mix.weight(k) * w * g(static_cast<const Vec&>(x));
      },
      threads);
  return pairwise_sum(vals);
}

template <class F>
ValueWithError expect_mixture_mc(const GaussianMixture& mix, F&& g,
                                 const QuadratureConfig& cfg) {
  // Stratified over components: deterministic per-component sample counts
  // and per-component seeded streams.
  const long total = cfg.mc_samples;
  double value = 0.0, var_of_mean = 0.0;
  for (int k = 0; k < mix.size(); ++k) {
    const long nk =
        std::max<long>(1000, std::lround(mix.weight(k) * total));
    NormalSampler sampler(cfg.mc_seed + 0x9e3779b97f4a7c15ULL * (k + 1));
    const Mat chol = mix.cov_llt(k).matrixL();
    Vec z(mix.dim());
    double s = 0.0, s2 = 0.0;
    for (long i = 0; i < nk; ++i) {
      sampler.fill(z);
      const double v = g(static_cast<const Vec&>(mix.mean(k) + chol * z));
      s += v;
      s2 += v * v;
    }
    const double mk = s / nk;
    const double vk = std::max(0.0, s2 / nk - mk * mk);
    value += mix.weight(k) * mk;
    var_of_mean += mix.weight(k) * mix.weight(k) * vk / nk;
  }
  return {value, 2.5758293035489004 * std::sqrt(var_of_mean)};
}

}  // namespace detail

/// E_mu[g] at fixed spatial order (mixture-backed; no error estimate).
template <class F>
double expect_fixed(const GaussianMixture& mix, F&& g, int order,
                    int threads = 1) {
  return detail::expect_mixture_fixed(mix, g, order, threads);
}

/// E_mu[g] with an order-doubling error estimate (or Monte Carlo CI in
/// dimension >= 3).
template <class F>
ValueWithError expect(const GaussianMixture& mix, F&& g,
                      const QuadratureConfig& cfg = {}) {
  cfg.validate();
  if (mix.dim() >= 3) return detail::expect_mixture_mc(mix, g, cfg);
  const int order = cfg.order_for(mix.dim());
  const double coarse = detail::expect_mixture_fixed(mix, g, order, cfg.threads);
  const double fine =
      detail::expect_mixture_fixed(mix, g, 2 * order, cfg.threads);
  return {fine, std::abs(fine - coarse)};
}

/// E_mu[g] for either backing family.
template <class F>
ValueWithError expect(const RelativeDensity& d, F&& g,
                      const QuadratureConfig& cfg = {}) {
  if (d.is_mixture()) return expect(d.mixture(), g, cfg);
  const auto& tab = d.tabulated();
  Vec x(1);
  const double v = tab.integrate([&](double t) {
    x(0) = t;
    return g(static_cast<const Vec&>(x));
  });
  // Spline-Simpson on the fixed grid: error governed by the grid itself.
  return {v, 1e-8 * (1.0 + std::abs(v))};
}

/// Vector-valued E_mu[g]; sequential accumulation (deterministic).
template <class F>
Vec expect_vec(const RelativeDensity& d, F&& g, int order) {
  if (!d.is_mixture()) {
    const auto& tab = d.tabulated();
    const auto& gx = tab.grid();
    Vec x(1);
    const Eigen::Index out_dim =
        g(Vec::Constant(1, 0.5 * (tab.xmin() + tab.xmax()))).size();
    auto eval = [&](double t) -> Vec {
      const double p = tab.density(t);
      if (p <= 0.0) return Vec::Zero(out_dim);
      x(0) = t;
      return Vec(p * g(static_cast<const Vec&>(x)));
    };
    Vec acc = Vec::Zero(out_dim);
    for (std::size_t i = 0; i + 1 < gx.size(); ++i) {
      const double h = gx[i + 1] - gx[i];
      acc += h / 6.0 *
             (eval(gx[i]) + 4.0 * eval(0.5 * (gx[i] + gx[i + 1])) +
              eval(gx[i + 1]));
    }
    return acc;
  }
  const auto& mix = d.mixture();
  const QuadratureRule& rule = gauss_hermite(order);
  const int m = rule.order();
  const int dim = mix.dim();
  std::size_t per = 1;
  for (int dd = 0; dd < dim; ++dd) per *= static_cast<std::size_t>(m);
  Vec acc;
  bool first = true;
  Vec z(dim), x(dim);
  for (int k = 0; k < mix.size(); ++k) {
    const Mat chol = mix.cov_llt(k).matrixL();
    for (std::size_t flat = 0; flat < per; ++flat) {
      std::size_t rem = flat;
      double w = 1.0;
      for (int dd = 0; dd < dim; ++dd) {
        const std::size_t i = rem % m;
        rem /= m;
        z(dd) = rule.nodes[i];
        w *= rule.weights[i];
      }
      x = mix.mean(k) + chol * z;
      Vec val = g(static_cast<const Vec&>(x));
      if (first) {
        acc = Vec::Zero(val.size());
        first = false;
      }
      acc += mix.weight(k) * w * val;
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Module operations.

/// The extremal density e_b(x) = exp(b.x - |b|^2/2), i.e. N(b, Id).
inline RelativeDensity make_extremal(const Vec& b) {
  return RelativeDensity(
      GaussianMixture::single(b, Mat::Identity(b.size(), b.size())));
}

/// Barycenter and covariance of mu = f dgamma.
inline std::pair<Vec, Mat> barycenter_covariance(const RelativeDensity& d) {
  return {d.barycenter(), d.covariance()};
}

/// The shifted density f_b(x) = f(x+b) exp(-(b.x + |b|^2/2)) with b the
/// barycenter; the result has barycenter zero.
inline RelativeDensity recenter(const RelativeDensity& d) {
  const Vec b = d.barycenter();
  if (d.is_mixture())
    return RelativeDensity(d.mixture().shifted(-b));
  const auto& tab = d.tabulated();
  std::vector<double> grid = tab.grid();
  for (double& x : grid) x -= b(0);
  return RelativeDensity(Tabulated1D(std::move(grid), tab.values()));
}

}  // namespace lsdlab
