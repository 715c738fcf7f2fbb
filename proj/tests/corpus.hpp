#pragma once

// Shared test corpus: the densities every suite runs against, plus the
// closed-form Gaussian oracles used to freeze expected values.

#include <string>
#include <utility>
#include <vector>

#include "lsdlab/density.hpp"

namespace lsdlab::testing {

inline RelativeDensity gaussian1d(double mean, double var) {
  return RelativeDensity(
      GaussianMixture::single(Vec::Constant(1, mean), Mat::Constant(1, 1, var)));
}

inline RelativeDensity mixture1d(
    const std::vector<std::tuple<double, double, double>>& wmv) {
  std::vector<MixtureComponent> cs;
  for (const auto& [w, m, v] : wmv) {
    MixtureComponent c;
    c.weight = w;
    c.mean = Vec::Constant(1, m);
    c.cov = Mat::Constant(1, 1, v);
    cs.push_back(std::move(c));
  }
  return RelativeDensity(GaussianMixture(1, std::move(cs)));
}

inline RelativeDensity gamma1() { return gaussian1d(0.0, 1.0); }
inline RelativeDensity n04() { return gaussian1d(0.0, 4.0); }
inline RelativeDensity n005() { return gaussian1d(0.0, 0.5); }
inline RelativeDensity n008() { return gaussian1d(0.0, 0.8); }
inline RelativeDensity e1() { return gaussian1d(1.0, 1.0); }

inline RelativeDensity sym2() {
  return mixture1d({{0.5, -1.0, 1.0}, {0.5, 1.0, 1.0}});
}

inline RelativeDensity asym3() {
  return mixture1d({{0.5, -1.0, 0.7}, {0.3, 0.5, 1.2}, {0.2, 1.5, 0.5}});
}

inline RelativeDensity shift2() {
  return mixture1d({{0.7, -0.3, 0.6}, {0.3, 0.7, 1.1}});
}

inline RelativeDensity gamma2() {
  return RelativeDensity(GaussianMixture::standard(2));
}

inline RelativeDensity aniso2() {
  Mat cov = Mat::Zero(2, 2);
  cov(0, 0) = 4.0;
  cov(1, 1) = 0.5;
  return RelativeDensity(GaussianMixture::single(Vec::Zero(2), cov));
}

inline RelativeDensity mix2d() {
  std::vector<MixtureComponent> cs(2);
  cs[0].weight = 0.5;
  cs[0].mean = Vec::Zero(2);
  cs[0].mean(0) = -1.0;
  cs[0].cov = Mat::Identity(2, 2);
  cs[1].weight = 0.5;
  cs[1].mean = Vec::Zero(2);
  cs[1].mean(0) = 1.0;
  cs[1].cov = Mat::Identity(2, 2);
  return RelativeDensity(GaussianMixture(2, std::move(cs)));
}

inline RelativeDensity e2m() {
  Vec b(2);
  b << 2.0, -1.0;
  return RelativeDensity(GaussianMixture::single(b, Mat::Identity(2, 2)));
}

/// The 12-density corpus from the acceptance plan.
inline std::vector<std::pair<std::string, RelativeDensity>> corpus() {
  return {{"gamma1", gamma1()},   {"n04", n04()},       {"n005", n005()},
          {"n008", n008()},       {"sym2", sym2()},     {"asym3", asym3()},
          {"shift2", shift2()},   {"e1", e1()},         {"gamma2", gamma2()},
          {"aniso2", aniso2()},   {"mix2d", mix2d()},   {"e2m", e2m()}};
}

// Closed-form functionals of N(m, Sigma) relative to gamma.
inline double gaussian_entropy(const Vec& m, const Mat& sigma) {
  Eigen::LLT<Mat> llt(sigma);
  double logdet = 0.0;
  for (int i = 0; i < sigma.rows(); ++i)
    logdet += 2.0 * std::log(llt.matrixL()(i, i));
  return 0.5 * (sigma.trace() + m.squaredNorm() -
                static_cast<double>(sigma.rows()) - logdet);
}

inline double gaussian_fisher(const Vec& m, const Mat& sigma) {
  const int n = static_cast<int>(sigma.rows());
  const Mat inv = sigma.llt().solve(Mat::Identity(n, n));
  return m.squaredNorm() + (sigma + inv - 2.0 * Mat::Identity(n, n)).trace();
}

inline double gaussian_deficit(const Vec& m, const Mat& sigma) {
  return 0.5 * gaussian_fisher(m, sigma) - gaussian_entropy(m, sigma);
}

/// Variance of N(0, v) after OU time t.
inline double evolved_var(double v, double t) {
  const double e2 = std::exp(-2.0 * t);
  return e2 * v + (1.0 - e2);
}

/// A tabulated copy of a 1-D mixture on a uniform grid.
inline Tabulated1D tabulate(const RelativeDensity& d, double lo, double hi,
                            int points) {
  const auto& mix = d.mixture();
  std::vector<double> grid(points), vals(points);
  Vec x(1);
  for (int i = 0; i < points; ++i) {
    grid[i] = lo + (hi - lo) * i / (points - 1);
    x(0) = grid[i];
    vals[i] = std::exp(mix.log_density(x));
  }
  vals.front() = 0.0;
  vals.back() = 0.0;
  return Tabulated1D(std::move(grid), std::move(vals));
}

}  // namespace lsdlab::testing
