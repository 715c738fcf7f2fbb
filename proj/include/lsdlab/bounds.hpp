#pragma once

// The inequality catalog: every lower bound from the deficit analysis as a
// machine-checkable necessary condition. Right-hand sides built from the
// Stein functionals use certified lower bounds, which keeps every check a
// true necessary condition; "precondition-not-met" is a verdict, not an
// error.

#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lsdlab/common.hpp"
#include "lsdlab/density.hpp"
#include "lsdlab/functionals.hpp"
#include "lsdlab/stein.hpp"
#include "lsdlab/time_integral.hpp"
#include "lsdlab/transport.hpp"

namespace lsdlab {

enum class Verdict { pass, fail, precondition_not_met };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "precondition-not-met";
  }
}

struct SlackReport {
  std::string check;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double error_budget = 0.0;
  Verdict verdict = Verdict::pass;
  std::string note;
};

struct CheckConfig {
  QuadratureConfig quad;
  TimeQuadrature time;
  std::vector<double> cov_eps{0.1, 0.5, 1.0};
  bool adaptive_eps = true;
  BSinusoidFamily b_family = BSinusoidFamily::standard();
  HermiteFamily r_family;
  NormalizationGrid norm_grid = NormalizationGrid::standard();
  double precondition_tol = 1e-10;
};

namespace detail {

inline double theta(double r) { return r - std::log1p(r); }

/// sup_{|alpha|=1} A alpha . alpha  (signed; not a norm).
inline double sym_sup(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.transpose()));
  return es.eigenvalues().maxCoeff();
}

}  // namespace detail

/// Memoizes the per-density quantities shared by the checks (and by the
/// analyze report).
class DensityAnalysis {
 public:
  DensityAnalysis(RelativeDensity density, CheckConfig cfg = {})
      : d_(std::move(density)), cfg_(std::move(cfg)) {}

  const RelativeDensity& density() const { return d_; }
  const CheckConfig& config() const { return cfg_; }
  int dim() const { return d_.dim(); }

  const FunctionalReport& functionals() {
    if (!fun_) fun_ = deficit(d_, cfg_.quad);
    return *fun_;
  }

  ValueWithError deficit_mmse() {
    if (!mmse_) mmse_ = deficit_time_integral(d_, cfg_.time, cfg_.quad);
    return *mmse_;
  }

  const RelativeDensity& recentered() {
    if (!recentered_) recentered_ = recenter(d_);
    return *recentered_;
  }

  double fisher_recentered() {
    if (!fisher_b_) fisher_b_ = fisher(recentered(), cfg_.quad).value;
    return *fisher_b_;
  }

  /// sup_{|alpha|=1} (Gamma - Id) alpha . alpha
  double cov_gap() {
    if (!gap_)
      gap_ = detail::sym_sup(d_.covariance() -
                             Mat::Identity(d_.dim(), d_.dim()));
    return *gap_;
  }

  const SteinFunctionalEstimate& d_est() {
    if (!dest_) dest_ = d_lower_bound(recentered(), cfg_.b_family, cfg_.quad);
    return *dest_;
  }

  const SteinFunctionalEstimate& dtilde_est(double eps) {
    auto it = dtilde_.find(eps);
    if (it == dtilde_.end())
      it = dtilde_
               .emplace(eps, dtilde_lower_bound(recentered(), cfg_.r_family,
                                                eps, cfg_.quad, cfg_.norm_grid))
               .first;
    return it->second;
  }

  double stein_s() {
    if (!s_) s_ = stein_discrepancy(recentered(), cfg_.quad);
    return *s_;
  }

  const W2Result& w2() {
    if (!w2_) w2_ = w2_to_gamma(d_, cfg_.quad);
    return *w2_;
  }

  double rho_at(double t) {
    auto it = rho_.find(t);
    if (it == rho_.end()) it = rho_.emplace(t, rho(d_, t, cfg_.quad)).first;
    return it->second;
  }

 private:
  RelativeDensity d_;
  CheckConfig cfg_;
  std::optional<FunctionalReport> fun_;
  std::optional<ValueWithError> mmse_;
  std::optional<RelativeDensity> recentered_;
  std::optional<double> fisher_b_;
  std::optional<double> gap_;
  std::optional<SteinFunctionalEstimate> dest_;
  std::map<double, SteinFunctionalEstimate> dtilde_;
  std::optional<double> s_;
  std::optional<W2Result> w2_;
  std::map<double, double> rho_;
};

namespace detail {

inline std::string format_eps(double eps) {
  std::ostringstream os;
  os << eps;
  return os.str();
}

inline SlackReport finish(SlackReport r) {
  r.slack = r.lhs - r.rhs;
  if (r.verdict != Verdict::precondition_not_met)
    r.verdict = r.slack >= -r.error_budget ? Verdict::pass : Verdict::fail;
  return r;
}

inline SlackReport not_met(std::string check, std::string why) {
  SlackReport r;
  r.check = std::move(check);
  r.verdict = Verdict::precondition_not_met;
  r.note = std::move(why);
  return r;
}

inline SlackReport run_check(const std::string& name, DensityAnalysis& a) {
  const CheckConfig& cfg = a.config();
  const double ptol = cfg.precondition_tol;
  const int n = a.dim();

  if (name == "LSI") {
    const auto& f = a.functionals();
    SlackReport r;
    r.check = name;
    r.lhs = f.deficit;
    r.rhs = 0.0;
    r.error_budget = f.deficit_error + 1e-12;
    return finish(r);
  }

  if (name == "THM1" || name == "THM1BIS") {
    if (a.cov_gap() > ptol)
      return not_met(name, "requires Gamma <= Id");
    const auto& f = a.functionals();
    SlackReport r;
    r.check = name;
    r.lhs = f.deficit;
    if (name == "THM1") {
      const double dd = a.d_est().value;
      const double ib = a.fisher_recentered();
      r.rhs = std::pow(dd, 4) / (64.0 * (1.0 + ib) * (1.0 + ib));
      r.note = "witness: " + a.d_est().best_parameters;
    } else {
      const double dt = a.dtilde_est(1.0).value;
      r.rhs = 0.25 * std::pow(dt, 4);
      r.note = "witness: " + a.dtilde_est(1.0).best_parameters;
    }
    r.error_budget = f.deficit_error + 1e-9 * (1.0 + r.rhs);
    return finish(r);
  }

  if (name.rfind("COV_EPS[", 0) == 0) {
    const double eps = std::strtod(name.c_str() + 8, nullptr);
    if (!(eps > 0.0 && eps <= 1.0))
      throw spec_error("COV_EPS: eps must lie in (0, 1]");
    const auto& f = a.functionals();
    const double gap = a.cov_gap();
    const double dt = a.dtilde_est(eps).value;
    SlackReport r;
    r.check = name;
    r.lhs = 2.0 * f.deficit + eps * gap * gap;
    r.rhs = std::pow(dt, 4) / (4.0 * eps * eps * eps);
    r.error_budget =
        2.0 * f.deficit_error + 1e-9 * (1.0 + std::abs(r.lhs) + r.rhs);
    r.note = "witness: " + a.dtilde_est(eps).best_parameters;
    return finish(r);
  }

  if (name == "COV_EPS_ADAPTIVE") {
    const auto& f = a.functionals();
    if (f.deficit <= f.deficit_error + 1e-12)
      return not_met(name, "requires delta(f) > 0");
    const double gap = a.cov_gap();
    const double gap2 = gap * gap;
    const double eps = gap2 < 1e-14 ? 1.0 : std::min(1.0, f.deficit / gap2);
    const double dt = a.dtilde_est(eps).value;
    SlackReport r;
    r.check = name;
    r.lhs = 3.0 * f.deficit;
    r.rhs = std::pow(dt, 4) / (4.0 * eps * eps * eps);
    r.error_budget = 3.0 * f.deficit_error + 1e-9 * (1.0 + r.rhs);
    std::ostringstream note;
    note << "eps(delta)=" << eps;
    r.note = note.str();
    return finish(r);
  }

  if (name == "BGRS") {
    if (a.density().second_moment() > n + ptol)
      return not_met(name, "requires int |x|^2 dmu <= n");
    const auto& f = a.functionals();
    const W2Result w = a.w2();
    SlackReport r;
    r.check = name;
    r.lhs = f.deficit;
    r.rhs = std::pow(w.value, 4) / (4.0 * n);
    r.error_budget = f.deficit_error +
                     std::pow(w.value, 3) / n * w.error + 1e-12;
    return finish(r);
  }

  if (name == "FD") {
    if (a.density().second_moment() > n + ptol)
      return not_met(name, "requires int |x|^2 dmu <= n");
    const auto& f = a.functionals();
    const auto& d = a.density();
    const int order = cfg.quad.order_for(n);
    const auto fd = integrate_adaptive(
        [&](double s) {
          const double t = -0.5 * std::log(s);
          const GaussianMixture mt = evolve_mixture(d.mixture(), t);
          const RelativeDensity dt(mt);
          const double it = expect_fixed(
              mt, [&](const Vec& x) { return dt.grad_log(x).squaredNorm(); },
              order, cfg.quad.threads);
          return it * it / (2.0 * s);
        },
        0.0, 1.0, 1e-10);
    SlackReport r;
    r.check = name;
    r.lhs = f.deficit;
    r.rhs = fd.value / n;
    r.error_budget = f.deficit_error + fd.error / n + 1e-12;
    return finish(r);
  }

  if (name == "STEIN_W2" || name == "STEIN_W2_IMPROVED" || name == "HSI") {
    if (!a.density().centered(1e-9))
      return not_met(name, "requires centered mu");
    const double s = a.stein_s();
    if (s <= 1e-8) return not_met(name, "S(mu|gamma) = 0 (ratio undefined)");
    const auto& f = a.functionals();
    SlackReport r;
    r.check = name;
    if (name == "HSI") {
      const double arg = 1.0 + f.fisher / (s * s);
      r.lhs = 0.5 * s * s * std::log(arg);
      r.rhs = f.entropy;
      r.error_budget =
          f.entropy_error + f.fisher_error / (2.0 * arg) + 1e-12;
      return finish(r);
    }
    const W2Result w = a.w2();
    if (name == "STEIN_W2") {
      r.lhs = f.deficit;
      r.rhs = std::pow(w.value, 4) / (4.0 * s * s);
      r.error_budget = f.deficit_error +
                       std::pow(w.value, 3) / (s * s) * w.error + 1e-12;
      return finish(r);
    }
    if (w.value > s + 1e-8)
      return not_met(name, "requires W2 <= S");
    const double ratio = w.value / s;
    const double lg = std::log(1.0 / std::cos(ratio));
    r.lhs = f.deficit;
    r.rhs = s * s * lg * lg;
    r.error_budget = f.deficit_error + 1e-9 * (1.0 + r.rhs);
    return finish(r);
  }

  if (name == "DIM_LSI") {
    const auto& f = a.functionals();
    // double integration by parts: int Delta f dgamma = int |x|^2 dmu - n
    const double lap = a.density().second_moment() - n;
    const double rr = (f.fisher - lap) / n;
    if (rr <= -1.0)
      throw inequality_violation(
          "DIM_LSI: argument of the logarithm is not positive");
    SlackReport r;
    r.check = name;
    r.lhs = 0.5 * lap + 0.5 * n * std::log1p(rr);
    r.rhs = f.entropy;
    // identical slack through theta(r) = r - log(1+r):
    // lhs - rhs = delta - (n/2) theta(rr)
    r.slack = f.deficit - 0.5 * n * detail::theta(rr);
    r.error_budget = f.entropy_error + f.fisher_error + 1e-12;
    r.verdict = r.slack >= -r.error_budget ? Verdict::pass : Verdict::fail;
    return r;
  }

  if (name == "D_LE_S") {
    if (a.dim() != 1 || !a.density().centered(1e-9))
      return not_met(name, "requires centered 1-D mu");
    SlackReport r;
    r.check = name;
    r.lhs = a.stein_s();
    r.rhs = a.d_est().value;
    r.error_budget = 1e-8;
    r.note = "witness: " + a.d_est().best_parameters;
    return finish(r);
  }

  if (name == "COV_FROM_DEFICIT") {
    if (!a.density().centered(1e-9))
      return not_met(name, "requires centered mu");
    if (!a.density().is_mixture())
      return not_met(name, "requires a mixture density");
    const double gap = a.cov_gap();
    const double gap2 = gap * gap;
    if (gap2 <= 1e-8)
      return not_met(name, "requires ||Gamma - Id|| > 0");
    // first grid t0 such that 2 e^{-4t} + 2 rho(t) <= gap^2 / 4 (with
    // rho <= 1, which makes the premise imply the squared form) on the
    // whole suffix of the grid
    std::vector<double> grid;
    for (double t = 0.25; t <= 10.0 + 1e-12; t += 0.25) grid.push_back(t);
    std::vector<bool> ok(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double rho_t = a.rho_at(grid[i]);
      ok[i] = rho_t <= 1.0 &&
              2.0 * std::exp(-4.0 * grid[i]) + 2.0 * rho_t <= 0.25 * gap2;
    }
    std::size_t i0 = grid.size();
    for (std::size_t i = grid.size(); i-- > 0;) {
      if (!ok[i]) break;
      i0 = i;
    }
    if (i0 == grid.size())
      return not_met(name, "premise 2e^{-4t} + 2rho(t) <= ||Gamma-Id||^2/4 "
                           "not reached on the grid");
    const double t0 = grid[i0];
    const auto& f = a.functionals();
    SlackReport r;
    r.check = name;
    r.lhs = f.deficit;
    r.rhs = std::exp(-4.0 * t0) / 16.0 * gap2;
    r.error_budget = f.deficit_error + 1e-9 * (1.0 + r.rhs);
    std::ostringstream note;
    note << "t0=" << t0;
    r.note = note.str();
    return finish(r);
  }

  throw spec_error("unknown check name: " + name);
}

}  // namespace detail

inline std::vector<std::string> catalog(const CheckConfig& cfg = {}) {
  std::vector<std::string> names{"LSI", "THM1", "THM1BIS"};
  for (double eps : cfg.cov_eps)
    names.push_back("COV_EPS[" + detail::format_eps(eps) + "]");
  if (cfg.adaptive_eps) names.push_back("COV_EPS_ADAPTIVE");
  for (const char* n :
       {"BGRS", "FD", "STEIN_W2", "STEIN_W2_IMPROVED", "HSI", "DIM_LSI",
        "D_LE_S", "COV_FROM_DEFICIT"})
    names.emplace_back(n);
  return names;
}

/// Runs one named check. Preconditions that do not hold yield the
/// precondition-not-met verdict; numerical failures propagate as exceptions.
inline SlackReport verify(const std::string& check, const RelativeDensity& d,
                          const CheckConfig& cfg = {}) {
  DensityAnalysis a(d, cfg);
  try {
    return detail::run_check(check, a);
  } catch (const family_error& e) {
    return detail::not_met(check, e.what());
  } catch (const precondition_error& e) {
    return detail::not_met(check, e.what());
  }
}

/// Runs the whole catalog against one density, sharing the memoized
/// analysis across checks.
inline std::vector<SlackReport> verify_all(const RelativeDensity& d,
                                           const CheckConfig& cfg = {}) {
  DensityAnalysis a(d, cfg);
  std::vector<SlackReport> out;
  for (const std::string& name : catalog(cfg)) {
    try {
      out.push_back(detail::run_check(name, a));
    } catch (const family_error& e) {
      out.push_back(detail::not_met(name, e.what()));
    } catch (const precondition_error& e) {
      out.push_back(detail::not_met(name, e.what()));
    }
  }
  return out;
}

inline bool any_failures(const std::vector<SlackReport>& reports) {
  for (const auto& r : reports)
    if (r.verdict == Verdict::fail) return true;
  return false;
}

}  // namespace lsdlab
