// Acceptance suite: one test per verification criterion, each printing a
// single [PASS]/[FAIL] line. Exact analytic oracles at desk scale; the
// corpus lives in corpus.hpp.

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "corpus.hpp"
#include "lsdlab/bounds.hpp"
#include "lsdlab/functionals.hpp"
#include "lsdlab/ou.hpp"
#include "lsdlab/spec_io.hpp"
#include "lsdlab/stein.hpp"
#include "lsdlab/time_integral.hpp"
#include "lsdlab/transport.hpp"

using namespace lsdlab;
namespace tc = lsdlab::testing;

namespace {

struct Criterion {
  Criterion(int id_, const char* label_) : id(id_), label(label_) {}

  int id;
  const char* label;
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
    EXPECT_TRUE(cond) << what;
  }

  ~Criterion() {
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", id, label,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
  }
};

bool close_rel(double a, double b, double rel, double abs_floor = 1e-12) {
  return std::abs(a - b) <=
         rel * std::max({std::abs(a), std::abs(b), abs_floor / rel});
}

}  // namespace

TEST(Acceptance, C1_ExtremalSaturation) {
  Criterion c{1, "delta(e_b) = 0 within 1e-8 for b in {0, (1), (2,-1)}"};
  Vec b2(2);
  b2 << 2.0, -1.0;
  for (const Vec& b :
       {Vec::Zero(1).eval(), Vec::Constant(1, 1.0).eval(), b2}) {
    const auto rep = deficit(make_extremal(b));
    c.require(std::abs(rep.deficit) <= 1e-8,
              "delta(e_b) = " + std::to_string(rep.deficit));
  }
}

TEST(Acceptance, C2_DeficitIdentity) {
  Criterion c{2, "deficit_via_mmse = I/2 - H on the 12-density corpus"};
  for (const auto& [name, d] : tc::corpus()) {
    const auto direct = deficit(d);
    const auto mmse = deficit_via_mmse(d);
    const double tol = std::max({1e-4 * std::abs(direct.deficit),
                                 direct.deficit_error + mmse.error, 1e-9});
    c.require(std::abs(direct.deficit - mmse.value) <= tol,
              name + ": " + std::to_string(direct.deficit) + " vs " +
                  std::to_string(mmse.value));
  }
}

TEST(Acceptance, C3_MmseFisherIdentity) {
  Criterion c{3, "4 sinh^2(t) I(P_t f) equals the MMSE at t in {0.1,0.5,1,2}"};
  for (const auto& [name, d] : tc::corpus()) {
    if (!d.is_mixture()) continue;
    for (double t : {0.1, 0.5, 1.0, 2.0}) {
      const double lhs = mmse_fisher(d, t);
      const double sh = std::sinh(t);
      const double rhs = 4.0 * sh * sh * evolved_fisher(d, t).value;
      c.require(close_rel(lhs, rhs, 1e-6),
                name + " t=" + std::to_string(t));
    }
  }
  // closed-form point check: 2/3 for N(0,4) at e^{-2t} = 1/3
  const double t13 = 0.5 * std::log(3.0);
  c.require(std::abs(mmse_fisher(tc::n04(), t13) - 2.0 / 3.0) <= 1e-8,
            "N(0,4) point value");
}

TEST(Acceptance, C4_SemigroupAndIntegrandIdentities) {
  Criterion c{4, "P_t(xf) identity (1e-8) and Hessian/MMSE identity (1e-6)"};
  std::mt19937 rng(20240809);
  std::uniform_real_distribution<double> ut(0.05, 2.5), ux(-2.5, 2.5);
  for (const auto& d : {tc::n04(), tc::sym2(), tc::asym3(), tc::shift2()}) {
    for (int rep = 0; rep < 4; ++rep) {
      const double t = ut(rng);
      const double e = std::exp(-t);
      const Vec x = Vec::Constant(1, ux(rng));
      const RelativeDensity dt{evolve_mixture(d.mixture(), t)};
      const double lhs = integrate_gamma_fixed(
          [&](const Vec& y) {
            const Vec z = e * x + std::sqrt(1.0 - e * e) * y;
            return z(0) * d.value(z);
          },
          1, 200);
      const double rhs =
          e * x(0) * dt.value(x) + 2.0 * std::sinh(t) * dt.grad(x)(0);
      c.require(std::abs(lhs - rhs) <= 1e-8,
                "P_t(xf) identity at random (t,x)");
    }
  }
  for (const auto& d : {tc::sym2(), tc::mix2d()}) {
    for (int rep = 0; rep < 3; ++rep) {
      const double t = ut(rng);
      const int order = d.dim() == 1 ? 128 : 64;
      const double a = hessian_form_integrand(d, t, order);
      const double b = mmse_form_integrand(d, t, order);
      c.require(std::abs(a - b) <= 1e-6 * (1.0 + std::abs(a)),
                "integrand identity at t=" + std::to_string(t));
    }
  }
}

TEST(Acceptance, C5_DeBruijnAndGamma2Ode) {
  Criterion c{5, "H = int I(P_t f) dt (1e-4) and dI/dt = -2 int P_t f Gamma2"};
  for (const auto& d : {tc::n04(), tc::sym2(), tc::asym3(), tc::e1()}) {
    const auto db = debruijn_check(d);
    c.require(std::abs(db.discrepancy) <=
                  std::max(1e-4 * std::abs(db.entropy), 1e-6),
              "de Bruijn discrepancy " + std::to_string(db.discrepancy));
  }
  const double h = 1e-4;
  for (const auto& d : {tc::n04(), tc::sym2()}) {
    for (double t : {0.2, 1.0}) {
      const double fd =
          (evolved_fisher(d, t + h).value - evolved_fisher(d, t - h).value) /
          (2.0 * h);
      const double rhs = -2.0 * hessian_form_integrand(d, t, 128) -
                         2.0 * evolved_fisher(d, t).value;
      c.require(close_rel(fd, rhs, 1e-4), "Gamma2 ODE at t=" + std::to_string(t));
    }
  }
}

TEST(Acceptance, C6_FisherDecayAndLimits) {
  Criterion c{6, "Fisher decay, e^{2t} I(P_t f) -> 0, rho(t) -> 0"};
  const std::vector<double> grid{0.5, 1.0, 2.0, 4.0, 6.0, 8.0};
  for (const auto& [name, d] : tc::corpus()) {
    if (!d.is_mixture()) continue;
    const double i0 = fisher(d).value;
    for (const auto& p : fisher_decay_check(d, grid))
      c.require(p.bound - p.fisher_t >= -1e-10, name + " decay slack");
    if (!d.centered()) continue;
    const auto scaled = scaled_fisher_limit_check(d, grid);
    c.require(scaled.back().scaled <= 1e-3 * i0 + 1e-12,
              name + " scaled Fisher limit");
    c.require(rho(d, 8.0) < 1e-2, name + " rho(8)");
  }
}

TEST(Acceptance, C7_InequalitySuite) {
  Criterion c{7, "full catalog, zero failures on the corpus"};
  for (const auto& [name, d] : tc::corpus()) {
    const auto reports = verify_all(d);
    for (const auto& r : reports)
      c.require(r.verdict != Verdict::fail,
                name + "/" + r.check + " slack " + std::to_string(r.slack));
  }
  // equality case: DIM_LSI slack = 0 within 1e-8 on isotropic Gaussians
  for (const auto& d : {tc::gamma1(), tc::n04(), tc::n005(), tc::n008(),
                        tc::e1(), tc::gamma2(), tc::e2m()}) {
    const auto r = verify("DIM_LSI", d);
    c.require(std::abs(r.slack) <= 1e-8, "DIM_LSI equality case");
  }
}

TEST(Acceptance, C8_ClosedFormPointValues) {
  Criterion c{8, "closed-form values for N(0,4) and N(0,0.5) within 1e-6"};
  const auto f4 = deficit(tc::n04());
  c.require(std::abs(f4.entropy - 0.8068528194400547) <= 1e-6, "H(N(0,4))");
  c.require(std::abs(f4.fisher - 2.25) <= 1e-6, "I(N(0,4))");
  c.require(std::abs(f4.deficit - 0.3181471805599453) <= 1e-6, "delta(N(0,4))");
  c.require(std::abs(stein_discrepancy(tc::n04()) - 3.0) <= 1e-6, "S(N(0,4))");
  c.require(std::abs(w2_1d(tc::n04()).value - 1.0) <= 1e-6, "W2(N(0,4))");
  const auto f05 = deficit(tc::n005());
  c.require(std::abs(f05.deficit - 0.1534264097200273) <= 1e-6,
            "delta(N(0,0.5))");
  c.require(std::abs(w2_1d(tc::n005()).value - 0.2928932188134524) <= 1e-6,
            "W2(N(0,0.5))");
}

TEST(Acceptance, C9_SteinFunctionalSoundness) {
  Criterion c{9, "null at gamma, D <= S, resolvent eigen-factors"};
  c.require(d_lower_bound(tc::gamma1()).value <= 1e-8, "D_est(gamma)");
  c.require(dtilde_lower_bound(tc::gamma1()).value <= 1e-8, "Dtilde_est(gamma)");
  for (const auto& d : {tc::n04(), tc::n005(), tc::n008(), tc::sym2()})
    c.require(d_lower_bound(d).value <= stein_discrepancy(d) + 1e-8,
              "D_est <= S");
  for (int k : {0, 1, 2, 3, 6}) {
    // time quadrature of 4 int e^{-4t} e^{-kt} dt against the eigen-factor
    const auto tq = integrate_adaptive(
        [&](double u) { return 4.0 * std::pow(u, 3 + k); }, 0.0, 1.0, 1e-12);
    const HermiteFunction psi{{k}, 1.0};
    const auto phi = std::get<HermiteFunction>(resolvent(psi));
    c.require(std::abs(phi.scale - tq.value) <= 1e-8,
              "eigen-factor k=" + std::to_string(k));
  }
}

TEST(Acceptance, C10_Determinism) {
  Criterion c{10, "two identical verify runs produce byte-identical JSON"};
  for (const auto& d : {tc::n005(), tc::sym2()}) {
    const std::string a = verify_report_json(d, "hash");
    const std::string b = verify_report_json(d, "hash");
    c.require(a == b, "verify JSON determinism");
  }
  const std::string a = analyze_report_json(tc::asym3(), "hash");
  const std::string b = analyze_report_json(tc::asym3(), "hash");
  c.require(a == b, "analyze JSON determinism");
}
