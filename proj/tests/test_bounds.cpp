#include "lsdlab/bounds.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "corpus.hpp"

using namespace lsdlab;
namespace tc = lsdlab::testing;

namespace {

SlackReport find(const std::vector<SlackReport>& reports,
                 const std::string& name) {
  for (const auto& r : reports)
    if (r.check == name) return r;
  ADD_FAILURE() << "check not found: " << name;
  return {};
}

}  // namespace

TEST(Catalog, NamesAndUnknownCheck) {
  const auto names = catalog();
  EXPECT_EQ(names.front(), "LSI");
  EXPECT_NE(std::find(names.begin(), names.end(), "COV_EPS[0.5]"), names.end());
  EXPECT_NE(std::find(names.begin(), names.end(), "COV_FROM_DEFICIT"),
            names.end());
  EXPECT_THROW(verify("NOT_A_CHECK", tc::gamma1()), spec_error);
}

TEST(Verify, FrozenExamples) {
  CheckConfig cfg;

  // BGRS on N(0, 0.5): delta = 0.153426 >= W2^4/4 = 0.001840
  const auto bgrs = verify("BGRS", tc::n005(), cfg);
  EXPECT_EQ(bgrs.verdict, Verdict::pass);
  EXPECT_NEAR(bgrs.lhs, 0.153426, 1e-6);
  EXPECT_NEAR(bgrs.rhs, 0.0018398282, 1e-8);

  // STEIN_W2 on N(0,4): delta >= 1/(4*9)
  const auto sw = verify("STEIN_W2", tc::n04(), cfg);
  EXPECT_EQ(sw.verdict, Verdict::pass);
  EXPECT_NEAR(sw.lhs, 0.318147, 1e-6);
  EXPECT_NEAR(sw.rhs, 1.0 / 36.0, 1e-8);

  // THM1BIS on N(0, 0.5): Dtilde = 0.4/sqrt(1.05), so
  // rhs = (1/4) Dtilde^4 = 0.0256/(4 * 1.1025) = 0.00580499
  const auto t1b = verify("THM1BIS", tc::n005(), cfg);
  EXPECT_EQ(t1b.verdict, Verdict::pass);
  EXPECT_NEAR(t1b.rhs, 0.0256 / (4.0 * 1.1025), 1e-9);

  // COV_EPS on N(0,4) at eps = 1: Dtilde = 2.4/sqrt(4.2), so
  // 2 delta + 9 >= (1/4) Dtilde^4 = 33.1776/(4 * 17.64) = 0.470204
  const auto ce = verify("COV_EPS[1]", tc::n04(), cfg);
  EXPECT_EQ(ce.verdict, Verdict::pass);
  EXPECT_NEAR(ce.lhs, 2.0 * 0.3181471805599453 + 9.0, 1e-6);
  EXPECT_NEAR(ce.rhs, 33.1776 / (4.0 * 17.64), 1e-9);
}

TEST(Verify, Thm1UsesRecenteredFisher) {
  const auto r = verify("THM1", tc::n008());
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_GT(r.rhs, 0.0);
  // Gamma > Id fails the covariance hypothesis
  EXPECT_EQ(verify("THM1", tc::n04()).verdict, Verdict::precondition_not_met);
  EXPECT_EQ(verify("THM1BIS", tc::sym2()).verdict,
            Verdict::precondition_not_met);
}

TEST(Verify, DimLsiEqualityOnIsotropicGaussians) {
  // Gaussians with Sigma = sigma^2 Id saturate the dimensional bound
  for (const auto& d : {tc::gamma1(), tc::n04(), tc::n005(), tc::e1(),
                        tc::gamma2(), tc::e2m()}) {
    const auto r = verify("DIM_LSI", d);
    EXPECT_EQ(r.verdict, Verdict::pass);
    EXPECT_NEAR(r.slack, 0.0, 1e-8);
  }
  // N(0,4): rhs = 3/2 + (1/2) log(1/4) = H exactly
  const auto r4 = verify("DIM_LSI", tc::n04());
  EXPECT_NEAR(r4.lhs, 1.5 - std::log(2.0), 1e-9);
  EXPECT_NEAR(r4.rhs, 1.5 - std::log(2.0), 1e-9);
  // anisotropic Gaussian: strict inequality
  const auto ra = verify("DIM_LSI", tc::aniso2());
  EXPECT_EQ(ra.verdict, Verdict::pass);
  EXPECT_GT(ra.slack, 0.1);
}

TEST(Verify, GammaDegenerateCases) {
  const auto reports = verify_all(tc::gamma1());
  EXPECT_FALSE(any_failures(reports));
  EXPECT_EQ(find(reports, "HSI").verdict, Verdict::precondition_not_met);
  EXPECT_EQ(find(reports, "STEIN_W2").verdict, Verdict::precondition_not_met);
  EXPECT_EQ(find(reports, "LSI").verdict, Verdict::pass);
  EXPECT_NEAR(find(reports, "LSI").lhs, 0.0, 1e-10);
  EXPECT_EQ(find(reports, "COV_EPS_ADAPTIVE").verdict,
            Verdict::precondition_not_met);  // delta = 0
  EXPECT_EQ(find(reports, "COV_FROM_DEFICIT").verdict,
            Verdict::precondition_not_met);  // ||Gamma - Id|| = 0
}

TEST(Verify, ExtremalRulesOutBgrs) {
  const auto reports = verify_all(tc::e1());
  EXPECT_FALSE(any_failures(reports));
  EXPECT_NEAR(find(reports, "LSI").slack, 0.0, 1e-8);
  // int |x|^2 dmu = n + |b|^2 > n
  EXPECT_EQ(find(reports, "BGRS").verdict, Verdict::precondition_not_met);
  EXPECT_EQ(find(reports, "FD").verdict, Verdict::precondition_not_met);
}

TEST(Verify, CovFromDeficitPremise) {
  const auto r = verify("COV_FROM_DEFICIT", tc::n04());
  EXPECT_EQ(r.verdict, Verdict::pass);
  // t0 = 1.5 on the 0.25 grid (premise holds with rho <= 1 from there on)
  EXPECT_NE(r.note.find("t0=1.5"), std::string::npos) << r.note;
  EXPECT_NEAR(r.rhs, std::exp(-6.0) / 16.0 * 9.0, 1e-9);
}

TEST(Verify, HsiChainReproducesSteinW2) {
  // H^2 / S^2 <= delta on centered 1-D corpus densities
  for (const auto& d : {tc::n04(), tc::n005(), tc::n008(), tc::sym2()}) {
    const auto f = deficit(d);
    const double s = stein_discrepancy(d);
    EXPECT_LE(f.entropy * f.entropy / (s * s),
              f.deficit + f.deficit_error + 1e-9);
  }
}

TEST(Verify, SoundnessUnderFamilyShrinking) {
  // a smaller witness family can only lower the right-hand side
  CheckConfig full, small;
  small.r_family.max_degree = 1;
  small.b_family.frequencies = {1.0};
  const auto d = tc::n005();
  const auto rf = verify("THM1BIS", d, full);
  const auto rs = verify("THM1BIS", d, small);
  EXPECT_LE(rs.rhs, rf.rhs + 1e-15);
  EXPECT_GE(rs.slack, rf.slack - 1e-15);
  const auto df = verify("THM1", d, full);
  const auto ds = verify("THM1", d, small);
  EXPECT_LE(ds.rhs, df.rhs + 1e-15);
}

TEST(Verify, SingleNameAgreesWithSuite) {
  const auto d = tc::n008();
  const auto all = verify_all(d);
  for (const std::string& name : {"LSI", "BGRS", "DIM_LSI", "STEIN_W2"}) {
    const auto single = verify(name, d);
    const auto in_suite = find(all, name);
    EXPECT_EQ(single.verdict, in_suite.verdict);
    EXPECT_DOUBLE_EQ(single.lhs, in_suite.lhs);
    EXPECT_DOUBLE_EQ(single.rhs, in_suite.rhs);
  }
}

TEST(Verify, TabulatedFamilyDegradesGracefully) {
  const RelativeDensity tab{tc::tabulate(tc::sym2(), -10.0, 10.0, 4001)};
  const auto reports = verify_all(tab);
  EXPECT_FALSE(any_failures(reports));
  EXPECT_EQ(find(reports, "LSI").verdict, Verdict::pass);
  EXPECT_EQ(find(reports, "DIM_LSI").verdict, Verdict::pass);
  EXPECT_EQ(find(reports, "STEIN_W2").verdict, Verdict::pass);
  // evolution-based checks need the mixture family
  EXPECT_EQ(find(reports, "FD").verdict, Verdict::precondition_not_met);
  EXPECT_EQ(find(reports, "THM1BIS").verdict, Verdict::precondition_not_met);
  EXPECT_EQ(find(reports, "COV_FROM_DEFICIT").verdict,
            Verdict::precondition_not_met);
}

TEST(Verify, AdaptiveEpsilonNote) {
  const auto r = verify("COV_EPS_ADAPTIVE", tc::n005());
  EXPECT_EQ(r.verdict, Verdict::pass);
  // eps(delta) = min(1, delta / ||Gamma - Id||^2) = 0.153426/0.25
  EXPECT_NE(r.note.find("eps(delta)=0.61370"), std::string::npos) << r.note;
  EXPECT_NEAR(r.lhs, 3.0 * 0.1534264097200273, 1e-7);
}
