// Traces the Ornstein-Uhlenbeck flow diagnostics of N(0,4) as CSV on
// stdout: Fisher decay, the scaled limit e^{2t} I(P_t f), rho(t), the W2
// flow, and the deficit integrand.

#include <cstdio>

#include "lsdlab/spec_io.hpp"

int main() {
  using namespace lsdlab;
  const RelativeDensity d{
      GaussianMixture::single(Vec::Zero(1), 4.0 * Mat::Identity(1, 1))};
  std::vector<double> ts;
  for (int i = 0; i <= 16; ++i) ts.push_back(0.25 * i);
  std::fputs(flow_csv(d, ts).c_str(), stdout);
  return 0;
}
