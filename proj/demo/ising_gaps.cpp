// Exact spectral gaps of heat bath, Swendsen-Wang and modified SW on small
// Ising lattices. A 512-state gap takes a few seconds, so the 3x3 lattice is
// only done at beta_c.
#include <cstdio>
#include <vector>

#include "pottsmc/pottsmc.hpp"

using namespace pottsmc;

int main() {
  const int q = 2;
  std::printf("beta_c = %.6f\n\n", critical_beta(q));
  std::printf("%4s %8s %12s %12s %12s %12s\n", "L", "beta", "gap HB", "gap SW", "gap MSW", "c_SW");
  auto row = [&](std::size_t L, double beta) {
    const DualMap d = build_dual_square_lattice(L);
    const ModelParams m = ModelParams::from_beta(q, beta);
    const double hb = spectral_gap(build_hb_matrix(d.primal, m)).gap;
    const double sw = spectral_gap(build_sw_matrix(d.primal, m)).gap;
    const double msw = spectral_gap(build_modified_sw_matrix(d, m)).gap;
    const double c = comparison_constants(beta, q, max_degree(d.primal)).c_sw;
    std::printf("%4zu %8.4f %12.6g %12.6g %12.6g %12.3g\n", L, beta, hb, sw, msw, c);
  };
  for (double beta : {0.2, 0.5, critical_beta(q), 1.2, 2.0}) row(2, beta);
  row(3, critical_beta(q));
}
