// Runs every sampler on the 3x3 lattice and compares its long-run histogram
// with the exact Gibbs distribution.
#include <cstdio>

#include "pottsmc/pottsmc.hpp"

using namespace pottsmc;

int main() {
  const ModelParams m = ModelParams::from_beta(2, 0.8);
  const DualMap d = build_dual_square_lattice(3);
  ChainSetup setup{d.primal, d, {4, 1}};
  const auto pi = exact_distribution(d.primal, m, Space::potts);

  std::printf("%6s %12s %10s %10s\n", "chain", "<E>", "tau_int", "TV");
  for (Dynamics dyn : {Dynamics::heat_bath, Dynamics::swendsen_wang, Dynamics::modified_sw,
                       Dynamics::restricted_hb}) {
    RngStream rng(kDefaultSeed);
    const auto out = run_chain(setup, m, dyn, 200000, 1000, rng);
    double tv = 0.0;
    if (dyn == Dynamics::restricted_hb) {
      // compare against pi conditioned on the pinned spin
      std::vector<double> cond(pi.size(), 0.0);
      double mass = 0.0;
      for (std::size_t s = 0; s < pi.size(); ++s)
        if (PottsConfig::from_index(s, 9, 2)[4] == 1) mass += cond[s] = pi[s];
      for (auto& x : cond) x /= mass;
      tv = tv_distance(out.state_histogram, cond);
    } else {
      tv = tv_distance(out.state_histogram, pi);
    }
    std::printf("%6s %12.5f %10.3f %10.4f\n", dynamics_name(dyn), out.mean_energy,
                out.iat ? out.iat->tau : 0.5, tv);
  }
}
