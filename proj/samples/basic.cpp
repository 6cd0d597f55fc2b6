// Exponents, a spectral seminorm and a small symmetry-breaking solve at the reference parameters.
#include <cstdio>

#include "fraclab/fraclab.hpp"

int main() {
  using namespace fraclab;
  const ProblemParams prm;  // n=2, s=0.75, p=3, q=2, a=0.5, b=1

  const auto e = exponents(prm);
  std::printf("theta=%.6f sigma=%.6f eta=%.6f admissible=%d\n", e.theta, e.sigma, e.eta, validate(prm).all_pass());

  const auto g = RadialProfile::sample(default_radial_grid(), prm.n, [](double r) { return profiles::gaussian(r); });
  std::printf("[gaussian]^2=%.8f strauss ratio=%.6f\n", std::pow(gagliardo_radial(g, prm.s), 2), strauss_ratio(g, prm));

  const auto spec = GridSpec::covering(8.0, 0.25);
  const auto m = solve_m(prm, spec, SolveOptions{});
  const auto M = solve_M(prm, spec, SolveOptions{}, &m.minimizer);
  std::printf("R=8: m=%.6f M=%.6f nonradiality=%.3f\n", m.level, M.level, M.nonradiality);
}
