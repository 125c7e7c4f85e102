// Prints the headline numbers for both spin models: final ground-state
// overlaps with the target states, the C_L = C_G crossing, the evolved
// fidelity of the default sweeps and the first-order perturbative estimates.

#include <cstdio>

#include "qcoh/qcoh.hpp"

using namespace qcoh;

static double crossing(const SweepResult& s) {
  for (std::size_t i = 1; i < s.steps.size(); ++i) {
    const double a = s.steps[i - 1].report.c_local - s.steps[i - 1].report.c_global;
    const double b = s.steps[i].report.c_local - s.steps[i].report.c_global;
    if (a != 0.0 && (a > 0.0) != (b > 0.0)) {
      return s.steps[i - 1].j + a / (a - b) * (s.steps[i].j - s.steps[i - 1].j);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

int main() {
  const ModelParams p;
  for (Model m : {Model::zz, Model::zzz}) {
    const auto linear = ground_sweep(linear_schedule(m, default_steps(m), default_tau(m)), p);
    const auto adaptive = run_sweep(gap_adaptive_schedule(m, default_steps(m), default_tau(m), p), p);
    std::printf("%s\n", to_string(m).c_str());
    std::printf("  |<target|g>| at J=%g     %.6f\n", sweep_end(m), linear.final_target_root_fidelity);
    std::printf("  C_L = C_G crossing        J = %.6f\n", crossing(linear));
    std::printf("  min evolved fidelity      %.6f (M=%d, tau=%g)\n", adaptive.min_fidelity, default_steps(m),
                default_tau(m));
  }
  std::printf("perturbative |<W|g>|^2 at J2=2   %.6f\n", zz_fidelity_formula(p.omega_x, p.omega_z, 2.0));
  std::printf("perturbative |<G|g>|^2 at J3=5   %.6f\n", zzz_fidelity_formula(p.omega_x, 5.0));
}
