// Acceptance checks: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria (0 when all pass).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qcoh/qcoh.hpp"

using namespace qcoh;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// First sign change of C_L - C_G, linearly interpolated.
double crossing(const SweepResult& s) {
  for (std::size_t i = 1; i < s.steps.size(); ++i) {
    const double a = s.steps[i - 1].report.c_local - s.steps[i - 1].report.c_global;
    const double b = s.steps[i].report.c_local - s.steps[i].report.c_global;
    if (a > 0.0 && b <= 0.0) return s.steps[i - 1].j + a / (a - b) * (s.steps[i].j - s.steps[i - 1].j);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

SweepResult default_linear_sweep(Model m) {
  return ground_sweep(linear_schedule(m, default_steps(m), default_tau(m)));
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  ModelParams p;
  p.j2 = 2.0;
  const PureState g = ground_state(h_zz(p)).state;
  const double f = root_fidelity(g, make_state(W001{}));
  const double dt = seconds_since(t0);
  return {std::abs(f - 0.9978) <= 5e-4 && dt < 1.0,
          fmt("|<W001|g(J2=2)>| = %.6f (target 0.9978 +/- 0.0005; squared overlap %.6f), %.3f ms", f, f * f, dt * 1e3)};
}

Outcome criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  ModelParams p;
  p.j3 = 5.0;
  const PureState g = ground_state(h_zzz(p)).state;
  const double f = root_fidelity(g, make_state(GState{}));
  const double dt = seconds_since(t0);
  return {std::abs(f - 0.9996) <= 5e-4 && dt < 1.0,
          fmt("|<G|g(J3=5)>| = %.6f (target 0.9996 +/- 0.0005; squared overlap %.6f), %.3f ms", f, f * f, dt * 1e3)};
}

Outcome criterion3() {
  const double zz = crossing(default_linear_sweep(Model::zz));
  const double zzz = crossing(default_linear_sweep(Model::zzz));
  const double step_zz = 2.0 / 300, step_zzz = 5.0 / 200;
  const bool ok_zz = std::abs(zz - 1.0) <= step_zz;
  const bool ok_zzz = std::abs(zzz - 0.25) <= step_zzz;
  return {ok_zz && ok_zzz,
          fmt("zz crossing J2 = %.6f, |dJ| = %.5f vs step %.5f (%s); zzz crossing J3 = %.6f, |dJ| = %.5f vs step %.5f (%s)",
              zz, std::abs(zz - 1.0), step_zz, ok_zz ? "ok" : "outside", zzz, std::abs(zzz - 0.25), step_zzz,
              ok_zzz ? "ok" : "outside")};
}

Outcome criterion4() {
  double worst = std::numeric_limits<double>::infinity();
  for (Model m : {Model::zz, Model::zzz}) {
    for (const auto& s : default_linear_sweep(m).steps) worst = std::min(worst, s.report.min_slack());
    for (const auto& s : ground_sweep(gap_adaptive_schedule(m, default_steps(m), default_tau(m))).steps)
      worst = std::min(worst, s.report.min_slack());
  }
  return {worst >= -1e-8, fmt("min of the four trade-off slacks on both sweeps (linear and adaptive) = %.3e", worst)};
}

Outcome criterion5() {
  bool ok = true;
  std::string detail;
  for (Model m : {Model::zz, Model::zzz}) {
    double min_pos = std::numeric_limits<double>::infinity(), at_zero = 0.0, last_bad = 0.0;
    int bad = 0;
    for (const Schedule& sched : {linear_schedule(m, default_steps(m), default_tau(m)),
                                  gap_adaptive_schedule(m, default_steps(m), default_tau(m))}) {
      for (const auto& s : ground_sweep(sched).steps) {
        if (s.j == 0.0) {
          at_zero = std::max(at_zero, s.report.monogamy_m);
          continue;
        }
        min_pos = std::min(min_pos, s.report.monogamy_m);
        if (s.report.monogamy_m <= 0.0) {
          ++bad;
          last_bad = std::max(last_bad, s.j);
        }
      }
    }
    ok = ok && bad == 0 && at_zero <= 1e-6;
    detail += fmt("%s: min M(J>0) = %.3e, M(0) = %.3e", to_string(m).c_str(), min_pos, at_zero);
    detail += bad ? fmt(", M <= 0 at %d steps up to J = %.5f; ", bad, last_bad) : std::string("; ");
  }
  return {ok, detail + "(linear and adaptive sweeps)"};
}

Outcome criterion6() {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& s : default_linear_sweep(Model::zz).steps) {
    if (s.j < 0.2) continue;
    const double r = s.report.c_2_3 / s.report.c_1_23;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {hi - lo < 0.05, fmt("C_2:3/C_1:23 over J2 in [0.2, 2]: [%.5f, %.5f], spread %.5f (< 0.05)", lo, hi, hi - lo)};
}

Outcome criterion7() {
  bool ok = true;
  std::string detail;
  for (Model m : {Model::zz, Model::zzz}) {
    double worst = 1.0;
    for (const Schedule& s : {linear_schedule(m, default_steps(m), default_tau(m)),
                              gap_adaptive_schedule(m, default_steps(m), default_tau(m))}) {
      for (double j : s.values) {
        const TrotterPair t = trotter_pair(m, j, s.tau);
        worst = std::min(worst, unitary_fidelity(t.u_ide, t.u_exp));
      }
    }
    ok = ok && worst > 0.999;
    detail += fmt("%s tau=%.1f: min unitary fidelity %.6f; ", to_string(m).c_str(), default_tau(m), worst);
  }
  return {ok, detail};
}

Outcome criterion8() {
  const TrotterScaling s = trotter_error_scaling(Model::zz, 1.0, 0.1);
  return {!s.degenerate && s.ratio >= 6.0 && s.ratio <= 10.0,
          fmt("error(tau=0.1) / error(tau=0.05) at J2=1 = %.4f (expected in [6, 10])", s.ratio)};
}

Outcome criterion9() {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const auto rho = DensityMatrix::assume_valid(oracle::random_mixed(rng, 3));
    worst = std::max(worst, std::abs(dist(split_1_23(rho), pi_product(rho, 3)) - coherence_report(rho).c_2_3));
  }
  return {worst <= 1e-9, fmt("max |D(rho_1 x rho_23, pi(rho)) - C_2:3| over 100 random states = %.3e", worst)};
}

Outcome criterion10() {
  std::mt19937_64 rng(2025);
  double tri = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = 1 + rep % 3;
    const auto a = DensityMatrix::assume_valid(oracle::random_mixed(rng, n));
    const auto b = DensityMatrix::assume_valid(oracle::random_mixed(rng, n));
    const auto c = DensityMatrix::assume_valid(oracle::random_mixed(rng, n));
    tri = std::min({tri, dist(a, b) + dist(b, c) - dist(a, c), dist(a, c) + dist(c, b) - dist(a, b),
                    dist(b, a) + dist(a, c) - dist(b, c)});
  }
  double add = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 1 + rep % 2;
    const auto r = DensityMatrix::assume_valid(oracle::random_mixed(rng, 3 - n));
    const auto s1 = DensityMatrix::assume_valid(oracle::random_mixed(rng, n));
    const auto s2 = DensityMatrix::assume_valid(oracle::random_mixed(rng, n));
    add = std::max(add, std::abs(qjsd(kron(r, s1), kron(r, s2)) - qjsd(s1, s2)));
  }
  return {tri >= -1e-8 && add <= 1e-9,
          fmt("min triangle slack over 1000 triples = %.3e; max additivity defect over 100 pairs = %.3e", tri, add)};
}

Outcome criterion11() {
  // Hand evaluation: 1/(1 + 0.05^2 + (sqrt(3)/2 * 0.1/2)^2) and 1/(1 + (0.3/10)^2).
  const double zz_hand = 1.0 / (1.0 + 0.0025 + 0.001875);
  const double zzz_hand = 1.0 / (1.0 + 0.0009);
  const double zz = zz_fidelity_formula(0.1, -2.0, 2.0);
  const double zzz = zzz_fidelity_formula(0.1, 5.0);
  ModelParams p;
  p.j3 = 5.0;
  const SecularSolution s = secular_solve(zzz_perturbation_split(p));
  const Complex ph = s.coefficients[0] / std::abs(s.coefficients[0]);
  const double c0 = (s.coefficients[0] / ph).real(), c1 = (s.coefficients[1] / ph).real();
  const double dc = std::max(std::abs(c0 - std::sqrt(3.0) / 2.0), std::abs(c1 - 0.5));
  const bool ok = std::abs(zz - 0.995644) <= 1e-6 && std::abs(zz - zz_hand) <= 1e-12 &&
                  std::abs(zzz - 0.999101) <= 1e-6 && std::abs(zzz - zzz_hand) <= 1e-12 && dc <= 1e-9;
  return {ok, fmt("zz formula %.7f, zzz formula %.7f, secular coefficients (%.10f, %.10f), max deviation %.2e", zz,
                  zzz, c0, c1, dc)};
}

// Curve shapes are checked through properties rather than amplitudes: the
// C_G > C_T region on the zz sweep, constant C_A with vanishing C_L on the zzz
// sweep, and continuity of every curve. Crossover, slack, monogamy and
// ratio properties are the separate lines 3-6.
Outcome criterion12() {
  const SweepResult zz = default_linear_sweep(Model::zz);
  const SweepResult zzz = default_linear_sweep(Model::zzz);
  int cg_over_ct = 0;
  for (const auto& s : zz.steps) cg_over_ct += s.report.c_global > s.report.c_total;
  double ca_lo = 1.0, ca_hi = 0.0;
  for (const auto& s : zzz.steps) {
    ca_lo = std::min(ca_lo, s.report.c_absolute);
    ca_hi = std::max(ca_hi, s.report.c_absolute);
  }
  const double cl_end = zzz.steps.back().report.c_local;
  double jump = 0.0;
  for (const SweepResult* r : {&zz, &zzz}) {
    for (std::size_t i = 1; i < r->steps.size(); ++i) {
      const auto& a = r->steps[i - 1].report;
      const auto& b = r->steps[i].report;
      for (double d : {a.c_total - b.c_total, a.c_global - b.c_global, a.c_local - b.c_local,
                       a.c_absolute - b.c_absolute, a.c_1_23 - b.c_1_23, a.c_2_3 - b.c_2_3,
                       a.c_abs_1_23 - b.c_abs_1_23})
        jump = std::max(jump, std::abs(d));
    }
  }
  const bool ok = cg_over_ct >= 1 && ca_hi - ca_lo < 0.05 && cl_end < 0.05 && jump < 0.1;
  return {ok, fmt("C_G > C_T at %d zz points; zzz C_A in [%.5f, %.5f], C_L(J3=5) = %.2e; max step jump %.4f", cg_over_ct,
                  ca_lo, ca_hi, cl_end, jump)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"ground-state overlap, zz", criterion1},     {"ground-state overlap, zzz", criterion2},
      {"C_L = C_G crossovers", criterion3},         {"trade-off inequalities", criterion4},
      {"monogamy", criterion5},                     {"constant C_2:3/C_1:23 on zz", criterion6},
      {"Trotter threshold", criterion7},            {"Trotter order", criterion8},
      {"product-state distance identity", criterion9},                    {"metric properties", criterion10},
      {"perturbation consistency", criterion11},    {"curve shapes (property-based)", criterion12},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %2zu  %-32s %s\n", o.pass ? "[PASS]" : "[FAIL]", i + 1, criteria[i].first, o.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures;
}
