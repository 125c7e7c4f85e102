#pragma once

// Discretized adiabatic sweeps: schedules, exact ground-state tracking,
// symmetric Trotter propagation, and the NMR refocusing-parameter table.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "qcoh/coherence.hpp"
#include "qcoh/models.hpp"
#include "qcoh/qmat.hpp"
#include "qcoh/states.hpp"

namespace qcoh {

// Coupling values J(t_m), m = 0..M, applied for an interval tau each.
struct Schedule {
  Model model = Model::zz;
  double tau = 0.7;
  std::vector<double> values;

  int steps() const { return static_cast<int>(values.size()) - 1; }

  // Nondecreasing, endpoints equal to the model's sweep range, tau > 0.
  void validate() const {
    if (!(tau > 0.0)) throw DomainError("schedule: tau must be positive");
    if (values.size() < 2) throw DomainError("schedule: need at least two points");
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (values[i] < values[i - 1]) {
        throw DomainError("schedule: values must be nondecreasing (index " + std::to_string(i) + ")");
      }
    }
    if (values.front() != sweep_start(model) || values.back() != sweep_end(model)) {
      std::ostringstream os;
      os << "schedule: endpoints must be " << sweep_start(model) << " and " << sweep_end(model) << ", got "
         << values.front() << " and " << values.back();
      throw DomainError(os.str());
    }
  }
};

inline Schedule linear_schedule(Model model, int m_steps, double tau) {
  if (m_steps < 1) throw DomainError("linear_schedule: need at least one step");
  const double a = sweep_start(model), b = sweep_end(model);
  Schedule s{model, tau, std::vector<double>(static_cast<std::size_t>(m_steps) + 1)};
  for (int m = 0; m <= m_steps; ++m) s.values[m] = a + (b - a) * m / m_steps;
  s.values.back() = b;
  return s;
}

// Linear interpolation of an externally supplied path (knots equally spaced
// in time) onto m_steps + 1 points.
inline Schedule resample_path(Model model, std::span<const double> knots, int m_steps, double tau) {
  if (knots.size() < 2) throw DomainError("resample_path: need at least two knots");
  if (m_steps < 1) throw DomainError("resample_path: need at least one step");
  Schedule s{model, tau, std::vector<double>(static_cast<std::size_t>(m_steps) + 1)};
  const double last = static_cast<double>(knots.size() - 1);
  for (int m = 0; m <= m_steps; ++m) {
    const double x = last * m / m_steps;
    const auto i = std::min(static_cast<std::size_t>(x), knots.size() - 2);
    const double f = x - static_cast<double>(i);
    s.values[m] = knots[i] + f * (knots[i + 1] - knots[i]);
  }
  s.values.front() = knots.front();
  s.values.back() = knots.back();
  return s;
}

// ---------------------------------------------------------------------------
// Gap-adaptive schedules

// Local adiabatic rate: sum_k |<k| dH/dJ |0>| / (E_k - E_0)^2. Levels that do
// not couple to the ground state contribute nothing, so the weight is
// 1/Delta^2 over the dynamically reachable gaps only.
inline double adiabatic_density(const ComplexMatrix& h, const ComplexMatrix& dh) {
  const Spectrum s = eig_hermitian(h);
  const ComplexVector dh_ground = dh * s.vectors.col(0);
  double rate = 0.0;
  for (Index k = 1; k < s.size(); ++k) {
    const double gap = std::max(s.values[k] - s.values[0], kDegeneracyTol);
    rate += std::abs(s.vectors.col(k).dot(dh_ground)) / (gap * gap);
  }
  return rate;
}

// Cumulative adiabatic measure on a fine grid; sample(M) inverts it so that
// every step carries the same share of the measure.
class AdaptiveMeasure {
 public:
  template <class HamiltonianFn, class DerivativeFn>
  AdaptiveMeasure(double start, double end, HamiltonianFn&& h, DerivativeFn&& dh, int fine_points = 2000)
      : grid_(static_cast<std::size_t>(fine_points) + 1), cumulative_(grid_.size(), 0.0) {
    if (!(end > start) || fine_points < 1) throw DomainError("AdaptiveMeasure: empty range");
    std::vector<double> density(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      grid_[i] = start + (end - start) * static_cast<double>(i) / fine_points;
      density[i] = adiabatic_density(h(grid_[i]), dh(grid_[i]));
    }
    grid_.back() = end;
    for (std::size_t i = 1; i < grid_.size(); ++i) {
      cumulative_[i] = cumulative_[i - 1] + 0.5 * (density[i] + density[i - 1]) * (grid_[i] - grid_[i - 1]);
    }
  }

  std::vector<double> sample(int m_steps) const {
    if (m_steps < 1) throw DomainError("gap_adaptive_schedule: need at least one step");
    const double total = cumulative_.back();
    std::vector<double> out(static_cast<std::size_t>(m_steps) + 1);
    for (int m = 0; m <= m_steps; ++m) {
      if (!(total > 0.0)) {
        out[m] = grid_.front() + (grid_.back() - grid_.front()) * m / m_steps;
        continue;
      }
      const double target = total * m / m_steps;
      auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), target);
      std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
      if (i == 0) {
        out[m] = grid_.front();
      } else if (i >= cumulative_.size()) {
        out[m] = grid_.back();
      } else {
        const double lo = cumulative_[i - 1], hi = cumulative_[i];
        const double f = hi > lo ? (target - lo) / (hi - lo) : 0.0;
        out[m] = grid_[i - 1] + f * (grid_[i] - grid_[i - 1]);
      }
    }
    out.front() = grid_.front();
    out.back() = grid_.back();
    for (std::size_t i = 1; i < out.size(); ++i) out[i] = std::max(out[i], out[i - 1]);
    return out;
  }

 private:
  std::vector<double> grid_;
  std::vector<double> cumulative_;
};

inline AdaptiveMeasure model_measure(Model model, const ModelParams& params = {}) {
  return AdaptiveMeasure(
      sweep_start(model), sweep_end(model), [&](double j) { return model_hamiltonian(model, params, j); },
      [&](double) { return coupling_derivative(model, params); });
}

inline Schedule gap_adaptive_schedule(Model model, int m_steps, double tau, const ModelParams& params = {}) {
  return Schedule{model, tau, model_measure(model, params).sample(m_steps)};
}

// ---------------------------------------------------------------------------
// Trotter splitting

struct TrotterPair {
  ComplexMatrix u_ide;  // exp(-i (H_x + H_z) tau)
  ComplexMatrix u_exp;  // exp(-i H_x tau/2) exp(-i H_z tau) exp(-i H_x tau/2)
};

inline TrotterPair trotter_pair(const SplitHamiltonian& h, double tau) {
  if (!(tau > 0.0)) throw DomainError("trotter_pair: tau must be positive");
  const ComplexMatrix half_x = expm_hermitian(h.transverse, tau / 2.0);
  return {expm_hermitian(h.full(), tau), half_x * expm_hermitian(h.longitudinal, tau) * half_x};
}

inline TrotterPair trotter_pair(Model model, double j_value, double tau, const ModelParams& params = {}) {
  return trotter_pair(model_split(model, params, j_value), tau);
}

struct TrotterScaling {
  double error_full = 0.0;  // max-entry |u_ide - u_exp| at tau
  double error_half = 0.0;  // same at tau/2
  double ratio = std::numeric_limits<double>::quiet_NaN();
  bool degenerate = false;  // both errors at rounding level, ratio undefined
};

inline constexpr double kTrotterNoiseFloor = 1e-13;

inline TrotterScaling trotter_error_scaling(const SplitHamiltonian& h, double tau) {
  auto err = [&](double t) {
    const TrotterPair p = trotter_pair(h, t);
    return max_abs(p.u_ide - p.u_exp);
  };
  TrotterScaling out;
  out.error_full = err(tau);
  if (out.error_full >= 0.1) {
    std::ostringstream os;
    os << "trotter_error_scaling: tau = " << tau << " is outside the asymptotic regime (error " << out.error_full
       << ")";
    throw DomainError(os.str());
  }
  out.error_half = err(tau / 2.0);
  if (out.error_half < kTrotterNoiseFloor) {
    out.degenerate = true;
  } else {
    out.ratio = out.error_full / out.error_half;
  }
  return out;
}

inline TrotterScaling trotter_error_scaling(Model model, double j_value, double tau, const ModelParams& params = {}) {
  return trotter_error_scaling(model_split(model, params, j_value), tau);
}

// ---------------------------------------------------------------------------
// Sweeps

inline PureState sweep_target(Model model) {
  return model == Model::zz ? make_state(W001{}) : make_state(GState{});
}

struct SweepStep {
  int m = 0;
  double j = 0.0;
  double e0 = 0.0;
  double e1 = 0.0;
  double gap = 0.0;
  PureState ground = PureState::basis(1, 0);
  CoherenceReport report;
  // Fidelity of the Trotter-evolved state to `ground`; NaN until attached.
  double fid_instant = std::numeric_limits<double>::quiet_NaN();
};

struct SweepResult {
  Model model = Model::zz;
  std::vector<SweepStep> steps;
  bool degenerate = false;  // some step had E1 - E0 < kDegeneracyTol
  double min_fidelity = std::numeric_limits<double>::quiet_NaN();
  double final_target_fidelity = std::numeric_limits<double>::quiet_NaN();       // |<target|g>|^2
  double final_target_root_fidelity = std::numeric_limits<double>::quiet_NaN();  // |<target|g>|
};

// Exact diagonalization at every schedule point. Ground states are sign-aligned
// to the previous step so that amplitude curves are continuous.
inline SweepResult ground_sweep(const Schedule& schedule, const ModelParams& params = {},
                                LogBase base = LogBase::two) {
  SweepResult out;
  out.model = schedule.model;
  out.steps.reserve(schedule.values.size());
  std::optional<PureState> previous;
  for (std::size_t m = 0; m < schedule.values.size(); ++m) {
    const double j = schedule.values[m];
    const Spectrum s = eig_hermitian(model_hamiltonian(schedule.model, params, j));
    PureState g = PureState::from_amplitudes(s.vectors.col(0));
    if (previous) g = g.aligned_to(*previous);
    SweepStep step;
    step.m = static_cast<int>(m);
    step.j = j;
    step.e0 = s.values[0];
    step.e1 = s.values[1];
    step.gap = s.values[1] - s.values[0];
    step.ground = g;
    step.report = coherence_report(DensityMatrix::from_pure(g), base);
    out.degenerate = out.degenerate || step.gap < kDegeneracyTol;
    previous = g;
    out.steps.push_back(std::move(step));
  }
  if (!out.steps.empty()) {
    const PureState target = sweep_target(schedule.model);
    out.final_target_fidelity = state_fidelity(target, out.steps.back().ground);
    out.final_target_root_fidelity = std::sqrt(out.final_target_fidelity);
  }
  return out;
}

struct EvolutionTrace {
  std::vector<double> fidelity;  // to the exact ground state, after each step
  double min_fidelity = 1.0;
};

// Applies u_exp(J_m) for m = 0..M to `initial`, recording the fidelity to the
// instantaneous ground state after each application.
inline EvolutionTrace evolve(const Schedule& schedule, const PureState& initial, const ModelParams& params = {}) {
  EvolutionTrace out;
  ComplexVector psi = initial.amplitudes();
  for (double j : schedule.values) {
    const SplitHamiltonian h = model_split(schedule.model, params, j);
    psi = trotter_pair(h, schedule.tau).u_exp * psi;
    const PureState g = ground_state(h.full()).state;
    const double f = std::clamp(std::norm(g.amplitudes().dot(psi)), 0.0, 1.0);
    out.fidelity.push_back(f);
    out.min_fidelity = std::min(out.min_fidelity, f);
  }
  return out;
}

// Same propagation for a mixed initial state (e.g. a pseudopure state).
inline EvolutionTrace evolve(const Schedule& schedule, const DensityMatrix& initial, const ModelParams& params = {}) {
  EvolutionTrace out;
  ComplexMatrix rho = initial.matrix();
  for (double j : schedule.values) {
    const SplitHamiltonian h = model_split(schedule.model, params, j);
    const ComplexMatrix u = trotter_pair(h, schedule.tau).u_exp;
    rho = u * rho * u.adjoint();
    const PureState g = ground_state(h.full()).state;
    const double f = std::clamp(g.amplitudes().dot(rho * g.amplitudes()).real(), 0.0, 1.0);
    out.fidelity.push_back(f);
    out.min_fidelity = std::min(out.min_fidelity, f);
  }
  return out;
}

inline void attach_evolution(SweepResult& sweep, const EvolutionTrace& trace) {
  if (trace.fidelity.size() != sweep.steps.size()) {
    throw DimensionError("attach_evolution: trace length does not match the sweep");
  }
  for (std::size_t i = 0; i < trace.fidelity.size(); ++i) sweep.steps[i].fid_instant = trace.fidelity[i];
  sweep.min_fidelity = trace.min_fidelity;
}

// Exact sweep plus Trotter evolution from the exact starting ground state.
inline SweepResult run_sweep(const Schedule& schedule, const ModelParams& params = {}, LogBase base = LogBase::two) {
  SweepResult sweep = ground_sweep(schedule, params, base);
  if (!sweep.steps.empty()) attach_evolution(sweep, evolve(schedule, sweep.steps.front().ground, params));
  return sweep;
}

// ---------------------------------------------------------------------------
// Step-count search

class UnreachableTarget : public DomainError {
 public:
  UnreachableTarget(double best_fidelity, int best_steps, const std::string& what)
      : DomainError(what), best_fidelity_(best_fidelity), best_steps_(best_steps) {}
  double best_fidelity() const noexcept { return best_fidelity_; }
  int best_steps() const noexcept { return best_steps_; }

 private:
  double best_fidelity_;
  int best_steps_;
};

// Smallest M whose gap-adaptive schedule keeps the evolved state's minimum
// fidelity at or above `target`. Doubling, then bisection on the bracket, gives
// an upper bound; min fidelity oscillates with M, so the bound is refined by
// an ascending scan below it.
inline int min_steps_search(Model model, double target, double tau, const ModelParams& params = {},
                            std::optional<int> step_cap = std::nullopt) {
  if (!(target >= 0.0 && target < 1.0)) throw DomainError("min_steps_search: target must lie in [0, 1)");
  const int cap = step_cap.value_or(10 * default_steps(model));
  const AdaptiveMeasure measure = model_measure(model, params);
  const PureState initial = ground_state(model_hamiltonian(model, params, sweep_start(model))).state;

  double best = -1.0;
  int best_m = 0;
  auto achieves = [&](int m) {
    const double f = evolve(Schedule{model, tau, measure.sample(m)}, initial, params).min_fidelity;
    if (f > best) {
      best = f;
      best_m = m;
    }
    return f >= target;
  };

  if (achieves(1)) return 1;
  int lo = 1;
  int hi = 2;
  while (!achieves(hi)) {
    if (hi >= cap) {
      std::ostringstream os;
      os << "min_steps_search: target " << target << " not reached within " << cap << " steps (best "
         << best << " at M = " << best_m << ")";
      throw UnreachableTarget(best, best_m, os.str());
    }
    lo = hi;
    hi = std::min(2 * hi, cap);
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (achieves(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  for (int m = 2; m < hi; ++m) {
    if (achieves(m)) return m;
  }
  return hi;
}

// ---------------------------------------------------------------------------
// Refocusing parameters

struct RefocusRow {
  int m = 0;
  double j = 0.0;
  std::vector<double> delays;   // zz: tau1_m, tau2_m, tau3_m; zzz: d_m
  std::vector<double> offsets;  // zz: FQ1_m, FQ2_m, FQ3_m; zzz: empty
  double pulse_angle = 0.0;     // omega_x tau / 2, radians
};

struct RefocusParams {
  Model model = Model::zz;
  std::vector<RefocusRow> rows;
  std::vector<int> skipped;  // steps with J(t_m) = 0, for which no sequence exists
};

inline RefocusParams refocus_params(const NmrParams& nmr, const Schedule& schedule, const ModelParams& params = {}) {
  nmr.validate();
  auto half_period = [&](int a, int b) {
    const double jab = nmr.j_couplings[a - 1][b - 1];
    if (jab == 0.0) {
      throw DomainError("refocus_params: coupling J" + std::to_string(a) + std::to_string(b) + " is zero");
    }
    return 1.0 / (2.0 * jab);
  };

  RefocusParams out;
  out.model = schedule.model;
  const double angle = params.omega_x * schedule.tau / 2.0;
  const double tau = schedule.tau;
  constexpr double pi = std::numbers::pi;

  if (schedule.model == Model::zz) {
    const double d12 = half_period(1, 2), d13 = half_period(1, 3), d23 = half_period(2, 3);
    for (std::size_t m = 0; m < schedule.values.size(); ++m) {
      const double j = schedule.values[m];
      if (!(j > 0.0)) {
        out.skipped.push_back(static_cast<int>(m));
        continue;
      }
      const double w = params.omega_z;
      RefocusRow row;
      row.m = static_cast<int>(m);
      row.j = j;
      row.offsets = {w / (4.0 * j * d12), w / (4.0 * j * (d12 + d13 + d23)), w / (4.0 * j * d23)};
      const double scale = j * tau / pi;
      row.delays = {scale * (d12 + d23), scale * (d12 + d13), scale * (d13 + d23)};
      row.pulse_angle = angle;
      out.rows.push_back(std::move(row));
    }
  } else {
    const double d12 = half_period(1, 2);
    for (std::size_t m = 0; m < schedule.values.size(); ++m) {
      const double j = schedule.values[m];
      if (!(j > 0.0)) {
        out.skipped.push_back(static_cast<int>(m));
        continue;
      }
      RefocusRow row;
      row.m = static_cast<int>(m);
      row.j = j;
      row.delays = {j * tau / pi * d12};
      row.pulse_angle = angle;
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace qcoh
