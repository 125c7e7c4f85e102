#pragma once

// Implementations behind the `qcoh` command-line verbs. Each command writes its
// data files under RunConfig::out_dir and returns an exit code plus a short
// human-readable summary.

#include <algorithm>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qcoh/adiabatic.hpp"
#include "qcoh/coherence.hpp"
#include "qcoh/io.hpp"
#include "qcoh/models.hpp"
#include "qcoh/qmat.hpp"

namespace qcoh::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kValidation = 2, kAssertion = 3 };

enum class ScheduleKind { linear, adaptive, file };

struct RunConfig {
  Model model = Model::zz;
  ScheduleKind schedule_kind = ScheduleKind::adaptive;
  std::filesystem::path schedule_path;
  std::optional<int> m_steps;
  std::optional<double> tau;
  std::filesystem::path out_dir = ".";
  LogBase log_base = LogBase::two;
  ModelParams params;
  std::optional<NmrParams> nmr;

  // tomo
  bool repair = false;
  double tolerance = kExperimentalPsdTol;
  double repair_limit = 0.1;
  std::optional<double> j_value;

  // geometry
  std::vector<double> geometry_points;

  // sweep: evolve a pseudopure state with this mixing parameter instead of the pure ground state
  std::optional<double> pps_mu;

  // trotter-audit
  double trotter_threshold = 0.999;

  int steps() const { return m_steps.value_or(default_steps(model)); }
  double step_tau() const { return tau.value_or(default_tau(model)); }
};

struct CommandResult {
  int exit_code = kOk;
  std::vector<std::filesystem::path> files;
  std::string summary;
};

inline Schedule build_schedule(const RunConfig& cfg) {
  switch (cfg.schedule_kind) {
    case ScheduleKind::linear:
      return linear_schedule(cfg.model, cfg.steps(), cfg.step_tau());
    case ScheduleKind::adaptive:
      return gap_adaptive_schedule(cfg.model, cfg.steps(), cfg.step_tau(), cfg.params);
    case ScheduleKind::file: {
      const std::vector<double> knots = io::load_schedule_file(cfg.schedule_path);
      Schedule s = cfg.m_steps ? resample_path(cfg.model, knots, *cfg.m_steps, cfg.step_tau())
                               : Schedule{cfg.model, cfg.step_tau(), knots};
      s.validate();
      return s;
    }
  }
  throw DomainError("unknown schedule kind");
}

inline std::vector<double> default_geometry_points(Model m) {
  return m == Model::zz ? std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0}
                        : std::vector<double>{0.0, 0.25, 1.0, 2.5, 5.0};
}

inline std::string model_file(const char* stem, Model m, const char* ext) {
  return std::string(stem) + "_" + to_string(m) + ext;
}

// ---------------------------------------------------------------------------

inline std::string sweep_csv(const SweepResult& sweep) {
  std::vector<std::string> header{"m", "J", "E0", "E1", "gap", "fid_instant"};
  for (auto& c : io::coherence_columns()) header.push_back(c);
  std::string out = io::join(header) + "\n";
  for (const SweepStep& s : sweep.steps) {
    std::vector<std::string> cells{std::to_string(s.m), io::fmt9(s.j),   io::fmt9(s.e0),
                                   io::fmt9(s.e1),      io::fmt9(s.gap), io::fmt9(s.fid_instant)};
    for (auto& c : io::coherence_cells(s.report)) cells.push_back(c);
    out += io::join(cells) + "\n";
  }
  return out;
}

inline SweepResult sweep_for(const RunConfig& cfg) {
  const Schedule schedule = build_schedule(cfg);
  SweepResult sweep = ground_sweep(schedule, cfg.params, cfg.log_base);
  const PureState& start = sweep.steps.front().ground;
  if (cfg.pps_mu) {
    attach_evolution(sweep, evolve(schedule, make_pps(start, *cfg.pps_mu), cfg.params));
  } else {
    attach_evolution(sweep, evolve(schedule, start, cfg.params));
  }
  return sweep;
}

inline CommandResult cmd_sweep(const RunConfig& cfg) {
  const SweepResult sweep = sweep_for(cfg);
  CommandResult r;
  const auto path = cfg.out_dir / model_file("sweep", cfg.model, ".csv");
  io::write_text(path, sweep_csv(sweep));
  r.files.push_back(path);
  std::ostringstream os;
  os << "sweep " << to_string(cfg.model) << ": " << sweep.steps.size() << " rows, min evolved fidelity "
     << io::fmt9(sweep.min_fidelity) << ", final ground-state overlap with target " << io::fmt9(sweep.final_target_root_fidelity)
     << (sweep.degenerate ? " (degenerate ground state encountered)" : "");
  r.summary = os.str();
  return r;
}

// ---------------------------------------------------------------------------

inline constexpr double kRatioDenominatorTol = 1e-9;

inline double ratio_or_nan(double num, double den) {
  return std::abs(den) < kRatioDenominatorTol ? std::numeric_limits<double>::quiet_NaN() : num / den;
}

inline std::string ratios_csv(const SweepResult& sweep) {
  std::string out = "m,J,C_G/C_L,C_2_3/C_L,C_1_23/C_A_1_23,C_2_3/C_1_23,M\n";
  for (const SweepStep& s : sweep.steps) {
    const CoherenceReport& c = s.report;
    out += io::join({std::to_string(s.m), io::fmt9(s.j), io::fmt9(ratio_or_nan(c.c_global, c.c_local)),
                     io::fmt9(ratio_or_nan(c.c_2_3, c.c_local)), io::fmt9(ratio_or_nan(c.c_1_23, c.c_abs_1_23)),
                     io::fmt9(ratio_or_nan(c.c_2_3, c.c_1_23)), io::fmt9(c.monogamy_m)}) +
           "\n";
  }
  return out;
}

inline CommandResult cmd_ratios(const RunConfig& cfg) {
  const SweepResult sweep = ground_sweep(build_schedule(cfg), cfg.params, cfg.log_base);
  CommandResult r;
  const auto path = cfg.out_dir / model_file("ratios", cfg.model, ".csv");
  io::write_text(path, ratios_csv(sweep));
  r.files.push_back(path);
  r.summary = "ratios " + to_string(cfg.model) + ": " + std::to_string(sweep.steps.size()) + " rows";
  return r;
}

// ---------------------------------------------------------------------------

inline io::json point_json(const Point3& p) {
  return io::json::array({io::round9(p[0]), io::round9(p[1]), io::round9(p[2])});
}

inline io::json geometry_json(Model model, std::span<const double> points, const ModelParams& params, LogBase base) {
  io::json out = io::json::array();
  for (double j : points) {
    const PureState g = ground_state(model_hamiltonian(model, params, j)).state;
    const CoherenceReport rep = coherence_report(DensityMatrix::from_pure(g), base);
    const Tetrahedron t = embed_tetrahedron(rep);
    out.push_back({{"J", io::round9(j)},
                   {"rho", point_json(t.rho)},
                   {"pi_dephased", point_json(t.pi_dephased)},
                   {"pi", point_json(t.pi)},
                   {"split_1_23", point_json(t.split)},
                   {"residual", io::round9(t.residual)},
                   {"coherences",
                    {{"C_A", io::round9(rep.c_absolute)},
                     {"C_G", io::round9(rep.c_global)},
                     {"C_L", io::round9(rep.c_local)},
                     {"C_1_23", io::round9(rep.c_1_23)},
                     {"C_A_1_23", io::round9(rep.c_abs_1_23)},
                     {"C_2_3", io::round9(rep.c_2_3)}}}});
  }
  return out;
}

inline CommandResult cmd_geometry(const RunConfig& cfg) {
  const std::vector<double> points =
      cfg.geometry_points.empty() ? default_geometry_points(cfg.model) : cfg.geometry_points;
  for (double j : points) {
    if (j < sweep_start(cfg.model) || j > sweep_end(cfg.model)) {
      throw DomainError("geometry: point " + io::fmt9(j) + " outside the sweep range");
    }
  }
  const io::json doc = geometry_json(cfg.model, points, cfg.params, cfg.log_base);
  CommandResult r;
  const auto path = cfg.out_dir / model_file("geometry", cfg.model, ".json");
  io::write_text(path, doc.dump(2) + "\n");
  r.files.push_back(path);
  double worst = 0.0;
  for (const auto& rec : doc) worst = std::max(worst, rec["residual"].get<double>());
  r.summary = "geometry " + to_string(cfg.model) + ": " + std::to_string(points.size()) +
              " tetrahedra, worst residual " + io::fmt9(worst);
  return r;
}

// ---------------------------------------------------------------------------

struct TomoRecord {
  std::string file;
  std::string status;  // accepted | repaired | rejected | unreadable
  std::optional<DensityDiagnostics> diagnostics;
  double fidelity = std::numeric_limits<double>::quiet_NaN();
  double root_fidelity = std::numeric_limits<double>::quiet_NaN();
  std::optional<CoherenceReport> report;
  std::string message;
};

inline TomoRecord tomo_one(const std::filesystem::path& file, const RunConfig& cfg, const PureState& reference) {
  TomoRecord rec;
  rec.file = file.string();
  ComplexMatrix m;
  try {
    m = io::load_density_file(file);
  } catch (const Error& e) {
    rec.status = "unreadable";
    rec.message = e.what();
    return rec;
  }
  if (m.rows() != reference.dim()) {
    rec.status = "rejected";
    rec.message = "expected dimension " + std::to_string(reference.dim()) + ", got " + std::to_string(m.rows());
    return rec;
  }
  const DensityDiagnostics d = density_diagnostics(m);
  rec.diagnostics = d;
  const double worst = std::max({d.hermiticity_error, d.trace_error, -d.min_eigenvalue});
  const bool within_tol = worst <= cfg.tolerance;
  if (!within_tol && (!cfg.repair || worst > cfg.repair_limit)) {
    rec.status = "rejected";
    try {
      validate_density(m, cfg.tolerance, Repair::off);
    } catch (const ValidationError& e) {
      rec.message = e.what();
    }
    if (cfg.repair) rec.message += " (beyond repair limit " + io::fmt9(cfg.repair_limit) + ")";
    return rec;
  }
  const DensityMatrix rho = validate_density(m, cfg.tolerance, cfg.repair ? Repair::on : Repair::off);
  rec.status = within_tol ? "accepted" : "repaired";
  rec.fidelity = state_fidelity(reference, rho);
  rec.root_fidelity = std::sqrt(rec.fidelity);
  rec.report = coherence_report(rho, cfg.log_base);
  return rec;
}

inline std::string tomo_csv(const std::vector<TomoRecord>& records, double j) {
  std::vector<std::string> header{"file", "status", "hermiticity_error", "trace_error", "min_eigenvalue",
                                  "fidelity", "root_fidelity", "J"};
  for (auto& c : io::coherence_columns()) header.push_back(c);
  std::string out = io::join(header) + "\n";
  for (const TomoRecord& r : records) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> cells{std::filesystem::path(r.file).filename().string(), r.status,
                                   io::fmt9(r.diagnostics ? r.diagnostics->hermiticity_error : nan),
                                   io::fmt9(r.diagnostics ? r.diagnostics->trace_error : nan),
                                   io::fmt9(r.diagnostics ? r.diagnostics->min_eigenvalue : nan),
                                   io::fmt9(r.fidelity), io::fmt9(r.root_fidelity), io::fmt9(j)};
    if (r.report) {
      for (auto& c : io::coherence_cells(*r.report)) cells.push_back(c);
    } else {
      for (std::size_t i = 0; i < io::coherence_columns().size(); ++i) cells.emplace_back();
    }
    out += io::join(cells) + "\n";
  }
  return out;
}

inline CommandResult cmd_tomo(const std::vector<std::filesystem::path>& files, const RunConfig& cfg) {
  if (files.empty()) throw DomainError("tomo: no input files");
  const double j = cfg.j_value.value_or(sweep_end(cfg.model));
  const PureState reference = ground_state(model_hamiltonian(cfg.model, cfg.params, j)).state;

  std::vector<TomoRecord> records;
  for (const auto& f : files) records.push_back(tomo_one(f, cfg, reference));

  CommandResult r;
  const auto path = cfg.out_dir / "tomo.csv";
  io::write_text(path, tomo_csv(records, j));
  r.files.push_back(path);
  std::ostringstream os;
  for (const TomoRecord& rec : records) {
    os << rec.file << ": " << rec.status;
    if (rec.report) {
      os << ", fidelity " << io::fmt9(rec.fidelity) << " (root " << io::fmt9(rec.root_fidelity) << ")"
         << ", C_A " << io::fmt9(rec.report->c_absolute) << ", M " << io::fmt9(rec.report->monogamy_m);
    }
    if (!rec.message.empty()) os << " [" << rec.message << "]";
    os << "\n";
    if (rec.status == "rejected" || rec.status == "unreadable") r.exit_code = kValidation;
  }
  r.summary = os.str();
  return r;
}

// ---------------------------------------------------------------------------

struct TrotterAudit {
  std::vector<double> j_values;
  std::vector<double> fidelity;
  double min_fidelity = 1.0;
  double worst_j = 0.0;
};

inline TrotterAudit trotter_audit(const Schedule& schedule, const ModelParams& params) {
  TrotterAudit a;
  for (double j : schedule.values) {
    const TrotterPair p = trotter_pair(schedule.model, j, schedule.tau, params);
    const double f = unitary_fidelity(p.u_ide, p.u_exp);
    a.j_values.push_back(j);
    a.fidelity.push_back(f);
    if (f < a.min_fidelity) {
      a.min_fidelity = f;
      a.worst_j = j;
    }
  }
  return a;
}

inline CommandResult cmd_trotter_audit(const RunConfig& cfg) {
  const Schedule schedule = build_schedule(cfg);
  const TrotterAudit audit = trotter_audit(schedule, cfg.params);

  std::string steps_csv = "m,J,unitary_fidelity\n";
  for (std::size_t m = 0; m < audit.j_values.size(); ++m) {
    steps_csv += io::join({std::to_string(m), io::fmt9(audit.j_values[m]), io::fmt9(audit.fidelity[m])}) + "\n";
  }

  // Error ratio under tau halving at the sweep ends and midpoint, for a ladder of tau values.
  std::string scaling_csv = "J,tau,error_tau,error_half_tau,ratio\n";
  const double a = sweep_start(cfg.model), b = sweep_end(cfg.model);
  for (double j : {a, 0.5 * (a + b), b}) {
    for (int k = 0; k < 4; ++k) {
      const double t = schedule.tau / static_cast<double>(1 << k);
      std::vector<std::string> cells{io::fmt9(j), io::fmt9(t)};
      try {
        const TrotterScaling s = trotter_error_scaling(cfg.model, j, t, cfg.params);
        cells.push_back(io::fmt9(s.error_full));
        cells.push_back(io::fmt9(s.error_half));
        cells.push_back(s.degenerate ? "" : io::fmt9(s.ratio));
      } catch (const DomainError&) {
        cells.insert(cells.end(), {"", "", ""});  // outside the asymptotic regime
      }
      scaling_csv += io::join(cells) + "\n";
    }
  }

  CommandResult r;
  const auto steps_path = cfg.out_dir / model_file("trotter", cfg.model, ".csv");
  const auto scaling_path = cfg.out_dir / model_file("trotter_scaling", cfg.model, ".csv");
  io::write_text(steps_path, steps_csv);
  io::write_text(scaling_path, scaling_csv);
  r.files = {steps_path, scaling_path};
  const bool pass = audit.min_fidelity > cfg.trotter_threshold;
  std::ostringstream os;
  os << "trotter-audit " << to_string(cfg.model) << " tau=" << io::fmt9(schedule.tau) << ": min unitary fidelity "
     << io::fmt9(audit.min_fidelity) << " at J=" << io::fmt9(audit.worst_j) << " -> "
     << (pass ? "PASS" : "FAIL") << " (threshold " << io::fmt9(cfg.trotter_threshold) << ")";
  r.summary = os.str();
  r.exit_code = pass ? kOk : kAssertion;
  return r;
}

// ---------------------------------------------------------------------------

inline std::string refocus_csv(const RefocusParams& p) {
  std::string out = p.model == Model::zz ? "m,J,tau1,tau2,tau3,FQ1,FQ2,FQ3,pulse_angle\n" : "m,J,d,pulse_angle\n";
  for (const RefocusRow& row : p.rows) {
    std::vector<std::string> cells{std::to_string(row.m), io::fmt9(row.j)};
    for (double d : row.delays) cells.push_back(io::fmt9(d));
    for (double f : row.offsets) cells.push_back(io::fmt9(f));
    cells.push_back(io::fmt9(row.pulse_angle));
    out += io::join(cells) + "\n";
  }
  return out;
}

inline CommandResult cmd_schedule(const RunConfig& cfg) {
  const Schedule schedule = build_schedule(cfg);
  CommandResult r;
  const auto path = cfg.out_dir / model_file("schedule", cfg.model, ".json");
  io::write_text(path, io::schedule_to_json(schedule.values).dump() + "\n");
  r.files.push_back(path);
  std::ostringstream os;
  os << "schedule " << to_string(cfg.model) << ": " << schedule.values.size() << " points, tau " << io::fmt9(schedule.tau);
  if (cfg.nmr) {
    const RefocusParams p = refocus_params(*cfg.nmr, schedule, cfg.params);
    const auto rpath = cfg.out_dir / model_file("refocus", cfg.model, ".csv");
    io::write_text(rpath, refocus_csv(p));
    r.files.push_back(rpath);
    os << "; refocusing table with " << p.rows.size() << " rows";
    if (!p.skipped.empty()) os << " (skipped " << p.skipped.size() << " step(s) with J = 0)";
  }
  r.summary = os.str();
  return r;
}

}  // namespace qcoh::cli
