// qcoh: coherence decompositions and adiabatic sweeps from the command line.
//
//   qcoh sweep --model zz --out results/
//   qcoh trotter-audit --model zzz --tau 0.4
//   qcoh tomo --model zz --j 2 --repair data/*.json

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qcoh/qcoh.hpp"

namespace {

using namespace qcoh;
using namespace qcoh::cli;

struct Flags {
  std::string model = "zz";
  std::optional<int> steps;
  std::optional<double> tau;
  std::string schedule = "adaptive";
  std::string out = ".";
  std::string log_base = "2";
  std::string config;
  bool repair = false;
  double tol = kExperimentalPsdTol;
  double repair_limit = 0.1;
  std::optional<double> j;
  std::vector<double> points;
  std::optional<double> pps_mu;
  double threshold = 0.999;
  std::vector<std::string> files;
};

RunConfig to_config(const Flags& f) {
  RunConfig cfg;
  cfg.model = parse_model(f.model);
  cfg.m_steps = f.steps;
  cfg.tau = f.tau;
  cfg.out_dir = f.out;
  cfg.log_base = f.log_base == "e" ? LogBase::e : LogBase::two;
  if (f.schedule == "linear") {
    cfg.schedule_kind = ScheduleKind::linear;
  } else if (f.schedule == "adaptive") {
    cfg.schedule_kind = ScheduleKind::adaptive;
  } else if (f.schedule.rfind("file:", 0) == 0 && f.schedule.size() > 5) {
    cfg.schedule_kind = ScheduleKind::file;
    cfg.schedule_path = f.schedule.substr(5);
  } else {
    throw CLI::ValidationError("--schedule", "expected linear, adaptive or file:PATH, got '" + f.schedule + "'");
  }
  if (!f.config.empty()) {
    const io::ParameterConfig pc = io::load_config(f.config);
    cfg.params = pc.model;
    cfg.nmr = pc.nmr;
  }
  cfg.repair = f.repair;
  cfg.tolerance = f.tol;
  cfg.repair_limit = f.repair_limit;
  cfg.j_value = f.j;
  cfg.geometry_points = f.points;
  cfg.pps_mu = f.pps_mu;
  cfg.trotter_threshold = f.threshold;
  return cfg;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--model", f.model, "zz or zzz")->check(CLI::IsMember({"zz", "zzz"}));
  sub->add_option("--steps,--m-steps", f.steps, "number of steps M (default 300 for zz, 200 for zzz)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--tau", f.tau, "step interval (default 0.7 for zz, 0.4 for zzz)")->check(CLI::PositiveNumber);
  sub->add_option("--schedule", f.schedule, "linear | adaptive | file:PATH");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--log-base", f.log_base, "entropy log base")->check(CLI::IsMember({"2", "e"}));
  sub->add_option("--config", f.config, "JSON file with omega_z, omega_x and optional NMR couplings")
      ->check(CLI::ExistingFile);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherence trade-offs and adiabatic sweeps for three-qubit spin models"};
  app.require_subcommand(1);
  Flags f;

  auto* sweep = app.add_subcommand("sweep", "ground-state sweep with Trotter evolution -> sweep_<model>.csv");
  add_common(sweep, f);
  sweep->add_option("--pps-mu", f.pps_mu, "evolve the pseudopure state (1-mu) I/8 + mu |g><g| instead")
      ->check(CLI::Range(0.0, 1.0));

  auto* ratios = app.add_subcommand("ratios", "coherence ratios and monogamy -> ratios_<model>.csv");
  add_common(ratios, f);

  auto* geometry = app.add_subcommand("geometry", "tetrahedron embeddings -> geometry_<model>.json");
  add_common(geometry, f);
  geometry->add_option("--points", f.points, "coupling values to embed");

  auto* tomo = app.add_subcommand("tomo", "validate tomography matrices and report coherences -> tomo.csv");
  add_common(tomo, f);
  tomo->add_flag("--repair", f.repair, "project invalid matrices onto valid density matrices");
  tomo->add_option("--tol", f.tol, "validation tolerance")->check(CLI::NonNegativeNumber);
  tomo->add_option("--repair-limit", f.repair_limit, "largest violation --repair will fix")
      ->check(CLI::NonNegativeNumber);
  tomo->add_option("--j", f.j, "coupling of the reference ground state (default: sweep end)");
  tomo->add_option("files", f.files, "density-matrix JSON files")->required();

  auto* audit = app.add_subcommand("trotter-audit", "unitary fidelity of the Trotter split at every step");
  add_common(audit, f);
  audit->add_option("--threshold", f.threshold, "minimum acceptable unitary fidelity");

  auto* schedule = app.add_subcommand("schedule", "write the schedule (and refocusing table with --config)");
  add_common(schedule, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    const RunConfig cfg = to_config(f);
    CommandResult r;
    if (sweep->parsed()) {
      r = cmd_sweep(cfg);
    } else if (ratios->parsed()) {
      r = cmd_ratios(cfg);
    } else if (geometry->parsed()) {
      r = cmd_geometry(cfg);
    } else if (tomo->parsed()) {
      std::vector<std::filesystem::path> paths(f.files.begin(), f.files.end());
      r = cmd_tomo(paths, cfg);
    } else if (audit->parsed()) {
      r = cmd_trotter_audit(cfg);
    } else {
      r = cmd_schedule(cfg);
    }
    std::cout << r.summary;
    if (!r.summary.empty() && r.summary.back() != '\n') std::cout << '\n';
    for (const auto& p : r.files) std::cout << "wrote " << p.string() << '\n';
    return r.exit_code;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "qcoh: " << e.what() << '\n';
    return kUsage;
  } catch (const io::FormatError& e) {
    std::cerr << "qcoh: " << e.what() << '\n';
    return kValidation;
  } catch (const ValidationError& e) {
    std::cerr << "qcoh: " << e.what() << '\n';
    return kValidation;
  } catch (const DomainError& e) {
    std::cerr << "qcoh: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "qcoh: " << e.what() << '\n';
    return kValidation;
  }
}
