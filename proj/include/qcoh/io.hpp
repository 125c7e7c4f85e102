#pragma once

// File formats: density matrices as {"dim", "re", "im"} JSON, schedules as
// JSON arrays, model/NMR parameter configs, and CSV rows with 9 significant
// digits.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcoh/coherence.hpp"
#include "qcoh/models.hpp"
#include "qcoh/qmat.hpp"

namespace qcoh::io {

using json = nlohmann::json;

class FormatError : public Error {
 public:
  using Error::Error;
};

// 9 significant digits; NaN becomes an empty cell.
inline std::string fmt9(double x) {
  if (std::isnan(x)) return "";
  if (x == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

inline double round9(double x) {
  if (!std::isfinite(x)) return x;
  return std::stod(fmt9(x));
}

inline std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json read_json(const std::filesystem::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw FormatError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  out << text;
}

// ---------------------------------------------------------------------------
// Density matrices

inline ComplexMatrix density_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("re") || !j.contains("im")) {
    throw FormatError("density matrix JSON needs keys dim, re, im");
  }
  if (!j["dim"].is_number_integer() || j["dim"].get<long long>() <= 0) {
    throw FormatError("density matrix JSON: dim must be a positive integer");
  }
  const auto d = static_cast<Index>(j["dim"].get<long long>());
  auto read_part = [&](const char* key) {
    const json& rows = j[key];
    if (!rows.is_array() || static_cast<Index>(rows.size()) != d) {
      throw FormatError(std::string("density matrix JSON: '") + key + "' must have dim rows");
    }
    Eigen::MatrixXd part(d, d);
    for (Index r = 0; r < d; ++r) {
      const json& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Index>(row.size()) != d) {
        throw FormatError(std::string("density matrix JSON: row ") + std::to_string(r) + " of '" + key +
                          "' must have dim entries");
      }
      for (Index c = 0; c < d; ++c) {
        const json& v = row[static_cast<std::size_t>(c)];
        if (!v.is_number()) throw FormatError("density matrix JSON: non-numeric entry");
        part(r, c) = v.get<double>();
      }
    }
    return part;
  };
  ComplexMatrix m(d, d);
  m.real() = read_part("re");
  m.imag() = read_part("im");
  return m;
}

inline json density_to_json(const ComplexMatrix& m) {
  json re = json::array(), im = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json rr = json::array(), ir = json::array();
    for (Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ir.push_back(m(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return json{{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline ComplexMatrix load_density_file(const std::filesystem::path& path) {
  try {
    return density_from_json(read_json(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Schedules

inline std::vector<double> schedule_from_json(const json& j) {
  if (!j.is_array()) throw FormatError("schedule file must be a JSON array of numbers");
  std::vector<double> values;
  values.reserve(j.size());
  for (const json& v : j) {
    if (!v.is_number()) throw FormatError("schedule file must be a JSON array of numbers");
    values.push_back(v.get<double>());
  }
  return values;
}

inline std::vector<double> load_schedule_file(const std::filesystem::path& path) {
  return schedule_from_json(read_json(path));
}

inline json schedule_to_json(std::span<const double> values) {
  json out = json::array();
  for (double v : values) out.push_back(round9(v));
  return out;
}

// ---------------------------------------------------------------------------
// Parameter configs: {"omega_z", "omega_x", "deltas": [3], "j_couplings": [[3]x3]}

struct ParameterConfig {
  ModelParams model;
  std::optional<NmrParams> nmr;
};

inline ParameterConfig config_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("config must be a JSON object");
  ParameterConfig cfg;
  if (j.contains("omega_z")) cfg.model.omega_z = j["omega_z"].get<double>();
  if (j.contains("omega_x")) cfg.model.omega_x = j["omega_x"].get<double>();
  if (j.contains("deltas") || j.contains("j_couplings")) {
    if (!j.contains("deltas") || !j.contains("j_couplings")) {
      throw FormatError("config: deltas and j_couplings must be given together");
    }
    NmrParams nmr;
    const json& d = j["deltas"];
    const json& c = j["j_couplings"];
    if (!d.is_array() || d.size() != 3) throw FormatError("config: deltas must have 3 entries");
    if (!c.is_array() || c.size() != 3) throw FormatError("config: j_couplings must be 3x3");
    for (std::size_t i = 0; i < 3; ++i) {
      nmr.deltas[i] = d[i].get<double>();
      if (!c[i].is_array() || c[i].size() != 3) throw FormatError("config: j_couplings must be 3x3");
      for (std::size_t k = 0; k < 3; ++k) nmr.j_couplings[i][k] = c[i][k].get<double>();
    }
    try {
      nmr.validate();
    } catch (const DomainError& e) {
      throw FormatError(std::string("config: ") + e.what());
    }
    cfg.nmr = nmr;
  }
  return cfg;
}

inline ParameterConfig load_config(const std::filesystem::path& path) {
  try {
    return config_from_json(read_json(path));
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Coherence CSV

inline std::vector<std::string> coherence_columns() {
  return {"C_T",     "C_G", "C_L",    "C_A",      "C_1_23",   "C_2_3",   "C_A_1_23", "C_1_2",
          "C_1_3",   "M",   "slack7", "slack10a", "slack10b", "slack11"};
}

inline std::vector<std::string> coherence_cells(const CoherenceReport& r) {
  return {fmt9(r.c_total),   fmt9(r.c_global),   fmt9(r.c_local),     fmt9(r.c_absolute), fmt9(r.c_1_23),
          fmt9(r.c_2_3),     fmt9(r.c_abs_1_23), fmt9(r.c_1_2),       fmt9(r.c_1_3),      fmt9(r.monogamy_m),
          fmt9(r.slack_eq7), fmt9(r.slack_eq10a), fmt9(r.slack_eq10b), fmt9(r.slack_eq11)};
}

// One CoherenceReport as "J, C_T, ..., slack11".
inline std::string coherence_csv_header() {
  std::vector<std::string> cols{"J"};
  for (auto& c : coherence_columns()) cols.push_back(c);
  return join(cols);
}

inline std::string coherence_csv_row(double j, const CoherenceReport& r) {
  std::vector<std::string> cells{fmt9(j)};
  for (auto& c : coherence_cells(r)) cells.push_back(c);
  return join(cells);
}

}  // namespace qcoh::io
