#pragma once

// Spin operators and the two adiabatic Hamiltonians (two-body Ising and
// three-body interaction), plus the diagonal NMR Hamiltonian.

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "qcoh/qmat.hpp"

namespace qcoh {

enum class Axis { x, y, z };

enum class Model { zz, zzz };

inline std::string to_string(Model m) { return m == Model::zz ? "zz" : "zzz"; }

inline Model parse_model(const std::string& s) {
  if (s == "zz") return Model::zz;
  if (s == "zzz") return Model::zzz;
  throw DomainError("unknown model '" + s + "' (expected zz or zzz)");
}

// Sweep endpoints and the experimental step interval / step count.
inline double sweep_start(Model) { return 0.0; }
inline double sweep_end(Model m) { return m == Model::zz ? 2.0 : 5.0; }
inline double default_tau(Model m) { return m == Model::zz ? 0.7 : 0.4; }
inline int default_steps(Model m) { return m == Model::zz ? 300 : 200; }

struct ModelParams {
  double omega_z = -2.0;
  double omega_x = 0.1;
  double j2 = 0.0;
  double j3 = 0.0;
  int n_qubits = 3;
};

// Chemical shifts and scalar couplings in Hz. Indices 0..2 are qubits 1..3.
struct NmrParams {
  std::array<double, 3> deltas{};
  std::array<std::array<double, 3>, 3> j_couplings{};

  void validate() const {
    for (int i = 0; i < 3; ++i) {
      if (j_couplings[i][i] != 0.0) throw DomainError("NmrParams: coupling table must have zero diagonal");
      for (int j = 0; j < 3; ++j) {
        if (j_couplings[i][j] != j_couplings[j][i]) throw DomainError("NmrParams: coupling table must be symmetric");
      }
    }
  }
};

// sigma_axis / 2 acting on `site` (1-based) of an n-qubit register.
inline ComplexMatrix spin_op(int n_qubits, int site, Axis axis) {
  if (n_qubits < 1) throw DimensionError("spin_op: need at least one qubit");
  if (site < 1 || site > n_qubits) {
    throw DimensionError("spin_op: site " + std::to_string(site) + " outside 1.." + std::to_string(n_qubits));
  }
  ComplexMatrix s(2, 2);
  switch (axis) {
    case Axis::x: s << 0.0, 0.5, 0.5, 0.0; break;
    case Axis::y: s << 0.0, Complex(0.0, -0.5), Complex(0.0, 0.5), 0.0; break;
    case Axis::z: s << 0.5, 0.0, 0.0, -0.5; break;
  }
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int q = 1; q <= n_qubits; ++q) {
    out = kron(out, q == site ? s : ComplexMatrix::Identity(2, 2));
  }
  return out;
}

inline ComplexMatrix total_spin(int n_qubits, Axis axis) {
  const Index d = Index{1} << n_qubits;
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (int q = 1; q <= n_qubits; ++q) out += spin_op(n_qubits, q, axis);
  return out;
}

// sum_{i<j} S_i^z S_j^z
inline ComplexMatrix zz_pair_sum(int n_qubits) {
  const Index d = Index{1} << n_qubits;
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (int i = 1; i <= n_qubits; ++i) {
    for (int j = i + 1; j <= n_qubits; ++j) out += spin_op(n_qubits, i, Axis::z) * spin_op(n_qubits, j, Axis::z);
  }
  return out;
}

// S_1^z S_2^z S_3^z
inline ComplexMatrix zzz_triple() {
  return spin_op(3, 1, Axis::z) * spin_op(3, 2, Axis::z) * spin_op(3, 3, Axis::z);
}

// Hamiltonian split into the transverse drive H_x and the longitudinal /
// interaction part H_z(J); the full Hamiltonian is their sum.
struct SplitHamiltonian {
  ComplexMatrix transverse;
  ComplexMatrix longitudinal;

  ComplexMatrix full() const { return transverse + longitudinal; }
};

// omega_z sum S^z + omega_x sum S^x + 2 J2 sum_{i<j} S^z_i S^z_j
inline SplitHamiltonian h_zz_split(const ModelParams& p) {
  return {p.omega_x * total_spin(p.n_qubits, Axis::x),
          p.omega_z * total_spin(p.n_qubits, Axis::z) + 2.0 * p.j2 * zz_pair_sum(p.n_qubits)};
}

// omega_x sum S^x + 4 J3 S^z_1 S^z_2 S^z_3
inline SplitHamiltonian h_zzz_split(const ModelParams& p) {
  if (p.n_qubits != 3) throw DimensionError("h_zzz: the three-body model is defined for three qubits");
  return {p.omega_x * total_spin(3, Axis::x), 4.0 * p.j3 * zzz_triple()};
}

inline ComplexMatrix h_zz(const ModelParams& p) { return h_zz_split(p).full(); }
inline ComplexMatrix h_zzz(const ModelParams& p) { return h_zzz_split(p).full(); }

// The model Hamiltonian with its sweep coupling (J2 or J3) set to `coupling`.
inline SplitHamiltonian model_split(Model m, ModelParams p, double coupling) {
  if (m == Model::zz) {
    p.j2 = coupling;
    return h_zz_split(p);
  }
  p.j3 = coupling;
  return h_zzz_split(p);
}

inline ComplexMatrix model_hamiltonian(Model m, const ModelParams& p, double coupling) {
  return model_split(m, p, coupling).full();
}

// dH/dJ for the sweep coupling.
inline ComplexMatrix coupling_derivative(Model m, const ModelParams& p) {
  return m == Model::zz ? ComplexMatrix(2.0 * zz_pair_sum(p.n_qubits)) : ComplexMatrix(4.0 * zzz_triple());
}

// sum_i 2 pi delta_i S_i^z + sum_{i<j} 2 pi J_ij S_i^z S_j^z
inline ComplexMatrix h_nmr(const NmrParams& p) {
  p.validate();
  constexpr double two_pi = 2.0 * std::numbers::pi;
  ComplexMatrix h = ComplexMatrix::Zero(8, 8);
  for (int i = 0; i < 3; ++i) h += two_pi * p.deltas[i] * spin_op(3, i + 1, Axis::z);
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      h += two_pi * p.j_couplings[i][j] * spin_op(3, i + 1, Axis::z) * spin_op(3, j + 1, Axis::z);
    }
  }
  return h;
}

}  // namespace qcoh
