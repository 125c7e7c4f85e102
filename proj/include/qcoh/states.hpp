#pragma once

// Canonical three-qubit states, pseudopure mixing and marginal factories.

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "qcoh/qmat.hpp"

namespace qcoh {

// Labels of the named states. Basis holds a bit string, qubit 1 first.
struct BasisLabel {
  std::string bits;
};
struct PlusProduct {
  int n_qubits = 3;
};
struct MinusProduct {
  int n_qubits = 3;
};
struct W001 {};
struct W110 {};
struct GhzMinus {};
struct GState {};

using StateLabel = std::variant<BasisLabel, PlusProduct, MinusProduct, W001, W110, GhzMinus, GState>;

namespace detail {

inline PureState uniform_over(Index dim, std::initializer_list<Index> support) {
  ComplexVector v = ComplexVector::Zero(dim);
  for (Index k : support) v[k] = 1.0;
  return PureState::from_amplitudes(std::move(v));
}

inline PureState single_qubit_product(int n, double sign) {
  if (n < 1) throw DimensionError("product state needs at least one qubit");
  ComplexVector one(2);
  one << 1.0, sign;
  ComplexVector v = one;
  for (int q = 1; q < n; ++q) v = kron(v, one);
  return PureState::from_amplitudes(std::move(v));
}

}  // namespace detail

inline PureState make_state(const StateLabel& label) {
  struct Visitor {
    PureState operator()(const BasisLabel& b) const {
      if (b.bits.empty()) throw DimensionError("basis label needs at least one bit");
      Index k = 0;
      for (char c : b.bits) {
        if (c != '0' && c != '1') throw DimensionError("basis label must be a 0/1 string: " + b.bits);
        k = (k << 1) | (c == '1' ? 1 : 0);
      }
      return PureState::basis(Index{1} << b.bits.size(), k);
    }
    PureState operator()(const PlusProduct& p) const { return detail::single_qubit_product(p.n_qubits, 1.0); }
    PureState operator()(const MinusProduct& p) const { return detail::single_qubit_product(p.n_qubits, -1.0); }
    PureState operator()(W001) const { return detail::uniform_over(8, {1, 2, 4}); }
    PureState operator()(W110) const { return detail::uniform_over(8, {3, 5, 6}); }
    PureState operator()(GhzMinus) const {
      ComplexVector v = ComplexVector::Zero(8);
      v[0] = 1.0;
      v[7] = -1.0;
      return PureState::from_amplitudes(std::move(v));
    }
    PureState operator()(GState) const { return detail::uniform_over(8, {1, 2, 4, 7}); }
  };
  return std::visit(Visitor{}, label);
}

// (1 - mu) I/d + mu |psi><psi|
inline DensityMatrix make_pps(const PureState& psi, double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) {
    throw DomainError("make_pps: mixing parameter must lie in [0, 1], got " + std::to_string(mu));
  }
  const Index d = psi.dim();
  ComplexMatrix m = (1.0 - mu) / static_cast<double>(d) * ComplexMatrix::Identity(d, d) + mu * psi.projector();
  return DensityMatrix::assume_valid(std::move(m));
}

// Single-qubit reduced states rho_i, in qubit order.
inline std::vector<DensityMatrix> marginals(const DensityMatrix& rho, int n_qubits) {
  std::vector<DensityMatrix> out;
  out.reserve(static_cast<std::size_t>(n_qubits));
  for (int q = 1; q <= n_qubits; ++q) out.push_back(partial_trace(rho, n_qubits, {q}));
  return out;
}

// pi(rho) = rho_1 (x) rho_2 (x) ... (x) rho_n
inline DensityMatrix pi_product(const DensityMatrix& rho, int n_qubits) {
  const auto ms = marginals(rho, n_qubits);
  ComplexMatrix acc = ms.front().matrix();
  for (std::size_t i = 1; i < ms.size(); ++i) acc = kron(acc, ms[i].matrix());
  return DensityMatrix::assume_valid(std::move(acc));
}

// rho_1 (x) rho_23 for a three-qubit state.
inline DensityMatrix split_1_23(const DensityMatrix& rho) {
  if (rho.dim() != 8) throw DimensionError("split_1_23: expected a three-qubit state");
  return kron(partial_trace(rho, 3, {1}), partial_trace(rho, 3, {2, 3}));
}

// rho_2 (x) rho_13, returned in the standard qubit order 1,2,3.
inline DensityMatrix split_2_13(const DensityMatrix& rho) {
  if (rho.dim() != 8) throw DimensionError("split_2_13: expected a three-qubit state");
  const ComplexMatrix r2 = partial_trace(rho.matrix(), 3, std::vector<int>{2});
  const ComplexMatrix r13 = partial_trace(rho.matrix(), 3, std::vector<int>{1, 3});
  ComplexMatrix out(8, 8);
  for (Index i = 0; i < 8; ++i) {
    for (Index j = 0; j < 8; ++j) {
      const Index i13 = ((i >> 2) << 1) | (i & 1), j13 = ((j >> 2) << 1) | (j & 1);
      out(i, j) = r2((i >> 1) & 1, (j >> 1) & 1) * r13(i13, j13);
    }
  }
  return DensityMatrix::assume_valid(std::move(out));
}

// rho_12 (x) rho_3
inline DensityMatrix split_3_12(const DensityMatrix& rho) {
  if (rho.dim() != 8) throw DimensionError("split_3_12: expected a three-qubit state");
  return kron(partial_trace(rho, 3, {1, 2}), partial_trace(rho, 3, {3}));
}

}  // namespace qcoh
