#pragma once

// Perturbative ground states of the two sweep Hamiltonians at strong coupling,
// their closed-form fidelities, and a solver for the second-order secular
// equation inside a degenerate unperturbed subspace.

#include <cmath>
#include <sstream>
#include <vector>

#include "qcoh/models.hpp"
#include "qcoh/qmat.hpp"
#include "qcoh/states.hpp"

namespace qcoh {

// Unnormalized amplitudes in the permutation-symmetric basis
// {|000>, |W001>, |W110>, |111>}.
struct SymmetricAmplitudes {
  double c000 = 0.0;
  double w001 = 0.0;
  double w110 = 0.0;
  double c111 = 0.0;

  ComplexVector vector() const {
    ComplexVector v = c000 * make_state(BasisLabel{"000"}).amplitudes() + w001 * make_state(W001{}).amplitudes() +
                      w110 * make_state(W110{}).amplitudes() + c111 * make_state(BasisLabel{"111"}).amplitudes();
    return v;
  }
  PureState normalized() const { return PureState::from_amplitudes(vector()); }
};

namespace detail {

inline constexpr double kResonanceTol = 1e-12;

inline void require_off_resonance(double omega_z, double j2) {
  if (std::abs(2.0 * j2 + omega_z) < kResonanceTol) {
    std::ostringstream os;
    os << "first-order formula invalid at the avoided crossing 2*J2 + omega_z = 0 (J2 = " << j2
       << ", omega_z = " << omega_z << ")";
    throw DomainError(os.str());
  }
}

inline void require_positive_j3(double j3) {
  if (!(j3 > 0.0)) throw DomainError("strong-coupling expansion needs J3 > 0, got " + std::to_string(j3));
}

}  // namespace detail

// |W001> + (wx/wz)|W110> - (sqrt3/2) wx/(2 J2 + wz) |000>, before normalization.
inline SymmetricAmplitudes zz_first_order_coefficients(double omega_x, double omega_z, double j2) {
  detail::require_off_resonance(omega_z, j2);
  SymmetricAmplitudes a;
  a.w001 = 1.0;
  a.w110 = omega_x / omega_z;
  a.c000 = -std::sqrt(3.0) / 2.0 * omega_x / (2.0 * j2 + omega_z);
  return a;
}

inline PureState zz_first_order_ground(double omega_x, double omega_z, double j2) {
  return zz_first_order_coefficients(omega_x, omega_z, j2).normalized();
}

// |<W001|g>|^2 for the first-order ground state.
inline double zz_fidelity_formula(double omega_x, double omega_z, double j2) {
  detail::require_off_resonance(omega_z, j2);
  const double a = omega_x / omega_z;
  const double b = std::sqrt(3.0) / 2.0 * omega_x / (2.0 * j2 + omega_z);
  return 1.0 / (1.0 + a * a + b * b);
}

// |G> - (wx/J3) (3/4 |000> + 3 sqrt3/4 |W110>), before normalization.
inline SymmetricAmplitudes zzz_first_order_coefficients(double omega_x, double j3) {
  detail::require_positive_j3(j3);
  const double r = omega_x / j3;
  SymmetricAmplitudes a;
  a.w001 = std::sqrt(3.0) / 2.0;
  a.c111 = 0.5;
  a.c000 = -r * 0.75;
  a.w110 = -r * 3.0 * std::sqrt(3.0) / 4.0;
  return a;
}

inline PureState zzz_first_order_ground(double omega_x, double j3) {
  return zzz_first_order_coefficients(omega_x, j3).normalized();
}

// |<G|g>|^2 for the first-order ground state.
inline double zzz_fidelity_formula(double omega_x, double j3) {
  detail::require_positive_j3(j3);
  const double x = 3.0 * omega_x / (2.0 * j3);
  return 1.0 / (1.0 + x * x);
}

// ---------------------------------------------------------------------------
// Degenerate perturbation theory

struct PerturbationSplit {
  ComplexMatrix h0;
  ComplexMatrix v;
  // Orthonormal basis of a degenerate eigenspace of h0 (possibly a proper
  // subspace of it, e.g. its permutation-symmetric part).
  std::vector<PureState> degenerate_subspace;

  ComplexMatrix full() const { return h0 + v; }
};

// H0 = omega_z sum S^z + 2 J2 sum S^z S^z, V = omega_x sum S^x.
inline PerturbationSplit zz_perturbation_split(const ModelParams& p) {
  const SplitHamiltonian s = h_zz_split(p);
  return {s.longitudinal, s.transverse, {make_state(W001{})}};
}

// H0 = 4 J3 S^z S^z S^z, V = omega_x sum S^x, subspace {|W001>, |111>}.
inline PerturbationSplit zzz_perturbation_split(const ModelParams& p) {
  const SplitHamiltonian s = h_zzz_split(p);
  return {s.longitudinal, s.transverse, {make_state(W001{}), make_state(BasisLabel{"111"})}};
}

struct SecularSolution {
  double energy_shift;                // Delta E_g
  std::vector<Complex> coefficients;  // c_{g nu}, in subspace order
  PureState state;                    // sum_nu c_{g nu} |g nu>
  bool degenerate;                    // lowest root not unique
};

// Builds A_{mu nu} = sum_{n not in g} V_{g mu, n} V_{n, g nu} / (E_g - E_n) over
// the eigenbasis of h0 and returns its lowest eigenpair.
inline SecularSolution secular_solve(const PerturbationSplit& split) {
  const auto& g = split.degenerate_subspace;
  if (g.empty()) throw DomainError("secular_solve: degenerate subspace is empty");
  detail::require_hermitian(split.h0, "secular_solve (h0)");
  detail::require_hermitian(split.v, "secular_solve (v)");
  detail::require_same_dim(split.h0, split.v, "secular_solve");
  const Index d = split.h0.rows();
  const Index k = static_cast<Index>(g.size());
  const double scale = std::max({1.0, max_abs(split.h0), max_abs(split.v)});
  const double tol = 1e-9 * scale;

  ComplexMatrix basis(d, k);
  for (Index mu = 0; mu < k; ++mu) {
    if (g[mu].dim() != d) throw DimensionError("secular_solve: subspace vector has the wrong dimension");
    basis.col(mu) = g[mu].amplitudes();
  }
  if (max_abs(basis.adjoint() * basis - ComplexMatrix::Identity(k, k)) > 1e-10) {
    throw DomainError("secular_solve: subspace basis is not orthonormal");
  }

  const double e_g = (basis.col(0).adjoint() * split.h0 * basis.col(0))(0, 0).real();
  if (max_abs(split.h0 * basis - e_g * basis) > tol) {
    throw DomainError("secular_solve: subspace is not a degenerate eigenspace of h0");
  }
  const ComplexMatrix v_g = split.v * basis;
  if (max_abs(basis.adjoint() * v_g) > tol) {
    throw DomainError("secular_solve: V splits the subspace at first order; second-order secular matrix does not apply");
  }

  const Spectrum s0 = eig_hermitian(split.h0);
  ComplexMatrix a = ComplexMatrix::Zero(k, k);
  ComplexMatrix degenerate_rest = ComplexMatrix::Zero(d, k);
  for (Index n = 0; n < s0.size(); ++n) {
    const ComplexVector ket = s0.vectors.col(n);
    const Eigen::Matrix<Complex, 1, Eigen::Dynamic> row = ket.adjoint() * v_g;  // <n|V|g nu>
    const double denom = e_g - s0.values[n];
    if (std::abs(denom) <= tol) {
      degenerate_rest += ket * row;
      continue;
    }
    a += row.adjoint() * row / denom;
  }
  // V must not connect the subspace to the rest of its own degenerate level.
  degenerate_rest -= basis * (basis.adjoint() * degenerate_rest);
  if (max_abs(degenerate_rest) > tol) {
    throw DomainError("secular_solve: vanishing denominator, V couples the subspace to a degenerate state outside it");
  }

  const Spectrum sa = eig_hermitian(0.5 * (a + a.adjoint()));
  const bool degenerate = k > 1 && (sa.values[1] - sa.values[0]) < kDegeneracyTol * std::max(1.0, max_abs(a));
  std::vector<Complex> coeffs(static_cast<std::size_t>(k));
  for (Index mu = 0; mu < k; ++mu) coeffs[static_cast<std::size_t>(mu)] = sa.vectors(mu, 0);
  return SecularSolution{sa.values[0], coeffs, PureState::from_amplitudes(basis * sa.vectors.col(0)), degenerate};
}

}  // namespace qcoh
