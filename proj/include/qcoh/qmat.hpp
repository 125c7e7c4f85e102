#pragma once

// Dense complex linear algebra for small multi-qubit systems.
//
// Bit ordering: qubit 1 is the most significant tensor factor, so basis index
// k = b1 b2 ... bn (binary, left to right). |0> is the S^z = +1/2 state.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "qcoh/error.hpp"

namespace qcoh {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kExperimentalPsdTol = 1e-6;
inline constexpr double kDegeneracyTol = 1e-10;
// Width of an eigenvalue cluster whose basis is canonicalized. Rotating inside
// a cluster moves the reconstruction by up to this much, so it is kept near
// rounding level.
inline constexpr double kClusterTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-8;

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_error(const ComplexMatrix& m) {
  return max_abs(m - m.adjoint());
}

// Returns n such that dim == 2^n, or throws.
inline int qubit_count(Index dim) {
  if (dim <= 0 || (dim & (dim - 1)) != 0) {
    throw DimensionError("dimension " + std::to_string(dim) + " is not a power of two");
  }
  int n = 0;
  while ((Index{1} << n) < dim) ++n;
  return n;
}

namespace detail {

inline void require_square(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << who << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
}

inline void require_hermitian(const ComplexMatrix& m, const char* who) {
  require_square(m, who);
  const double err = hermiticity_error(m);
  if (err > kHermitianTol * std::max(1.0, max_abs(m))) {
    std::ostringstream os;
    os << who << ": matrix is not Hermitian (max |M - M^dag| = " << err << ")";
    throw ValidationError("hermitian", err, os.str());
  }
}

inline void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << who << ": dimension mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows()
       << "x" << b.cols();
    throw DimensionError(os.str());
  }
}

// First index whose magnitude is within `slack` of the maximum.
inline Index pivot_index(const ComplexVector& v, double slack = 1e-9) {
  const double top = v.cwiseAbs().maxCoeff();
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) >= top - slack) return i;
  }
  return 0;
}

// Rotate the global phase so the pivot amplitude is real and nonnegative.
inline void canonicalize_phase(Eigen::Ref<ComplexVector> v) {
  const Complex p = v[pivot_index(v)];
  if (std::abs(p) > 0.0) v *= std::conj(p) / std::abs(p);
}

}  // namespace detail

// Unit-norm state vector. Construction normalizes and fixes the global phase so
// that the largest-magnitude amplitude (first one on ties) is real and >= 0.
class PureState {
 public:
  static PureState from_amplitudes(ComplexVector amplitudes) {
    const double norm = amplitudes.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw ValidationError("norm", norm, "PureState: amplitudes must have finite nonzero norm");
    }
    amplitudes /= norm;
    detail::canonicalize_phase(amplitudes);
    return PureState(std::move(amplitudes));
  }

  static PureState basis(Index dim, Index k) {
    if (k < 0 || k >= dim) throw DimensionError("PureState::basis: index out of range");
    ComplexVector v = ComplexVector::Zero(dim);
    v[k] = 1.0;
    return PureState(std::move(v));
  }

  // Same ray, with the global phase chosen so that <ref|this> is real and >= 0.
  // This is the only way to obtain a state outside the canonical phase convention.
  PureState aligned_to(const PureState& ref) const {
    const Complex ov = ref.amps_.dot(amps_);
    PureState out = *this;
    if (std::abs(ov) > 0.0) out.amps_ *= std::conj(ov) / std::abs(ov);
    return out;
  }

  const ComplexVector& amplitudes() const noexcept { return amps_; }
  Index dim() const noexcept { return amps_.size(); }
  Complex operator[](Index i) const { return amps_[i]; }

  // <this|other>
  Complex overlap(const PureState& other) const {
    if (other.dim() != dim()) throw DimensionError("PureState::overlap: dimension mismatch");
    return amps_.dot(other.amps_);
  }

  ComplexMatrix projector() const { return amps_ * amps_.adjoint(); }

 private:
  explicit PureState(ComplexVector v) : amps_(std::move(v)) {}
  ComplexVector amps_;
};

// Hermitian, unit-trace, positive semidefinite matrix. Public construction goes
// through validate_density() or the exact factories below.
class DensityMatrix {
 public:
  static DensityMatrix from_pure(const PureState& psi) { return DensityMatrix(psi.projector()); }

  static DensityMatrix maximally_mixed(Index dim) {
    return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
  }

  // For results of operations that preserve validity exactly (partial trace,
  // tensor product, dephasing, convex mixing). No checks are performed.
  static DensityMatrix assume_valid(ComplexMatrix m) { return DensityMatrix(std::move(m)); }

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }
  int n_qubits() const { return qubit_count(dim()); }
  Complex operator()(Index i, Index j) const { return m_(i, j); }

 private:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

// Ascending eigenvalues paired with the columns of a unitary matrix.
struct Spectrum {
  RealVector values;
  ComplexMatrix vectors;

  Index size() const noexcept { return values.size(); }
  ComplexMatrix reconstruct() const {
    return vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
  }
};

// ---------------------------------------------------------------------------
// Tensor structure

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix::assume_valid(kron(a.matrix(), b.matrix()));
}

inline ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

// Reduced matrix over the qubits in `keep` (1-based, any order, no repeats).
// Kept qubits appear in ascending order in the result.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, int n_qubits, std::span<const int> keep) {
  detail::require_square(m, "partial_trace");
  if (n_qubits < 1 || m.rows() != (Index{1} << n_qubits)) {
    throw DimensionError("partial_trace: matrix dimension " + std::to_string(m.rows()) +
                         " does not match 2^" + std::to_string(n_qubits));
  }
  if (keep.empty()) throw DimensionError("partial_trace: keep set is empty");
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw DimensionError("partial_trace: repeated qubit index");
  }
  if (kept.front() < 1 || kept.back() > n_qubits) {
    throw DimensionError("partial_trace: qubit index outside 1.." + std::to_string(n_qubits));
  }

  // Bit position (from the least significant end) of qubit q is n - q.
  std::vector<int> traced;
  for (int q = 1; q <= n_qubits; ++q) {
    if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);
  }
  const int nk = static_cast<int>(kept.size());
  const int nt = static_cast<int>(traced.size());

  auto scatter = [n_qubits](const std::vector<int>& qubits, Index bits) {
    Index full = 0;
    const int count = static_cast<int>(qubits.size());
    for (int i = 0; i < count; ++i) {
      if ((bits >> (count - 1 - i)) & 1) full |= Index{1} << (n_qubits - qubits[i]);
    }
    return full;
  };

  const Index dk = Index{1} << nk;
  const Index dt = Index{1} << nt;
  std::vector<Index> kept_offset(dk), traced_offset(dt);
  for (Index a = 0; a < dk; ++a) kept_offset[a] = scatter(kept, a);
  for (Index t = 0; t < dt; ++t) traced_offset[t] = scatter(traced, t);

  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (Index a = 0; a < dk; ++a) {
    for (Index b = 0; b < dk; ++b) {
      Complex acc = 0.0;
      for (Index t = 0; t < dt; ++t) {
        acc += m(kept_offset[a] | traced_offset[t], kept_offset[b] | traced_offset[t]);
      }
      out(a, b) = acc;
    }
  }
  return out;
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, int n_qubits, std::span<const int> keep) {
  return DensityMatrix::assume_valid(partial_trace(rho.matrix(), n_qubits, keep));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, int n_qubits,
                                   std::initializer_list<int> keep) {
  return partial_trace(rho, n_qubits, std::span<const int>(keep.begin(), keep.size()));
}

// Off-diagonal entries zeroed in the computational (S^z) basis.
inline ComplexMatrix dephase(const ComplexMatrix& m) {
  detail::require_square(m, "dephase");
  return m.diagonal().asDiagonal();
}

inline DensityMatrix dephase(const DensityMatrix& rho) {
  return DensityMatrix::assume_valid(dephase(rho.matrix()));
}

// ---------------------------------------------------------------------------
// Spectral decomposition

namespace detail {

// Replaces the eigenvectors of each degenerate cluster by the Gram-Schmidt
// orthonormalization of the projected computational basis vectors, taken in
// index order. The cluster projector is basis independent, so the result is
// reproducible regardless of how the solver mixed the cluster.
inline void canonicalize_clusters(Spectrum& s, double gap_tol) {
  const Index n = s.size();
  Index begin = 0;
  while (begin < n) {
    Index end = begin + 1;
    while (end < n && s.values[end] - s.values[begin] < gap_tol) ++end;
    const Index k = end - begin;
    if (k > 1) {
      const ComplexMatrix block = s.vectors.middleCols(begin, k);
      const ComplexMatrix proj = block * block.adjoint();
      ComplexMatrix chosen(n, k);
      Index found = 0;
      for (Index i = 0; i < n && found < k; ++i) {
        ComplexVector u = proj.col(i);
        for (int pass = 0; pass < 2; ++pass) {
          for (Index c = 0; c < found; ++c) u -= chosen.col(c) * chosen.col(c).dot(u);
        }
        const double norm = u.norm();
        if (norm > 1e-6) chosen.col(found++) = u / norm;
      }
      if (found == k) s.vectors.middleCols(begin, k) = chosen;
    }
    begin = end;
  }
  for (Index c = 0; c < n; ++c) canonicalize_phase(s.vectors.col(c));
}

}  // namespace detail

// Hermitian eigendecomposition, eigenvalues ascending. Deterministic for
// identical input, including within degenerate clusters.
inline Spectrum eig_hermitian(const ComplexMatrix& h) {
  detail::require_hermitian(h, "eig_hermitian");
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericalError("eig_hermitian: solver did not converge");
  Spectrum s{solver.eigenvalues(), solver.eigenvectors()};
  detail::canonicalize_clusters(s, kClusterTol * std::max(1.0, max_abs(h)));
  return s;
}

struct GroundState {
  double energy;
  PureState state;
  double gap;        // E1 - E0; infinity for 1x1 input
  bool degenerate;   // gap < kDegeneracyTol
};

inline GroundState ground_state(const ComplexMatrix& h) {
  const Spectrum s = eig_hermitian(h);
  const double gap = s.size() > 1 ? s.values[1] - s.values[0]
                                  : std::numeric_limits<double>::infinity();
  return GroundState{s.values[0], PureState::from_amplitudes(s.vectors.col(0)), gap,
                     gap < kDegeneracyTol};
}

// f(H) = V f(diag lambda) V^dag for a real function f of the eigenvalues.
template <class F>
ComplexMatrix spectral_map(const Spectrum& s, F&& f) {
  ComplexVector d(s.size());
  for (Index i = 0; i < s.size(); ++i) d[i] = f(s.values[i]);
  return s.vectors * d.asDiagonal() * s.vectors.adjoint();
}

// exp(-i h t)
inline ComplexMatrix expm_hermitian(const ComplexMatrix& h, double t) {
  const Spectrum s = eig_hermitian(h);
  return spectral_map(s, [t](double lambda) { return std::exp(Complex(0.0, -lambda * t)); });
}

// ---------------------------------------------------------------------------
// Fidelities

namespace detail {

inline ComplexMatrix sqrt_psd(const ComplexMatrix& m) {
  const Spectrum s = eig_hermitian(0.5 * (m + m.adjoint()));
  return spectral_map(s, [](double x) { return Complex(std::sqrt(std::max(x, 0.0)), 0.0); });
}

}  // namespace detail

// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2. Reduces to <psi|b|psi> for pure a.
inline double state_fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  detail::require_same_dim(a.matrix(), b.matrix(), "state_fidelity");
  const ComplexMatrix ra = detail::sqrt_psd(a.matrix());
  const ComplexMatrix inner = ra * b.matrix() * ra;
  const Spectrum s = eig_hermitian(0.5 * (inner + inner.adjoint()));
  double tr = 0.0;
  for (Index i = 0; i < s.size(); ++i) tr += std::sqrt(std::max(s.values[i], 0.0));
  return std::clamp(tr * tr, 0.0, 1.0);
}

inline double state_fidelity(const PureState& a, const PureState& b) {
  return std::clamp(std::norm(a.overlap(b)), 0.0, 1.0);
}

inline double state_fidelity(const PureState& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("state_fidelity: dimension mismatch");
  const Complex v = a.amplitudes().dot(b.matrix() * a.amplitudes());
  return std::clamp(v.real(), 0.0, 1.0);
}

// Square root of the Uhlmann fidelity: Tr sqrt(sqrt(a) b sqrt(a)), i.e. |<psi|phi>|
// for pure states.
inline double root_fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  return std::sqrt(state_fidelity(a, b));
}

inline double root_fidelity(const PureState& a, const PureState& b) {
  return std::sqrt(state_fidelity(a, b));
}

inline double unitarity_error(const ComplexMatrix& u) {
  return max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols()));
}

// |Tr(U1 U2^dag)|^2 / d^2, insensitive to global phases.
inline double unitary_fidelity(const ComplexMatrix& u1, const ComplexMatrix& u2) {
  detail::require_square(u1, "unitary_fidelity");
  detail::require_same_dim(u1, u2, "unitary_fidelity");
  for (const ComplexMatrix* u : {&u1, &u2}) {
    const double err = unitarity_error(*u);
    if (err > kUnitaryTol) {
      std::ostringstream os;
      os << "unitary_fidelity: input is not unitary (max |U^dag U - I| = " << err << ")";
      throw ValidationError("unitary", err, os.str());
    }
  }
  const double d = static_cast<double>(u1.rows());
  const Complex tr = (u1 * u2.adjoint()).trace();
  return std::clamp(std::norm(tr) / (d * d), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Density-matrix validation

struct DensityDiagnostics {
  double hermiticity_error;  // max |M - M^dag|
  double trace_error;        // |Tr M - 1|
  double min_eigenvalue;     // of the Hermitian part
};

inline DensityDiagnostics density_diagnostics(const ComplexMatrix& m) {
  detail::require_square(m, "density_diagnostics");
  const ComplexMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return DensityDiagnostics{hermiticity_error(m), std::abs(m.trace() - Complex(1.0, 0.0)),
                            solver.eigenvalues()[0]};
}

enum class Repair { off, on };

// Accepts `m` as a density matrix when every invariant holds within `tol`.
// With Repair::on, violations are projected away instead: Hermitian part,
// negative eigenvalues clipped to zero, trace renormalized to one.
inline DensityMatrix validate_density(const ComplexMatrix& m, double tol, Repair repair = Repair::off) {
  detail::require_square(m, "validate_density");
  if (!m.allFinite()) throw ValidationError("finite", INFINITY, "validate_density: non-finite entries");
  const DensityDiagnostics d = density_diagnostics(m);
  const bool ok = d.hermiticity_error <= tol && d.trace_error <= tol && d.min_eigenvalue >= -tol;
  if (ok) return DensityMatrix::assume_valid(0.5 * (m + m.adjoint()));

  if (repair == Repair::off) {
    std::ostringstream os;
    os << "validate_density: ";
    if (d.hermiticity_error > tol) {
      os << "matrix is not Hermitian (max |M - M^dag| = " << d.hermiticity_error << ")";
      throw ValidationError("hermitian", d.hermiticity_error, os.str());
    }
    if (d.min_eigenvalue < -tol) {
      os << "negative eigenvalue " << d.min_eigenvalue;
      throw ValidationError("positive_semidefinite", -d.min_eigenvalue, os.str());
    }
    os << "trace deviates from 1 by " << d.trace_error;
    throw ValidationError("unit_trace", d.trace_error, os.str());
  }

  const Spectrum s = eig_hermitian(0.5 * (m + m.adjoint()));
  double total = 0.0;
  for (Index i = 0; i < s.size(); ++i) total += std::max(s.values[i], 0.0);
  if (!(total > 0.0)) {
    throw ValidationError("positive_semidefinite", -d.min_eigenvalue,
                          "validate_density: no positive spectral weight left to repair");
  }
  ComplexMatrix fixed = spectral_map(s, [total](double x) { return Complex(std::max(x, 0.0) / total, 0.0); });
  fixed = 0.5 * (fixed + fixed.adjoint());
  return DensityMatrix::assume_valid(std::move(fixed));
}

}  // namespace qcoh
