#pragma once

// Coherence quantifiers built on the square root of the quantum
// Jensen-Shannon divergence, their tripartite decompositions, trade-off
// slacks, the monogamy score and the Euclidean tetrahedron picture.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qcoh/qmat.hpp"
#include "qcoh/states.hpp"

namespace qcoh {

enum class LogBase { two, e };

// Eigenvalues below this are treated as exact zeros before taking logs.
inline constexpr double kEigenFloor = 1e-12;
// Weight of rho on the (numerical) kernel of sigma above which the relative
// entropy is reported as infinite.
inline constexpr double kSupportTol = 1e-10;
inline constexpr double kQjsdRouteTol = 1e-9;

inline double log_in(double x, LogBase base) {
  return base == LogBase::two ? std::log2(x) : std::log(x);
}

namespace detail {

inline double entropy_of(const RealVector& eigenvalues, LogBase base) {
  double s = 0.0;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    const double p = eigenvalues[i];
    if (p > kEigenFloor) s -= p * log_in(p, base);
  }
  return s;
}

// Tr rho log rho - Tr rho log sigma from the two spectral decompositions.
inline double relative_entropy_of(const Spectrum& r, const Spectrum& s, LogBase base) {
  double self = 0.0;
  for (Index i = 0; i < r.size(); ++i) {
    if (r.values[i] > kEigenFloor) self += r.values[i] * log_in(r.values[i], base);
  }
  // |<r_i|s_j>|^2
  const Eigen::MatrixXd overlap = (r.vectors.adjoint() * s.vectors).cwiseAbs2();
  double cross = 0.0;
  for (Index j = 0; j < s.size(); ++j) {
    double weight = 0.0;
    for (Index i = 0; i < r.size(); ++i) {
      if (r.values[i] > kEigenFloor) weight += r.values[i] * overlap(i, j);
    }
    if (s.values[j] > kEigenFloor) {
      cross += weight * log_in(s.values[j], base);
    } else if (weight > kSupportTol) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return self - cross;
}

inline void require_same_dim(const DensityMatrix& a, const DensityMatrix& b, const char* who) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << who << ": dimension mismatch " << a.dim() << " vs " << b.dim();
    throw DimensionError(os.str());
  }
}

}  // namespace detail

inline double von_neumann_entropy(const DensityMatrix& rho, LogBase base = LogBase::two) {
  return std::max(0.0, detail::entropy_of(eig_hermitian(rho.matrix()).values, base));
}

// S(rho || sigma); +infinity when supp(rho) is not inside supp(sigma).
inline double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                               LogBase base = LogBase::two) {
  detail::require_same_dim(rho, sigma, "relative_entropy");
  const double v = detail::relative_entropy_of(eig_hermitian(rho.matrix()), eig_hermitian(sigma.matrix()), base);
  return std::isinf(v) ? v : std::max(0.0, v);
}

// Quantum Jensen-Shannon divergence J = [S(rho||m) + S(sigma||m)] / 2 with
// m = (rho + sigma)/2. The Holevo form S(m) - S(rho)/2 - S(sigma)/2 is
// evaluated from the same spectra and must agree.
inline double qjsd(const DensityMatrix& rho, const DensityMatrix& sigma, LogBase base = LogBase::two) {
  detail::require_same_dim(rho, sigma, "qjsd");
  const Spectrum sr = eig_hermitian(rho.matrix());
  const Spectrum ss = eig_hermitian(sigma.matrix());
  const Spectrum sm = eig_hermitian(0.5 * (rho.matrix() + sigma.matrix()));

  const double via_relative =
      0.5 * (detail::relative_entropy_of(sr, sm, base) + detail::relative_entropy_of(ss, sm, base));
  const double via_holevo = detail::entropy_of(sm.values, base) - 0.5 * detail::entropy_of(sr.values, base) -
                            0.5 * detail::entropy_of(ss.values, base);
  if (!(std::abs(via_relative - via_holevo) <= kQjsdRouteTol)) {
    std::ostringstream os;
    os.precision(17); os << "qjsd: relative-entropy and Holevo forms disagree (" << via_relative << " vs " << via_holevo << ")";
    throw NumericalError(os.str());
  }
  const double upper = base == LogBase::two ? 1.0 : std::numbers::ln2;
  return std::clamp(via_relative, 0.0, upper);
}

// sqrt(qjsd): a metric on density matrices.
inline double dist(const DensityMatrix& rho, const DensityMatrix& sigma, LogBase base = LogBase::two) {
  return std::sqrt(qjsd(rho, sigma, base));
}

struct CoherenceReport {
  double c_total = 0.0;      // D(rho, rho_d)
  double c_global = 0.0;     // D(rho, pi(rho))
  double c_local = 0.0;      // D(pi(rho), [pi(rho)]_d)
  double c_absolute = 0.0;   // D(rho, [pi(rho)]_d)
  double c_1_23 = 0.0;       // D(rho, rho_1 (x) rho_23)
  double c_2_3 = 0.0;        // D(rho_23, rho_2 (x) rho_3)
  double c_abs_1_23 = 0.0;   // D(rho_1 (x) rho_23, [pi(rho)]_d)
  double c_1_2 = 0.0;        // D(rho_12, rho_1 (x) rho_2)
  double c_1_3 = 0.0;        // D(rho_13, rho_1 (x) rho_3)
  double monogamy_m = 0.0;   // C_1:2 + C_1:3 - C_1:23; > 0 is polygamous

  // (right-hand side) - (left-hand side); nonnegative when the relation holds.
  double slack_eq7 = 0.0;    // C_A <= C_L + C_G
  double slack_eq10a = 0.0;  // C_A <= C_1:23 + C_A^1:23
  double slack_eq10b = 0.0;  // C_A^1:23 <= C_2:3 + C_L
  double slack_eq11 = 0.0;   // C_G <= C_1:23 + C_2:3

  double min_slack() const { return std::min({slack_eq7, slack_eq10a, slack_eq10b, slack_eq11}); }
};

inline CoherenceReport coherence_report(const DensityMatrix& rho, LogBase base = LogBase::two) {
  if (rho.dim() != 8) {
    throw DimensionError("coherence_report: expected a three-qubit state, got dimension " +
                         std::to_string(rho.dim()));
  }
  const auto ms = marginals(rho, 3);
  const DensityMatrix& r1 = ms[0];
  const DensityMatrix& r2 = ms[1];
  const DensityMatrix& r3 = ms[2];
  const DensityMatrix r12 = partial_trace(rho, 3, {1, 2});
  const DensityMatrix r13 = partial_trace(rho, 3, {1, 3});
  const DensityMatrix r23 = partial_trace(rho, 3, {2, 3});
  const DensityMatrix pi = kron(kron(r1, r2), r3);
  const DensityMatrix pi_d = dephase(pi);
  const DensityMatrix split = kron(r1, r23);

  CoherenceReport r;
  r.c_total = dist(rho, dephase(rho), base);
  r.c_global = dist(rho, pi, base);
  r.c_local = dist(pi, pi_d, base);
  r.c_absolute = dist(rho, pi_d, base);
  r.c_1_23 = dist(rho, split, base);
  r.c_2_3 = dist(r23, kron(r2, r3), base);
  r.c_abs_1_23 = dist(split, pi_d, base);
  r.c_1_2 = dist(r12, kron(r1, r2), base);
  r.c_1_3 = dist(r13, kron(r1, r3), base);
  r.monogamy_m = r.c_1_2 + r.c_1_3 - r.c_1_23;
  r.slack_eq7 = r.c_local + r.c_global - r.c_absolute;
  r.slack_eq10a = r.c_1_23 + r.c_abs_1_23 - r.c_absolute;
  r.slack_eq10b = r.c_2_3 + r.c_local - r.c_abs_1_23;
  r.slack_eq11 = r.c_1_23 + r.c_2_3 - r.c_global;
  return r;
}

// ---------------------------------------------------------------------------
// Tetrahedron embedding

using Point3 = std::array<double, 3>;

inline double distance(const Point3& a, const Point3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Vertices: rho, [pi(rho)]_d, pi(rho), rho_1 (x) rho_23.
struct Tetrahedron {
  Point3 rho{};
  Point3 pi_dephased{};
  Point3 pi{};
  Point3 split{};
  // Worst mismatch between an edge length and the coherence it represents.
  double residual = 0.0;
};

// The six edges and the coherence each one stands for, in a fixed order:
// (rho, pi_d)=C_A, (rho, pi)=C_G, (pi, pi_d)=C_L, (rho, split)=C_1:23,
// (split, pi_d)=C_A^1:23, (split, pi)=C_2:3.
inline std::array<double, 6> edge_targets(const CoherenceReport& r) {
  return {r.c_absolute, r.c_global, r.c_local, r.c_1_23, r.c_abs_1_23, r.c_2_3};
}

inline std::array<double, 6> edge_lengths(const Tetrahedron& t) {
  return {distance(t.rho, t.pi_dephased), distance(t.rho, t.pi),   distance(t.pi, t.pi_dephased),
          distance(t.rho, t.split),       distance(t.split, t.pi_dephased), distance(t.split, t.pi)};
}

inline constexpr double kEmbedDenominatorTol = 1e-9;

inline Tetrahedron embed_tetrahedron(const CoherenceReport& r) {
  auto clamped_cos = [](double num, double den) {
    return den < kEmbedDenominatorTol ? 1.0 : std::clamp(num / den, -1.0, 1.0);
  };
  const double ca = r.c_absolute, cg = r.c_global, cl = r.c_local;
  const double c123 = r.c_1_23, ca123 = r.c_abs_1_23, c23 = r.c_2_3;

  Tetrahedron t;
  t.rho = {0.0, 0.0, 0.0};
  t.pi_dephased = {ca, 0.0, 0.0};

  const double cos_theta = clamped_cos(ca * ca + cg * cg - cl * cl, 2.0 * ca * cg);
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
  t.pi = {cg * cos_theta, cg * sin_theta, 0.0};

  const double cos_phi = clamped_cos(ca * ca + c123 * c123 - ca123 * ca123, 2.0 * ca * c123);
  const double sin_phi = std::sqrt(std::max(0.0, 1.0 - cos_phi * cos_phi));
  const double a = c123 * cos_phi;
  const double b = c123 * sin_phi;
  const double p = t.pi[0], q = t.pi[1];
  const double cos_xi = clamped_cos((a - p) * (a - p) + b * b + q * q - c23 * c23, 2.0 * b * q);
  const double sin_xi = std::sqrt(std::max(0.0, 1.0 - cos_xi * cos_xi));
  t.split = {a, b * cos_xi, b * sin_xi};

  const auto want = edge_targets(r);
  const auto got = edge_lengths(t);
  for (std::size_t i = 0; i < want.size(); ++i) t.residual = std::max(t.residual, std::abs(want[i] - got[i]));
  return t;
}

}  // namespace qcoh
