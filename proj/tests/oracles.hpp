#pragma once

// Independent reference implementations used as test oracles. Nothing here
// calls into the library's algorithms: partial traces are explicit index
// loops, exponentials are Taylor series, spectra come from Eigen's general
// (non-Hermitian) complex eigensolver, and Hamiltonians are assembled from bit
// arithmetic.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// ---------------------------------------------------------------------------
// Random states and operators

inline Vec haar_vector(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = Complex(g(rng), g(rng));
  return v / v.norm();
}

// Random Hermitian with Gaussian entries.
inline Mat random_hermitian(std::mt19937_64& rng, Eigen::Index dim, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Mat a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

// Haar unitary from the QR decomposition of a Ginibre matrix.
inline Mat random_unitary(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) q.col(i) *= std::polar(1.0, std::arg(r(i, i)));
  return q;
}

// ---------------------------------------------------------------------------
// Partial trace by explicit bit loops. Qubit 1 is the most significant bit.

inline Mat partial_trace(const Mat& rho, int n, const std::vector<int>& keep) {
  std::vector<int> traced;
  for (int q = 1; q <= n; ++q)
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);
  const int k = static_cast<int>(keep.size());
  const Eigen::Index dk = Eigen::Index{1} << k;
  const Eigen::Index dt = Eigen::Index{1} << traced.size();
  auto assemble = [&](Eigen::Index kept_bits, Eigen::Index traced_bits) {
    Eigen::Index idx = 0;
    for (int i = 0; i < k; ++i) {
      const int bit = static_cast<int>((kept_bits >> (k - 1 - i)) & 1);
      idx |= static_cast<Eigen::Index>(bit) << (n - keep[i]);
    }
    const int t = static_cast<int>(traced.size());
    for (int i = 0; i < t; ++i) {
      const int bit = static_cast<int>((traced_bits >> (t - 1 - i)) & 1);
      idx |= static_cast<Eigen::Index>(bit) << (n - traced[i]);
    }
    return idx;
  };
  Mat out = Mat::Zero(dk, dk);
  for (Eigen::Index a = 0; a < dk; ++a)
    for (Eigen::Index b = 0; b < dk; ++b)
      for (Eigen::Index t = 0; t < dt; ++t) out(a, b) += rho(assemble(a, t), assemble(b, t));
  return out;
}

// Mixed state on n qubits: trace out an n-qubit environment from a Haar pure
// state on 2n qubits.
inline Mat random_mixed(std::mt19937_64& rng, int n) {
  const Vec psi = haar_vector(rng, Eigen::Index{1} << (2 * n));
  std::vector<int> keep;
  for (int q = 1; q <= n; ++q) keep.push_back(q);
  return partial_trace(psi * psi.adjoint(), 2 * n, keep);
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// ---------------------------------------------------------------------------
// Exponential: exp(-i h t) by scaling and squaring with a Taylor series.

inline Mat expm_taylor(const Mat& h, double t) {
  const Mat a = Complex(0.0, -t) * h;
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
  const Mat x = a / std::pow(2.0, squarings);
  Mat term = Mat::Identity(h.rows(), h.cols());
  Mat sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

// ---------------------------------------------------------------------------
// Spectra via the general complex eigensolver.

inline std::vector<double> eigenvalues(const Mat& h) {
  Eigen::ComplexEigenSolver<Mat> es(h);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < h.rows(); ++i) out.push_back(es.eigenvalues()[i].real());
  std::sort(out.begin(), out.end());
  return out;
}

inline double entropy_bits(const Mat& rho) {
  double s = 0.0;
  for (double p : eigenvalues(rho))
    if (p > 1e-12) s -= p * std::log2(p);
  return s;
}

inline double qjsd(const Mat& a, const Mat& b) {
  return entropy_bits(0.5 * (a + b)) - 0.5 * entropy_bits(a) - 0.5 * entropy_bits(b);
}

inline double dist(const Mat& a, const Mat& b) { return std::sqrt(std::max(0.0, qjsd(a, b))); }

inline Mat dephase(const Mat& m) {
  Mat out = Mat::Zero(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, i) = m(i, i);
  return out;
}

// Lowest eigenvector, ground energy.
inline std::pair<double, Vec> ground(const Mat& h) {
  Eigen::ComplexEigenSolver<Mat> es(h);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < h.rows(); ++i)
    if (es.eigenvalues()[i].real() < es.eigenvalues()[best].real()) best = i;
  Vec v = es.eigenvectors().col(best);
  return {es.eigenvalues()[best].real(), v / v.norm()};
}

// ---------------------------------------------------------------------------
// Hamiltonians from bit arithmetic: |0> has S^z = +1/2, qubit 1 is the MSB.

inline double sz(int index, int site, int n) { return ((index >> (n - site)) & 1) ? -0.5 : 0.5; }

// omega_x sum S^x
inline Mat transverse(double omega_x, int n = 3) {
  const int d = 1 << n;
  Mat h = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int site = 1; site <= n; ++site) h(i ^ (1 << (n - site)), i) += 0.5 * omega_x;
  return h;
}

inline Mat zz_longitudinal(double omega_z, double j2) {
  Mat h = Mat::Zero(8, 8);
  for (int i = 0; i < 8; ++i) {
    double e = 0.0;
    for (int a = 1; a <= 3; ++a) e += omega_z * sz(i, a, 3);
    for (int a = 1; a <= 3; ++a)
      for (int b = a + 1; b <= 3; ++b) e += 2.0 * j2 * sz(i, a, 3) * sz(i, b, 3);
    h(i, i) = e;
  }
  return h;
}

inline Mat zzz_longitudinal(double j3) {
  Mat h = Mat::Zero(8, 8);
  for (int i = 0; i < 8; ++i) h(i, i) = 4.0 * j3 * sz(i, 1, 3) * sz(i, 2, 3) * sz(i, 3, 3);
  return h;
}

// Step-by-step Strang propagation with Taylor exponentials; returns the
// fidelity to the instantaneous ground state after every step.
inline std::vector<double> propagate(bool zz, const std::vector<double>& js, double tau, double omega_z = -2.0,
                                     double omega_x = 0.1) {
  const Mat hx = transverse(omega_x);
  const Mat half = expm_taylor(hx, tau / 2.0);
  auto hz = [&](double j) { return zz ? zz_longitudinal(omega_z, j) : zzz_longitudinal(j); };
  Vec psi = ground(hx + hz(js.front())).second;
  std::vector<double> out;
  for (double j : js) {
    psi = half * expm_taylor(hz(j), tau) * half * psi;
    const Vec g = ground(hx + hz(j)).second;
    out.push_back(std::norm(g.dot(psi)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Refocusing formulas, written out directly.

struct RefocusRow {
  double tau1, tau2, tau3, fq1, fq2, fq3;
};

inline RefocusRow zz_refocus(double j12, double j13, double j23, double j2, double tau, double omega_z) {
  const double d12 = 0.5 / j12, d13 = 0.5 / j13, d23 = 0.5 / j23;
  const double pi = std::numbers::pi;
  return {j2 * tau / pi * (d12 + d23),
          j2 * tau / pi * (d12 + d13),
          j2 * tau / pi * (d13 + d23),
          omega_z / (4.0 * j2 * d12),
          omega_z / (4.0 * j2 * (d12 + d13 + d23)),
          omega_z / (4.0 * j2 * d23)};
}

inline double zzz_delay(double j12, double j3, double tau) { return j3 * tau / std::numbers::pi * (0.5 / j12); }

}  // namespace oracle
