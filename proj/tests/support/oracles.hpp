#pragma once

// Reference computations the tests compare against. Each one takes a route
// that shares no code with the library: explicit loops, real coordinates,
// eigen-decompositions or plain quadrature.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline Complex inner_loop(const CVector& v, const CVector& w) {
  Complex acc = 0.0;
  for (Eigen::Index k = 0; k < v.size(); ++k) acc += std::conj(v[k]) * w[k];
  return acc;
}

inline CMatrix matmul_loop(const CMatrix& a, const CMatrix& b) {
  CMatrix c = CMatrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      for (Eigen::Index k = 0; k < a.cols(); ++k) c(i, j) += a(i, k) * b(k, j);
  return c;
}

inline CMatrix commutator_loop(const CMatrix& a, const CMatrix& b) {
  return matmul_loop(a, b) - matmul_loop(b, a);
}

// Variance from the spectral decomposition: sum p_k l_k^2 - (sum p_k l_k)^2
// with p_k = |<e_k, psi>|^2.
inline double spectral_variance(const CMatrix& a, const CVector& psi) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
  double m1 = 0.0;
  double m2 = 0.0;
  for (Eigen::Index k = 0; k < a.rows(); ++k) {
    const double p = std::norm(es.eigenvectors().col(k).dot(psi));
    const double l = es.eigenvalues()[k];
    m1 += p * l;
    m2 += p * l * l;
  }
  return m2 - m1 * m1;
}

inline Eigen::VectorXd real_coords(const CVector& z) {
  Eigen::VectorXd y(2 * z.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    y[2 * k] = z[k].real();
    y[2 * k + 1] = z[k].imag();
  }
  return y;
}

// Multiplication by i as a real 2N x 2N block matrix.
inline Eigen::MatrixXd j0(Eigen::Index n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    j(2 * k + 1, 2 * k) = 1.0;
    j(2 * k, 2 * k + 1) = -1.0;
  }
  return j;
}

// sum over complex components of det [[v_a, w_a], [v_{a+1}, w_{a+1}]] in real
// coordinates (a odd, 1-based). Equals Im <v, w>.
inline double determinant_sum(const CVector& v, const CVector& w) {
  const Eigen::VectorXd x = real_coords(v);
  const Eigen::VectorXd y = real_coords(w);
  double acc = 0.0;
  for (Eigen::Index a = 0; a + 1 < x.size(); a += 2) acc += x[a] * y[a + 1] - x[a + 1] * y[a];
  return acc;
}

// Hermitian inner product of two tangent vectors at [psi] from arbitrary
// (non-horizontal, non-normalized) lifts: horizontal parts relative to psi,
// divided by <psi, psi>.
inline Complex fs_inner_general(const CVector& psi, const CVector& v, const CVector& w) {
  const Complex pp = inner_loop(psi, psi);
  const CVector hv = v - (inner_loop(psi, v) / pp) * psi;
  const CVector hw = w - (inner_loop(psi, w) / pp) * psi;
  return inner_loop(hv, hw) / pp;
}

// exp(-i t H) psi from an eigen-decomposition.
inline CVector unitary_flow(const CMatrix& h, const CVector& psi, double t) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  CVector c = es.eigenvectors().adjoint() * psi;
  for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::exp(Complex(0.0, -t * es.eigenvalues()[k]));
  return es.eigenvectors() * c;
}

// Two-parameter path f(s, t) = exp(-i s A) exp(-i t B) psi and its exact
// partial derivatives.
struct FlowPath {
  CMatrix a;
  CMatrix b;
  CVector psi;

  CVector value(double s, double t) const { return unitary_flow(a, unitary_flow(b, psi, t), s); }
  CVector d_s(double s, double t) const { return Complex(0.0, -1.0) * (a * value(s, t)); }
  CVector d_t(double s, double t) const {
    return unitary_flow(a, Complex(0.0, -1.0) * (b * unitary_flow(b, psi, t)), s);
  }
};

inline CVector horizontal(const CVector& v, const CVector& psi) {
  return v - inner_loop(psi, v) * psi;
}

// Adaptive Simpson on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol,
                      int depth = 40) {
  const std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, int d) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid);
        const double rm = 0.5 * (mid + hi);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
          return left + right + (left + right - whole) / 15.0;
        }
        return rec(lo, mid, flo, flm, fmid, left, d - 1) + rec(mid, hi, fmid, frm, fhi, right, d - 1);
      };
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), depth);
}

inline double simpson2d(const std::function<double(double, double)>& f, double s0, double s1,
                        double t0, double t1, double tol) {
  return simpson([&](double t) { return simpson([&](double s) { return f(s, t); }, s0, s1, tol); },
                 t0, t1, tol);
}

// hbar times the sum of arg <f_k, f_{k+1}> around a closed loop of unit
// vectors: the holonomy of the tautological connection, which by Stokes equals
// the symplectic area of any surface the loop bounds (counterclockwise loop).
inline double boundary_phase_area(const std::vector<CVector>& loop, double hbar) {
  double acc = 0.0;
  for (std::size_t k = 0; k < loop.size(); ++k) {
    acc += std::arg(inner_loop(loop[k], loop[(k + 1) % loop.size()]));
  }
  return hbar * acc;
}

// Hermitian B with (B - <B>) psi = i (A - <A>) psi, so that the hamiltonian
// field of B is J applied to that of A: B = i(|chi><psi| - |psi><chi|) with
// chi = (A - <A>) psi.
inline CMatrix saturating_partner(const CMatrix& a, const CVector& psi) {
  const Complex mean = inner_loop(psi, a * psi);
  const CVector chi = a * psi - mean * psi;
  const Complex i(0.0, 1.0);
  return i * (chi * psi.adjoint() - psi * chi.adjoint());
}

}  // namespace oracle
