#pragma once

// Uncertainty, covariance, the 2x2 covariance tensor, and the
// Robertson-Schrodinger relation in operator and geometric form.

#include <Eigen/Dense>

#include "gqm/config.hpp"
#include "gqm/hilbert.hpp"
#include "gqm/projective.hpp"

namespace gqm {

/// (2/hbar) [[dA^2, C(A,B)], [C(B,A), dB^2]], which is also the pull-back of
/// the Fubini-Study metric along a map whose differentials are X_a and X_b.
struct CovarianceTensor {
  Eigen::Matrix2d entries;
  ProjectivePoint base;
  double hbar;

  double determinant() const { return entries.determinant(); }
};

/// Both sides of the uncertainty relation, evaluated along two independent
/// routes. The operator form works with moments of A and B; the geometric form
/// with g and Omega evaluated on the pushed-forward hamiltonian fields.
struct RsReport {
  double lhs_operator_form;  // dA^2 dB^2 - C^2
  double rhs_operator_form;  // ((1/2i) <[A,B]>)^2
  double lhs_geometric;      // g(Xa,Xa) g(Xb,Xb) - g(Xa,Xb)^2
  double rhs_geometric;      // Omega(Xa,Xb)^2
  double slack;              // lhs_operator_form - rhs_operator_form
  double slack_geometric;    // lhs_geometric - rhs_geometric
  bool saturated;            // slack <= tol_eq
};

/// [<psi, (A - <A>)^2 psi>]^{1/2}. Throws SelfAdjointnessError if the
/// radicand is complex or negative beyond tol_eq.
double uncertainty(const HermitianOperator& a, const StateVector& psi, const Config& cfg = {});

/// Symmetrized centered second moment
/// (1/2) <psi, [(A-<A>)(B-<B>) + (B-<B>)(A-<A>)] psi>.
double covariance(const HermitianOperator& a, const HermitianOperator& b, const StateVector& psi,
                  const Config& cfg = {});

CovarianceTensor covariance_tensor(const HermitianOperator& a, const HermitianOperator& b,
                                   const StateVector& psi, const Config& cfg = {});

RsReport rs_check(const HermitianOperator& a, const HermitianOperator& b, const StateVector& psi,
                  const Config& cfg = {});

/// True iff |X_B^horiz - J X_A^horiz| <= tol_eq (|X_A^horiz| + |X_B^horiz|),
/// i.e. the two fields span a complex line with B's field a quarter turn
/// ahead of A's. Vacuously true when both fields vanish.
bool saturation_witness(const HermitianOperator& a, const HermitianOperator& b,
                        const StateVector& psi, const Config& cfg = {});

}  // namespace gqm
