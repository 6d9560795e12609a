#pragma once

// Pointwise energy identity for maps u = pi o f from a domain in C (coordinates
// x = s + i t) into P(H) whose lifted differentials are the horizontal
// hamiltonian fields of two observables:
//
//   df(d/ds) = X_A^horiz,   df(d/dt) = X_B^horiz.
//
// The pull-back metric h = u^*g is the covariance tensor. In that metric the
// energy density is identically 1 and the area form carries
// sqrt(det h) ds^dt, while u^*Omega = Omega(X_a, X_b) ds^dt. The defect between
// the two is the antiholomorphic part of du.

#include <optional>

#include "gqm/config.hpp"
#include "gqm/hilbert.hpp"
#include "gqm/projective.hpp"
#include "gqm/uncertainty.hpp"

namespace gqm {

/// Differential data of a map at one point: the base state f(x) and the two
/// horizontal partial derivatives.
class MapDifferential {
 public:
  /// Throws BaseMismatchError unless d_s and d_t are attached to the same base.
  MapDifferential(HorizontalTangent d_s, HorizontalTangent d_t, const Config& cfg = {});

  const StateVector& base() const { return d_s_.base(); }
  const HorizontalTangent& d_s() const { return d_s_; }
  const HorizontalTangent& d_t() const { return d_t_; }

 private:
  HorizontalTangent d_s_;
  HorizontalTangent d_t_;
};

/// Coefficients of ds^dt in the three terms of the energy identity.
struct IdentityReport {
  double energy_coeff;      // (1/2)|du|_h^2 dA_h = sqrt(det h)
  double symplectic_coeff;  // u^*Omega
  double dbar_norm_sq;      // |dbar_J u|_h^2 dA_h
  bool degenerate;          // det h <= tol_psd
  std::optional<double> energy_density;  // (1/2)|du|_h^2, absent when degenerate

  double residual() const { return energy_coeff - dbar_norm_sq - symplectic_coeff; }
};

/// Antiholomorphic part (1/2)(du + J du j) as two columns (images of d/ds and
/// d/dt) together with its squared norm.
struct AntiholomorphicPart {
  double norm_sq;
  CVector s_column;
  CVector t_column;
  bool degenerate;
};

/// d_s = X_A^horiz, d_t = X_B^horiz at psi.
MapDifferential map_differential(const HermitianOperator& a, const HermitianOperator& b,
                                 const StateVector& psi, const Config& cfg = {});

/// h_{kl} = 2 hbar Re <d_k, d_l>.
CovarianceTensor pullback_metric(const MapDifferential& d, const Config& cfg = {});

/// (1/2) sum g_{ab} h^{kl} du^a_k du^b_l, evaluated in real coordinates through
/// the singular value decomposition of the real Jacobian of u.
/// Empty when det h <= tol_psd (h is not invertible).
std::optional<double> energy_density(const MapDifferential& d, const Config& cfg = {});

/// sqrt(det h). Zero when degenerate; throws PsdViolationError when
/// det h < -tol_psd.
double energy_form_coeff(const MapDifferential& d, const Config& cfg = {});

/// Omega(d_s, d_t) = 2 hbar Im <d_s, d_t>.
double symplectic_form_coeff(const MapDifferential& d, const Config& cfg = {});

/// dbar_J u taken with respect to the pull-back metric h on the domain and the
/// complex structure j_h it induces (rotation by a right angle in h, oriented
/// by (s, t)):
///
///   j_h d/ds = (-h12 d/ds + h11 d/dt) / sqrt(det h)
///   j_h d/dt = (-h22 d/ds + h12 d/dt) / sqrt(det h)
///
/// `norm_sq` is |dbar_J u|_h^2 sqrt(det h), the ds^dt coefficient of
/// |dbar_J u|^2 dA_h, which makes energy = dbar + symplectic exact. When h is
/// conformal (in particular for J-holomorphic data) j_h is the coordinate
/// structure j d/ds = d/dt. With degenerate h the area form vanishes: the
/// coefficient is zero and the columns fall back to the coordinate structure.
AntiholomorphicPart antiholomorphic_part(const MapDifferential& d, const Config& cfg = {});

/// dbar_J u with the coordinate structure j d/ds = d/dt, j d/dt = -d/ds and
/// the Euclidean metric ds^2 + dt^2 on the domain:
///
///   s column = (d_s + J d_t)/2,   t column = (d_t - J d_s)/2,
///
/// with norm_sq = g(s,s) + g(t,t) = (1/2)(h11 + h22) - Omega(d_s, d_t).
/// This is the density used by surface integrals over a flat domain.
AntiholomorphicPart flat_antiholomorphic_part(const MapDifferential& d, const Config& cfg = {});

/// All identity coefficients at psi for the observables (A, B).
IdentityReport verify_identity(const HermitianOperator& a, const HermitianOperator& b,
                               const StateVector& psi, const Config& cfg = {});

/// Same, starting from differential data directly.
IdentityReport identity_report(const MapDifferential& d, const Config& cfg = {});

/// max over components k of |Re v_k - Im w_k| and |Im v_k + Re w_k| for
/// v = d_s, w = d_t: the component-wise Cauchy-Riemann defect in real
/// coordinates. Zero iff d_t = J d_s.
double cauchy_riemann_residual(const MapDifferential& d);

}  // namespace gqm
