#pragma once

// Hermitian structure of the projective space P(H): the Fubini-Study inner
// product on horizontal representatives, its real part (Riemannian metric g)
// and imaginary part (symplectic form Omega), the complex structure J, and the
// pushforward of hamiltonian fields.

#include "gqm/config.hpp"
#include "gqm/hilbert.hpp"

namespace gqm {

/// Point [psi] of P(H), stored through a canonical-gauge representative:
/// unit norm, with the first component of largest modulus real and positive.
class ProjectivePoint {
 public:
  const StateVector& representative() const { return rep_; }
  Index dim() const { return rep_.dim(); }

  /// |<rep, other.rep>| = 1 within tol.
  bool same_as(const ProjectivePoint& other, double tol = Config{}.tol_eq) const;

  friend bool operator==(const ProjectivePoint& a, const ProjectivePoint& b) {
    return a.same_as(b);
  }

 private:
  friend ProjectivePoint project(const CVector& psi);
  explicit ProjectivePoint(StateVector rep) : rep_(std::move(rep)) {}

  StateVector rep_;
};

/// pi(psi) = [psi]. Accepts any nonzero vector; throws NormalizationError on zero.
ProjectivePoint project(const CVector& psi);
inline ProjectivePoint project(const StateVector& psi) { return project(psi.vec()); }

/// <<V, W>> for horizontal representatives at a shared unit base: plain <v, w>.
/// Throws BaseMismatchError when the two tangents sit on different base vectors.
Complex fs_inner(const HorizontalTangent& v, const HorizontalTangent& w,
                 const Config& cfg = {});

/// g(V, W) = 2 hbar Re <<V, W>>.
double metric_g(const HorizontalTangent& v, const HorizontalTangent& w,
                const Config& cfg = {});

/// Omega(V, W) = 2 hbar Im <<V, W>>.
double symplectic_omega(const HorizontalTangent& v, const HorizontalTangent& w,
                        const Config& cfg = {});

/// J V: multiplication of the representative by i. Preserves horizontality.
HorizontalTangent complex_structure_J(const HorizontalTangent& v);

/// Representative of X_a = pi_*(X_A) at [psi]: the horizontal part of X_A.
HorizontalTangent pushforward_field(const HermitianOperator& a, const StateVector& psi,
                                    const Config& cfg = {});

}  // namespace gqm
