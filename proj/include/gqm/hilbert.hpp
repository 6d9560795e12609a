#pragma once

// Finite-dimensional Hilbert-space primitives: pure states, observables,
// Hermitian inner products, hamiltonian vector fields and exact Schrodinger
// flow. Everything here is a value type; all operations are pure.

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

#include "gqm/config.hpp"

namespace gqm {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

/// Unit-norm vector of C^{n+1}, n >= 1: a representative of a pure state.
///
/// Construction rejects vectors whose norm differs from one by more than the
/// given tolerance; use `normalized` to rescale explicitly.
class StateVector {
 public:
  explicit StateVector(CVector v, double tol = Config{}.tol_eq);

  /// Rescales a nonzero vector to unit norm.
  static StateVector normalized(const CVector& v);

  /// Basis vector e_k of C^dim.
  static StateVector basis(Index dim, Index k);

  const CVector& vec() const { return v_; }
  Index dim() const { return v_.size(); }
  Complex operator[](Index k) const { return v_[k]; }

  /// e^{i theta} psi.
  StateVector with_phase(double theta) const;

 private:
  struct Unchecked {};
  StateVector(CVector v, Unchecked) : v_(std::move(v)) {}

  CVector v_;
};

/// Self-adjoint (n+1)x(n+1) complex matrix.
class HermitianOperator {
 public:
  explicit HermitianOperator(CMatrix m, double tol = Config{}.tol_eq);

  static HermitianOperator identity(Index dim);

  const CMatrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }

  /// A + c I.
  HermitianOperator shifted(double c) const;
  /// lambda A.
  HermitianOperator scaled(double lambda) const;

 private:
  CMatrix m_;
};

/// Vector Hermitian-orthogonal to its base state. Represents a tangent vector
/// of the projective space at [base] through the horizontal lift.
class HorizontalTangent {
 public:
  /// Throws DimensionError on a length mismatch and NormalizationError when
  /// |<base, v>| exceeds tol * max(1, |v|).
  HorizontalTangent(StateVector base, CVector v, double tol = Config{}.tol_eq);

  const StateVector& base() const { return base_; }
  const CVector& vec() const { return v_; }
  double norm() const { return v_.norm(); }

 private:
  StateVector base_;
  CVector v_;
};

/// sum_k conj(v_k) w_k. Throws DimensionError on a length mismatch.
Complex hermitian_inner(const CVector& v, const CVector& w);

/// <psi, A psi> / <psi, psi>. The imaginary part is checked against tol_eq
/// (scaled by the magnitude of the result) and then dropped.
double expectation(const HermitianOperator& a, const StateVector& psi,
                   const Config& cfg = {});

/// AB - BA (anti-Hermitian for Hermitian inputs).
CMatrix commutator(const HermitianOperator& a, const HermitianOperator& b);

/// (X_A)_psi = (-i/hbar) A psi.
CVector hamiltonian_field(const HermitianOperator& a, const StateVector& psi,
                          const Config& cfg = {});

/// v - <psi, v> psi, the component of v orthogonal to psi.
HorizontalTangent horizontal_projection(const CVector& v, const StateVector& psi,
                                        const Config& cfg = {});

struct FieldDecomposition {
  CVector vertical;
  HorizontalTangent horizontal;
};

/// Splits X_A at psi into (-i/hbar)<A> psi and (-i/hbar)(A - <A>) psi.
FieldDecomposition field_decompose(const HermitianOperator& a, const StateVector& psi,
                                   const Config& cfg = {});

/// exp(-i H t / hbar) psi, evaluated through the eigen-decomposition of H.
StateVector schrodinger_flow(const HermitianOperator& h, const StateVector& psi, double t,
                             const Config& cfg = {});

/// GUE sample (G + G^dagger)/2 with G having i.i.d. standard complex Gaussian
/// entries (E|g|^2 = 1). Deterministic for a given seed.
HermitianOperator random_hermitian(Index dim, std::uint64_t seed);

/// Haar-random unit vector (normalized complex Gaussian). Deterministic per seed.
StateVector random_state(Index dim, std::uint64_t seed);

/// Mixes a campaign seed with a stream index into an independent seed
/// (splitmix64 finalizer), so per-trial draws do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

namespace pauli {
HermitianOperator x();
HermitianOperator y();
HermitianOperator z();
}  // namespace pauli

}  // namespace gqm
