#include "gqm/hilbert.hpp"

#include <cmath>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "gqm/errors.hpp"

namespace gqm {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_same_dim(Index a, Index b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

void Config::validate() const {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!positive(hbar)) throw ArgumentError("hbar must be positive and finite");
  if (!positive(tol_eq)) throw ArgumentError("tol_eq must be positive and finite");
  if (!positive(tol_psd)) throw ArgumentError("tol_psd must be positive and finite");
}

// --- StateVector -----------------------------------------------------------

StateVector::StateVector(CVector v, double tol) : v_(std::move(v)) {
  if (v_.size() < 2) throw DimensionError("state vector needs dimension >= 2");
  const double n2 = v_.squaredNorm();
  if (!std::isfinite(n2) || std::abs(std::sqrt(n2) - 1.0) > tol) {
    throw NormalizationError("state vector is not unit norm (|psi| = " +
                             std::to_string(std::sqrt(n2)) + ")");
  }
}

StateVector StateVector::normalized(const CVector& v) {
  if (v.size() < 2) throw DimensionError("state vector needs dimension >= 2");
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw NormalizationError("cannot normalize a zero vector");
  return StateVector(CVector(v / n), Unchecked{});
}

StateVector StateVector::basis(Index dim, Index k) {
  if (k < 0 || k >= dim) throw DimensionError("basis index out of range");
  CVector v = CVector::Zero(dim);
  v[k] = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::with_phase(double theta) const {
  return StateVector(CVector(std::polar(1.0, theta) * v_), Unchecked{});
}

// --- HermitianOperator -----------------------------------------------------

HermitianOperator::HermitianOperator(CMatrix m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw DimensionError("operator matrix must be square");
  if (m_.rows() < 2) throw DimensionError("operator needs dimension >= 2");
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  const double asym = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol * scale) {
    throw SelfAdjointnessError("matrix is not Hermitian (max |A - A^dagger| = " +
                               std::to_string(asym) + ")");
  }
}

HermitianOperator HermitianOperator::identity(Index dim) {
  return HermitianOperator(CMatrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::shifted(double c) const {
  CMatrix m = m_;
  m.diagonal().array() += c;
  return HermitianOperator(std::move(m));
}

HermitianOperator HermitianOperator::scaled(double lambda) const {
  return HermitianOperator(CMatrix(lambda * m_));
}

// --- HorizontalTangent -----------------------------------------------------

HorizontalTangent::HorizontalTangent(StateVector base, CVector v, double tol)
    : base_(std::move(base)), v_(std::move(v)) {
  require_same_dim(base_.dim(), v_.size(), "horizontal tangent");
  const double overlap = std::abs(base_.vec().dot(v_));
  if (overlap > tol * std::max(1.0, v_.norm())) {
    throw NormalizationError("tangent vector is not horizontal (|<psi, v>| = " +
                             std::to_string(overlap) + ")");
  }
}

// --- operations ------------------------------------------------------------

Complex hermitian_inner(const CVector& v, const CVector& w) {
  require_same_dim(v.size(), w.size(), "hermitian_inner");
  // Eigen's dot conjugates its first argument.
  return v.dot(w);
}

double expectation(const HermitianOperator& a, const StateVector& psi, const Config& cfg) {
  require_same_dim(a.dim(), psi.dim(), "expectation");
  const CVector& v = psi.vec();
  const Complex value = v.dot(a.matrix() * v) / v.squaredNorm();
  if (std::abs(value.imag()) > cfg.tol_eq * std::max(1.0, std::abs(value.real()))) {
    throw SelfAdjointnessError("expectation value has imaginary part " +
                               std::to_string(value.imag()));
  }
  return value.real();
}

CMatrix commutator(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a.dim(), b.dim(), "commutator");
  return a.matrix() * b.matrix() - b.matrix() * a.matrix();
}

CVector hamiltonian_field(const HermitianOperator& a, const StateVector& psi, const Config& cfg) {
  require_same_dim(a.dim(), psi.dim(), "hamiltonian_field");
  return (-kI / cfg.hbar) * (a.matrix() * psi.vec());
}

HorizontalTangent horizontal_projection(const CVector& v, const StateVector& psi,
                                        const Config& cfg) {
  require_same_dim(v.size(), psi.dim(), "horizontal_projection");
  const CVector& p = psi.vec();
  CVector h = v - p.dot(v) * p;
  return HorizontalTangent(psi, std::move(h), cfg.tol_eq);
}

FieldDecomposition field_decompose(const HermitianOperator& a, const StateVector& psi,
                                   const Config& cfg) {
  require_same_dim(a.dim(), psi.dim(), "field_decompose");
  const double mean = expectation(a, psi, cfg);
  const CVector& p = psi.vec();
  const Complex factor = -kI / cfg.hbar;
  CVector vertical = factor * mean * p;
  CVector centered = factor * (a.matrix() * p - mean * p);
  return {std::move(vertical), HorizontalTangent(psi, std::move(centered), cfg.tol_eq)};
}

StateVector schrodinger_flow(const HermitianOperator& h, const StateVector& psi, double t,
                             const Config& cfg) {
  require_same_dim(h.dim(), psi.dim(), "schrodinger_flow");
  if (t == 0.0) return psi;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(h.matrix());
  if (eig.info() != Eigen::Success) throw NumericalError("eigen-decomposition failed");
  const CMatrix& u = eig.eigenvectors();
  CVector coeff = u.adjoint() * psi.vec();
  for (Index k = 0; k < coeff.size(); ++k) {
    coeff[k] *= std::exp(-kI * eig.eigenvalues()[k] * t / cfg.hbar);
  }
  return StateVector(CVector(u * coeff), cfg.tol_eq);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

HermitianOperator random_hermitian(Index dim, std::uint64_t seed) {
  if (dim < 2) throw ArgumentError("random_hermitian needs dim >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMatrix g(dim, dim);
  for (Index c = 0; c < dim; ++c) {
    for (Index r = 0; r < dim; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  }
  CMatrix m = 0.5 * (g + g.adjoint());
  return HermitianOperator(std::move(m));
}

StateVector random_state(Index dim, std::uint64_t seed) {
  if (dim < 2) throw ArgumentError("random_state needs dim >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(dim);
  for (Index k = 0; k < dim; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    v[k] = Complex(re, im);
  }
  return StateVector::normalized(v);
}

namespace pauli {

HermitianOperator x() {
  CMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return HermitianOperator(std::move(m));
}

HermitianOperator y() {
  CMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return HermitianOperator(std::move(m));
}

HermitianOperator z() {
  CMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return HermitianOperator(std::move(m));
}

}  // namespace pauli

}  // namespace gqm
