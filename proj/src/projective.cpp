#include "gqm/projective.hpp"

#include <cmath>
#include <limits>

#include "gqm/errors.hpp"

namespace gqm {

namespace {

// Components within this relative margin of the largest modulus count as tied;
// the first of them fixes the phase.
constexpr double kGaugeTieMargin = 1e-12;

void require_shared_base(const HorizontalTangent& v, const HorizontalTangent& w,
                         const Config& cfg) {
  if (v.base().dim() != w.base().dim()) {
    throw DimensionError("tangent vectors live over spaces of different dimension");
  }
  if ((v.base().vec() - w.base().vec()).cwiseAbs().maxCoeff() > cfg.tol_eq) {
    throw BaseMismatchError("tangent vectors are attached to different base states");
  }
}

}  // namespace

bool ProjectivePoint::same_as(const ProjectivePoint& other, double tol) const {
  if (dim() != other.dim()) return false;
  return std::abs(std::abs(rep_.vec().dot(other.rep_.vec())) - 1.0) <= tol;
}

ProjectivePoint project(const CVector& psi) {
  StateVector unit = StateVector::normalized(psi);
  const CVector& v = unit.vec();
  const double largest = v.cwiseAbs().maxCoeff();
  Index pivot = 0;
  while (std::abs(v[pivot]) < (1.0 - kGaugeTieMargin) * largest) ++pivot;
  const Complex phase = std::conj(v[pivot]) / std::abs(v[pivot]);
  CVector rep = phase * v;
  rep[pivot] = std::abs(rep[pivot]);
  return ProjectivePoint(StateVector(std::move(rep)));
}

Complex fs_inner(const HorizontalTangent& v, const HorizontalTangent& w, const Config& cfg) {
  require_shared_base(v, w, cfg);
  return v.vec().dot(w.vec());
}

double metric_g(const HorizontalTangent& v, const HorizontalTangent& w, const Config& cfg) {
  return 2.0 * cfg.hbar * fs_inner(v, w, cfg).real();
}

double symplectic_omega(const HorizontalTangent& v, const HorizontalTangent& w,
                        const Config& cfg) {
  return 2.0 * cfg.hbar * fs_inner(v, w, cfg).imag();
}

HorizontalTangent complex_structure_J(const HorizontalTangent& v) {
  // <psi, i v> = i <psi, v>, so horizontality carries over; skip the re-check.
  return HorizontalTangent(v.base(), CVector(Complex(0.0, 1.0) * v.vec()),
                           std::numeric_limits<double>::infinity());
}

HorizontalTangent pushforward_field(const HermitianOperator& a, const StateVector& psi,
                                    const Config& cfg) {
  return field_decompose(a, psi, cfg).horizontal;
}

}  // namespace gqm
