#include "gqm/uncertainty.hpp"

#include <cmath>
#include <string>

#include "gqm/errors.hpp"

namespace gqm {

namespace {

CMatrix centered(const HermitianOperator& a, double mean) {
  CMatrix m = a.matrix();
  m.diagonal().array() -= mean;
  return m;
}

// <psi, M psi> for an operator M that should yield a real number.
double real_moment(const CMatrix& m, const CVector& psi, const Config& cfg, const char* what) {
  const Complex value = psi.dot(m * psi);
  if (std::abs(value.imag()) > cfg.tol_eq * std::max(1.0, std::abs(value.real()))) {
    throw SelfAdjointnessError(std::string(what) + " has imaginary part " +
                               std::to_string(value.imag()));
  }
  return value.real();
}

double variance(const HermitianOperator& a, const StateVector& psi, const Config& cfg) {
  const CMatrix c = centered(a, expectation(a, psi, cfg));
  const double radicand = real_moment(c * c, psi.vec(), cfg, "variance");
  if (radicand < -cfg.tol_eq * std::max(1.0, c.cwiseAbs2().sum())) {
    throw SelfAdjointnessError("negative variance " + std::to_string(radicand));
  }
  return std::max(radicand, 0.0);
}

}  // namespace

double uncertainty(const HermitianOperator& a, const StateVector& psi, const Config& cfg) {
  return std::sqrt(variance(a, psi, cfg));
}

double covariance(const HermitianOperator& a, const HermitianOperator& b, const StateVector& psi,
                  const Config& cfg) {
  if (a.dim() != b.dim() || a.dim() != psi.dim()) {
    throw DimensionError("covariance: dimension mismatch");
  }
  const CMatrix ca = centered(a, expectation(a, psi, cfg));
  const CMatrix cb = centered(b, expectation(b, psi, cfg));
  const CMatrix sym = 0.5 * (ca * cb + cb * ca);
  return real_moment(sym, psi.vec(), cfg, "covariance");
}

CovarianceTensor covariance_tensor(const HermitianOperator& a, const HermitianOperator& b,
                                   const StateVector& psi, const Config& cfg) {
  const double scale = 2.0 / cfg.hbar;
  const double c = covariance(a, b, psi, cfg);
  Eigen::Matrix2d m;
  m(0, 0) = scale * variance(a, psi, cfg);
  m(0, 1) = scale * c;
  m(1, 0) = m(0, 1);
  m(1, 1) = scale * variance(b, psi, cfg);
  return {m, project(psi), cfg.hbar};
}

RsReport rs_check(const HermitianOperator& a, const HermitianOperator& b, const StateVector& psi,
                  const Config& cfg) {
  RsReport r{};

  const double var_a = variance(a, psi, cfg);
  const double var_b = variance(b, psi, cfg);
  const double cov = covariance(a, b, psi, cfg);
  // <[A,B]> is purely imaginary; (1/2i)<[A,B]> is its real content.
  const Complex comm = psi.vec().dot(commutator(a, b) * psi.vec());
  if (std::abs(comm.real()) > cfg.tol_eq * std::max(1.0, std::abs(comm.imag()))) {
    throw SelfAdjointnessError("commutator expectation has a real part " +
                               std::to_string(comm.real()));
  }
  const double half_comm = (comm / Complex(0.0, 2.0)).real();
  r.lhs_operator_form = var_a * var_b - cov * cov;
  r.rhs_operator_form = half_comm * half_comm;

  const HorizontalTangent xa = pushforward_field(a, psi, cfg);
  const HorizontalTangent xb = pushforward_field(b, psi, cfg);
  const double gaa = metric_g(xa, xa, cfg);
  const double gbb = metric_g(xb, xb, cfg);
  const double gab = metric_g(xa, xb, cfg);
  const double omega = symplectic_omega(xa, xb, cfg);
  r.lhs_geometric = gaa * gbb - gab * gab;
  r.rhs_geometric = omega * omega;

  r.slack = r.lhs_operator_form - r.rhs_operator_form;
  r.slack_geometric = r.lhs_geometric - r.rhs_geometric;
  r.saturated = r.slack <= cfg.tol_eq;
  return r;
}

bool saturation_witness(const HermitianOperator& a, const HermitianOperator& b,
                        const StateVector& psi, const Config& cfg) {
  const HorizontalTangent xa = pushforward_field(a, psi, cfg);
  const HorizontalTangent xb = pushforward_field(b, psi, cfg);
  const double gap = (xb.vec() - complex_structure_J(xa).vec()).norm();
  return gap <= cfg.tol_eq * (xa.norm() + xb.norm());
}

}  // namespace gqm
