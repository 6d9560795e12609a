#include "gqm/pointwise_identity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gqm/errors.hpp"

namespace gqm {

namespace {

constexpr Complex kI{0.0, 1.0};

double g_of(const CVector& a, const CVector& b, const Config& cfg) {
  return 2.0 * cfg.hbar * a.dot(b).real();
}

Eigen::Matrix2d gram(const MapDifferential& d, const Config& cfg) {
  const CVector& v = d.d_s().vec();
  const CVector& w = d.d_t().vec();
  Eigen::Matrix2d h;
  h(0, 0) = g_of(v, v, cfg);
  h(0, 1) = g_of(v, w, cfg);
  h(1, 0) = h(0, 1);
  h(1, 1) = g_of(w, w, cfg);
  return h;
}

// Real coordinates (Re z_1, Im z_1, Re z_2, ...).
Eigen::VectorXd real_coords(const CVector& z) {
  Eigen::VectorXd y(2 * z.size());
  for (Index k = 0; k < z.size(); ++k) {
    y[2 * k] = z[k].real();
    y[2 * k + 1] = z[k].imag();
  }
  return y;
}

}  // namespace

MapDifferential::MapDifferential(HorizontalTangent d_s, HorizontalTangent d_t, const Config& cfg)
    : d_s_(std::move(d_s)), d_t_(std::move(d_t)) {
  if (d_s_.base().dim() != d_t_.base().dim()) {
    throw DimensionError("map differential: partials over different dimensions");
  }
  if ((d_s_.base().vec() - d_t_.base().vec()).cwiseAbs().maxCoeff() > cfg.tol_eq) {
    throw BaseMismatchError("map differential: partials attached to different base states");
  }
}

MapDifferential map_differential(const HermitianOperator& a, const HermitianOperator& b,
                                 const StateVector& psi, const Config& cfg) {
  return MapDifferential(field_decompose(a, psi, cfg).horizontal,
                         field_decompose(b, psi, cfg).horizontal, cfg);
}

CovarianceTensor pullback_metric(const MapDifferential& d, const Config& cfg) {
  return {gram(d, cfg), project(d.base()), cfg.hbar};
}

std::optional<double> energy_density(const MapDifferential& d, const Config& cfg) {
  if (!(gram(d, cfg).determinant() > cfg.tol_psd)) return std::nullopt;

  // Real Jacobian of u, scaled so that g_{ab} becomes the Euclidean product.
  // Inverting h through the singular vectors of the Jacobian keeps the error
  // near eps * sqrt(cond h); forming h^{-1} from the Gram matrix and
  // contracting it against a second Gram matrix loses eps * cond h, which
  // reaches 1e-8 on nearly degenerate data.
  const Eigen::VectorXd xs = real_coords(d.d_s().vec());
  Eigen::MatrixXd du(xs.size(), 2);
  du.col(0) = xs;
  du.col(1) = real_coords(d.d_t().vec());
  du *= std::sqrt(2.0 * cfg.hbar);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(du, Eigen::ComputeThinV);
  const Eigen::Vector2d sigma = svd.singularValues();
  if (!(sigma[1] > 0.0)) return std::nullopt;

  // |du|_h^2 = sum_k |du(e_k)|^2 over the h-orthonormal frame e_k = v_k / sigma_k.
  double du_sq = 0.0;
  for (int k = 0; k < 2; ++k) du_sq += (du * svd.matrixV().col(k)).squaredNorm() / (sigma[k] * sigma[k]);
  return 0.5 * du_sq;
}

double energy_form_coeff(const MapDifferential& d, const Config& cfg) {
  const double det = gram(d, cfg).determinant();
  if (det < -cfg.tol_psd) {
    throw PsdViolationError("pull-back metric has negative determinant " + std::to_string(det));
  }
  return det > 0.0 ? std::sqrt(det) : 0.0;
}

double symplectic_form_coeff(const MapDifferential& d, const Config& cfg) {
  return 2.0 * cfg.hbar * d.d_s().vec().dot(d.d_t().vec()).imag();
}

AntiholomorphicPart flat_antiholomorphic_part(const MapDifferential& d, const Config& cfg) {
  const CVector& v = d.d_s().vec();
  const CVector& w = d.d_t().vec();
  CVector s_col = 0.5 * (v + kI * w);
  CVector t_col = 0.5 * (w - kI * v);
  const double norm_sq = g_of(s_col, s_col, cfg) + g_of(t_col, t_col, cfg);
  return {norm_sq, std::move(s_col), std::move(t_col), false};
}

AntiholomorphicPart antiholomorphic_part(const MapDifferential& d, const Config& cfg) {
  const Eigen::Matrix2d h = gram(d, cfg);
  const double det = h.determinant();
  if (!(det > cfg.tol_psd)) {
    AntiholomorphicPart flat = flat_antiholomorphic_part(d, cfg);
    flat.norm_sq = 0.0;
    flat.degenerate = true;
    return flat;
  }
  const double area = std::sqrt(det);
  const CVector& v = d.d_s().vec();
  const CVector& w = d.d_t().vec();

  // du(j_h d/ds) and du(j_h d/dt).
  const CVector du_js = (-h(0, 1) * v + h(0, 0) * w) / area;
  const CVector du_jt = (-h(1, 1) * v + h(0, 1) * w) / area;
  CVector s_col = 0.5 * (v + kI * du_js);
  CVector t_col = 0.5 * (w + kI * du_jt);

  const Eigen::Matrix2d h_inv = h.inverse();
  const CVector* cols[2] = {&s_col, &t_col};
  double norm_h = 0.0;
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      norm_h += h_inv(k, l) * g_of(*cols[k], *cols[l], cfg);
    }
  }
  return {norm_h * area, std::move(s_col), std::move(t_col), false};
}

IdentityReport identity_report(const MapDifferential& d, const Config& cfg) {
  IdentityReport r{};
  r.energy_coeff = energy_form_coeff(d, cfg);
  r.symplectic_coeff = symplectic_form_coeff(d, cfg);
  const AntiholomorphicPart dbar = antiholomorphic_part(d, cfg);
  r.dbar_norm_sq = dbar.norm_sq;
  r.degenerate = dbar.degenerate;
  r.energy_density = energy_density(d, cfg);
  return r;
}

IdentityReport verify_identity(const HermitianOperator& a, const HermitianOperator& b,
                               const StateVector& psi, const Config& cfg) {
  return identity_report(map_differential(a, b, psi, cfg), cfg);
}

double cauchy_riemann_residual(const MapDifferential& d) {
  const CVector& v = d.d_s().vec();
  const CVector& w = d.d_t().vec();
  double worst = 0.0;
  for (Index k = 0; k < v.size(); ++k) {
    worst = std::max(worst, std::abs(v[k].real() - w[k].imag()));
    worst = std::max(worst, std::abs(v[k].imag() + w[k].real()));
  }
  return worst;
}

}  // namespace gqm
