#pragma once

// Integral form of the energy identity for grid-sampled maps from a rectangle
// in C into P(H): quadrature of the energy, area and symplectic-area
// functionals, holomorphic samplers, rel-boundary perturbations and harmonic
// relaxation by projected gradient descent.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "gqm/config.hpp"
#include "gqm/hilbert.hpp"
#include "gqm/pointwise_identity.hpp"

namespace gqm {

struct Interval {
  double lo;
  double hi;

  double length() const { return hi - lo; }
};

/// Tensor grid on [s.lo, s.hi] x [t.lo, t.hi] with n_s x n_t nodes
/// (both >= 3). Nodes are stored row-major: rows of constant t, s varying
/// fastest, index = j * n_s + i.
class Grid {
 public:
  Grid(Interval s, Interval t, int n_s, int n_t);

  /// [-radius, radius]^2 with n x n nodes.
  static Grid square(double radius, int n);

  const Interval& s_range() const { return s_; }
  const Interval& t_range() const { return t_; }
  int n_s() const { return n_s_; }
  int n_t() const { return n_t_; }
  double ds() const { return s_.length() / (n_s_ - 1); }
  double dt() const { return t_.length() / (n_t_ - 1); }
  double s(int i) const { return s_.lo + i * ds(); }
  double t(int j) const { return t_.lo + j * dt(); }

  std::size_t node_count() const { return static_cast<std::size_t>(n_s_) * n_t_; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * n_s_ + i; }
  bool on_boundary(int i, int j) const {
    return i == 0 || j == 0 || i == n_s_ - 1 || j == n_t_ - 1;
  }

  /// Trapezoidal quadrature weight of node (i, j).
  double weight(int i, int j) const;

  /// Same grid with (2 n_s - 1) x (2 n_t - 1) nodes.
  Grid refined() const;

 private:
  Interval s_;
  Interval t_;
  int n_s_;
  int n_t_;
};

/// Unit vectors f(s_i, t_j) on a grid, with a mask of nodes pinned during
/// relaxation and perturbation.
class SurfaceMap {
 public:
  SurfaceMap(Grid grid, std::vector<StateVector> values, std::vector<bool> boundary_fixed);

  /// Samples f on the grid; the mask pins the grid boundary.
  static SurfaceMap from_function(const Grid& grid,
                                  const std::function<CVector(double, double)>& f);

  const Grid& grid() const { return grid_; }
  Index dim() const { return values_.front().dim(); }
  const std::vector<StateVector>& values() const { return values_; }
  const std::vector<bool>& boundary_fixed() const { return fixed_; }
  const StateVector& value(int i, int j) const { return values_[grid_.index(i, j)]; }
  bool fixed(int i, int j) const { return fixed_[grid_.index(i, j)]; }

  /// Node values as the columns of a dim x node_count matrix.
  CMatrix node_matrix() const;

 private:
  Grid grid_;
  std::vector<StateVector> values_;
  std::vector<bool> fixed_;
};

struct EnergyBreakdown {
  double energy;      // E(u), discrete Dirichlet energy
  double area;        // V(u), integral of sqrt(det u^*g)
  double symplectic;  // integral of u^*Omega
  double dbar;        // integral of |dbar_J u|^2

  /// |energy - dbar - symplectic|. The energy is computed from edge
  /// differences and the other terms from node differentials, so the
  /// residual measures the disagreement between the two discretizations.
  double identity_residual() const;

  /// Four times the identity residual: a bound on the discretization error of
  /// each functional separately, not only of their combination.
  double quadrature_tolerance() const;
};

/// Horizontal differential of the map at node (i, j): neighbors are phase
/// aligned with the node (<f_ij, neighbor> real positive), differenced with
/// second-order central stencils (second-order one-sided stencils on the grid
/// boundary), and projected onto the horizontal space at f_ij.
MapDifferential discrete_differential(const SurfaceMap& map, int i, int j,
                                      const Config& cfg = {});

/// Discrete Dirichlet energy
///
///   E = hbar sum_edges w_e (1 - |<f_a, f_b>|^2) / h_e^2,
///
/// where 1 - |<f_a, f_b>|^2 is the squared norm of the horizontal part of
/// f_b - f_a at f_a, h_e the edge length and w_e the trapezoidal area weight
/// of the edge. Gauge invariant node by node.
double total_energy(const SurfaceMap& map, const Config& cfg = {});

/// Trapezoidal quadrature of Omega(d_s, d_t) over the node differentials.
double total_symplectic_area(const SurfaceMap& map, const Config& cfg = {});

/// Trapezoidal quadrature of sqrt(det h) over the node differentials.
double total_volume(const SurfaceMap& map, const Config& cfg = {});

/// All four functionals in one pass.
EnergyBreakdown energy_identity_integral(const SurfaceMap& map, const Config& cfg = {});

/// Discrete Dirichlet energy for arbitrary (not necessarily unit) node
/// vectors stored as columns.
double discrete_energy(const Grid& grid, const CMatrix& nodes, const Config& cfg = {});

/// Euclidean gradient of `discrete_energy` with respect to each column, in
/// the convention dE = Re sum_k <G_k, dpsi_k>.
CMatrix discrete_energy_gradient(const Grid& grid, const CMatrix& nodes, const Config& cfg = {});

/// Normalized affine lift of z -> [1 : z^degree : 0 : ... : 0] into CP^n,
/// n = target_dim, z = s + i t. Pins the grid boundary.
SurfaceMap rational_curve_sample(int degree, const Grid& grid, int target_dim,
                                 const Config& cfg = {});

/// Adds a smooth bump to every unpinned node and renormalizes:
///
///   f + amplitude * sum_{m<3} sin(k_m pi sigma) sin(l_m pi tau) c_m / 3,
///
/// with (sigma, tau) the grid coordinates rescaled to [0, 1], seeded random
/// frequencies k_m, l_m in {1, 2, 3} and random unit directions c_m. The bump
/// vanishes on the grid boundary and pinned nodes are copied bit for bit.
SurfaceMap perturb(const SurfaceMap& map, double amplitude, std::uint64_t seed);

enum class RelaxStatus {
  kCompleted,  // all requested steps taken
  kStalled,    // step-size backoff exhausted without an energy decrease
};

struct RelaxOptions {
  int max_backoffs = 50;
};

struct RelaxResult {
  SurfaceMap map;
  std::vector<double> energy_trace;  // entry 0 is the starting energy
  RelaxStatus status;
  double final_step_size;
};

/// Projected gradient descent on `total_energy` over the unpinned nodes.
/// Each step moves along the horizontal part of the Euclidean gradient and
/// renormalizes; a step that would raise the energy is retried with half the
/// step size. The step size stays reduced afterwards.
RelaxResult harmonic_relax(const SurfaceMap& map, int steps, double step_size,
                           const Config& cfg = {}, RelaxOptions options = {});

/// Closed-form integral of 2 hbar / (1 + s^2 + t^2)^2 over the rectangle
/// s_range x t_range: the symplectic area swept by z -> [1 : z].
double affine_line_area(const Interval& s, const Interval& t, double hbar);

}  // namespace gqm
