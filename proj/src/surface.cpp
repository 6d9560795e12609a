#include "gqm/surface.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "gqm/errors.hpp"
#include "gqm/projective.hpp"

namespace gqm {

// --- Grid ------------------------------------------------------------------

Grid::Grid(Interval s, Interval t, int n_s, int n_t) : s_(s), t_(t), n_s_(n_s), n_t_(n_t) {
  if (n_s < 3 || n_t < 3) throw ArgumentError("grid needs at least 3 nodes per direction");
  if (!(s.hi > s.lo) || !(t.hi > t.lo) || !std::isfinite(s.length()) ||
      !std::isfinite(t.length())) {
    throw ArgumentError("grid ranges must be finite, nonempty intervals");
  }
}

Grid Grid::square(double radius, int n) {
  if (!(radius > 0.0)) throw ArgumentError("grid radius must be positive");
  return Grid({-radius, radius}, {-radius, radius}, n, n);
}

double Grid::weight(int i, int j) const {
  const double ws = (i == 0 || i == n_s_ - 1) ? 0.5 * ds() : ds();
  const double wt = (j == 0 || j == n_t_ - 1) ? 0.5 * dt() : dt();
  return ws * wt;
}

Grid Grid::refined() const { return Grid(s_, t_, 2 * n_s_ - 1, 2 * n_t_ - 1); }

// --- SurfaceMap ------------------------------------------------------------

SurfaceMap::SurfaceMap(Grid grid, std::vector<StateVector> values, std::vector<bool> boundary_fixed)
    : grid_(std::move(grid)), values_(std::move(values)), fixed_(std::move(boundary_fixed)) {
  if (values_.size() != grid_.node_count() || fixed_.size() != grid_.node_count()) {
    throw DimensionError("surface map: node arrays do not match the grid (" +
                         std::to_string(values_.size()) + " values, " +
                         std::to_string(fixed_.size()) + " mask entries, " +
                         std::to_string(grid_.node_count()) + " nodes)");
  }
  const Index dim = values_.front().dim();
  for (const StateVector& v : values_) {
    if (v.dim() != dim) throw DimensionError("surface map: node values differ in dimension");
  }
}

SurfaceMap SurfaceMap::from_function(const Grid& grid,
                                     const std::function<CVector(double, double)>& f) {
  std::vector<StateVector> values;
  std::vector<bool> fixed;
  values.reserve(grid.node_count());
  fixed.reserve(grid.node_count());
  for (int j = 0; j < grid.n_t(); ++j) {
    for (int i = 0; i < grid.n_s(); ++i) {
      values.push_back(StateVector::normalized(f(grid.s(i), grid.t(j))));
      fixed.push_back(grid.on_boundary(i, j));
    }
  }
  return SurfaceMap(grid, std::move(values), std::move(fixed));
}

CMatrix SurfaceMap::node_matrix() const {
  CMatrix m(dim(), static_cast<Index>(values_.size()));
  for (std::size_t k = 0; k < values_.size(); ++k) m.col(static_cast<Index>(k)) = values_[k].vec();
  return m;
}

// --- EnergyBreakdown -------------------------------------------------------

double EnergyBreakdown::identity_residual() const { return std::abs(energy - dbar - symplectic); }

// On the degree-1 sample the node-quadrature symplectic area sits about two
// residuals below the closed form, the edge energy about one.
double EnergyBreakdown::quadrature_tolerance() const { return 4.0 * identity_residual(); }

// --- differentials ---------------------------------------------------------

namespace {

// Neighbor rotated so that <center, result> is real and nonnegative.
CVector aligned(const CVector& neighbor, const CVector& center) {
  const Complex overlap = neighbor.dot(center);
  const double mag = std::abs(overlap);
  if (mag == 0.0) return neighbor;
  return neighbor * (overlap / mag);
}

// Second-order derivative estimate along one grid direction. `at(k)` returns
// the node value at position k along the line; `pos` is the node's position.
template <class At>
CVector line_derivative(const At& at, int pos, int count, double spacing) {
  const CVector& c = at(pos);
  if (pos == 0) {
    return (-3.0 * c + 4.0 * aligned(at(1), c) - aligned(at(2), c)) / (2.0 * spacing);
  }
  if (pos == count - 1) {
    return (3.0 * c - 4.0 * aligned(at(count - 2), c) + aligned(at(count - 3), c)) /
           (2.0 * spacing);
  }
  return (aligned(at(pos + 1), c) - aligned(at(pos - 1), c)) / (2.0 * spacing);
}

struct NodeDensities {
  double half_trace;  // (1/2)(h11 + h22)
  double area;        // sqrt(det h)
  double symplectic;  // Omega(d_s, d_t)
  double dbar;        // flat |dbar_J u|^2
};

NodeDensities node_densities(const SurfaceMap& map, int i, int j, const Config& cfg) {
  const MapDifferential d = discrete_differential(map, i, j, cfg);
  const CovarianceTensor h = pullback_metric(d, cfg);
  return {0.5 * h.entries.trace(), energy_form_coeff(d, cfg), symplectic_form_coeff(d, cfg),
          flat_antiholomorphic_part(d, cfg).norm_sq};
}

template <class Fn>
void for_each_node(const Grid& g, Fn&& fn) {
  for (int j = 0; j < g.n_t(); ++j) {
    for (int i = 0; i < g.n_s(); ++i) fn(i, j);
  }
}

}  // namespace

MapDifferential discrete_differential(const SurfaceMap& map, int i, int j, const Config& cfg) {
  const Grid& g = map.grid();
  if (i < 0 || j < 0 || i >= g.n_s() || j >= g.n_t()) {
    throw DimensionError("node (" + std::to_string(i) + ", " + std::to_string(j) +
                         ") is outside the grid");
  }
  const StateVector& center = map.value(i, j);
  const CVector d_s = line_derivative([&](int k) -> const CVector& { return map.value(k, j).vec(); },
                                      i, g.n_s(), g.ds());
  const CVector d_t = line_derivative([&](int k) -> const CVector& { return map.value(i, k).vec(); },
                                      j, g.n_t(), g.dt());
  return MapDifferential(horizontal_projection(d_s, center, cfg),
                         horizontal_projection(d_t, center, cfg), cfg);
}

// --- functionals -----------------------------------------------------------

double discrete_energy(const Grid& g, const CMatrix& nodes, const Config& cfg) {
  if (nodes.cols() != static_cast<Index>(g.node_count())) {
    throw DimensionError("discrete_energy: node matrix does not match the grid");
  }
  const double ds = g.ds();
  const double dt = g.dt();
  double sum = 0.0;
  for (int j = 0; j < g.n_t(); ++j) {
    const double wt = (j == 0 || j == g.n_t() - 1) ? 0.5 * dt : dt;
    for (int i = 0; i + 1 < g.n_s(); ++i) {
      const Complex p = nodes.col(g.index(i, j)).dot(nodes.col(g.index(i + 1, j)));
      sum += (wt / ds) * (1.0 - std::norm(p));
    }
  }
  for (int i = 0; i < g.n_s(); ++i) {
    const double ws = (i == 0 || i == g.n_s() - 1) ? 0.5 * ds : ds;
    for (int j = 0; j + 1 < g.n_t(); ++j) {
      const Complex p = nodes.col(g.index(i, j)).dot(nodes.col(g.index(i, j + 1)));
      sum += (ws / dt) * (1.0 - std::norm(p));
    }
  }
  return cfg.hbar * sum;
}

CMatrix discrete_energy_gradient(const Grid& g, const CMatrix& nodes, const Config& cfg) {
  if (nodes.cols() != static_cast<Index>(g.node_count())) {
    throw DimensionError("discrete_energy_gradient: node matrix does not match the grid");
  }
  CMatrix grad = CMatrix::Zero(nodes.rows(), nodes.cols());
  // d(1 - |<a,b>|^2) = -2 Re <b <b,a>, da> - 2 Re <a <a,b>, db>
  auto edge = [&](Index a, Index b, double c) {
    const Complex ba = nodes.col(b).dot(nodes.col(a));
    grad.col(a) -= (2.0 * c * ba) * nodes.col(b);
    grad.col(b) -= (2.0 * c * std::conj(ba)) * nodes.col(a);
  };
  const double ds = g.ds();
  const double dt = g.dt();
  for (int j = 0; j < g.n_t(); ++j) {
    const double wt = (j == 0 || j == g.n_t() - 1) ? 0.5 * dt : dt;
    for (int i = 0; i + 1 < g.n_s(); ++i) {
      edge(g.index(i, j), g.index(i + 1, j), cfg.hbar * wt / ds);
    }
  }
  for (int i = 0; i < g.n_s(); ++i) {
    const double ws = (i == 0 || i == g.n_s() - 1) ? 0.5 * ds : ds;
    for (int j = 0; j + 1 < g.n_t(); ++j) {
      edge(g.index(i, j), g.index(i, j + 1), cfg.hbar * ws / dt);
    }
  }
  return grad;
}

double total_energy(const SurfaceMap& map, const Config& cfg) {
  return discrete_energy(map.grid(), map.node_matrix(), cfg);
}

double total_symplectic_area(const SurfaceMap& map, const Config& cfg) {
  const Grid& g = map.grid();
  double sum = 0.0;
  for_each_node(g, [&](int i, int j) {
    sum += g.weight(i, j) * symplectic_form_coeff(discrete_differential(map, i, j, cfg), cfg);
  });
  return sum;
}

double total_volume(const SurfaceMap& map, const Config& cfg) {
  const Grid& g = map.grid();
  double sum = 0.0;
  for_each_node(g, [&](int i, int j) {
    sum += g.weight(i, j) * energy_form_coeff(discrete_differential(map, i, j, cfg), cfg);
  });
  return sum;
}

EnergyBreakdown energy_identity_integral(const SurfaceMap& map, const Config& cfg) {
  const Grid& g = map.grid();
  EnergyBreakdown b{};
  for_each_node(g, [&](int i, int j) {
    const NodeDensities n = node_densities(map, i, j, cfg);
    const double w = g.weight(i, j);
    b.area += w * n.area;
    b.symplectic += w * n.symplectic;
    b.dbar += w * n.dbar;
  });
  b.energy = total_energy(map, cfg);
  return b;
}

// --- samplers --------------------------------------------------------------

SurfaceMap rational_curve_sample(int degree, const Grid& grid, int target_dim, const Config&) {
  if (degree < 1) throw ArgumentError("rational curve degree must be >= 1");
  if (target_dim < 1) throw ArgumentError("target dimension must be >= 1");
  const Index len = target_dim + 1;
  return SurfaceMap::from_function(grid, [&](double s, double t) {
    CVector f = CVector::Zero(len);
    f[0] = 1.0;
    f[1] = std::pow(Complex(s, t), degree);
    return f;
  });
}

SurfaceMap perturb(const SurfaceMap& map, double amplitude, std::uint64_t seed) {
  if (!(amplitude >= 0.0)) throw ArgumentError("perturbation amplitude must be >= 0");
  if (amplitude == 0.0) return map;

  const Grid& g = map.grid();
  const Index dim = map.dim();
  constexpr int kModes = 3;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> freq(1, 3);
  std::normal_distribution<double> normal(0.0, 1.0);
  int k_s[kModes];
  int k_t[kModes];
  CVector dir[kModes];
  for (int m = 0; m < kModes; ++m) {
    k_s[m] = freq(rng);
    k_t[m] = freq(rng);
    dir[m] = CVector(dim);
    for (Index a = 0; a < dim; ++a) {
      const double re = normal(rng);
      const double im = normal(rng);
      dir[m][a] = Complex(re, im);
    }
    dir[m].normalize();
  }

  std::vector<StateVector> values = map.values();
  for_each_node(g, [&](int i, int j) {
    if (map.fixed(i, j)) return;
    const double sigma = static_cast<double>(i) / (g.n_s() - 1);
    const double tau = static_cast<double>(j) / (g.n_t() - 1);
    CVector bump = CVector::Zero(dim);
    for (int m = 0; m < kModes; ++m) {
      bump += (std::sin(k_s[m] * std::numbers::pi * sigma) *
               std::sin(k_t[m] * std::numbers::pi * tau) / kModes) *
              dir[m];
    }
    values[g.index(i, j)] = StateVector::normalized(map.value(i, j).vec() + amplitude * bump);
  });
  return SurfaceMap(g, std::move(values), map.boundary_fixed());
}

// --- relaxation ------------------------------------------------------------

RelaxResult harmonic_relax(const SurfaceMap& map, int steps, double step_size, const Config& cfg,
                           RelaxOptions options) {
  if (steps < 0) throw ArgumentError("relaxation step count must be >= 0");
  if (!(step_size >= 0.0)) throw ArgumentError("relaxation step size must be >= 0");
  const std::vector<bool>& fixed = map.boundary_fixed();
  bool any_fixed = false;
  for (bool f : fixed) any_fixed = any_fixed || f;
  if (!any_fixed) throw ArgumentError("relaxation needs at least one pinned node");

  const Grid& g = map.grid();
  const Index count = static_cast<Index>(g.node_count());
  CMatrix nodes = map.node_matrix();
  double energy = discrete_energy(g, nodes, cfg);

  RelaxResult result{map, {energy}, RelaxStatus::kCompleted, step_size};
  result.energy_trace.reserve(static_cast<std::size_t>(steps) + 1);
  if (step_size == 0.0) {
    result.energy_trace.assign(static_cast<std::size_t>(steps) + 1, energy);
    return result;
  }

  double eta = step_size;
  CMatrix trial(nodes.rows(), count);
  for (int step = 0; step < steps; ++step) {
    CMatrix grad = discrete_energy_gradient(g, nodes, cfg);
    for (Index k = 0; k < count; ++k) {
      if (fixed[static_cast<std::size_t>(k)]) {
        grad.col(k).setZero();
      } else {
        grad.col(k) -= nodes.col(k).dot(grad.col(k)) * nodes.col(k);
      }
    }

    bool accepted = false;
    for (int attempt = 0; attempt <= options.max_backoffs; ++attempt) {
      trial = nodes - eta * grad;
      for (Index k = 0; k < count; ++k) {
        if (!fixed[static_cast<std::size_t>(k)]) trial.col(k).normalize();
      }
      const double e = discrete_energy(g, trial, cfg);
      if (e <= energy) {
        nodes.swap(trial);
        energy = e;
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) {
      result.status = RelaxStatus::kStalled;
      break;
    }
    result.energy_trace.push_back(energy);
  }

  std::vector<StateVector> values;
  values.reserve(g.node_count());
  for (Index k = 0; k < count; ++k) {
    values.push_back(fixed[static_cast<std::size_t>(k)] ? map.values()[static_cast<std::size_t>(k)]
                                                        : StateVector(CVector(nodes.col(k)), cfg.tol_eq));
  }
  result.map = SurfaceMap(g, std::move(values), fixed);
  result.final_step_size = eta;
  return result;
}

double affine_line_area(const Interval& s, const Interval& t, double hbar) {
  // Integral of (1 + x^2 + y^2)^{-2} over [0, a] x [0, b]; odd in a and in b.
  auto corner = [](double a, double b) {
    const double ra = std::sqrt(1.0 + a * a);
    const double rb = std::sqrt(1.0 + b * b);
    return 0.5 * (a / ra * std::atan(b / ra) + b / rb * std::atan(a / rb));
  };
  const double integral =
      corner(s.hi, t.hi) - corner(s.lo, t.hi) - corner(s.hi, t.lo) + corner(s.lo, t.lo);
  return 2.0 * hbar * integral;
}

}  // namespace gqm
