#include "gqm/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "gqm/errors.hpp"
#include "gqm/hilbert.hpp"
#include "gqm/pointwise_identity.hpp"
#include "gqm/surface.hpp"
#include "gqm/surface_io.hpp"
#include "gqm/uncertainty.hpp"

namespace gqm {

using nlohmann::json;

namespace {

// Identities that compare two independently rounded routes are checked at
// this multiple of tol_eq.
constexpr double kIdentityFactor = 10.0;
constexpr std::size_t kMaxReportedViolations = 50;

struct ModeName {
  Mode mode;
  std::string_view name;
};
constexpr ModeName kModes[] = {
    {Mode::kRsVerify, "rs-verify"},
    {Mode::kPointIdentity, "point-identity"},
    {Mode::kSurfaceIdentity, "surface-identity"},
    {Mode::kRelax, "relax"},
    {Mode::kInvariance, "invariance"},
};

std::string g17(double x) { return fmt::format("{:.17g}", x); }

// Runs fn(k) for k in [0, count) on a small worker pool. Results are written
// by index, so output order never depends on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), count));
  if (workers == 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < count; k += workers) fn(k);
    });
  }
  for (std::thread& t : pool) t.join();
}

class Report {
 public:
  explicit Report(const CampaignSpec& spec) : dir_(spec.output_path) {
    std::filesystem::create_directories(dir_);
  }

  void check(long long trial, const std::string& what, double value, double limit, bool ok) {
    if (!ok) violations_.push_back({trial, what, value, limit});
  }

  std::string write(const std::string& name, const std::string& content) {
    const std::string path = (dir_ / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArgumentError("cannot write " + path);
    out << content;
    files_.push_back(path);
    return path;
  }

  CampaignOutcome finish(const CampaignSpec& spec, json summary) {
    json v = json::array();
    for (std::size_t k = 0; k < violations_.size() && k < kMaxReportedViolations; ++k) {
      const Violation& x = violations_[k];
      v.push_back({{"trial", x.trial}, {"check", x.check}, {"value", x.value}, {"limit", x.limit}});
    }
    summary["mode"] = std::string(mode_name(spec.mode));
    summary["spec"] = json::parse(campaign_spec_to_json(spec));
    summary["violation_count"] = violations_.size();
    summary["violations"] = std::move(v);
    summary["passed"] = violations_.empty();
    write(std::string(mode_name(spec.mode)) + "_summary.json", summary.dump(2) + "\n");
    return {violations_.empty() ? 0 : 1, files_, violations_};
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
  std::vector<Violation> violations_;
};

// --- rs-verify -------------------------------------------------------------

struct Observables {
  HermitianOperator a;
  HermitianOperator b;
  StateVector psi;
};

Observables draw_trial(const CampaignSpec& spec, std::size_t trial) {
  const std::uint64_t base = 3 * static_cast<std::uint64_t>(trial);
  HermitianOperator a = random_hermitian(spec.dim, derive_seed(spec.seed, base));
  HermitianOperator b =
      spec.force_equal ? a : random_hermitian(spec.dim, derive_seed(spec.seed, base + 1));
  return {std::move(a), std::move(b), random_state(spec.dim, derive_seed(spec.seed, base + 2))};
}

struct RsRow {
  RsReport report{};
  double lhs_gap = 0.0;
  double rhs_gap = 0.0;
  bool witness = false;
  std::string error;
};

CampaignOutcome run_rs_verify(const CampaignSpec& spec, const Config& cfg) {
  Report rep(spec);
  std::vector<RsRow> rows(static_cast<std::size_t>(spec.trials));
  const double scale = std::pow(2.0 / cfg.hbar, 2);
  parallel_for(rows.size(), [&](std::size_t k) {
    try {
      const Observables o = draw_trial(spec, k);
      RsRow& r = rows[k];
      r.report = rs_check(o.a, o.b, o.psi, cfg);
      r.lhs_gap = std::abs(r.report.lhs_geometric - scale * r.report.lhs_operator_form);
      r.rhs_gap = std::abs(r.report.rhs_geometric - scale * r.report.rhs_operator_form);
      r.witness = saturation_witness(o.a, o.b, o.psi, cfg);
    } catch (const std::exception& e) {
      rows[k].error = e.what();
    }
  });

  std::string csv =
      "trial,lhs_operator,rhs_operator,lhs_geometric,rhs_geometric,slack,slack_geometric,"
      "saturated,form_gap_lhs,form_gap_rhs,witness,error\n";
  double min_slack = std::numeric_limits<double>::infinity();
  double min_slack_geo = min_slack;
  double max_gap = 0.0;
  long long saturated = 0;
  const double gap_limit = kIdentityFactor * cfg.tol_eq;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const RsRow& r = rows[k];
    const auto t = static_cast<long long>(k);
    if (!r.error.empty()) {
      rep.check(t, "exception: " + r.error, 0.0, 0.0, false);
      csv += fmt::format("{},,,,,,,,,,,\"{}\"\n", k, r.error);
      continue;
    }
    const RsReport& x = r.report;
    csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{},\n", k, g17(x.lhs_operator_form),
                       g17(x.rhs_operator_form), g17(x.lhs_geometric), g17(x.rhs_geometric),
                       g17(x.slack), g17(x.slack_geometric), x.saturated ? 1 : 0, g17(r.lhs_gap),
                       g17(r.rhs_gap), r.witness ? 1 : 0);
    min_slack = std::min(min_slack, x.slack);
    min_slack_geo = std::min(min_slack_geo, x.slack_geometric);
    max_gap = std::max({max_gap, r.lhs_gap, r.rhs_gap});
    saturated += x.saturated ? 1 : 0;
    rep.check(t, "slack_operator >= -tol_eq", x.slack, -cfg.tol_eq, x.slack >= -cfg.tol_eq);
    rep.check(t, "slack_geometric >= -tol_eq", x.slack_geometric, -cfg.tol_eq,
              x.slack_geometric >= -cfg.tol_eq);
    rep.check(t, "form_gap_lhs", r.lhs_gap, gap_limit, r.lhs_gap <= gap_limit);
    rep.check(t, "form_gap_rhs", r.rhs_gap, gap_limit, r.rhs_gap <= gap_limit);
    if (r.witness) rep.check(t, "witness implies saturated", x.slack, cfg.tol_eq, x.saturated);
  }
  rep.write("rs-verify.csv", csv);
  json summary = {{"trials", spec.trials},
                  {"min_slack_operator", min_slack},
                  {"min_slack_geometric", min_slack_geo},
                  {"max_form_gap", max_gap},
                  {"saturated_count", saturated}};
  return rep.finish(spec, std::move(summary));
}

// --- point-identity --------------------------------------------------------

struct PointRow {
  IdentityReport report{};
  double metric_gap = 0.0;
  double cr_residual = 0.0;
  std::string error;
};

CampaignOutcome run_point_identity(const CampaignSpec& spec, const Config& cfg) {
  Report rep(spec);
  std::vector<PointRow> rows(static_cast<std::size_t>(spec.trials));
  parallel_for(rows.size(), [&](std::size_t k) {
    try {
      const Observables o = draw_trial(spec, k);
      const MapDifferential d = map_differential(o.a, o.b, o.psi, cfg);
      PointRow& r = rows[k];
      r.report = identity_report(d, cfg);
      const Eigen::Matrix2d gap = pullback_metric(d, cfg).entries -
                                  covariance_tensor(o.a, o.b, o.psi, cfg).entries;
      r.metric_gap = gap.cwiseAbs().maxCoeff();
      r.cr_residual = cauchy_riemann_residual(d);
    } catch (const std::exception& e) {
      rows[k].error = e.what();
    }
  });

  std::string csv =
      "trial,energy_coeff,symplectic_coeff,dbar_norm_sq,degenerate,identity_residual,"
      "energy_density,metric_gap,cauchy_riemann_residual,error\n";
  double max_residual = 0.0;
  double max_metric = 0.0;
  double max_density_dev = 0.0;
  long long degenerate = 0;
  const double limit = kIdentityFactor * cfg.tol_eq;
  // Both sides are Gram matrices of the same centered vectors, so they agree
  // far more tightly than the identities that involve square roots.
  const double metric_limit = 1e-2 * cfg.tol_eq;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const PointRow& r = rows[k];
    const auto t = static_cast<long long>(k);
    if (!r.error.empty()) {
      rep.check(t, "exception: " + r.error, 0.0, 0.0, false);
      csv += fmt::format("{},,,,,,,,,\"{}\"\n", k, r.error);
      continue;
    }
    const IdentityReport& x = r.report;
    const double residual = std::abs(x.residual());
    csv += fmt::format("{},{},{},{},{},{},{},{},{},\n", k, g17(x.energy_coeff),
                       g17(x.symplectic_coeff), g17(x.dbar_norm_sq), x.degenerate ? 1 : 0,
                       g17(residual), x.energy_density ? g17(*x.energy_density) : std::string(),
                       g17(r.metric_gap), g17(r.cr_residual));
    max_residual = std::max(max_residual, residual);
    max_metric = std::max(max_metric, r.metric_gap);
    degenerate += x.degenerate ? 1 : 0;
    rep.check(t, "identity residual", residual, limit, residual <= limit);
    rep.check(t, "dbar_norm_sq >= -tol_eq", x.dbar_norm_sq, -cfg.tol_eq,
              x.dbar_norm_sq >= -cfg.tol_eq);
    rep.check(t, "energy >= symplectic", x.energy_coeff - x.symplectic_coeff, -cfg.tol_eq,
              x.energy_coeff >= x.symplectic_coeff - cfg.tol_eq);
    rep.check(t, "pullback metric = covariance tensor", r.metric_gap, metric_limit,
              r.metric_gap <= metric_limit);
    if (x.energy_density) {
      const double dev = std::abs(*x.energy_density - 1.0);
      max_density_dev = std::max(max_density_dev, dev);
      rep.check(t, "energy density = 1", dev, limit, dev <= limit);
    }
  }
  rep.write("point-identity.csv", csv);
  json summary = {{"trials", spec.trials},
                  {"max_identity_residual", max_residual},
                  {"max_metric_gap", max_metric},
                  {"max_energy_density_deviation", max_density_dev},
                  {"degenerate_count", degenerate}};
  return rep.finish(spec, std::move(summary));
}

// --- surface modes ---------------------------------------------------------

SurfaceMap holomorphic_sample(const CampaignSpec& spec, const Grid& grid, const Config& cfg) {
  return rational_curve_sample(spec.degree, grid, spec.dim - 1, cfg);
}

json breakdown_json(const EnergyBreakdown& b) {
  return {{"energy", b.energy},
          {"area", b.area},
          {"symplectic", b.symplectic},
          {"dbar", b.dbar},
          {"identity_residual", b.identity_residual()},
          {"quadrature_tolerance", b.quadrature_tolerance()}};
}

void check_breakdown(Report& rep, long long level, const EnergyBreakdown& b) {
  const double tol = b.quadrature_tolerance();
  rep.check(level, "energy >= symplectic - quadrature tolerance", b.energy - b.symplectic, -tol,
            b.energy >= b.symplectic - tol);
  rep.check(level, "area <= energy + quadrature tolerance", b.area - b.energy, tol,
            b.area <= b.energy + tol);
}

CampaignOutcome run_surface_identity(const CampaignSpec& spec, const Config& cfg) {
  Report rep(spec);
  std::vector<EnergyTableRow> rows;
  json levels = json::array();
  std::optional<double> oracle;

  if (!spec.map_path.empty()) {
    const SurfaceMap map = load_surface_map(spec.map_path, cfg);
    rows.push_back({map.grid().n_s(), map.grid().n_t(), energy_identity_integral(map, cfg)});
  } else {
    Grid grid = Grid::square(spec.grid.radius, spec.grid.n);
    for (int level = 0; level < spec.levels; ++level) {
      const SurfaceMap map = holomorphic_sample(spec, grid, cfg);
      rows.push_back({grid.n_s(), grid.n_t(), energy_identity_integral(map, cfg)});
      if (level + 1 < spec.levels) grid = grid.refined();
    }
    if (spec.degree == 1) oracle = affine_line_area(grid.s_range(), grid.t_range(), cfg.hbar);
  }

  for (std::size_t k = 0; k < rows.size(); ++k) {
    const EnergyBreakdown& b = rows[k].breakdown;
    check_breakdown(rep, static_cast<long long>(k), b);
    json entry = breakdown_json(b);
    entry["n_s"] = rows[k].n_s;
    entry["n_t"] = rows[k].n_t;
    if (k > 0) {
      const double prev = rows[k - 1].breakdown.identity_residual();
      entry["residual_ratio"] = b.identity_residual() > 0.0 ? prev / b.identity_residual() : 0.0;
    }
    if (oracle) entry["symplectic_relative_error"] = (b.symplectic - *oracle) / *oracle;
    levels.push_back(std::move(entry));
  }

  std::ostringstream csv;
  write_energy_table_csv(csv, rows);
  rep.write("surface-identity.csv", csv.str());
  json summary = {{"levels", std::move(levels)}};
  summary["symplectic_oracle"] = oracle ? json(*oracle) : json(nullptr);
  return rep.finish(spec, std::move(summary));
}

CampaignOutcome run_relax(const CampaignSpec& spec, const Config& cfg) {
  Report rep(spec);
  const Grid grid = Grid::square(spec.grid.radius, spec.grid.n);
  const SurfaceMap start = perturb(holomorphic_sample(spec, grid, cfg), spec.amplitude, spec.seed);
  const EnergyBreakdown before = energy_identity_integral(start, cfg);
  const RelaxResult result = harmonic_relax(start, spec.steps, spec.step_size, cfg);
  const EnergyBreakdown after = energy_identity_integral(result.map, cfg);

  std::string csv = "step,energy\n";
  long long increases = 0;
  for (std::size_t k = 0; k < result.energy_trace.size(); ++k) {
    csv += fmt::format("{},{}\n", k, g17(result.energy_trace[k]));
    if (k > 0 && result.energy_trace[k] > result.energy_trace[k - 1]) {
      ++increases;
      rep.check(static_cast<long long>(k), "energy trace non-increasing",
                result.energy_trace[k] - result.energy_trace[k - 1], 0.0, false);
    }
  }
  rep.write("relax_trace.csv", csv);
  {
    std::ostringstream map_json;
    write_surface_map_json(map_json, result.map);
    rep.write("relax_map.json", map_json.str());
  }

  const double drift = std::abs(after.symplectic - before.symplectic);
  const double tol = before.quadrature_tolerance();
  rep.check(-1, "symplectic area drift", drift, tol, drift <= tol);
  rep.check(-1, "relaxation completed", result.status == RelaxStatus::kCompleted ? 0.0 : 1.0, 0.0,
            result.status == RelaxStatus::kCompleted);

  json reached = nullptr;
  for (std::size_t k = 0; k < result.energy_trace.size(); ++k) {
    if (result.energy_trace[k] <= 1.01 * before.symplectic) {
      reached = k;
      break;
    }
  }

  json summary = {
      {"initial", breakdown_json(before)},
      {"first_step_within_1pct_of_symplectic", reached},
      {"final", breakdown_json(after)},
      {"steps_taken", result.energy_trace.size() - 1},
      {"trace_increases", increases},
      {"final_step_size", result.final_step_size},
      {"status", result.status == RelaxStatus::kCompleted ? "completed" : "stalled"},
      {"energy_gap_to_symplectic_relative",
       (after.energy - after.symplectic) / std::abs(after.symplectic)},
  };
  return rep.finish(spec, std::move(summary));
}

CampaignOutcome run_invariance(const CampaignSpec& spec, const Config& cfg) {
  Report rep(spec);
  const Grid grid = Grid::square(spec.grid.radius, spec.grid.n);
  const SurfaceMap base = holomorphic_sample(spec, grid, cfg);
  const EnergyBreakdown b0 = energy_identity_integral(base, cfg);

  struct Row {
    std::uint64_t seed;
    double energy;
    double symplectic;
  };
  std::vector<Row> rows(static_cast<std::size_t>(spec.trials));
  parallel_for(rows.size(), [&](std::size_t k) {
    const std::uint64_t seed = derive_seed(spec.seed, k);
    const SurfaceMap p = perturb(base, spec.amplitude, seed);
    rows[k] = {seed, total_energy(p, cfg), total_symplectic_area(p, cfg)};
  });

  std::string csv = "trial,seed,energy,symplectic,delta_energy,delta_symplectic\n";
  double lo = b0.symplectic;
  double hi = b0.symplectic;
  double min_energy_gain = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Row& r = rows[k];
    const double de = r.energy - b0.energy;
    csv += fmt::format("{},{},{},{},{},{}\n", k, r.seed, g17(r.energy), g17(r.symplectic), g17(de),
                       g17(r.symplectic - b0.symplectic));
    lo = std::min(lo, r.symplectic);
    hi = std::max(hi, r.symplectic);
    min_energy_gain = std::min(min_energy_gain, de);
    rep.check(static_cast<long long>(k), "energy increases under perturbation", de, 0.0,
              spec.amplitude == 0.0 || de > 0.0);
  }
  const double spread = hi - lo;
  // The area should move by less than the discretization error the identity
  // itself carries on this grid.
  const double limit = b0.identity_residual();
  rep.check(-1, "symplectic area spread", spread, limit, spread <= limit);
  rep.write("invariance.csv", csv);
  json summary = {{"base", breakdown_json(b0)},
                  {"symplectic_spread", spread},
                  {"spread_limit", limit},
                  {"min_energy_gain", min_energy_gain},
                  {"trials", spec.trials}};
  return rep.finish(spec, std::move(summary));
}

}  // namespace

std::string_view mode_name(Mode mode) {
  for (const ModeName& m : kModes) {
    if (m.mode == mode) return m.name;
  }
  return "unknown";
}

std::optional<Mode> parse_mode(std::string_view name) {
  for (const ModeName& m : kModes) {
    if (m.name == name) return m.mode;
  }
  return std::nullopt;
}

void CampaignSpec::validate() const {
  if (trials < 1) throw ArgumentError("trials must be >= 1");
  if (dim < 2) throw ArgumentError("dim must be >= 2");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ArgumentError("hbar must be positive");
  if (grid.n < 3) throw ArgumentError("grid n must be >= 3");
  if (!(grid.radius > 0.0)) throw ArgumentError("grid radius must be positive");
  if (degree < 1) throw ArgumentError("degree must be >= 1");
  if (!(amplitude >= 0.0)) throw ArgumentError("amplitude must be >= 0");
  if (steps < 0) throw ArgumentError("steps must be >= 0");
  if (!(step_size >= 0.0)) throw ArgumentError("step size must be >= 0");
  if (levels < 1) throw ArgumentError("levels must be >= 1");
  if (output_path.empty()) throw ArgumentError("output path must not be empty");
}

CampaignSpec campaign_spec_from_json(std::string_view text, CampaignSpec base) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ArgumentError("config: top level must be an object");
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "mode") {
        const auto m = parse_mode(value.get<std::string>());
        if (!m) throw ArgumentError("config: unknown mode " + value.get<std::string>());
        base.mode = *m;
      } else if (key == "dim") {
        base.dim = value.get<int>();
      } else if (key == "trials") {
        base.trials = value.get<int>();
      } else if (key == "seed") {
        base.seed = value.get<std::uint64_t>();
      } else if (key == "hbar") {
        base.hbar = value.get<double>();
      } else if (key == "grid") {
        for (const auto& [gk, gv] : value.items()) {
          if (gk == "n") {
            base.grid.n = gv.get<int>();
          } else if (gk == "radius") {
            base.grid.radius = gv.get<double>();
          } else {
            throw ArgumentError("config: unknown grid key " + gk);
          }
        }
      } else if (key == "degree") {
        base.degree = value.get<int>();
      } else if (key == "amplitude") {
        base.amplitude = value.get<double>();
      } else if (key == "steps") {
        base.steps = value.get<int>();
      } else if (key == "step_size") {
        base.step_size = value.get<double>();
      } else if (key == "levels") {
        base.levels = value.get<int>();
      } else if (key == "force_equal") {
        base.force_equal = value.get<bool>();
      } else if (key == "map") {
        base.map_path = value.get<std::string>();
      } else if (key == "output_path") {
        base.output_path = value.get<std::string>();
      } else {
        throw ArgumentError("config: unknown key " + key);
      }
    }
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("config: ") + e.what());
  }
  return base;
}

std::string campaign_spec_to_json(const CampaignSpec& spec) {
  const json doc = {{"mode", std::string(mode_name(spec.mode))},
                    {"dim", spec.dim},
                    {"trials", spec.trials},
                    {"seed", spec.seed},
                    {"hbar", spec.hbar},
                    {"grid", {{"n", spec.grid.n}, {"radius", spec.grid.radius}}},
                    {"degree", spec.degree},
                    {"amplitude", spec.amplitude},
                    {"steps", spec.steps},
                    {"step_size", spec.step_size},
                    {"levels", spec.levels},
                    {"force_equal", spec.force_equal},
                    {"map", spec.map_path},
                    {"output_path", spec.output_path}};
  return doc.dump();
}

CampaignOutcome run_campaign(const CampaignSpec& spec, const Config& tolerances) {
  spec.validate();
  Config cfg = tolerances;
  cfg.hbar = spec.hbar;
  cfg.validate();
  switch (spec.mode) {
    case Mode::kRsVerify:
      return run_rs_verify(spec, cfg);
    case Mode::kPointIdentity:
      return run_point_identity(spec, cfg);
    case Mode::kSurfaceIdentity:
      return run_surface_identity(spec, cfg);
    case Mode::kRelax:
      return run_relax(spec, cfg);
    case Mode::kInvariance:
      return run_invariance(spec, cfg);
  }
  throw ArgumentError("unknown campaign mode");
}

}  // namespace gqm
