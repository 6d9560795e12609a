// gqm: verification campaigns for the uncertainty relation, the pointwise
// energy identity and its integrated form on grid-sampled surfaces.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gqm/campaign.hpp"
#include "gqm/errors.hpp"

namespace {

constexpr int kUsageError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw gqm::ArgumentError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double tol_eq_from_env(double fallback) {
  const char* raw = std::getenv("GQM_TOL_EQ");
  if (raw == nullptr || *raw == '\0') return fallback;
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(raw, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != std::string(raw).size()) {
    throw gqm::ArgumentError(std::string("GQM_TOL_EQ is not a number: ") + raw);
  }
  return value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric uncertainty and energy-identity campaigns"};
  app.set_version_flag("--version", "gqm 0.1.0");

  gqm::CampaignSpec flags;
  std::string mode = "rs-verify";
  std::string config_path;
  app.add_option("--mode", mode, "rs-verify | point-identity | surface-identity | relax | invariance")
      ->check(CLI::IsMember({"rs-verify", "point-identity", "surface-identity", "relax",
                             "invariance"}));
  app.add_option("--dim", flags.dim, "Hilbert-space dimension (>= 2)");
  app.add_option("--trials", flags.trials, "number of random trials");
  app.add_option("--seed", flags.seed, "master seed");
  app.add_option("--hbar", flags.hbar, "action unit");
  app.add_option("--grid-n", flags.grid.n, "nodes per side of the surface grid");
  app.add_option("--grid-radius", flags.grid.radius, "half side of the square domain");
  app.add_option("--degree", flags.degree, "degree of the sampled rational curve");
  app.add_option("--amplitude", flags.amplitude, "perturbation amplitude");
  app.add_option("--steps", flags.steps, "relaxation steps");
  app.add_option("--step-size", flags.step_size, "initial relaxation step size");
  app.add_option("--levels", flags.levels, "surface-identity refinement levels");
  app.add_flag("--force-equal", flags.force_equal, "use B = A in rs-verify / point-identity");
  app.add_option("--map", flags.map_path, "surface map JSON for surface-identity");
  app.add_option("--out", flags.output_path, "output directory");
  app.add_option("--config", config_path, "JSON campaign file; flags override its values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  gqm::CampaignSpec spec;
  gqm::Config tolerances;
  try {
    if (!config_path.empty()) spec = gqm::campaign_spec_from_json(read_file(config_path), spec);
    auto given = [&](const char* name) { return app.count(name) > 0; };
    if (given("--mode")) spec.mode = *gqm::parse_mode(mode);
    if (given("--dim")) spec.dim = flags.dim;
    if (given("--trials")) spec.trials = flags.trials;
    if (given("--seed")) spec.seed = flags.seed;
    if (given("--hbar")) spec.hbar = flags.hbar;
    if (given("--grid-n")) spec.grid.n = flags.grid.n;
    if (given("--grid-radius")) spec.grid.radius = flags.grid.radius;
    if (given("--degree")) spec.degree = flags.degree;
    if (given("--amplitude")) spec.amplitude = flags.amplitude;
    if (given("--steps")) spec.steps = flags.steps;
    if (given("--step-size")) spec.step_size = flags.step_size;
    if (given("--levels")) spec.levels = flags.levels;
    if (given("--force-equal")) spec.force_equal = flags.force_equal;
    if (given("--map")) spec.map_path = flags.map_path;
    if (given("--out")) spec.output_path = flags.output_path;

    tolerances.tol_eq = tol_eq_from_env(tolerances.tol_eq);
    tolerances.hbar = spec.hbar;
    spec.validate();
    tolerances.validate();
  } catch (const gqm::Error& e) {
    std::cerr << "gqm: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    const gqm::CampaignOutcome outcome = gqm::run_campaign(spec, tolerances);
    for (const std::string& f : outcome.files) std::cout << f << "\n";
    if (!outcome.violations.empty()) {
      const gqm::Violation& v = outcome.violations.front();
      std::cerr << "gqm: " << outcome.violations.size() << " violation(s); first: trial " << v.trial
                << ", " << v.check << " (value " << v.value << ", limit " << v.limit << ")\n";
    }
    return outcome.exit_code;
  } catch (const gqm::ArgumentError& e) {
    std::cerr << "gqm: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "gqm: " << e.what() << "\n";
    return 1;
  }
}
