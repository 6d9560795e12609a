#pragma once

// Verification campaigns behind the command-line tool. Each mode writes a CSV
// of per-trial (or per-level) rows plus a JSON summary into the output
// directory and reports whether every checked invariant held.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gqm/config.hpp"

namespace gqm {

enum class Mode { kRsVerify, kPointIdentity, kSurfaceIdentity, kRelax, kInvariance };

std::string_view mode_name(Mode mode);
std::optional<Mode> parse_mode(std::string_view name);

struct GridSpec {
  int n = 65;
  double radius = 4.0;
};

struct CampaignSpec {
  Mode mode = Mode::kRsVerify;
  int dim = 2;  // Hilbert-space dimension n + 1; surface modes map into CP^{dim-1}
  int trials = 1000;
  std::uint64_t seed = 1;
  double hbar = 1.0;
  GridSpec grid;
  int degree = 1;
  double amplitude = 0.05;
  int steps = 1000;
  double step_size = 0.1;
  int levels = 3;            // surface-identity refinement levels
  bool force_equal = false;  // point-identity / rs-verify: use B = A
  std::string map_path;      // surface-identity: evaluate this map instead of samples
  std::string output_path = "gqm_out";

  /// Throws ArgumentError on out-of-range fields.
  void validate() const;
};

/// Overlays the fields present in a JSON document onto `base`. Keys mirror
/// the struct: mode, dim, trials, seed, hbar, grid {n, radius}, degree,
/// amplitude, steps, step_size, levels, force_equal, map, output_path.
/// Throws ArgumentError on malformed input or unknown keys.
CampaignSpec campaign_spec_from_json(std::string_view text, CampaignSpec base = {});

std::string campaign_spec_to_json(const CampaignSpec& spec);

struct Violation {
  long long trial;  // -1 when the check is not tied to one trial
  std::string check;
  double value;
  double limit;
};

struct CampaignOutcome {
  int exit_code;  // 0 when every invariant held, 1 otherwise
  std::vector<std::string> files;
  std::vector<Violation> violations;
};

/// Runs the campaign; `tolerances` supplies tol_eq / tol_psd (hbar comes from
/// the spec). Creates the output directory if needed.
CampaignOutcome run_campaign(const CampaignSpec& spec, const Config& tolerances);

}  // namespace gqm
