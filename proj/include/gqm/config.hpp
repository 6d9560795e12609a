#pragma once

namespace gqm {

/// Numerical constants shared by every operation.
///
/// `hbar` fixes the action unit; `tol_eq` is the absolute tolerance used for
/// equality checks (unit norm, Hermiticity, orthogonality, identities);
/// `tol_psd` bounds how negative a Gram determinant may be before it counts
/// as a positivity violation, and how small it may be before it counts as
/// degenerate.
struct Config {
  double hbar = 1.0;
  double tol_eq = 1e-10;
  double tol_psd = 1e-12;

  /// Throws ArgumentError unless all three values are positive and finite.
  void validate() const;
};

}  // namespace gqm
