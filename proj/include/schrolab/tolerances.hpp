#pragma once

namespace schrolab {

/// Every pass/fail threshold used by the checkers and the experiment runner.
///
/// Three classes: roundoff (identities that hold exactly in exact
/// arithmetic), discretization (convergent residuals and their observed
/// order) and
/// spectral (when a smallest singular value counts as zero).
struct Tolerances {
  // roundoff class
  double roundoff = 1e-12;  ///< relative to the identity scale |A|_inf |f|^2
  double balance = 1e-13;   ///< exact_balance relative to |A|_inf |f|^2
  // discretization class
  double discretization = 1e-2;  ///< absolute bound on a convergent error
  double order = 2.0;            ///< expected convergence order
  double order_band = 0.3;       ///< accepted deviation from `order`
  // spectral class
  double spectral = 1e-9;    ///< sigma / |B| below this means "in the kernel"
  double vanishing = 1e-6;   ///< min |f| / max |f| below this means "vanishes"
  double phase = 1e-8;       ///< per-component phase range, radians
  double energy = 1e-10;     ///< phase Dirichlet energy relative to |A|_inf |f|^2
  double branch_margin = 1e-8;  ///< phase increments must stay below pi - margin

  bool operator==(const Tolerances&) const = default;
};

}  // namespace schrolab
