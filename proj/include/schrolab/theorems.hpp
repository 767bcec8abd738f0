#pragma once

#include "schrolab/identity.hpp"
#include "schrolab/mesh.hpp"
#include "schrolab/operators.hpp"
#include "schrolab/phase.hpp"
#include "schrolab/spectral.hpp"
#include "schrolab/tolerances.hpp"

#include <string>
#include <utility>
#include <vector>

namespace schrolab {

/// V_i = -(A f)_i / (M_ii f_i), so that (A + M diag(V)) f = 0 exactly up to
/// roundoff. Throws DomainError at the first vertex where f vanishes.
Potential inverse_design_potential(const StiffnessMatrix& stiffness, const MassMatrix& mass, const ComplexField& f);

struct TheoremVerdict {
  int theorem = 0;
  bool hypotheses_satisfied = false;
  /// Only meaningful when `hypotheses_satisfied`.
  bool conclusion_verified = false;
  std::vector<std::string> diagnostics;
  /// Vertex of the smallest |f| on supp(Im V) (theorem 1), -1 otherwise.
  int witness_vertex = -1;
  /// theorem 1: min |f| / max |f| on supp(Im V), or sigma / |B| when no
  /// kernel element exists. theorem 2: largest per-component phase range.
  double witness_value = 0.0;
  /// Winding obstruction when theorem 2's logarithm does not exist.
  std::vector<int> witness_cycle;
  int witness_winding = 0;
  /// Named quantities behind the verdict, in evaluation order.
  std::vector<std::pair<std::string, double>> metrics;
};

/// Signedness and nontriviality of Im V, entries within roundoff * max|V|
/// of zero counting as zero.
struct ImagPotentialSign {
  double min_imag = 0.0;
  double max_imag = 0.0;
  bool nontrivial = false;
  bool single_signed = false;
};
ImagPotentialSign imag_potential_sign(const Potential& v, double roundoff);

/// Checks that a kernel element of a signed, nontrivial Im V vanishes on
/// supp(Im V). When sigma / |B| exceeds the spectral tolerance there is no
/// kernel element and the conclusion holds vacuously.
TheoremVerdict theorem1_check(const Mesh& mesh, const SchrodingerSystem& system, const SpectralResult& kernel,
                              const Tolerances& tol = {});

/// For real V and a nowhere-vanishing kernel element with a global
/// logarithm, checks that Im(log f) is constant on each connected
/// component and that the phase Dirichlet energy vanishes.
std::pair<TheoremVerdict, PhaseReport> theorem2_check(const Mesh& mesh, const SchrodingerSystem& system,
                                                      const ComplexField& f, const Tolerances& tol = {});

/// exp(i theta) on a uniform unit circle with its inverse-designed potential.
struct CircleCounterexample {
  Mesh mesh;
  ComplexField f;
  Potential potential;
  SchrodingerSystem system;
  PhaseReport phase;
  IdentityReport identity;
  TheoremVerdict theorem2;
  double max_imag_potential = 0.0;
  /// max_i |V_i + 1|
  double max_potential_deviation = 0.0;
  /// |K f| / (|K| |f|)
  double kernel_residual = 0.0;
};

/// Requires n >= 12.
CircleCounterexample counterexample_circle(int n, const Tolerances& tol = {});

/// Observed orders log(e_k / e_{k+1}) / log(h_k / h_{k+1}).
std::vector<double> observed_orders(const std::vector<double>& h, const std::vector<double>& errors);

}  // namespace schrolab
