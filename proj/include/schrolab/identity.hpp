#pragma once

#include "schrolab/mesh.hpp"
#include "schrolab/operators.hpp"

#include <utility>
#include <vector>

namespace schrolab {

/// Current conj(f) grad f - f grad conj(f), per cell, from the cell average
/// of f and the gradient of its interpolant. Purely imaginary; exactly zero
/// for real f.
CellVectorField flux(const Mesh& mesh, const ComplexField& f);

/// Edge pairing conj(f_i) f_j - f_i conj(f_j) for every edge (i < j) of
/// `mesh.edges()`. Exactly imaginary; this is the form that survives
/// summation by parts without error.
ComplexField edge_flux(const Mesh& mesh, const ComplexField& f);

/// Scale used to state roundoff bounds: |A|_inf * sum_i |f_i|^2.
double identity_scale(const StiffnessMatrix& stiffness, const ComplexField& f);

/// Pointwise divergence identity on the vertices:
///   lhs = div(flux f),  rhs = -2i Im(conj f . L f) + 2i Im(V) |f|^2,
/// with L f = M^{-1} K f.
struct IdentityReport {
  ComplexField lhs;
  ComplexField rhs;
  ComplexField residual;
  double residual_max = 0.0;
  /// sqrt(sum_i M_ii |lhs_i - rhs_i|^2)
  double residual_mass_norm = 0.0;
  /// Raw sum_i [conj(f_i) (A f)_i - f_i (A conj f)_i]; not thresholded.
  Complex exact_balance = 0.0;
  double h = 0.0;
};

/// Throws DomainError naming the first vertex where f vanishes.
IdentityReport pointwise_identity_residual(const Mesh& mesh, const SchrodingerSystem& system, const ComplexField& f);

/// sum_i [conj(f_i) (A f)_i - f_i (A conj f)_i], computed on the vertices.
/// Zero up to roundoff for every f because A is real symmetric.
Complex exact_balance(const StiffnessMatrix& stiffness, const ComplexField& f);
Complex exact_balance(const SchrodingerSystem& system, const ComplexField& f);

/// Cutoff-tested identity
///   lhs = -sum_{i<j} w_ij (chi_j - chi_i)(conj(f_i) f_j - f_i conj(f_j)),
///   rhs = 2i sum_i Im(V_i) |f_i|^2 chi_i M_ii,
/// with w_ij = -A_ij the edge weights. lhs - rhs equals
/// -2i sum_i chi_i Im(conj(f_i) (K f)_i) exactly, so the gap is roundoff
/// whenever K f = 0.
struct WeakIdentity {
  Complex lhs = 0.0;
  Complex rhs = 0.0;
  double gap = 0.0;
  double scale = 0.0;
};

/// `chi` must be real with values in [0, 1].
WeakIdentity weak_identity(const Mesh& mesh, const SchrodingerSystem& system, const ComplexField& f,
                           const Eigen::VectorXd& chi);

struct Cutoff {
  Eigen::VectorXd chi;
  double plateau = 0.0;
  double ramp = 0.0;
  /// 1 / (ramp - plateau), the slope of the radial profile.
  double gradient_bound = 0.0;
};

/// Radial cutoffs around vertex `center` (minimum-image Euclidean distance):
/// 1 within `plateau`, linear down to 0 at `ramp`.
std::vector<Cutoff> cutoff_family(const Mesh& mesh, int center, const std::vector<std::pair<double, double>>& radii);

/// Largest modulus of the interpolated gradient of chi over all cells.
double max_gradient(const Mesh& mesh, const Eigen::VectorXd& chi);

struct CutoffSample {
  double plateau = 0.0;
  double ramp = 0.0;
  double gradient_bound = 0.0;
  /// sum_i chi_i Im(V_i) |f_i|^2 M_ii
  double integral = 0.0;
  Complex lhs = 0.0;
  double gap = 0.0;
};

struct CutoffSeries {
  std::vector<CutoffSample> samples;
  /// Same integral with chi = 1: the limit of the series.
  double limit = 0.0;
  /// Admissibility proxies on the finite mesh: f^H M f and f^H A f.
  double mass_norm_squared = 0.0;
  double gradient_energy = 0.0;
  double scale = 0.0;
};

CutoffSeries cutoff_limit_experiment(const Mesh& mesh, const SchrodingerSystem& system, const ComplexField& f,
                                     const std::vector<Cutoff>& family);

}  // namespace schrolab
