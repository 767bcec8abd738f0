#pragma once

#include "schrolab/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <complex>
#include <iosfwd>

namespace schrolab {

using Complex = std::complex<double>;
using RealSparse = Eigen::SparseMatrix<double>;
using ComplexSparse = Eigen::SparseMatrix<Complex>;

/// One complex value per vertex.
using ComplexField = Eigen::VectorXcd;
/// One complex value per vertex; entries of V in L = -Laplacian + V.
using Potential = Eigen::VectorXcd;

/// Weak form of the negative Laplace-Beltrami operator: cotangent weights in
/// 2-D, inverse edge lengths in 1-D. <A f, f> approximates the Dirichlet
/// energy, so A is positive semidefinite. Neumann boundary behaviour is the
/// natural one; no boundary rows are modified.
struct StiffnessMatrix {
  RealSparse matrix;

  Eigen::Index size() const { return matrix.rows(); }
  double max_abs() const;
  /// Max row absolute sum; bounds the spectral norm since A is symmetric.
  double norm_inf() const;
};

/// Lumped (diagonal) vertex measure.
struct MassMatrix {
  Eigen::VectorXd diagonal;

  Eigen::Index size() const { return diagonal.size(); }
  double trace() const { return diagonal.sum(); }
};

/// K = A + M diag(V). K is complex symmetric (K^T = K).
struct SchrodingerSystem {
  StiffnessMatrix stiffness;
  MassMatrix mass;
  Potential potential;
  ComplexSparse matrix;

  Eigen::Index size() const { return matrix.rows(); }
};

/// Per-cell vectors: cells x dim (one column per coordinate direction).
struct CellVectorField {
  Eigen::MatrixXcd values;
};

/// Positive weight per mesh edge, parallel to `mesh.edges()`:
/// (cot a + cot b) / 2 in 2-D, 1 / length in 1-D. The stiffness
/// off-diagonal is minus this weight. Obtuse triangles give negative
/// contributions, which are kept.
Eigen::VectorXd edge_weights(const Mesh& mesh);

StiffnessMatrix assemble_stiffness(const Mesh& mesh);
MassMatrix assemble_mass(const Mesh& mesh);
SchrodingerSystem assemble_schrodinger(StiffnessMatrix stiffness, MassMatrix mass, Potential potential);
/// Convenience: assemble A and M from `mesh` and combine with `potential`.
SchrodingerSystem assemble_schrodinger(const Mesh& mesh, Potential potential);

/// Measure of every cell; throws AssemblyError on a degenerate cell.
Eigen::VectorXd cell_measures(const Mesh& mesh);

/// Gradient of each hat function restricted to each cell: entry (c, k) is
/// the gradient of the hat of local vertex k on cell c.
std::vector<std::array<Eigen::Vector2d, 3>> hat_gradients(const Mesh& mesh);

/// Gradient of the piecewise-linear interpolant, constant per cell.
CellVectorField gradient(const Mesh& mesh, const ComplexField& f);

/// Negative adjoint of `gradient` in the lumped-mass pairing:
/// sum_i M_ii (div X)_i chi_i = -sum_c |c| X_c . grad(chi)_c for every chi.
ComplexField divergence(const Mesh& mesh, const CellVectorField& field);
ComplexField divergence(const Mesh& mesh, const MassMatrix& mass, const CellVectorField& field);

/// Bilinear (non-conjugating) cell pairing sum_c |c| X_c . Y_c.
Complex cell_pairing(const Mesh& mesh, const CellVectorField& x, const CellVectorField& y);
/// Bilinear lumped-mass pairing sum_i M_ii a_i b_i.
Complex mass_pairing(const MassMatrix& mass, const ComplexField& a, const ComplexField& b);

/// Strong-form Laplacian applied to f: -M^{-1} A f.
ComplexField apply_laplacian(const SchrodingerSystem& system, const ComplexField& f);
/// Strong-form operator L f = M^{-1} K f.
ComplexField apply_schrodinger(const SchrodingerSystem& system, const ComplexField& f);

/// Coordinate text export, one non-zero per line: `row col re im`.
void write_coordinate(std::ostream& out, const ComplexSparse& matrix);
void write_coordinate(std::ostream& out, const RealSparse& matrix);

}  // namespace schrolab
