#pragma once

#include "schrolab/mesh.hpp"
#include "schrolab/operators.hpp"
#include "schrolab/tolerances.hpp"

#include <optional>
#include <vector>

namespace schrolab {

/// Principal-branch phase increment arg(b / a) along one edge. Throws
/// ResolutionError when its magnitude reaches pi - margin and DomainError if
/// either end vanishes.
double phase_increment(const ComplexField& f, int a, int b, double margin);

/// Total phase change of f around `cycle` divided by 2 pi. Requires the
/// cycle to be closed and to walk mesh edges (InvalidArgument otherwise).
int winding_number(const Mesh& mesh, const ComplexField& f, const CycleLoop& cycle, double margin = 1e-8);

struct Obstruction {
  CycleLoop cycle;
  int winding = 0;
  /// True when `cycle` is one of the mesh's stored generator cycles.
  bool generator = false;
};

/// Result of building phi with exp(phi) = f by branch tracking along a BFS
/// spanning tree of every connected component (root = lowest vertex).
struct LogResult {
  bool ok = false;
  /// log|f| + i * (tree-unwrapped phase); filled even when !ok.
  ComplexField phi;
  std::optional<Obstruction> obstruction;
};

/// Succeeds when every generator cycle has winding 0 and every non-tree
/// edge closes without a 2 pi mismatch. Otherwise reports an obstructing
/// cycle (generator cycles are preferred as witnesses).
LogResult complex_log(const Mesh& mesh, const ComplexField& f, double margin = 1e-8);

struct PhaseReport {
  std::vector<int> windings;
  bool global_log_exists = false;
  std::optional<Obstruction> obstruction;
  /// max u - min u per connected component, u = Im(phi) unwrapped along the
  /// spanning tree.
  std::vector<double> component_range;
  double global_range = 0.0;
  /// sum_c |c| avg(|f|^2)_c |grad u|_c^2 with grad u from locally
  /// unwrapped increments on each cell; defined whether or not a global
  /// logarithm exists.
  double phase_energy = 0.0;
};

PhaseReport phase_report(const Mesh& mesh, const ComplexField& f, double margin = 1e-8);

/// Phase Dirichlet energy on its own (see PhaseReport::phase_energy).
double phase_energy(const Mesh& mesh, const ComplexField& f, double margin = 1e-8);

struct ZeroWitness {
  enum class Kind { vertex, cell };
  Kind kind = Kind::vertex;
  int index = 0;
  /// |f| at the vertex, or of the interpolant at `location`.
  double modulus = 0.0;
  Eigen::Vector2d location = Eigen::Vector2d::Zero();
};

/// Near-zero vertices (|f_i| <= tol * max |f|) plus cells whose linear
/// interpolant provably vanishes inside: in 1-D both the real and imaginary
/// parts admit a zero on the edge, in 2-D the interpolant's zero has
/// non-negative barycentric coordinates. Sorted by modulus, then kind, then
/// index.
std::vector<ZeroWitness> zero_locate(const Mesh& mesh, const ComplexField& f, double tol);

}  // namespace schrolab
