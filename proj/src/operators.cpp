#include "schrolab/operators.hpp"

#include "schrolab/errors.hpp"
#include "schrolab/format.hpp"

#include <cmath>
#include <ostream>
#include <vector>

namespace schrolab {

namespace {

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

void check_field(const Mesh& mesh, const ComplexField& f) {
  if (f.size() != mesh.vertex_count()) throw InvalidArgument("field length does not match vertex count");
}

}  // namespace

double StiffnessMatrix::max_abs() const {
  double m = 0.0;
  for (int k = 0; k < matrix.outerSize(); ++k)
    for (RealSparse::InnerIterator it(matrix, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

double StiffnessMatrix::norm_inf() const {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(matrix.rows());
  for (int k = 0; k < matrix.outerSize(); ++k)
    for (RealSparse::InnerIterator it(matrix, k); it; ++it) rows[it.row()] += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

Eigen::VectorXd cell_measures(const Mesh& mesh) {
  Eigen::VectorXd m(mesh.cell_count());
  for (int c = 0; c < mesh.cell_count(); ++c) {
    m[c] = mesh.signed_measure(c);
    if (!(m[c] > 0.0) || !std::isfinite(m[c])) throw AssemblyError("degenerate cell " + std::to_string(c));
  }
  return m;
}

Eigen::VectorXd edge_weights(const Mesh& mesh) {
  const Eigen::VectorXd measure = cell_measures(mesh);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(mesh.edge_count());
  for (int c = 0; c < mesh.cell_count(); ++c) {
    if (mesh.dim() == 1) {
      w[mesh.find_edge(mesh.cells()(c, 0), mesh.cells()(c, 1))] += 1.0 / measure[c];
      continue;
    }
    const auto p = mesh.cell_corners(c);
    const auto t = mesh.triangle(c);
    for (int k = 0; k < 3; ++k) {
      const int k1 = (k + 1) % 3, k2 = (k + 2) % 3;
      const Eigen::Vector2d u = p[static_cast<std::size_t>(k1)] - p[static_cast<std::size_t>(k)];
      const Eigen::Vector2d v = p[static_cast<std::size_t>(k2)] - p[static_cast<std::size_t>(k)];
      const double cot = u.dot(v) / cross(u, v);
      w[mesh.find_edge(t[static_cast<std::size_t>(k1)], t[static_cast<std::size_t>(k2)])] += 0.5 * cot;
    }
  }
  return w;
}

StiffnessMatrix assemble_stiffness(const Mesh& mesh) {
  const Eigen::VectorXd w = edge_weights(mesh);
  const int n = mesh.vertex_count();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(2 * mesh.edge_count() + n));
  Eigen::VectorXd diagonal = Eigen::VectorXd::Zero(n);
  for (int e = 0; e < mesh.edge_count(); ++e) {
    const auto [i, j] = mesh.edges()[static_cast<std::size_t>(e)];
    triplets.emplace_back(i, j, -w[e]);
    triplets.emplace_back(j, i, -w[e]);
    diagonal[i] += w[e];
    diagonal[j] += w[e];
  }
  for (int i = 0; i < n; ++i) triplets.emplace_back(i, i, diagonal[i]);
  StiffnessMatrix a;
  a.matrix.resize(n, n);
  a.matrix.setFromTriplets(triplets.begin(), triplets.end());
  a.matrix.makeCompressed();
  return a;
}

MassMatrix assemble_mass(const Mesh& mesh) {
  const Eigen::VectorXd measure = cell_measures(mesh);
  const double share = 1.0 / (mesh.dim() + 1);
  MassMatrix m;
  m.diagonal = Eigen::VectorXd::Zero(mesh.vertex_count());
  for (int c = 0; c < mesh.cell_count(); ++c)
    for (int k = 0; k <= mesh.dim(); ++k) m.diagonal[mesh.cells()(c, k)] += share * measure[c];
  return m;
}

SchrodingerSystem assemble_schrodinger(StiffnessMatrix stiffness, MassMatrix mass, Potential potential) {
  const Eigen::Index n = stiffness.size();
  if (stiffness.matrix.cols() != n || mass.size() != n || potential.size() != n)
    throw InvalidArgument("assemble_schrodinger: size mismatch");
  if (!potential.allFinite()) throw InvalidArgument("assemble_schrodinger: potential has non-finite entries");
  SchrodingerSystem s;
  s.matrix = stiffness.matrix.cast<Complex>();
  for (Eigen::Index i = 0; i < n; ++i) s.matrix.coeffRef(i, i) += mass.diagonal[i] * potential[i];
  s.matrix.makeCompressed();
  s.stiffness = std::move(stiffness);
  s.mass = std::move(mass);
  s.potential = std::move(potential);
  return s;
}

SchrodingerSystem assemble_schrodinger(const Mesh& mesh, Potential potential) {
  return assemble_schrodinger(assemble_stiffness(mesh), assemble_mass(mesh), std::move(potential));
}

std::vector<std::array<Eigen::Vector2d, 3>> hat_gradients(const Mesh& mesh) {
  std::vector<std::array<Eigen::Vector2d, 3>> g(static_cast<std::size_t>(mesh.cell_count()));
  for (int c = 0; c < mesh.cell_count(); ++c) {
    const auto p = mesh.cell_corners(c);
    auto& gc = g[static_cast<std::size_t>(c)];
    if (mesh.dim() == 1) {
      const double d = p[1].x() - p[0].x();
      gc[0] = {-1.0 / d, 0.0};
      gc[1] = {1.0 / d, 0.0};
      gc[2].setZero();
      continue;
    }
    const double twice_area = cross(p[1] - p[0], p[2] - p[0]);
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector2d e = p[static_cast<std::size_t>((k + 2) % 3)] - p[static_cast<std::size_t>((k + 1) % 3)];
      gc[static_cast<std::size_t>(k)] = Eigen::Vector2d(-e.y(), e.x()) / twice_area;
    }
  }
  return g;
}

CellVectorField gradient(const Mesh& mesh, const ComplexField& f) {
  check_field(mesh, f);
  const auto g = hat_gradients(mesh);
  CellVectorField out;
  out.values = Eigen::MatrixXcd::Zero(mesh.cell_count(), mesh.dim());
  // Differences against the first corner (hat gradients sum to zero), so
  // constants have exactly zero gradient.
  for (int c = 0; c < mesh.cell_count(); ++c) {
    const Complex f0 = f[mesh.cells()(c, 0)];
    for (int k = 1; k <= mesh.dim(); ++k)
      for (int d = 0; d < mesh.dim(); ++d)
        out.values(c, d) += (f[mesh.cells()(c, k)] - f0) * g[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)][d];
  }
  return out;
}

ComplexField divergence(const Mesh& mesh, const CellVectorField& field) {
  return divergence(mesh, assemble_mass(mesh), field);
}

ComplexField divergence(const Mesh& mesh, const MassMatrix& mass, const CellVectorField& field) {
  if (field.values.rows() != mesh.cell_count() || field.values.cols() != mesh.dim())
    throw InvalidArgument("divergence: field does not conform to mesh");
  const Eigen::VectorXd measure = cell_measures(mesh);
  const auto g = hat_gradients(mesh);
  ComplexField div = ComplexField::Zero(mesh.vertex_count());
  for (int c = 0; c < mesh.cell_count(); ++c) {
    for (int k = 0; k <= mesh.dim(); ++k) {
      Complex dot = 0.0;
      for (int d = 0; d < mesh.dim(); ++d) dot += field.values(c, d) * g[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)][d];
      div[mesh.cells()(c, k)] -= measure[c] * dot;
    }
  }
  return div.cwiseQuotient(mass.diagonal.cast<Complex>());
}

Complex cell_pairing(const Mesh& mesh, const CellVectorField& x, const CellVectorField& y) {
  const Eigen::VectorXd measure = cell_measures(mesh);
  Complex total = 0.0;
  for (int c = 0; c < mesh.cell_count(); ++c)
    for (int d = 0; d < mesh.dim(); ++d) total += measure[c] * x.values(c, d) * y.values(c, d);
  return total;
}

Complex mass_pairing(const MassMatrix& mass, const ComplexField& a, const ComplexField& b) {
  Complex total = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) total += mass.diagonal[i] * a[i] * b[i];
  return total;
}

ComplexField apply_laplacian(const SchrodingerSystem& system, const ComplexField& f) {
  const ComplexField af = system.stiffness.matrix.cast<Complex>() * f;
  return -af.cwiseQuotient(system.mass.diagonal.cast<Complex>());
}

ComplexField apply_schrodinger(const SchrodingerSystem& system, const ComplexField& f) {
  const ComplexField kf = system.matrix * f;
  return kf.cwiseQuotient(system.mass.diagonal.cast<Complex>());
}

void write_coordinate(std::ostream& out, const ComplexSparse& matrix) {
  for (int k = 0; k < matrix.outerSize(); ++k)
    for (ComplexSparse::InnerIterator it(matrix, k); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << format_exact(it.value().real()) << ' '
          << format_exact(it.value().imag()) << '\n';
}

void write_coordinate(std::ostream& out, const RealSparse& matrix) { write_coordinate(out, ComplexSparse(matrix.cast<Complex>())); }

}  // namespace schrolab
