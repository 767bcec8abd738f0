#include "schrolab/identity.hpp"

#include "schrolab/errors.hpp"

#include <cmath>

namespace schrolab {

namespace {

constexpr Complex kI(0.0, 1.0);

void require_nonvanishing(const ComplexField& f, const char* what) {
  for (Eigen::Index i = 0; i < f.size(); ++i)
    if (!(std::abs(f[i]) > 0.0)) throw DomainError(std::string(what) + ": field vanishes", static_cast<std::size_t>(i));
}

}  // namespace

CellVectorField flux(const Mesh& mesh, const ComplexField& f) {
  const CellVectorField grad = gradient(mesh, f);
  CellVectorField out;
  out.values = Eigen::MatrixXcd::Zero(mesh.cell_count(), mesh.dim());
  const double share = 1.0 / (mesh.dim() + 1);
  for (int c = 0; c < mesh.cell_count(); ++c) {
    Complex avg = 0.0;
    for (int k = 0; k <= mesh.dim(); ++k) avg += f[mesh.cells()(c, k)];
    avg *= share;
    // conj(a) g - a conj(g) = 2i Im(conj(a) g)
    for (int d = 0; d < mesh.dim(); ++d) out.values(c, d) = 2.0 * kI * std::imag(std::conj(avg) * grad.values(c, d));
  }
  return out;
}

ComplexField edge_flux(const Mesh& mesh, const ComplexField& f) {
  if (f.size() != mesh.vertex_count()) throw InvalidArgument("edge_flux: field length mismatch");
  ComplexField g(mesh.edge_count());
  for (int e = 0; e < mesh.edge_count(); ++e) {
    const auto [i, j] = mesh.edges()[static_cast<std::size_t>(e)];
    g[e] = 2.0 * kI * std::imag(std::conj(f[i]) * f[j]);
  }
  return g;
}

double identity_scale(const StiffnessMatrix& stiffness, const ComplexField& f) {
  return stiffness.norm_inf() * f.squaredNorm();
}

Complex exact_balance(const StiffnessMatrix& stiffness, const ComplexField& f) {
  if (f.size() != stiffness.size()) throw InvalidArgument("exact_balance: field length mismatch");
  const ComplexSparse a = stiffness.matrix.cast<Complex>();
  const ComplexField af = a * f;
  const ComplexField afbar = a * f.conjugate();
  Complex total = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) total += std::conj(f[i]) * af[i] - f[i] * afbar[i];
  return total;
}

Complex exact_balance(const SchrodingerSystem& system, const ComplexField& f) { return exact_balance(system.stiffness, f); }

IdentityReport pointwise_identity_residual(const Mesh& mesh, const SchrodingerSystem& system, const ComplexField& f) {
  if (f.size() != mesh.vertex_count() || system.size() != mesh.vertex_count())
    throw InvalidArgument("pointwise_identity_residual: size mismatch");
  require_nonvanishing(f, "pointwise identity");

  IdentityReport r;
  r.lhs = divergence(mesh, system.mass, flux(mesh, f));
  const ComplexField lf = apply_schrodinger(system, f);
  r.rhs.resize(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i)
    r.rhs[i] = -2.0 * kI * std::imag(std::conj(f[i]) * lf[i]) + 2.0 * kI * system.potential[i].imag() * std::norm(f[i]);
  r.residual = r.lhs - r.rhs;
  r.residual_max = r.residual.cwiseAbs().maxCoeff();
  r.residual_mass_norm = std::sqrt((system.mass.diagonal.array() * r.residual.array().abs2()).sum());
  r.exact_balance = exact_balance(system.stiffness, f);
  r.h = mesh.max_edge_length();
  return r;
}

WeakIdentity weak_identity(const Mesh& mesh, const SchrodingerSystem& system, const ComplexField& f,
                           const Eigen::VectorXd& chi) {
  if (f.size() != mesh.vertex_count() || chi.size() != mesh.vertex_count() || system.size() != mesh.vertex_count())
    throw InvalidArgument("weak_identity: size mismatch");
  for (Eigen::Index i = 0; i < chi.size(); ++i)
    if (!(chi[i] >= 0.0 && chi[i] <= 1.0)) throw InvalidArgument("weak_identity: cutoff values must lie in [0, 1]");

  WeakIdentity w;
  const RealSparse& a = system.stiffness.matrix;
  for (int col = 0; col < a.outerSize(); ++col) {
    for (RealSparse::InnerIterator it(a, col); it; ++it) {
      const int i = static_cast<int>(it.row()), j = col;
      if (i >= j) continue;
      // -w_ij = A_ij
      const Complex g = 2.0 * kI * std::imag(std::conj(f[i]) * f[j]);
      w.lhs += it.value() * (chi[j] - chi[i]) * g;
    }
  }
  double integral = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i)
    integral += system.potential[i].imag() * std::norm(f[i]) * chi[i] * system.mass.diagonal[i];
  w.rhs = 2.0 * kI * integral;
  w.gap = std::abs(w.lhs - w.rhs);
  w.scale = identity_scale(system.stiffness, f);
  return w;
}

std::vector<Cutoff> cutoff_family(const Mesh& mesh, int center, const std::vector<std::pair<double, double>>& radii) {
  if (center < 0 || center >= mesh.vertex_count()) throw InvalidArgument("cutoff_family: center out of range");
  std::vector<Cutoff> family;
  for (const auto& [plateau, ramp] : radii) {
    if (!(plateau >= 0.0) || !(ramp > plateau) || !std::isfinite(ramp))
      throw InvalidArgument("cutoff_family: need 0 <= plateau < ramp");
    Cutoff c;
    c.plateau = plateau;
    c.ramp = ramp;
    c.gradient_bound = 1.0 / (ramp - plateau);
    c.chi.resize(mesh.vertex_count());
    for (int v = 0; v < mesh.vertex_count(); ++v) {
      const double d = mesh.displacement(center, v).norm();
      if (d <= plateau) {
        c.chi[v] = 1.0;
      } else if (d >= ramp) {
        c.chi[v] = 0.0;
      } else {
        c.chi[v] = (ramp - d) / (ramp - plateau);
      }
    }
    family.push_back(std::move(c));
  }
  return family;
}

double max_gradient(const Mesh& mesh, const Eigen::VectorXd& chi) {
  const CellVectorField g = gradient(mesh, chi.cast<Complex>());
  double m = 0.0;
  for (int c = 0; c < mesh.cell_count(); ++c) m = std::max(m, g.values.row(c).norm());
  return m;
}

CutoffSeries cutoff_limit_experiment(const Mesh& mesh, const SchrodingerSystem& system, const ComplexField& f,
                                     const std::vector<Cutoff>& family) {
  CutoffSeries series;
  for (const auto& c : family) {
    const WeakIdentity w = weak_identity(mesh, system, f, c.chi);
    CutoffSample s;
    s.plateau = c.plateau;
    s.ramp = c.ramp;
    s.gradient_bound = c.gradient_bound;
    s.integral = w.rhs.imag() / 2.0;
    s.lhs = w.lhs;
    s.gap = w.gap;
    series.samples.push_back(s);
  }
  const WeakIdentity full = weak_identity(mesh, system, f, Eigen::VectorXd::Ones(mesh.vertex_count()));
  series.limit = full.rhs.imag() / 2.0;
  series.mass_norm_squared = (system.mass.diagonal.array() * f.array().abs2()).sum();
  series.gradient_energy = std::real(f.dot(system.stiffness.matrix.cast<Complex>() * f));
  series.scale = full.scale;
  return series;
}

}  // namespace schrolab
