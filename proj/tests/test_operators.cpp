#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "schrolab/errors.hpp"
#include "schrolab/fields.hpp"
#include "schrolab/operators.hpp"
#include "support.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace schrolab;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd dense(const RealSparse& a) { return Eigen::MatrixXd(a); }

// Element stiffness from the P1 basis: grad(phi) = rows of the inverse of
// [1 x y] evaluated at the corners, integrated exactly (constant gradients).
Eigen::MatrixXd stiffness_by_quadrature(const Mesh& m) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m.vertex_count(), m.vertex_count());
  for (int c = 0; c < m.cell_count(); ++c) {
    const auto p = m.cell_corners(c);
    Eigen::Matrix3d v;
    for (int k = 0; k < 3; ++k) v.row(k) << 1.0, p[static_cast<std::size_t>(k)].x(), p[static_cast<std::size_t>(k)].y();
    const Eigen::Matrix3d coeff = v.inverse();  // column k: coefficients of phi_k
    const double area = 0.5 * std::abs(v.determinant());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const Eigen::Vector2d gi = coeff.block<2, 1>(1, i), gj = coeff.block<2, 1>(1, j);
        a(m.cells()(c, i), m.cells()(c, j)) += area * gi.dot(gj);
      }
  }
  return a;
}

}  // namespace

TEST_CASE("cotangent stiffness equals exact P1 quadrature") {
  for (const Mesh& m : {gen_disk(3, 1.0), testing::jittered(refine(gen_disk(2, 1.0)), 0.2, 3), gen_annulus(0.4, 1.0, 3),
                        gen_flat_torus(5, 4, 1.0, 1.3), gen_strip(6, 4, 3.0, 1.0)}) {
    const Eigen::MatrixXd a = dense(assemble_stiffness(m).matrix);
    const Eigen::MatrixXd q = stiffness_by_quadrature(m);
    CHECK((a - q).cwiseAbs().maxCoeff() <= 1e-12 * q.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("1-D stiffness is 1/h on a uniform interval") {
  const Eigen::MatrixXd a = dense(assemble_stiffness(gen_interval(5, 2.0)).matrix);
  CHECK(a(0, 0) == doctest::Approx(2.0));
  CHECK(a(1, 1) == doctest::Approx(4.0));
  CHECK(a(0, 1) == doctest::Approx(-2.0));
  CHECK(a(0, 2) == 0.0);
  const Eigen::VectorXd w = edge_weights(gen_interval(5, 2.0));
  for (Eigen::Index e = 0; e < w.size(); ++e) CHECK(w[e] == doctest::Approx(2.0));
}

TEST_CASE("stiffness: symmetric, zero row sums, positive semidefinite") {
  for (const auto& [name, m] : testing::sample_meshes()) {
    CAPTURE(name);
    const StiffnessMatrix s = assemble_stiffness(m);
    const Eigen::MatrixXd a = dense(s.matrix);
    CHECK((a - a.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12 * s.max_abs());
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues();
    CHECK(ev.minCoeff() >= -1e-12 * s.norm_inf());
    // one zero eigenvalue per connected component
    CHECK(std::abs(ev[0]) <= 1e-12 * s.norm_inf());
    CHECK(ev[1] > 1e-8 * s.norm_inf());
  }
}

TEST_CASE("lumped mass: trace is the total measure") {
  for (const auto& [name, m] : testing::sample_meshes()) {
    CAPTURE(name);
    const MassMatrix mass = assemble_mass(m);
    CHECK(mass.trace() == doctest::Approx(m.total_measure()).epsilon(1e-13));
    CHECK(mass.diagonal.minCoeff() > 0.0);
  }
  // inscribed hexagon, not pi
  CHECK(assemble_mass(gen_disk(1, 1.0)).trace() == doctest::Approx(1.5 * std::sqrt(3.0)).epsilon(1e-14));
  // 1-D: half of each incident edge
  const MassMatrix m1 = assemble_mass(gen_interval(5, 2.0));
  CHECK(m1.diagonal[0] == doctest::Approx(0.25));
  CHECK(m1.diagonal[2] == doctest::Approx(0.5));
}

TEST_CASE("interval Neumann spectrum matches the closed form exactly") {
  const int n = 21;
  const double length = 3.0, h = length / (n - 1);
  const Mesh m = gen_interval(n, length);
  const Eigen::MatrixXd a = dense(assemble_stiffness(m).matrix);
  const Eigen::VectorXd s = assemble_mass(m).diagonal.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd b = s.asDiagonal() * a * s.asDiagonal();
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(b).eigenvalues();
  for (int k = 0; k < n; ++k) {
    const double exact = (2.0 - 2.0 * std::cos(k * kPi * h / length)) / (h * h);
    CHECK(ev[k] == doctest::Approx(exact).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("circle: exp(ix) is an eigenvector of the circulant Laplacian") {
  const int n = 40;
  const Mesh m = gen_circle(n, 1.0);
  const double h = 2.0 * kPi / n;
  const ComplexField f = sample(m, [](const Eigen::Vector2d& p) { return std::polar(1.0, p.x()); });
  const SchrodingerSystem s = assemble_schrodinger(m, Potential::Zero(n));
  const ComplexField lap = apply_laplacian(s, f);
  const double lambda = (2.0 - 2.0 * std::cos(h)) / (h * h);
  CHECK((lap + lambda * f).cwiseAbs().maxCoeff() <= 1e-12);

  // |grad f| = 2 sin(h/2) / h on every edge
  const CellVectorField g = gradient(m, f);
  for (int c = 0; c < m.cell_count(); ++c) CHECK(std::abs(g.values(c, 0)) == doctest::Approx(2.0 * std::sin(h / 2) / h).epsilon(1e-13));
}

TEST_CASE("gradient is exact on linear fields") {
  const Mesh m = testing::jittered(refine(gen_disk(2, 1.0)), 0.2, 5);
  const Complex a(0.3, -1.0), bx(1.5, 0.25), by(-0.5, 2.0);
  const ComplexField f = sample(m, [&](const Eigen::Vector2d& p) { return a + bx * p.x() + by * p.y(); });
  const CellVectorField g = gradient(m, f);
  for (int c = 0; c < m.cell_count(); ++c) {
    CHECK(std::abs(g.values(c, 0) - bx) <= 1e-12);
    CHECK(std::abs(g.values(c, 1) - by) <= 1e-12);
  }
  // periodic: linear in the minimum image sense only for constants
  const Mesh t = gen_flat_torus(5, 5, 1.0, 1.0);
  const CellVectorField g0 = gradient(t, ComplexField::Constant(t.vertex_count(), Complex(2.0, 1.0)));
  CHECK(g0.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("divergence is the negative adjoint of the gradient") {
  std::uint64_t seed = 1;
  for (const auto& [name, m] : testing::sample_meshes()) {
    CAPTURE(name);
    const MassMatrix mass = assemble_mass(m);
    for (int trial = 0; trial < 5; ++trial) {
      const ComplexField chi = random_field(m.vertex_count(), seed++);
      CellVectorField x;
      x.values.resize(m.cell_count(), m.dim());
      const ComplexField raw = random_field(m.cell_count() * m.dim(), seed++);
      for (int c = 0; c < m.cell_count(); ++c)
        for (int d = 0; d < m.dim(); ++d) x.values(c, d) = raw[c * m.dim() + d];
      const Complex lhs = cell_pairing(m, x, gradient(m, chi));
      const Complex rhs = -mass_pairing(mass, divergence(m, mass, x), chi);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(std::abs(lhs), 1.0));
      CHECK(std::abs(lhs - (-mass_pairing(mass, divergence(m, x), chi))) <= 1e-12 * std::max(std::abs(lhs), 1.0));
    }
  }
}

TEST_CASE("div(grad f) = -M^{-1} A f") {
  for (const auto& [name, m] : testing::sample_meshes()) {
    CAPTURE(name);
    const ComplexField f = random_field(m.vertex_count(), 99);
    const SchrodingerSystem s = assemble_schrodinger(m, Potential::Zero(m.vertex_count()));
    const ComplexField a = divergence(m, s.mass, gradient(m, f));
    const ComplexField b = apply_laplacian(s, f);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-11 * b.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("Schrodinger assembly: K = A + M diag(V), complex symmetric") {
  const Mesh m = gen_disk(2, 1.0);
  const Potential v = random_field(m.vertex_count(), 4);
  const SchrodingerSystem s = assemble_schrodinger(m, v);
  const Eigen::MatrixXcd k(s.matrix);
  CHECK((k - k.transpose()).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::MatrixXcd expect = dense(s.stiffness.matrix).cast<Complex>() +
                                  Eigen::MatrixXcd((s.mass.diagonal.cast<Complex>().cwiseProduct(v)).asDiagonal());
  CHECK((k - expect).cwiseAbs().maxCoeff() <= 1e-15 * expect.cwiseAbs().maxCoeff());
  const ComplexField f = random_field(m.vertex_count(), 5);
  const ComplexField lf = apply_schrodinger(s, f);
  CHECK(((s.matrix * f).cwiseQuotient(s.mass.diagonal.cast<Complex>()) - lf).cwiseAbs().maxCoeff() <= 1e-13);

  CHECK_THROWS_AS(assemble_schrodinger(m, Potential::Zero(3)), InvalidArgument);
  Potential bad = v;
  bad[0] = Complex(NAN, 0.0);
  CHECK_THROWS_AS(assemble_schrodinger(m, bad), InvalidArgument);
}

TEST_CASE("degenerate cells are rejected at assembly") {
  Eigen::MatrixX2d v(3, 2);
  v << 0, 0, 1, 0, 2, 0;
  Eigen::MatrixXi c(1, 3);
  c << 0, 1, 2;
  const Mesh flat(2, v, c, {0, 1, 2}, Eigen::Vector2d::Zero(), {});
  CHECK_THROWS_AS(assemble_stiffness(flat), AssemblyError);
  CHECK_THROWS_AS(cell_measures(flat), AssemblyError);
}

TEST_CASE("coordinate export lists every non-zero") {
  const SchrodingerSystem s = assemble_schrodinger(gen_interval(3, 2.0), Potential::Constant(3, Complex(0.0, 1.0)));
  std::ostringstream out;
  write_coordinate(out, s.matrix);
  std::istringstream in(out.str());
  int count = 0;
  int row = 0, col = 0;
  double re = 0, im = 0;
  while (in >> row >> col >> re >> im) {
    const Complex expect = s.matrix.coeff(row, col);
    CHECK(re == expect.real());
    CHECK(im == expect.imag());
    ++count;
  }
  CHECK(count == s.matrix.nonZeros());
}
