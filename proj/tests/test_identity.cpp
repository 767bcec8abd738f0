#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "schrolab/errors.hpp"
#include "schrolab/fields.hpp"
#include "schrolab/identity.hpp"
#include "schrolab/theorems.hpp"
#include "support.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

using namespace schrolab;

namespace {

constexpr double kPi = std::numbers::pi;

ComplexField winding(const Mesh& m) {
  return sample(m, [](const Eigen::Vector2d& p) { return std::polar(1.0, p.x()); });
}

SchrodingerSystem designed(const Mesh& m, const ComplexField& f) {
  StiffnessMatrix a = assemble_stiffness(m);
  MassMatrix mass = assemble_mass(m);
  Potential v = inverse_design_potential(a, mass, f);
  return assemble_schrodinger(std::move(a), std::move(mass), std::move(v));
}

}  // namespace

TEST_CASE("flux: constants and real fields give zero") {
  const Mesh m = gen_disk(2, 1.0);
  CHECK(flux(m, ComplexField::Constant(m.vertex_count(), Complex(0.3, -2.0))).values.cwiseAbs().maxCoeff() == 0.0);
  const ComplexField real = random_unit_values(m.vertex_count(), 3).cast<Complex>();
  CHECK(flux(m, real).values.cwiseAbs().maxCoeff() == 0.0);
  CHECK(edge_flux(m, real).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("flux is purely imaginary") {
  for (const auto& [name, m] : testing::sample_meshes()) {
    CAPTURE(name);
    const ComplexField f = random_field(m.vertex_count(), 17);
    CHECK(flux(m, f).values.real().cwiseAbs().maxCoeff() == 0.0);
    CHECK(edge_flux(m, f).real().cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("circle flux closed form 2i sin(h)/h -> 2i") {
  for (int n : {16, 64, 256}) {
    const Mesh m = gen_circle(n, 1.0);
    const double h = 2.0 * kPi / n;
    const CellVectorField F = flux(m, winding(m));
    for (int c = 0; c < m.cell_count(); ++c) CHECK(std::abs(F.values(c, 0) - Complex(0.0, 2.0 * std::sin(h) / h)) <= 1e-12);
    const ComplexField g = edge_flux(m, winding(m));
    for (Eigen::Index e = 0; e < g.size(); ++e) CHECK(std::abs(std::abs(g[e]) - 2.0 * std::sin(h)) <= 1e-14);
  }
}

TEST_CASE("pointwise identity: trivial case and vanishing field") {
  const Mesh m = gen_disk(2, 1.0);
  const auto s = assemble_schrodinger(m, Potential::Zero(m.vertex_count()));
  const IdentityReport r = pointwise_identity_residual(m, s, ComplexField::Ones(m.vertex_count()));
  CHECK(r.lhs.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.rhs.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.residual_mass_norm == 0.0);
  CHECK(r.h == doctest::Approx(m.max_edge_length()));

  ComplexField f = random_field(m.vertex_count(), 2);
  f[5] = 0.0;
  try {
    pointwise_identity_residual(m, s, f);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(e.vertex() == 5);
  }
}

TEST_CASE("pointwise identity residual is exact on the circle and on 1-D meshes") {
  for (const Mesh& m : {gen_circle(64, 1.0), gen_interval(33, 2.0)}) {
    const ComplexField f = random_field(m.vertex_count(), 5);
    const SchrodingerSystem s = assemble_schrodinger(m, random_field(m.vertex_count(), 6));
    const IdentityReport r = pointwise_identity_residual(m, s, f);
    CHECK(r.residual_max <= 1e-12 * identity_scale(s.stiffness, f));
  }
}

TEST_CASE("pointwise identity converges at second order on a periodic lattice") {
  std::vector<double> hs, norms;
  Mesh m = gen_flat_torus(16, 16, 1.0, 1.0);
  for (int level = 0; level < 4; ++level) {
    const ComplexField f = sample(m, [](const Eigen::Vector2d& p) {
      return std::exp(Complex(0.3 * std::sin(2 * kPi * p.x()), 0.7 * std::cos(2 * kPi * p.y()) + 0.2 * std::cos(2 * kPi * p.x())));
    });
    const IdentityReport r = pointwise_identity_residual(m, designed(m, f), f);
    hs.push_back(r.h);
    norms.push_back(r.residual_mass_norm);
    m = refine(m);
  }
  for (double o : observed_orders(hs, norms)) CHECK(o == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("exact balance vanishes to roundoff for any field") {
  std::uint64_t seed = 100;
  for (const auto& [name, m] : testing::sample_meshes()) {
    CAPTURE(name);
    const StiffnessMatrix a = assemble_stiffness(m);
    for (int k = 0; k < 20; ++k) {
      const ComplexField f = random_field(m.vertex_count(), seed++);
      CHECK(std::abs(exact_balance(a, f)) <= 1e-13 * identity_scale(a, f));
    }
  }
}

TEST_CASE("weak identity: gap equals the dropped term when Kf != 0") {
  const Mesh m = gen_disk(3, 1.0);
  const ComplexField f = sample(m, [](const Eigen::Vector2d& p) { return std::polar(1.0, std::atan2(p.y(), p.x())); });
  const SchrodingerSystem s = assemble_schrodinger(m, Potential::Zero(m.vertex_count()));
  const Eigen::VectorXd chi = random_unit_values(m.vertex_count(), 9);
  const WeakIdentity w = weak_identity(m, s, f, chi);

  // brute force: dense K, dropped term sum_i chi_i 2i Im(conj f_i (Kf)_i)
  const Eigen::MatrixXcd k(s.matrix);
  const ComplexField kf = k * f;
  Complex dropped = 0.0;
  for (int i = 0; i < m.vertex_count(); ++i) dropped += chi[i] * Complex(0.0, 2.0) * (std::conj(f[i]) * kf[i]).imag();
  CHECK(std::abs(dropped) > 1e-3);
  CHECK(w.gap == doctest::Approx(std::abs(dropped)).epsilon(1e-12));
  CHECK(std::abs(w.lhs - w.rhs + dropped) <= 1e-12 * w.scale);

  // lhs by brute force over edges with the dense stiffness
  const Eigen::MatrixXd a(s.stiffness.matrix);
  Complex lhs = 0.0;
  for (int i = 0; i < m.vertex_count(); ++i)
    for (int j = i + 1; j < m.vertex_count(); ++j) {
      if (a(i, j) == 0.0) continue;
      const Complex g = std::conj(f[i]) * f[j] - f[i] * std::conj(f[j]);
      lhs -= -a(i, j) * (chi[j] - chi[i]) * g;
    }
  CHECK(std::abs(lhs - w.lhs) <= 1e-12 * w.scale);
}

TEST_CASE("weak identity is exact for inverse-designed pairs") {
  std::uint64_t seed = 300;
  for (const auto& [name, m] : testing::sample_meshes()) {
    CAPTURE(name);
    const ComplexField f = random_field(m.vertex_count(), seed++);
    const SchrodingerSystem s = designed(m, f);
    for (int k = 0; k < 5; ++k) {
      const WeakIdentity w = weak_identity(m, s, f, random_unit_values(m.vertex_count(), seed++));
      CHECK(w.gap <= 1e-12 * w.scale);
    }
  }
}

TEST_CASE("weak identity rejects cutoffs outside [0, 1]") {
  const Mesh m = gen_disk(1, 1.0);
  const SchrodingerSystem s = assemble_schrodinger(m, Potential::Zero(m.vertex_count()));
  Eigen::VectorXd chi = Eigen::VectorXd::Constant(m.vertex_count(), 0.5);
  chi[2] = 1.5;
  CHECK_THROWS_AS(weak_identity(m, s, ComplexField::Ones(m.vertex_count()), chi), InvalidArgument);
  CHECK_THROWS_AS(weak_identity(m, s, ComplexField::Ones(3), Eigen::VectorXd::Zero(3)), InvalidArgument);
}

TEST_CASE("cutoff family: plateau, ramp and gradient bound") {
  const Mesh m = gen_strip(41, 5, 20.0, 1.0);
  const int center = 20 + 2 * 41;
  const auto family = cutoff_family(m, center, {{1.0, 3.0}, {2.0, 4.0}});
  REQUIRE(family.size() == 2);
  for (const Cutoff& c : family) {
    CHECK(c.gradient_bound == doctest::Approx(1.0 / (c.ramp - c.plateau)));
    for (int v = 0; v < m.vertex_count(); ++v) {
      const double d = m.displacement(center, v).norm();
      if (d <= c.plateau) CHECK(c.chi[v] == 1.0);
      if (d >= c.ramp) CHECK(c.chi[v] == 0.0);
      CHECK(c.chi[v] >= 0.0);
      CHECK(c.chi[v] <= 1.0);
    }
    CHECK(max_gradient(m, c.chi) <= 1.5 * c.gradient_bound);
  }
  CHECK_THROWS_AS(cutoff_family(m, center, {{2.0, 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(cutoff_family(m, center, {{-1.0, 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(cutoff_family(m, -1, {{0.0, 1.0}}), InvalidArgument);

  // a plateau covering the whole mesh: chi = 1 and the weak lhs vanishes
  const Mesh d = gen_disk(2, 1.0);
  const auto all = cutoff_family(d, 0, {{5.0, 6.0}});
  CHECK(all[0].chi.minCoeff() == 1.0);
  const ComplexField f = random_field(d.vertex_count(), 4);
  CHECK(weak_identity(d, designed(d, f), f, all[0].chi).lhs == Complex(0.0));
}

TEST_CASE("cutoff-limit series on a strip tends to the full integral") {
  const Mesh m = gen_strip(81, 5, 20.0, 1.0);
  const ComplexField f = sample(m, [](const Eigen::Vector2d& p) {
    const double r2 = (p - Eigen::Vector2d(10.0, 0.5)).squaredNorm();
    return std::exp(Complex(-r2 / 2.0, 0.4 * r2));
  });
  const SchrodingerSystem s = designed(m, f);
  const int center = 40 + 2 * 81;
  std::vector<std::pair<double, double>> radii;
  for (double p = 1.0; p <= 7.0; p += 1.0) radii.emplace_back(p, p + 1.0);
  const CutoffSeries series = cutoff_limit_experiment(m, s, f, cutoff_family(m, center, radii));
  REQUIRE(series.samples.size() == radii.size());
  CHECK(std::abs(series.limit) <= 1e-12 * series.scale);
  CHECK(series.mass_norm_squared > 0.0);
  CHECK(series.gradient_energy > 0.0);
  for (const auto& x : series.samples) CHECK(x.gap <= 1e-12 * series.scale);
  CHECK(std::abs(series.samples.back().integral) < std::abs(series.samples.front().integral));
  CHECK(std::abs(series.samples.back().integral) <= 1e-10 * series.scale);
}
