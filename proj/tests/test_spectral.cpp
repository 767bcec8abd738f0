#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "schrolab/errors.hpp"
#include "schrolab/fields.hpp"
#include "schrolab/spectral.hpp"
#include "schrolab/theorems.hpp"
#include "support.hpp"

#include <cmath>
#include <numbers>

using namespace schrolab;

namespace {

constexpr double kPi = std::numbers::pi;

bool sigma_agrees(double iterative, double dense, double norm) {
  return std::abs(iterative - dense) <= 1e-8 * dense + 1e-12 * norm;
}

double mass_norm2(const ComplexField& f, const MassMatrix& m) {
  return (f.cwiseAbs2().array() * m.diagonal.array()).sum();
}

}  // namespace

TEST_CASE("V = 0 on a disk: Neumann constant kernel") {
  const Mesh m = gen_disk(3, 1.0);
  const SchrodingerSystem s = assemble_schrodinger(m, Potential::Zero(m.vertex_count()));
  const SpectralResult r = kernel_vector(s);
  CHECK(r.converged);
  CHECK(r.relative_sigma() <= 1e-9);
  CHECK(mass_norm2(r.f, s.mass) == doctest::Approx(1.0).epsilon(1e-12));
  const double c = 1.0 / std::sqrt(s.mass.trace());
  CHECK((r.f.array() - c).abs().maxCoeff() <= 1e-8);
}

TEST_CASE("V = i on a disk: no kernel, sigma bounded below") {
  const Mesh m = gen_disk(3, 1.0);
  const SchrodingerSystem s = assemble_schrodinger(m, Potential::Constant(m.vertex_count(), Complex(0.0, 1.0)));
  const SpectralResult r = kernel_vector(s);
  CHECK(r.converged);
  CHECK(r.relative_sigma() > 1e-6);
  const DenseSpectrum d = dense_oracle(s);
  CHECK(sigma_agrees(r.sigma, d.sigma_min, r.operator_norm));
  // B = B0 + i I with B0 symmetric PSD: every singular value is at least 1
  CHECK(d.sigma_min >= 1.0 - 1e-12);
  CHECK(d.sigma_min == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("iterative and dense smallest singular values agree") {
  std::uint64_t seed = 20;
  for (const auto& [name, m] : testing::sample_meshes()) {
    if (m.vertex_count() > 400) continue;
    CAPTURE(name);
    for (int trial = 0; trial < 3; ++trial) {
      const Potential v = random_field(m.vertex_count(), seed++) * 3.0;
      const SchrodingerSystem s = assemble_schrodinger(m, v);
      const SpectralResult r = kernel_vector(s);
      const DenseSpectrum d = dense_oracle(s);
      CHECK(r.converged);
      CHECK(sigma_agrees(r.sigma, d.sigma_min, r.operator_norm));
      CHECK(d.sigma_max <= r.operator_norm * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("exact kernel pairs: solver and candidate evaluation") {
  const Mesh m = gen_annulus(0.5, 1.0, 3);
  const ComplexField f = random_field(m.vertex_count(), 8);
  const StiffnessMatrix a = assemble_stiffness(m);
  const MassMatrix mass = assemble_mass(m);
  const SchrodingerSystem s = assemble_schrodinger(a, mass, inverse_design_potential(a, mass, f));
  const SpectralResult c = evaluate_candidate(s, f);
  CHECK(c.relative_sigma() <= 1e-14);
  const SpectralResult r = kernel_vector(s);
  CHECK(r.relative_sigma() <= 1e-9);
  // same direction as f up to a complex scalar
  const ComplexField g = normalize_and_fix_phase(f, mass);
  CHECK((r.f - g).cwiseAbs().maxCoeff() <= 1e-8);
  const DenseSpectrum d = dense_oracle(s);
  CHECK(sigma_agrees(r.sigma, d.sigma_min, r.operator_norm));
}

TEST_CASE("eigenpair_nearest: second Neumann mode of the interval") {
  const double length = 2.0;
  std::vector<double> hs, errors;
  for (int n = 21; n <= 161; n = 2 * n - 1) {
    const Mesh m = gen_interval(n, length);
    const double h = length / (n - 1);
    const SchrodingerSystem s = assemble_schrodinger(m, Potential::Zero(n));
    const double exact = kPi * kPi / (length * length);
    const SpectralResult r = eigenpair_nearest(s, Complex(exact + 0.1, 0.0));
    CHECK(r.converged);
    const double discrete = (2.0 - 2.0 * std::cos(kPi * h / length)) / (h * h);
    CHECK(r.eigenvalue.real() == doctest::Approx(discrete).epsilon(1e-10));
    CHECK(std::abs(r.eigenvalue.imag()) <= 1e-12);
    hs.push_back(h);
    errors.push_back(std::abs(r.eigenvalue.real() - exact));
    // the mode is cos(pi x / L) up to normalization and sign
    const double sign = r.f[0].real() > 0 ? 1.0 : -1.0;
    double worst = 0.0;
    const double scale = std::abs(r.f[0]);
    for (int i = 0; i < n; ++i)
      worst = std::max(worst, std::abs(sign * r.f[i].real() / scale - std::cos(kPi * m.position(i).x() / length)));
    CHECK(worst <= 1e-7);
  }
  for (double o : observed_orders(hs, errors)) CHECK(o == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("phase normalization") {
  MassMatrix mass;
  mass.diagonal = Eigen::VectorXd::Constant(3, 0.5);
  ComplexField f(3);
  f << Complex(0.0, 2.0), Complex(-2.0, 0.0), Complex(1.0, 1.0);
  const ComplexField g = normalize_and_fix_phase(f, mass);
  CHECK(mass_norm2(g, mass) == doctest::Approx(1.0).epsilon(1e-15));
  // tie between entries 0 and 1: the lowest index is made real positive
  CHECK(g[0].imag() == 0.0);
  CHECK(g[0].real() > 0.0);
  CHECK_THROWS_AS(normalize_and_fix_phase(ComplexField::Zero(3), mass), InvalidArgument);
}

TEST_CASE("dense oracle refuses large systems") {
  const Mesh m = gen_flat_torus(50, 41, 1.0, 1.0);
  const SchrodingerSystem s = assemble_schrodinger(m, Potential::Zero(m.vertex_count()));
  CHECK_THROWS_AS(dense_oracle(s), InvalidArgument);
}

TEST_CASE("complex shifts: singular values of B - shift I") {
  const Mesh m = gen_circle(30, 1.0);
  const SchrodingerSystem s = assemble_schrodinger(m, Potential::Zero(30));
  // eigenvalues (2 - 2 cos(k h)) / h^2; a shift off the real axis by 0.5i
  // has distance exactly 0.5 to the nearest eigenvalue
  const double h = 2.0 * kPi / 30;
  const double lambda1 = (2.0 - 2.0 * std::cos(h)) / (h * h);
  const SpectralResult r = eigenpair_nearest(s, Complex(lambda1, 0.5));
  CHECK(r.sigma == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(r.eigenvalue.real() == doctest::Approx(lambda1).epsilon(1e-10));
}
