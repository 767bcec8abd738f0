#include "schrolab/theorems.hpp"

#include "schrolab/errors.hpp"
#include "schrolab/format.hpp"

#include <algorithm>
#include <cmath>

namespace schrolab {

Potential inverse_design_potential(const StiffnessMatrix& stiffness, const MassMatrix& mass, const ComplexField& f) {
  if (f.size() != stiffness.size() || mass.size() != stiffness.size())
    throw InvalidArgument("inverse_design_potential: size mismatch");
  const ComplexField af = stiffness.matrix.cast<Complex>() * f;
  Potential v(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (!(std::abs(f[i]) > 0.0)) throw DomainError("inverse design needs a nowhere-vanishing field", static_cast<std::size_t>(i));
    v[i] = -af[i] / (mass.diagonal[i] * f[i]);
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag()))
      throw DomainError("inverse-designed potential is not finite", static_cast<std::size_t>(i));
  }
  return v;
}

ImagPotentialSign imag_potential_sign(const Potential& v, double roundoff) {
  ImagPotentialSign s;
  if (v.size() == 0) return s;
  const double zero = roundoff * v.cwiseAbs().maxCoeff();
  s.min_imag = v.imag().minCoeff();
  s.max_imag = v.imag().maxCoeff();
  s.nontrivial = std::max(std::abs(s.min_imag), std::abs(s.max_imag)) > zero;
  s.single_signed = s.min_imag >= -zero || s.max_imag <= zero;
  return s;
}

TheoremVerdict theorem1_check(const Mesh& mesh, const SchrodingerSystem& system, const SpectralResult& kernel,
                              const Tolerances& tol) {
  if (kernel.f.size() != mesh.vertex_count() || system.size() != mesh.vertex_count())
    throw InvalidArgument("theorem1_check: size mismatch");
  TheoremVerdict v;
  v.theorem = 1;
  const ImagPotentialSign sign = imag_potential_sign(system.potential, tol.roundoff);
  v.metrics = {{"min_imag_potential", sign.min_imag},
               {"max_imag_potential", sign.max_imag},
               {"sigma", kernel.sigma},
               {"relative_sigma", kernel.relative_sigma()}};
  if (!sign.nontrivial) v.diagnostics.push_back("Im V vanishes identically");
  if (sign.nontrivial && !sign.single_signed) v.diagnostics.push_back("Im V changes sign");
  v.hypotheses_satisfied = sign.nontrivial && sign.single_signed;
  if (!v.hypotheses_satisfied) return v;

  if (kernel.relative_sigma() > tol.spectral) {
    v.conclusion_verified = true;
    v.witness_value = kernel.relative_sigma();
    v.diagnostics.push_back("no kernel element: sigma / |B| = " + format_sci(kernel.relative_sigma()) +
                            " exceeds " + format_sci(tol.spectral));
    return v;
  }

  const ComplexField& f = kernel.f;
  const double fmax = f.cwiseAbs().maxCoeff();
  const double zero = tol.roundoff * system.potential.cwiseAbs().maxCoeff();
  double integral = 0.0;
  double ratio = INFINITY;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double im = system.potential[i].imag();
    integral += im * std::norm(f[i]) * system.mass.diagonal[i];
    if (std::abs(im) > zero && std::abs(f[i]) / fmax < ratio) {
      ratio = std::abs(f[i]) / fmax;
      v.witness_vertex = static_cast<int>(i);
    }
  }
  const double scale = identity_scale(system.stiffness, f);
  v.witness_value = ratio;
  v.metrics.emplace_back("imag_weighted_integral", integral);
  v.metrics.emplace_back("identity_scale", scale);
  v.metrics.emplace_back("min_modulus_ratio_on_support", ratio);
  const bool balanced = std::abs(integral) <= tol.spectral * scale;
  const bool vanishes = ratio <= tol.vanishing;
  if (!balanced) v.diagnostics.push_back("sum Im(V)|f|^2 M is not zero");
  if (!vanishes) v.diagnostics.push_back("kernel element does not vanish on supp(Im V)");
  v.conclusion_verified = balanced && vanishes;
  return v;
}

std::pair<TheoremVerdict, PhaseReport> theorem2_check(const Mesh& mesh, const SchrodingerSystem& system,
                                                      const ComplexField& f, const Tolerances& tol) {
  if (f.size() != mesh.vertex_count() || system.size() != mesh.vertex_count())
    throw InvalidArgument("theorem2_check: size mismatch");
  TheoremVerdict v;
  v.theorem = 2;
  PhaseReport phase;

  const double max_imag = system.potential.imag().cwiseAbs().maxCoeff();
  const bool real_potential = max_imag <= tol.roundoff * system.potential.cwiseAbs().maxCoeff();
  const double fmin = f.cwiseAbs().minCoeff(), fmax = f.cwiseAbs().maxCoeff();
  const bool nonvanishing = fmin > 0.0;
  v.metrics = {{"max_imag_potential", max_imag}, {"min_modulus_ratio", fmax > 0.0 ? fmin / fmax : 0.0}};
  if (!real_potential) v.diagnostics.push_back("V is not real");
  if (!nonvanishing) v.diagnostics.push_back("f vanishes somewhere");

  bool in_kernel = false;
  if (fmax > 0.0) {
    const SpectralResult r = evaluate_candidate(system, f);
    in_kernel = r.relative_sigma() <= tol.spectral;
    v.metrics.emplace_back("relative_sigma", r.relative_sigma());
    if (!in_kernel) v.diagnostics.push_back("f is not in the kernel");
  }

  bool log_exists = false;
  if (nonvanishing) {
    try {
      phase = phase_report(mesh, f, tol.branch_margin);
      log_exists = phase.global_log_exists;
      if (!log_exists && phase.obstruction) {
        v.witness_cycle = phase.obstruction->cycle.vertices;
        v.witness_winding = phase.obstruction->winding;
        v.diagnostics.push_back("no global logarithm: winding " + std::to_string(phase.obstruction->winding) +
                                (phase.obstruction->generator ? " around a generator cycle" : " around a contractible cycle"));
      }
    } catch (const ResolutionError& e) {
      v.diagnostics.push_back(e.what());
    }
  }
  v.hypotheses_satisfied = real_potential && nonvanishing && in_kernel && log_exists;

  if (!phase.component_range.empty()) {
    const double worst = *std::max_element(phase.component_range.begin(), phase.component_range.end());
    const double scale = identity_scale(system.stiffness, f);
    v.witness_value = worst;
    v.metrics.emplace_back("max_component_phase_range", worst);
    v.metrics.emplace_back("global_phase_range", phase.global_range);
    v.metrics.emplace_back("phase_energy", phase.phase_energy);
    v.metrics.emplace_back("identity_scale", scale);
    v.metrics.emplace_back("components", static_cast<double>(phase.component_range.size()));
    if (v.hypotheses_satisfied) {
      v.conclusion_verified = worst <= tol.phase && phase.phase_energy <= tol.energy * scale;
      if (v.conclusion_verified) {
        v.diagnostics.push_back(phase.component_range.size() == 1
                                    ? "phase globally constant (connected mesh)"
                                    : "phase locally constant on " + std::to_string(phase.component_range.size()) +
                                          " components");
      } else {
        v.diagnostics.push_back("phase is not locally constant");
      }
    }
  }
  return {v, phase};
}

CircleCounterexample counterexample_circle(int n, const Tolerances& tol) {
  if (n < 12) throw InvalidArgument("counterexample_circle: need n >= 12");
  CircleCounterexample b{gen_circle(n, 1.0), {}, {}, {}, {}, {}, {}};
  // Unit radius: the intrinsic coordinate is the angle.
  b.f.resize(n);
  for (int v = 0; v < n; ++v) b.f[v] = std::polar(1.0, b.mesh.position(v).x());
  StiffnessMatrix a = assemble_stiffness(b.mesh);
  MassMatrix m = assemble_mass(b.mesh);
  b.potential = inverse_design_potential(a, m, b.f);
  b.system = assemble_schrodinger(std::move(a), std::move(m), b.potential);
  b.phase = phase_report(b.mesh, b.f, tol.branch_margin);
  b.identity = pointwise_identity_residual(b.mesh, b.system, b.f);
  b.theorem2 = theorem2_check(b.mesh, b.system, b.f, tol).first;
  b.max_imag_potential = b.potential.imag().cwiseAbs().maxCoeff();
  b.max_potential_deviation = (b.potential.array() + 1.0).abs().maxCoeff();
  b.kernel_residual = evaluate_candidate(b.system, b.f).relative_sigma();
  return b;
}

std::vector<double> observed_orders(const std::vector<double>& h, const std::vector<double>& errors) {
  if (h.size() != errors.size()) throw InvalidArgument("observed_orders: size mismatch");
  std::vector<double> orders;
  for (std::size_t k = 0; k + 1 < h.size(); ++k) orders.push_back(std::log(errors[k] / errors[k + 1]) / std::log(h[k] / h[k + 1]));
  return orders;
}

}  // namespace schrolab
