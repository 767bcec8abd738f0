#include "schrolab/experiments.hpp"

#include "schrolab/errors.hpp"
#include "schrolab/fields.hpp"
#include "schrolab/format.hpp"
#include "schrolab/identity.hpp"
#include "schrolab/phase.hpp"
#include "schrolab/spectral.hpp"
#include "schrolab/theorems.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace schrolab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Dense oracle comparisons are run only on small systems.
constexpr int kDenseCompareLimit = 400;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t k) {
  // splitmix64 finalizer over (seed, k)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int as_count(double x, const char* what) {
  if (!(x >= 1.0) || x != std::floor(x) || x > 1e9) throw ConfigError(std::string("mesh params: ") + what + " must be a positive integer");
  return static_cast<int>(x);
}

Mesh base_mesh(const MeshSpec& s) {
  const auto& p = s.params;
  const std::string& g = s.generator;
  static const std::map<std::string, std::size_t> arity = {{"circle", 2}, {"interval", 2}, {"disk", 2}, {"annulus", 3},
                                                           {"torus", 4},  {"strip", 4},    {"two-disks", 3}};
  if (const auto it = arity.find(g); it != arity.end() && p.size() != it->second)
    throw ConfigError("mesh generator '" + g + "' takes " + std::to_string(it->second) + " parameters");
  if (g == "circle") return gen_circle(as_count(p[0], "n"), p[1]);
  if (g == "interval") return gen_interval(as_count(p[0], "n"), p[1]);
  if (g == "disk") return gen_disk(as_count(p[0], "rings"), p[1]);
  if (g == "annulus") return gen_annulus(p[0], p[1], as_count(p[2], "rings"));
  if (g == "torus") return gen_flat_torus(as_count(p[0], "nx"), as_count(p[1], "ny"), p[2], p[3]);
  if (g == "strip") return gen_strip(as_count(p[0], "n_long"), as_count(p[1], "n_wide"), p[2], p[3]);
  if (g == "two-disks") {
    const Mesh d = gen_disk(as_count(p[0], "rings"), p[1]);
    return disjoint_union(d, d, Eigen::Vector2d(2.0 * p[1] + p[2], 0.0));
  }
  if (g == "file") return load_mesh(s.path);
  throw ConfigError("mesh generator '" + g + "' does not name a single mesh");
}

std::vector<std::pair<std::string, Mesh>> standard_meshes() {
  return {{"circle", gen_circle(48, 1.0)},
          {"interval", gen_interval(33, 2.0)},
          {"disk", gen_disk(4, 1.0)},
          {"annulus", gen_annulus(0.5, 1.0, 3)},
          {"torus", gen_flat_torus(8, 6, 1.0, 1.5)},
          {"strip", gen_strip(21, 5, 4.0, 1.0)}};
}

// exp(0.3 u + i (0.7 v + 0.2 w)) with u, v, w = x, y, x^2 on open axes and
// sin, cos, cos of the angle on periodic axes.
ComplexField smooth_field(const Mesh& mesh) {
  const Eigen::Vector2d per = mesh.period();
  return sample(mesh, [&](const Eigen::Vector2d& p) {
    double u = p.x(), v = p.y(), w = p.x() * p.x();
    if (per.x() > 0.0) {
      u = std::sin(kTwoPi * p.x() / per.x());
      w = std::cos(kTwoPi * p.x() / per.x());
    }
    if (per.y() > 0.0) v = std::cos(kTwoPi * p.y() / per.y());
    return std::exp(Complex(0.3 * u, 0.7 * v + 0.2 * w));
  });
}

ComplexField load_sized(const std::string& path, int n, const char* what) {
  ComplexField f = load_field(path);
  if (f.size() != n)
    throw ConfigError(std::string(what) + " file '" + path + "' has " + std::to_string(f.size()) + " values, mesh has " +
                      std::to_string(n) + " vertices");
  return f;
}

ComplexField prescribed_field(const FieldSpec& s, const Mesh& mesh, std::uint64_t seed) {
  if (s.kind == "random") return random_field(mesh.vertex_count(), seed);
  if (s.kind == "plane-wave")
    return sample(mesh, [&](const Eigen::Vector2d& p) { return std::polar(1.0, s.wave[0] * p.x() + s.wave[1] * p.y()); });
  if (s.kind == "smooth") return smooth_field(mesh);
  if (s.kind == "gaussian") {
    return sample(mesh, [&](const Eigen::Vector2d& p) {
      const double r2 = (p - Eigen::Vector2d(s.center[0], s.center[1])).squaredNorm();
      return std::exp(Complex(-r2 / (2.0 * s.width * s.width), s.chirp * r2));
    });
  }
  if (s.kind == "file") return load_sized(s.path, mesh.vertex_count(), "field");
  throw ConfigError("field kind '" + s.kind + "' is not a prescribed field");
}

Potential configured_potential(const PotentialSpec& s, const Mesh& mesh) {
  const int n = mesh.vertex_count();
  if (s.kind == "constant") return Potential::Constant(n, s.value);
  if (s.kind == "bump") {
    const Eigen::Vector2d c(s.center[0], s.center[1]);
    return sample(mesh, [&](const Eigen::Vector2d& p) {
      const double t = (p - c).squaredNorm() / (s.radius * s.radius);
      return t < 1.0 ? s.value * (1.0 - t) * (1.0 - t) : Complex(0.0);
    });
  }
  if (s.kind == "file") return load_sized(s.path, n, "potential");
  throw ConfigError("potential kind '" + s.kind + "' needs a field");
}

struct Instance {
  Mesh mesh;
  ComplexField f;
  SchrodingerSystem system;
  std::vector<std::pair<std::string, double>> info;
};

Instance build_instance(const ExperimentConfig& c, int level, std::uint64_t seed) {
  Mesh mesh = build_mesh(c.mesh, level);
  StiffnessMatrix a = assemble_stiffness(mesh);
  MassMatrix m = assemble_mass(mesh);
  Instance inst{std::move(mesh), {}, {}, {}};
  if (c.field.kind == "ground-state") {
    if (c.potential.kind == "inverse-design-from-field")
      throw ConfigError("field kind ground-state needs a potential that does not depend on the field");
    const Potential v0 = configured_potential(c.potential, inst.mesh);
    const SchrodingerSystem base = assemble_schrodinger(a, m, v0);
    const SpectralResult r = eigenpair_nearest(base, Complex(c.field.shift, 0.0));
    inst.info = {{"eigenvalue", r.eigenvalue.real()}, {"eigenvalue_imag", r.eigenvalue.imag()},
                 {"shifted_relative_sigma", r.relative_sigma()}};
    // Shift V by the computed eigenvalue: the eigenvector becomes a kernel element.
    Potential v = v0;
    v.array() -= r.eigenvalue.real();
    inst.f = r.f;
    inst.system = assemble_schrodinger(std::move(a), std::move(m), std::move(v));
    return inst;
  }
  inst.f = prescribed_field(c.field, inst.mesh, seed);
  Potential v = c.potential.kind == "inverse-design-from-field" ? inverse_design_potential(a, m, inst.f)
                                                                 : configured_potential(c.potential, inst.mesh);
  inst.system = assemble_schrodinger(std::move(a), std::move(m), std::move(v));
  return inst;
}

std::string cell(double x) { return format_exact(x); }
std::string cell(long long x) { return std::to_string(x); }

bool order_ok(double o, const Tolerances& t) { return std::abs(o - t.order) <= t.order_band; }

std::string order_failure(const std::string& what, double o, const Tolerances& t) {
  return what + " observed order " + format_sci(o, 3) + " outside " + format_exact(t.order) + " +/- " +
         format_exact(t.order_band);
}

// Runs `body` for one case, timing it and attaching case context to errors.
void run_case(RunReport& report, const std::string& label, const std::function<void(CaseResult&)>& body) {
  CaseResult c;
  c.label = label;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw CaseError(label, e.what());
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.cases.push_back(std::move(c));
}

void identity_convergence(const ExperimentConfig& cfg, RunReport& rep) {
  const Tolerances& t = cfg.tolerances;
  rep.series.header = {"level", "vertices", "h", "residual_mass_norm", "residual_max", "exact_balance", "balance_scale",
                       "observed_order"};
  std::vector<double> hs, errs;
  for (int level = 0; level < cfg.mesh.levels; ++level) {
    run_case(rep, "level " + std::to_string(level), [&](CaseResult& c) {
      const Instance inst = build_instance(cfg, level, mix_seed(cfg.seed, 0));
      const IdentityReport r = pointwise_identity_residual(inst.mesh, inst.system, inst.f);
      const double scale = identity_scale(inst.system.stiffness, inst.f);
      const double balance = std::abs(r.exact_balance);
      c.add_count("vertices", inst.mesh.vertex_count());
      c.add("h", r.h, ToleranceClass::reported);
      c.add("residual_mass_norm", r.residual_mass_norm, ToleranceClass::discretization);
      c.add("residual_max", r.residual_max, ToleranceClass::discretization);
      c.add("exact_balance", balance, ToleranceClass::balance);
      c.add("balance_scale", scale, ToleranceClass::reported);
      if (balance > t.balance * scale) c.failures.push_back("exact balance exceeds balance tolerance");
      if (r.residual_mass_norm <= t.roundoff * scale)
        c.notes.push_back("residual is at roundoff level: the discrete identity is exact on this mesh");
      hs.push_back(r.h);
      errs.push_back(r.residual_mass_norm);
      rep.series.rows.push_back({cell(static_cast<long long>(level)), cell(static_cast<long long>(inst.mesh.vertex_count())),
                                 cell(r.h), cell(r.residual_mass_norm), cell(r.residual_max), cell(balance), cell(scale), ""});
    });
  }
  const auto orders = observed_orders(hs, errs);
  for (std::size_t k = 0; k < orders.size(); ++k) {
    CaseResult& c = rep.cases[k + 1];
    c.add("observed_order", orders[k], ToleranceClass::order);
    rep.series.rows[k + 1].back() = cell(orders[k]);
    if (!order_ok(orders[k], t)) c.failures.push_back(order_failure("residual", orders[k], t));
  }
  if (orders.empty()) rep.cases.front().notes.push_back("single level: no convergence order assessed");
}

void counterexample(const ExperimentConfig& cfg, RunReport& rep) {
  const Tolerances& t = cfg.tolerances;
  const int n0 = as_count(cfg.mesh.params[0], "n");
  rep.series.header = {"level", "n", "h", "max_potential_deviation", "observed_order", "max_imag_potential", "winding",
                       "kernel_residual", "residual_mass_norm"};
  std::vector<double> hs, devs;
  for (int level = 0; level < cfg.mesh.levels; ++level) {
    run_case(rep, "n " + std::to_string(n0 << level), [&](CaseResult& c) {
      const int n = n0 << level;
      const CircleCounterexample b = counterexample_circle(n, t);
      const double h = kTwoPi / n;
      const int winding = b.phase.windings.empty() ? 0 : b.phase.windings.front();
      c.add_count("vertices", n);
      c.add("h", h, ToleranceClass::reported);
      c.add_count("winding", winding);
      c.add("max_imag_potential", b.max_imag_potential, ToleranceClass::roundoff);
      c.add("max_potential_deviation", b.max_potential_deviation, ToleranceClass::discretization);
      c.add("kernel_residual", b.kernel_residual, ToleranceClass::spectral);
      c.add("phase_range", b.phase.component_range.front(), ToleranceClass::reported);
      c.add("identity_residual_mass_norm", b.identity.residual_mass_norm, ToleranceClass::reported);
      c.add_flag("global_log_exists", b.phase.global_log_exists);
      c.add_flag("theorem2_hypotheses_satisfied", b.theorem2.hypotheses_satisfied);
      c.add_count("theorem2_witness_winding", b.theorem2.witness_winding);
      for (const auto& d : b.theorem2.diagnostics) c.notes.push_back("theorem2: " + d);
      if (winding != 1) c.failures.push_back("winding number is not 1");
      // The absolute Im V bound is stated at the configured resolution;
      // finer levels report it (roundoff grows like 1/h^2).
      if (level == 0 && b.max_imag_potential > t.roundoff) c.failures.push_back("max |Im V| exceeds roundoff tolerance");
      if (b.max_potential_deviation > t.discretization) c.failures.push_back("max |V + 1| exceeds discretization tolerance");
      if (b.kernel_residual > t.spectral) c.failures.push_back("f is not in the kernel");
      if (b.theorem2.hypotheses_satisfied || b.theorem2.witness_winding != 1)
        c.failures.push_back("theorem2 check did not report the winding obstruction");
      hs.push_back(h);
      devs.push_back(b.max_potential_deviation);
      rep.series.rows.push_back({cell(static_cast<long long>(level)), cell(static_cast<long long>(n)), cell(h),
                                 cell(b.max_potential_deviation), "", cell(b.max_imag_potential),
                                 cell(static_cast<long long>(winding)), cell(b.kernel_residual),
                                 cell(b.identity.residual_mass_norm)});
    });
  }
  const auto orders = observed_orders(hs, devs);
  for (std::size_t k = 0; k < orders.size(); ++k) {
    rep.cases[k + 1].add("observed_order", orders[k], ToleranceClass::order);
    rep.series.rows[k + 1][4] = cell(orders[k]);
    if (!order_ok(orders[k], t)) rep.cases[k + 1].failures.push_back(order_failure("max |V + 1|", orders[k], t));
  }
}

ToleranceClass metric_class(const std::string& name) {
  static const std::map<std::string, ToleranceClass> classes = {
      {"max_imag_potential", ToleranceClass::roundoff},
      {"relative_sigma", ToleranceClass::spectral},
      {"max_component_phase_range", ToleranceClass::phase},
      {"phase_energy", ToleranceClass::energy},
      {"components", ToleranceClass::exact},
      {"imag_weighted_integral", ToleranceClass::spectral},
      {"min_modulus_ratio_on_support", ToleranceClass::vanishing},
  };
  const auto it = classes.find(name);
  return it == classes.end() ? ToleranceClass::reported : it->second;
}

void add_verdict(CaseResult& c, const TheoremVerdict& v) {
  c.add_flag("hypotheses_satisfied", v.hypotheses_satisfied);
  c.add_flag("conclusion_verified", v.conclusion_verified);
  for (const auto& [name, value] : v.metrics) c.add(name, value, metric_class(name));
  if (v.witness_vertex >= 0) c.add_count("witness_vertex", v.witness_vertex);
  if (!v.witness_cycle.empty()) {
    c.add_count("witness_winding", v.witness_winding);
    c.add_count("witness_cycle_length", static_cast<long long>(v.witness_cycle.size()) - 1);
  }
  for (const auto& d : v.diagnostics) c.notes.push_back(d);
  if (!v.hypotheses_satisfied) c.notes.push_back("hypotheses not satisfied: conclusion not assessed");
  if (v.hypotheses_satisfied && !v.conclusion_verified) c.failures.push_back("conclusion fails under satisfied hypotheses");
}

void theorem1(const ExperimentConfig& cfg, RunReport& rep) {
  const Tolerances& t = cfg.tolerances;
  const bool designed = cfg.potential.kind == "inverse-design-from-field";
  rep.series.header = {"case", "level", "vertices", "min_imag_potential", "max_imag_potential", "relative_sigma",
                       "imag_weighted_integral", "hypotheses", "conclusion"};
  for (int k = 0; k < cfg.cases; ++k) {
    for (int level = 0; level < cfg.mesh.levels; ++level) {
      run_case(rep, "case " + std::to_string(k) + " level " + std::to_string(level), [&](CaseResult& c) {
        const Instance inst = build_instance(cfg, level, mix_seed(cfg.seed, static_cast<std::uint64_t>(k)));
        const SchrodingerSystem& s = inst.system;
        const ImagPotentialSign sign = imag_potential_sign(s.potential, t.roundoff);
        const SpectralResult kernel = designed ? evaluate_candidate(s, inst.f) : kernel_vector(s);
        const TheoremVerdict v = theorem1_check(inst.mesh, s, kernel, t);
        double integral = 0.0;
        for (Eigen::Index i = 0; i < kernel.f.size(); ++i)
          integral += s.potential[i].imag() * std::norm(kernel.f[i]) * s.mass.diagonal[i];
        const double scale = identity_scale(s.stiffness, kernel.f);
        c.add_count("vertices", inst.mesh.vertex_count());
        c.add_flag("imag_potential_nontrivial", sign.nontrivial);
        c.add_flag("imag_potential_single_signed", sign.single_signed);
        c.add("kernel_imag_weighted_integral", integral, designed ? ToleranceClass::roundoff : ToleranceClass::reported);
        c.add("kernel_identity_scale", scale, ToleranceClass::reported);
        c.add_flag("kernel_converged", kernel.converged);
        if (inst.mesh.vertex_count() <= kDenseCompareLimit) {
          const DenseSpectrum d = dense_oracle(s);
          c.add("dense_sigma_min", d.sigma_min, ToleranceClass::reported);
          c.add("dense_relative_sigma", d.sigma_max > 0.0 ? d.sigma_min / d.sigma_max : 0.0, ToleranceClass::spectral);
        }
        add_verdict(c, v);
        if (designed) {
          if (std::abs(integral) > t.roundoff * scale)
            c.failures.push_back("sum Im(V)|f|^2 M of an exact kernel pair exceeds roundoff tolerance");
          if (sign.nontrivial && sign.single_signed)
            c.failures.push_back("exact kernel pair with single-signed nontrivial Im V");
        }
        rep.series.rows.push_back({cell(static_cast<long long>(k)), cell(static_cast<long long>(level)),
                                   cell(static_cast<long long>(inst.mesh.vertex_count())), cell(sign.min_imag),
                                   cell(sign.max_imag), cell(kernel.relative_sigma()), cell(integral),
                                   v.hypotheses_satisfied ? "1" : "0", v.conclusion_verified ? "1" : "0"});
      });
    }
  }
}

void theorem2(const ExperimentConfig& cfg, RunReport& rep) {
  const Tolerances& t = cfg.tolerances;
  rep.series.header = {"level", "vertices", "components", "max_component_phase_range", "phase_energy", "identity_scale",
                       "hypotheses", "conclusion"};
  for (int level = 0; level < cfg.mesh.levels; ++level) {
    run_case(rep, "level " + std::to_string(level), [&](CaseResult& c) {
      const Instance inst = build_instance(cfg, level, mix_seed(cfg.seed, 0));
      c.add_count("vertices", inst.mesh.vertex_count());
      for (const auto& [name, value] : inst.info)
        c.add(name, value, ToleranceClass::reported);
      const auto [v, phase] = theorem2_check(inst.mesh, inst.system, inst.f, t);
      for (std::size_t k = 0; k < phase.windings.size(); ++k) c.add_count("winding_" + std::to_string(k), phase.windings[k]);
      add_verdict(c, v);
      // Phase at the lowest vertex of each component.
      const auto labels = component_labels(inst.mesh);
      std::vector<bool> done;
      for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto comp = static_cast<std::size_t>(labels[i]);
        if (comp >= done.size()) done.resize(comp + 1, false);
        if (done[comp]) continue;
        done[comp] = true;
        c.add("component_phase_" + std::to_string(comp), std::arg(inst.f[static_cast<Eigen::Index>(i)]),
              ToleranceClass::reported);
      }
      double worst = 0.0;
      for (double r : phase.component_range) worst = std::max(worst, r);
      rep.series.rows.push_back({cell(static_cast<long long>(level)), cell(static_cast<long long>(inst.mesh.vertex_count())),
                                 cell(static_cast<long long>(phase.component_range.size())), cell(worst),
                                 cell(phase.phase_energy), cell(identity_scale(inst.system.stiffness, inst.f)),
                                 v.hypotheses_satisfied ? "1" : "0", v.conclusion_verified ? "1" : "0"});
    });
  }
}

int nearest_vertex(const Mesh& mesh, const std::array<double, 2>& point) {
  const Eigen::Vector2d p = mesh.wrap(Eigen::Vector2d(point[0], point[1]));
  int best = 0;
  double best_d = INFINITY;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const double d = (mesh.position(v) - p).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = v;
    }
  }
  return best;
}

void cutoff_limit(const ExperimentConfig& cfg, RunReport& rep) {
  const Tolerances& t = cfg.tolerances;
  rep.series.header = {"level", "plateau", "ramp", "gradient_bound", "integral", "abs_integral", "gap"};
  for (int level = 0; level < cfg.mesh.levels; ++level) {
    run_case(rep, "level " + std::to_string(level), [&](CaseResult& c) {
      const Instance inst = build_instance(cfg, level, mix_seed(cfg.seed, 0));
      const int center = nearest_vertex(inst.mesh, cfg.cutoff.center);
      std::vector<std::pair<double, double>> radii;
      for (double p : cfg.cutoff.plateaus) radii.emplace_back(p, p + cfg.cutoff.ramp_width);
      const auto family = cutoff_family(inst.mesh, center, radii);
      const CutoffSeries s = cutoff_limit_experiment(inst.mesh, inst.system, inst.f, family);
      c.add_count("vertices", inst.mesh.vertex_count());
      c.add_count("center_vertex", center);
      c.add_count("cutoffs", static_cast<long long>(s.samples.size()));
      c.add("limit", s.limit, ToleranceClass::roundoff);
      c.add("identity_scale", s.scale, ToleranceClass::reported);
      c.add("mass_norm_squared", s.mass_norm_squared, ToleranceClass::reported);
      c.add("gradient_energy", s.gradient_energy, ToleranceClass::reported);
      c.notes.push_back("a truncated strip stands in for a non-compact manifold; admissibility proxies are reported only");
      double max_gap = 0.0;
      bool monotone = true;
      for (std::size_t k = 0; k < s.samples.size(); ++k) {
        const CutoffSample& x = s.samples[k];
        max_gap = std::max(max_gap, x.gap);
        if (k > 0 && std::abs(x.integral) > std::abs(s.samples[k - 1].integral) + t.roundoff * s.scale) monotone = false;
        rep.series.rows.push_back({cell(static_cast<long long>(level)), cell(x.plateau), cell(x.ramp),
                                   cell(x.gradient_bound), cell(x.integral), cell(std::abs(x.integral)), cell(x.gap)});
      }
      const double final_term = s.samples.empty() ? 0.0 : std::abs(s.samples.back().integral);
      c.add("max_weak_identity_gap", max_gap, ToleranceClass::roundoff);
      c.add("final_abs_integral", final_term, ToleranceClass::energy);
      c.add_flag("monotone", monotone);
      if (max_gap > t.roundoff * s.scale) c.failures.push_back("weak identity gap exceeds roundoff tolerance");
      if (std::abs(s.limit) > t.roundoff * s.scale) c.failures.push_back("limit integral is not zero to roundoff");
      if (!monotone) c.failures.push_back("|integral| is not monotone under widening cutoffs");
      if (final_term > t.energy * s.scale) c.failures.push_back("final cutoff integral exceeds energy tolerance");
    });
  }
}

void balance_fuzz(const ExperimentConfig& cfg, RunReport& rep) {
  const Tolerances& t = cfg.tolerances;
  std::vector<std::pair<std::string, Mesh>> meshes;
  if (cfg.mesh.generator == "all") {
    meshes = standard_meshes();
  } else {
    for (int level = 0; level < cfg.mesh.levels; ++level)
      meshes.emplace_back(cfg.mesh.generator + " level " + std::to_string(level), build_mesh(cfg.mesh, level));
  }
  std::vector<StiffnessMatrix> stiffness;
  for (const auto& [name, mesh] : meshes) stiffness.push_back(assemble_stiffness(mesh));
  rep.series.header = {"case", "mesh", "vertices", "exact_balance", "scale", "ratio"};
  for (std::size_t m = 0; m < meshes.size(); ++m) {
    run_case(rep, meshes[m].first, [&](CaseResult& c) {
      int samples = 0, violations = 0;
      double worst = 0.0;
      for (int k = static_cast<int>(m); k < cfg.cases; k += static_cast<int>(meshes.size())) {
        const ComplexField f = random_field(meshes[m].second.vertex_count(), mix_seed(cfg.seed, static_cast<std::uint64_t>(k)));
        const double balance = std::abs(exact_balance(stiffness[m], f));
        const double scale = identity_scale(stiffness[m], f);
        const double ratio = balance / scale;
        ++samples;
        worst = std::max(worst, ratio);
        if (balance > t.balance * scale) ++violations;
        rep.series.rows.push_back({cell(static_cast<long long>(k)), std::to_string(m),
                                   cell(static_cast<long long>(meshes[m].second.vertex_count())), cell(balance), cell(scale),
                                   cell(ratio)});
      }
      c.add_count("vertices", meshes[m].second.vertex_count());
      c.add_count("samples", samples);
      c.add("max_relative_balance", worst, ToleranceClass::balance);
      c.add_count("violations", violations);
      if (violations > 0) c.failures.push_back(std::to_string(violations) + " fields exceed the balance tolerance");
    });
  }
  std::sort(rep.series.rows.begin(), rep.series.rows.end(),
            [](const auto& a, const auto& b) { return std::stoll(a[0]) < std::stoll(b[0]); });
}

std::string environment_stamp() {
  std::string s = "schrolab 0.1.0; compiler ";
#if defined(__clang__)
  s += "clang " __clang_version__;
#elif defined(__GNUC__)
  s += "gcc " __VERSION__;
#else
  s += "unknown";
#endif
  s += "; eigen " + std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
       std::to_string(EIGEN_MINOR_VERSION);
  s += "; c++ " + std::to_string(__cplusplus);
#ifdef NDEBUG
  s += "; assertions off";
#else
  s += "; assertions on";
#endif
  return s;
}

}  // namespace

std::string class_label(ToleranceClass cls) {
  switch (cls) {
    case ToleranceClass::exact: return "exact";
    case ToleranceClass::roundoff: return "roundoff";
    case ToleranceClass::balance: return "balance";
    case ToleranceClass::discretization: return "discretization";
    case ToleranceClass::order: return "order";
    case ToleranceClass::spectral: return "spectral";
    case ToleranceClass::vanishing: return "vanishing";
    case ToleranceClass::phase: return "phase";
    case ToleranceClass::energy: return "energy";
    case ToleranceClass::reported: return "reported";
  }
  return "reported";
}

void CaseResult::add(const std::string& key, double value, ToleranceClass cls) { values.push_back({key, format_exact(value), cls}); }
void CaseResult::add_count(const std::string& key, long long value) {
  values.push_back({key, std::to_string(value), ToleranceClass::exact});
}
void CaseResult::add_flag(const std::string& key, bool value) {
  values.push_back({key, value ? "true" : "false", ToleranceClass::exact});
}

bool RunReport::passed() const {
  return std::all_of(cases.begin(), cases.end(), [](const CaseResult& c) { return c.passed(); });
}

Mesh build_mesh(const MeshSpec& spec, int level) {
  if (level < 0) throw InvalidArgument("build_mesh: negative level");
  Mesh m = base_mesh(spec);
  for (int k = 0; k < level; ++k) m = refine(m);
  return m;
}

RunReport execute(const ExperimentConfig& config) {
  RunReport rep;
  rep.config = config;
  rep.environment = environment_stamp();
  switch (config.experiment) {
    case ExperimentKind::identity_convergence: identity_convergence(config, rep); break;
    case ExperimentKind::theorem1: theorem1(config, rep); break;
    case ExperimentKind::theorem2: theorem2(config, rep); break;
    case ExperimentKind::counterexample: counterexample(config, rep); break;
    case ExperimentKind::cutoff_limit: cutoff_limit(config, rep); break;
    case ExperimentKind::balance_fuzz: balance_fuzz(config, rep); break;
  }
  return rep;
}

std::string render_report(const RunReport& report) {
  std::ostringstream out;
  const auto status = [](bool ok) { return ok ? "pass" : "fail"; };
  out << "schrolab report\n";
  out << "experiment = " << experiment_name(report.config.experiment) << "\n";
  out << "environment = " << report.environment << "\n";
  out << "\n== config ==\n" << serialize_config(report.config);
  int failed = 0;
  for (std::size_t i = 0; i < report.cases.size(); ++i) {
    const CaseResult& c = report.cases[i];
    if (!c.passed()) ++failed;
    out << "\n== case " << i << ": " << c.label << " ==\n";
    out << "status = " << status(c.passed()) << "\n";
    for (const auto& v : c.values) out << v.key << " = " << v.text << " [" << class_label(v.cls) << "]\n";
    for (const auto& n : c.notes) out << "note: " << n << "\n";
    for (const auto& f : c.failures) out << "failure: " << f << "\n";
  }
  out << "\n== summary ==\n";
  out << "cases = " << report.cases.size() << " [exact]\n";
  out << "failed_cases = " << failed << " [exact]\n";
  out << "status = " << status(report.passed()) << "\n";
  return out.str();
}

std::string render_csv(const Series& series) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) out += (k ? "," : "") + cells[k];
    out += "\n";
  };
  line(series.header);
  for (const auto& r : series.rows) line(r);
  return out;
}

std::string render_timings(const RunReport& report) {
  std::ostringstream out;
  double total = 0.0;
  for (std::size_t i = 0; i < report.cases.size(); ++i) {
    out << "case " << i << " (" << report.cases[i].label << ") seconds = " << format_sci(report.cases[i].seconds, 3) << "\n";
    total += report.cases[i].seconds;
  }
  out << "total seconds = " << format_sci(total, 3) << "\n";
  return out.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto '" + path + "': " + ec.message());
  }
}

RunReport run(const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  RunReport rep = execute(config);
  const std::string name = experiment_name(config.experiment);
  const fs::path dir(config.output.directory);
  fs::create_directories(dir);
  rep.report_path = (dir / (config.output.report.empty() ? name + ".report" : config.output.report)).string();
  rep.csv_path = (dir / (config.output.csv.empty() ? name + ".csv" : config.output.csv)).string();
  rep.timing_path = rep.report_path + ".timing";
  write_atomic(rep.report_path, render_report(rep));
  write_atomic(rep.csv_path, render_csv(rep.series));
  write_atomic(rep.timing_path, render_timings(rep));
  return rep;
}

bool report_passed(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open report '" + path + "'");
  std::string line, status;
  while (std::getline(in, line))
    if (line.rfind("status = ", 0) == 0) status = line.substr(9);
  if (status == "pass") return true;
  if (status == "fail") return false;
  throw ConfigError("'" + path + "' has no status line");
}

}  // namespace schrolab
