#include "schrolab/phase.hpp"

#include "schrolab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

namespace schrolab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool admits_zero(double a, double b) { return std::min(a, b) <= 0.0 && std::max(a, b) >= 0.0; }

void require_nonvanishing(const ComplexField& f) {
  for (Eigen::Index i = 0; i < f.size(); ++i)
    if (!(std::abs(f[i]) > 0.0)) throw DomainError("phase undefined where the field vanishes", static_cast<std::size_t>(i));
}

std::vector<int> path_to_root(const std::vector<int>& parent, int v) {
  std::vector<int> path{v};
  while (parent[static_cast<std::size_t>(v)] >= 0) {
    v = parent[static_cast<std::size_t>(v)];
    path.push_back(v);
  }
  return path;
}

// i -> ... -> lca -> ... -> j -> i along the tree plus the closing edge.
CycleLoop tree_cycle(const std::vector<int>& parent, int i, int j) {
  const auto up_i = path_to_root(parent, i);
  const auto up_j = path_to_root(parent, j);
  std::size_t a = up_i.size(), b = up_j.size();
  while (a > 0 && b > 0 && up_i[a - 1] == up_j[b - 1]) {
    --a;
    --b;
  }
  CycleLoop loop;
  for (std::size_t k = 0; k <= a && k < up_i.size(); ++k) loop.vertices.push_back(up_i[k]);
  for (std::size_t k = b; k-- > 0;) loop.vertices.push_back(up_j[k]);
  loop.vertices.push_back(i);
  return loop;
}

}  // namespace

double phase_increment(const ComplexField& f, int a, int b, double margin) {
  if (!(std::abs(f[a]) > 0.0)) throw DomainError("phase undefined where the field vanishes", static_cast<std::size_t>(a));
  if (!(std::abs(f[b]) > 0.0)) throw DomainError("phase undefined where the field vanishes", static_cast<std::size_t>(b));
  const double inc = std::arg(f[b] * std::conj(f[a]));
  if (std::abs(inc) >= kPi - margin)
    throw ResolutionError("phase jump of " + std::to_string(inc) + " rad on edge " + std::to_string(a) + "-" +
                          std::to_string(b) + " cannot be resolved; refine the mesh");
  return inc;
}

int winding_number(const Mesh& mesh, const ComplexField& f, const CycleLoop& cycle, double margin) {
  if (f.size() != mesh.vertex_count()) throw InvalidArgument("winding_number: field length mismatch");
  if (!cycle.closed()) throw InvalidArgument("winding_number: cycle is not closed");
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cycle.vertices.size(); ++k) {
    const int a = cycle.vertices[k], b = cycle.vertices[k + 1];
    if (mesh.find_edge(a, b) < 0) throw InvalidArgument("winding_number: consecutive cycle vertices share no edge");
    total += phase_increment(f, a, b, margin);
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

LogResult complex_log(const Mesh& mesh, const ComplexField& f, double margin) {
  if (f.size() != mesh.vertex_count()) throw InvalidArgument("complex_log: field length mismatch");
  require_nonvanishing(f);
  const auto adj = mesh.adjacency();
  const std::size_t n = adj.size();
  std::vector<int> parent(n, -1);
  std::vector<bool> seen(n, false);
  Eigen::VectorXd u(static_cast<Eigen::Index>(n));
  for (std::size_t root = 0; root < n; ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    u[static_cast<Eigen::Index>(root)] = std::arg(f[static_cast<Eigen::Index>(root)]);
    std::queue<int> queue;
    queue.push(static_cast<int>(root));
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop();
      for (int w : adj[static_cast<std::size_t>(v)]) {
        if (seen[static_cast<std::size_t>(w)]) continue;
        seen[static_cast<std::size_t>(w)] = true;
        parent[static_cast<std::size_t>(w)] = v;
        u[w] = u[v] + phase_increment(f, v, w, margin);
        queue.push(w);
      }
    }
  }

  LogResult r;
  r.phi.resize(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) r.phi[i] = Complex(std::log(std::abs(f[i])), u[i]);

  for (const auto& loop : mesh.generator_cycles()) {
    const int w = winding_number(mesh, f, loop, margin);
    if (w != 0) {
      r.obstruction = Obstruction{loop, w, true};
      return r;
    }
  }
  for (const auto& [i, j] : mesh.edges()) {
    if (parent[static_cast<std::size_t>(j)] == i || parent[static_cast<std::size_t>(i)] == j) continue;
    const double mismatch = u[j] - u[i] - phase_increment(f, i, j, margin);
    const long k = std::lround(mismatch / kTwoPi);
    if (k != 0) {
      r.obstruction = Obstruction{tree_cycle(parent, i, j), static_cast<int>(k), false};
      return r;
    }
  }
  r.ok = true;
  return r;
}

double phase_energy(const Mesh& mesh, const ComplexField& f, double margin) {
  if (f.size() != mesh.vertex_count()) throw InvalidArgument("phase_energy: field length mismatch");
  const auto grads = hat_gradients(mesh);
  const Eigen::VectorXd measure = cell_measures(mesh);
  const int corners = mesh.dim() + 1;
  double energy = 0.0;
  for (int c = 0; c < mesh.cell_count(); ++c) {
    const int v0 = mesh.cells()(c, 0);
    Eigen::Vector2d grad = Eigen::Vector2d::Zero();
    double mod2 = std::norm(f[v0]);
    for (int k = 1; k < corners; ++k) {
      const int v = mesh.cells()(c, k);
      grad += phase_increment(f, v0, v, margin) * grads[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
      mod2 += std::norm(f[v]);
    }
    energy += measure[c] * (mod2 / corners) * grad.squaredNorm();
  }
  return energy;
}

PhaseReport phase_report(const Mesh& mesh, const ComplexField& f, double margin) {
  PhaseReport report;
  for (const auto& loop : mesh.generator_cycles()) report.windings.push_back(winding_number(mesh, f, loop, margin));
  const LogResult log = complex_log(mesh, f, margin);
  report.global_log_exists = log.ok;
  report.obstruction = log.obstruction;

  const auto labels = component_labels(mesh);
  const int components = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<double> lo(static_cast<std::size_t>(components), INFINITY), hi(static_cast<std::size_t>(components), -INFINITY);
  for (std::size_t v = 0; v < labels.size(); ++v) {
    const double u = log.phi[static_cast<Eigen::Index>(v)].imag();
    const auto c = static_cast<std::size_t>(labels[v]);
    lo[c] = std::min(lo[c], u);
    hi[c] = std::max(hi[c], u);
  }
  for (int c = 0; c < components; ++c) report.component_range.push_back(hi[static_cast<std::size_t>(c)] - lo[static_cast<std::size_t>(c)]);
  if (components > 0)
    report.global_range = *std::max_element(hi.begin(), hi.end()) - *std::min_element(lo.begin(), lo.end());
  report.phase_energy = phase_energy(mesh, f, margin);
  return report;
}

std::vector<ZeroWitness> zero_locate(const Mesh& mesh, const ComplexField& f, double tol) {
  if (f.size() != mesh.vertex_count()) throw InvalidArgument("zero_locate: field length mismatch");
  std::vector<ZeroWitness> out;
  const double fmax = f.size() ? f.cwiseAbs().maxCoeff() : 0.0;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (std::abs(f[v]) <= tol * fmax) out.push_back({ZeroWitness::Kind::vertex, v, std::abs(f[v]), mesh.position(v)});
  }

  for (int c = 0; c < mesh.cell_count(); ++c) {
    const auto p = mesh.cell_corners(c);
    if (mesh.dim() == 1) {
      const Complex a = f[mesh.cells()(c, 0)], b = f[mesh.cells()(c, 1)];
      if (!admits_zero(a.real(), b.real()) || !admits_zero(a.imag(), b.imag())) continue;
      const double dre = a.real() - b.real(), dim = a.imag() - b.imag();
      double t = 0.5;
      if (std::abs(dre) >= std::abs(dim) && dre != 0.0) {
        t = a.real() / dre;
      } else if (dim != 0.0) {
        t = a.imag() / dim;
      }
      out.push_back({ZeroWitness::Kind::cell, c, std::abs(a + t * (b - a)), mesh.wrap(p[0] + t * (p[1] - p[0]))});
      continue;
    }
    const Complex f0 = f[mesh.cells()(c, 0)], f1 = f[mesh.cells()(c, 1)], f2 = f[mesh.cells()(c, 2)];
    const Complex d1 = f1 - f0, d2 = f2 - f0;
    const double det = d1.real() * d2.imag() - d2.real() * d1.imag();
    const double scale = std::max({std::abs(f0), std::abs(f1), std::abs(f2)});
    if (std::abs(det) > 1e-14 * scale * scale) {
      const double s = (-f0.real() * d2.imag() + d2.real() * f0.imag()) / det;
      const double t = (-d1.real() * f0.imag() + f0.real() * d1.imag()) / det;
      if (s >= 0.0 && t >= 0.0 && s + t <= 1.0) {
        const Complex at = f0 + s * d1 + t * d2;
        out.push_back({ZeroWitness::Kind::cell, c, std::abs(at), mesh.wrap(p[0] + s * (p[1] - p[0]) + t * (p[2] - p[0]))});
      }
      continue;
    }
    // Interpolant degenerate (e.g. real-valued f): certify by sign changes and
    // place the witness where the real part crosses zero on an edge.
    const double re[3] = {f0.real(), f1.real(), f2.real()}, im[3] = {f0.imag(), f1.imag(), f2.imag()};
    const bool re_zero = admits_zero(std::min({re[0], re[1], re[2]}), std::max({re[0], re[1], re[2]}));
    const bool im_zero = admits_zero(std::min({im[0], im[1], im[2]}), std::max({im[0], im[1], im[2]}));
    if (!re_zero || !im_zero) continue;
    const Complex vals[3] = {f0, f1, f2};
    ZeroWitness w{ZeroWitness::Kind::cell, c, INFINITY, (p[0] + p[1] + p[2]) / 3.0};
    for (int k = 0; k < 3; ++k) {
      const int k1 = (k + 1) % 3;
      const Complex a = vals[k], b = vals[k1];
      if (!admits_zero(a.real(), b.real()) || a.real() == b.real()) continue;
      const double t = a.real() / (a.real() - b.real());
      const double m = std::abs(a + t * (b - a));
      if (m < w.modulus) {
        w.modulus = m;
        w.location = mesh.wrap(p[static_cast<std::size_t>(k)] + t * (p[static_cast<std::size_t>(k1)] - p[static_cast<std::size_t>(k)]));
      }
    }
    if (!std::isfinite(w.modulus)) w.modulus = std::abs((f0 + f1 + f2) / 3.0);
    out.push_back(w);
  }

  std::sort(out.begin(), out.end(), [](const ZeroWitness& a, const ZeroWitness& b) {
    if (a.modulus != b.modulus) return a.modulus < b.modulus;
    if (a.kind != b.kind) return a.kind == ZeroWitness::Kind::vertex;
    return a.index < b.index;
  });
  return out;
}

}  // namespace schrolab
