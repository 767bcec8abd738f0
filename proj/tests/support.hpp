#pragma once

#include "schrolab/mesh.hpp"

#include <random>
#include <string>
#include <utility>
#include <vector>

namespace testing {

/// Moves interior vertices of a non-periodic 2-D mesh by up to `amount`
/// times the shortest incident-edge scale, keeping connectivity.
inline schrolab::Mesh jittered(const schrolab::Mesh& m, double amount, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixX2d v = m.vertices();
  const double h = m.max_edge_length();
  for (int i = 0; i < m.vertex_count(); ++i) {
    const double dx = u(rng), dy = u(rng);
    if (m.is_boundary(i)) continue;
    v(i, 0) += amount * h * dx;
    v(i, 1) += amount * h * dy;
  }
  return schrolab::Mesh(m.dim(), v, m.cells(), m.boundary_vertices(), m.period(), m.generator_cycles());
}

/// One small mesh per generator.
inline std::vector<std::pair<std::string, schrolab::Mesh>> sample_meshes() {
  using namespace schrolab;
  return {{"circle", gen_circle(24, 1.3)},      {"interval", gen_interval(17, 2.0)},
          {"disk", gen_disk(3, 1.0)},           {"annulus", gen_annulus(0.4, 1.0, 3)},
          {"torus", gen_flat_torus(6, 5, 1.0, 1.4)}, {"strip", gen_strip(13, 4, 6.0, 1.0)},
          {"jittered disk", jittered(refine(gen_disk(2, 1.0)), 0.15, 11)}};
}

}  // namespace testing
