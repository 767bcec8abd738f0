#include "schrolab/mesh.hpp"

#include "schrolab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>
#include <set>
#include <utility>

namespace schrolab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

// Reorders a triangle counterclockwise.
std::array<int, 3> ccw(std::array<int, 3> t, const std::vector<Eigen::Vector2d>& p) {
  if (cross(p[t[1]] - p[t[0]], p[t[2]] - p[t[0]]) < 0.0) std::swap(t[1], t[2]);
  return t;
}

Eigen::MatrixX2d to_matrix(const std::vector<Eigen::Vector2d>& points) {
  Eigen::MatrixX2d m(static_cast<Eigen::Index>(points.size()), 2);
  for (std::size_t i = 0; i < points.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
  return m;
}

Eigen::MatrixXi to_matrix(const std::vector<std::array<int, 3>>& tris) {
  Eigen::MatrixXi m(static_cast<Eigen::Index>(tris.size()), 3);
  for (std::size_t i = 0; i < tris.size(); ++i)
    for (int k = 0; k < 3; ++k) m(static_cast<Eigen::Index>(i), k) = tris[i][k];
  return m;
}

CycleLoop ring_loop(int first, int count) {
  CycleLoop loop;
  for (int k = 0; k < count; ++k) loop.vertices.push_back(first + k);
  loop.vertices.push_back(first);
  return loop;
}

std::array<int, 2> sorted_pair(int a, int b) { return a < b ? std::array<int, 2>{a, b} : std::array<int, 2>{b, a}; }

}  // namespace

Mesh::Mesh(int dim, Eigen::MatrixX2d vertices, Eigen::MatrixXi cells, std::vector<int> boundary,
           Eigen::Vector2d period, std::vector<CycleLoop> generator_cycles)
    : dim_(dim),
      vertices_(std::move(vertices)),
      cells_(std::move(cells)),
      boundary_(std::move(boundary)),
      period_(period),
      cycles_(std::move(generator_cycles)) {
  if (dim_ != 1 && dim_ != 2) throw InvalidArgument("mesh dimension must be 1 or 2");
  if (cells_.cols() != dim_ + 1) throw InvalidArgument("cell arity does not match mesh dimension");
  const int n = vertex_count();
  if (cells_.size() > 0 && (cells_.minCoeff() < 0 || cells_.maxCoeff() >= n))
    throw InvalidArgument("cell references a vertex out of range");
  if (!(period_.array() >= 0.0).all()) throw InvalidArgument("period components must be non-negative");

  std::sort(boundary_.begin(), boundary_.end());
  boundary_.erase(std::unique(boundary_.begin(), boundary_.end()), boundary_.end());
  boundary_flag_.assign(static_cast<std::size_t>(n), false);
  for (int b : boundary_) {
    if (b < 0 || b >= n) throw InvalidArgument("boundary index out of range");
    boundary_flag_[static_cast<std::size_t>(b)] = true;
  }
  for (const auto& loop : cycles_)
    for (int v : loop.vertices)
      if (v < 0 || v >= n) throw InvalidArgument("cycle vertex out of range");

  std::map<std::array<int, 2>, int> counts;
  for (int c = 0; c < cell_count(); ++c) {
    for (int a = 0; a <= dim_; ++a) {
      for (int b = a + 1; b <= dim_; ++b) ++counts[sorted_pair(cells_(c, a), cells_(c, b))];
    }
  }
  edges_.reserve(counts.size());
  edge_cells_.reserve(counts.size());
  for (const auto& [edge, count] : counts) {
    edges_.push_back(edge);
    edge_cells_.push_back(count);
  }
}

int Mesh::find_edge(int a, int b) const {
  const auto key = sorted_pair(a, b);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return -1;
  return static_cast<int>(it - edges_.begin());
}

std::vector<std::array<int, 2>> Mesh::boundary_edges() const {
  std::vector<std::array<int, 2>> out;
  if (dim_ != 2) return out;
  for (std::size_t e = 0; e < edges_.size(); ++e)
    if (edge_cells_[e] == 1) out.push_back(edges_[e]);
  return out;
}

Eigen::Vector2d Mesh::displacement(int from, int to) const {
  Eigen::Vector2d d = position(to) - position(from);
  for (int k = 0; k < 2; ++k) {
    const double p = period_[k];
    if (p > 0.0) d[k] -= p * std::round(d[k] / p);
  }
  return d;
}

std::array<Eigen::Vector2d, 3> Mesh::cell_corners(int c) const {
  std::array<Eigen::Vector2d, 3> corners;
  const int v0 = cells_(c, 0);
  corners[0] = position(v0);
  for (int k = 1; k <= dim_; ++k) corners[static_cast<std::size_t>(k)] = corners[0] + displacement(v0, cells_(c, k));
  if (dim_ == 1) corners[2] = corners[1];
  return corners;
}

double Mesh::signed_measure(int c) const {
  const auto p = cell_corners(c);
  if (dim_ == 1) return (p[1] - p[0]).norm();
  return 0.5 * cross(p[1] - p[0], p[2] - p[0]);
}

double Mesh::cell_measure(int c) const { return std::abs(signed_measure(c)); }

double Mesh::total_measure() const {
  double total = 0.0;
  for (int c = 0; c < cell_count(); ++c) total += cell_measure(c);
  return total;
}

double Mesh::max_edge_length() const {
  double h = 0.0;
  for (const auto& e : edges_) h = std::max(h, displacement(e[0], e[1]).norm());
  return h;
}

Eigen::Vector2d Mesh::wrap(Eigen::Vector2d p) const {
  for (int k = 0; k < 2; ++k) {
    const double per = period_[k];
    if (per > 0.0) {
      p[k] -= per * std::floor(p[k] / per);
      if (p[k] >= per) p[k] -= per;
    }
  }
  return p;
}

std::vector<std::vector<int>> Mesh::adjacency() const {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(vertex_count()));
  for (const auto& e : edges_) {
    adj[static_cast<std::size_t>(e[0])].push_back(e[1]);
    adj[static_cast<std::size_t>(e[1])].push_back(e[0]);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

Mesh gen_circle(int n, double radius) {
  if (n < 3) throw InvalidArgument("gen_circle: need at least 3 vertices");
  if (!(radius > 0.0)) throw InvalidArgument("gen_circle: radius must be positive");
  const double circumference = kTwoPi * radius;
  Eigen::MatrixX2d v = Eigen::MatrixX2d::Zero(n, 2);
  Eigen::MatrixXi cells(n, 2);
  for (int j = 0; j < n; ++j) {
    v(j, 0) = circumference * j / n;
    cells(j, 0) = j;
    cells(j, 1) = (j + 1) % n;
  }
  return Mesh(1, std::move(v), std::move(cells), {}, {circumference, 0.0}, {ring_loop(0, n)});
}

Mesh gen_interval(int n, double length) {
  if (n < 2) throw InvalidArgument("gen_interval: need at least 2 vertices");
  if (!(length > 0.0)) throw InvalidArgument("gen_interval: length must be positive");
  Eigen::MatrixX2d v = Eigen::MatrixX2d::Zero(n, 2);
  Eigen::MatrixXi cells(n - 1, 2);
  for (int j = 0; j < n; ++j) v(j, 0) = length * j / (n - 1);
  for (int j = 0; j + 1 < n; ++j) {
    cells(j, 0) = j;
    cells(j, 1) = j + 1;
  }
  return Mesh(1, std::move(v), std::move(cells), {0, n - 1}, Eigen::Vector2d::Zero(), {});
}

Mesh gen_disk(int rings, double radius) {
  if (rings < 1) throw InvalidArgument("gen_disk: need at least one ring");
  if (!(radius > 0.0)) throw InvalidArgument("gen_disk: radius must be positive");

  // Ring k holds 6k vertices at radius k * radius / rings.
  std::vector<Eigen::Vector2d> p{Eigen::Vector2d::Zero()};
  std::vector<int> ring_start{0};
  for (int k = 1; k <= rings; ++k) {
    ring_start.push_back(static_cast<int>(p.size()));
    const double r = radius * k / rings;
    for (int m = 0; m < 6 * k; ++m) {
      const double theta = kTwoPi * m / (6 * k);
      p.emplace_back(r * std::cos(theta), r * std::sin(theta));
    }
  }

  std::vector<std::array<int, 3>> tris;
  for (int m = 0; m < 6; ++m) tris.push_back(ccw({0, 1 + m, 1 + (m + 1) % 6}, p));
  for (int k = 2; k <= rings; ++k) {
    // Zip ring k-1 and ring k together by angle.
    const int ni = 6 * (k - 1), no = 6 * k;
    const int si = ring_start[static_cast<std::size_t>(k - 1)], so = ring_start[static_cast<std::size_t>(k)];
    int i = 0, j = 0;
    while (i < ni || j < no) {
      const double next_in = static_cast<double>(i + 1) / ni;
      const double next_out = static_cast<double>(j + 1) / no;
      if (j < no && (i == ni || next_out < next_in)) {
        tris.push_back(ccw({si + i % ni, so + j, so + (j + 1) % no}, p));
        ++j;
      } else {
        tris.push_back(ccw({si + i, so + j % no, si + (i + 1) % ni}, p));
        ++i;
      }
    }
  }

  std::vector<int> boundary;
  for (int m = 0; m < 6 * rings; ++m) boundary.push_back(ring_start.back() + m);
  return Mesh(2, to_matrix(p), to_matrix(tris), std::move(boundary), Eigen::Vector2d::Zero(), {});
}

Mesh gen_annulus(double r_in, double r_out, int rings) {
  if (!(r_in > 0.0) || !(r_in < r_out)) throw InvalidArgument("gen_annulus: need 0 < r_in < r_out");
  if (rings < 2) throw InvalidArgument("gen_annulus: need at least 2 rings");

  const double dr = (r_out - r_in) / (rings - 1);
  const int m = std::max(6, static_cast<int>(std::lround(kTwoPi * 0.5 * (r_in + r_out) / dr)));
  std::vector<Eigen::Vector2d> p;
  for (int k = 0; k < rings; ++k) {
    const double r = r_in + dr * k;
    for (int j = 0; j < m; ++j) {
      const double theta = kTwoPi * j / m;
      p.emplace_back(r * std::cos(theta), r * std::sin(theta));
    }
  }
  std::vector<std::array<int, 3>> tris;
  for (int k = 0; k + 1 < rings; ++k) {
    for (int j = 0; j < m; ++j) {
      const int a = k * m + j, b = k * m + (j + 1) % m;
      const int c = (k + 1) * m + (j + 1) % m, d = (k + 1) * m + j;
      tris.push_back(ccw({a, b, c}, p));
      tris.push_back(ccw({a, c, d}, p));
    }
  }
  std::vector<int> boundary;
  for (int j = 0; j < m; ++j) {
    boundary.push_back(j);
    boundary.push_back((rings - 1) * m + j);
  }
  return Mesh(2, to_matrix(p), to_matrix(tris), std::move(boundary), Eigen::Vector2d::Zero(), {ring_loop(0, m)});
}

Mesh gen_flat_torus(int nx, int ny, double lx, double ly) {
  if (nx < 3 || ny < 3) throw InvalidArgument("gen_flat_torus: need at least 3 vertices per direction");
  if (!(lx > 0.0) || !(ly > 0.0)) throw InvalidArgument("gen_flat_torus: side lengths must be positive");
  Eigen::MatrixX2d v(nx * ny, 2);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) v.row(j * nx + i) << lx * i / nx, ly * j / ny;
  Eigen::MatrixXi cells(2 * nx * ny, 3);
  int c = 0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = j * nx + i, v10 = j * nx + (i + 1) % nx;
      const int v01 = ((j + 1) % ny) * nx + i, v11 = ((j + 1) % ny) * nx + (i + 1) % nx;
      cells.row(c++) << v00, v10, v11;
      cells.row(c++) << v00, v11, v01;
    }
  }
  CycleLoop along_y;
  for (int j = 0; j < ny; ++j) along_y.vertices.push_back(j * nx);
  along_y.vertices.push_back(0);
  return Mesh(2, std::move(v), std::move(cells), {}, {lx, ly}, {ring_loop(0, nx), along_y});
}

Mesh gen_strip(int n_long, int n_wide, double length, double width) {
  if (n_long < 2 || n_wide < 2) throw InvalidArgument("gen_strip: need at least 2 vertices per direction");
  if (!(length > 0.0) || !(width > 0.0)) throw InvalidArgument("gen_strip: side lengths must be positive");
  Eigen::MatrixX2d v(n_long * n_wide, 2);
  std::vector<int> boundary;
  for (int j = 0; j < n_wide; ++j) {
    for (int i = 0; i < n_long; ++i) {
      v.row(j * n_long + i) << length * i / (n_long - 1), width * j / (n_wide - 1);
      if (i == 0 || j == 0 || i == n_long - 1 || j == n_wide - 1) boundary.push_back(j * n_long + i);
    }
  }
  Eigen::MatrixXi cells(2 * (n_long - 1) * (n_wide - 1), 3);
  int c = 0;
  for (int j = 0; j + 1 < n_wide; ++j) {
    for (int i = 0; i + 1 < n_long; ++i) {
      const int v00 = j * n_long + i, v10 = v00 + 1, v01 = v00 + n_long, v11 = v01 + 1;
      cells.row(c++) << v00, v10, v11;
      cells.row(c++) << v00, v11, v01;
    }
  }
  return Mesh(2, std::move(v), std::move(cells), std::move(boundary), Eigen::Vector2d::Zero(), {});
}

Mesh refine(const Mesh& mesh) {
  const int n = mesh.vertex_count();
  const auto& edges = mesh.edges();
  std::vector<Eigen::Vector2d> p;
  p.reserve(static_cast<std::size_t>(n) + edges.size());
  for (int v = 0; v < n; ++v) p.push_back(mesh.position(v));
  // Midpoint of edge e gets index n + e.
  for (const auto& e : edges) p.push_back(mesh.wrap(mesh.position(e[0]) + 0.5 * mesh.displacement(e[0], e[1])));
  auto mid = [&](int a, int b) { return n + mesh.find_edge(a, b); };

  Eigen::MatrixXi cells;
  if (mesh.dim() == 1) {
    cells.resize(2 * mesh.cell_count(), 2);
    for (int c = 0; c < mesh.cell_count(); ++c) {
      const int a = mesh.cells()(c, 0), b = mesh.cells()(c, 1), m = mid(a, b);
      cells.row(2 * c) << a, m;
      cells.row(2 * c + 1) << m, b;
    }
  } else {
    cells.resize(4 * mesh.cell_count(), 3);
    for (int c = 0; c < mesh.cell_count(); ++c) {
      const auto [a, b, d] = mesh.triangle(c);
      const int ab = mid(a, b), bd = mid(b, d), da = mid(d, a);
      cells.row(4 * c) << a, ab, da;
      cells.row(4 * c + 1) << ab, b, bd;
      cells.row(4 * c + 2) << da, bd, d;
      cells.row(4 * c + 3) << ab, bd, da;
    }
  }

  std::vector<int> boundary = mesh.boundary_vertices();
  for (const auto& e : mesh.boundary_edges()) boundary.push_back(mid(e[0], e[1]));

  std::vector<CycleLoop> cycles;
  for (const auto& loop : mesh.generator_cycles()) {
    CycleLoop lifted;
    for (std::size_t k = 0; k + 1 < loop.vertices.size(); ++k) {
      lifted.vertices.push_back(loop.vertices[k]);
      lifted.vertices.push_back(mid(loop.vertices[k], loop.vertices[k + 1]));
    }
    lifted.vertices.push_back(loop.vertices.back());
    cycles.push_back(std::move(lifted));
  }
  return Mesh(mesh.dim(), to_matrix(p), std::move(cells), std::move(boundary), mesh.period(), std::move(cycles));
}

Mesh disjoint_union(const Mesh& a, const Mesh& b, const Eigen::Vector2d& offset) {
  if (a.dim() != b.dim()) throw InvalidArgument("disjoint_union: dimension mismatch");
  if (a.periodic() || b.periodic()) throw InvalidArgument("disjoint_union: periodic meshes are not supported");
  const int na = a.vertex_count();
  Eigen::MatrixX2d v(na + b.vertex_count(), 2);
  v.topRows(na) = a.vertices();
  v.bottomRows(b.vertex_count()) = b.vertices().rowwise() + offset.transpose();
  Eigen::MatrixXi cells(a.cell_count() + b.cell_count(), a.dim() + 1);
  cells.topRows(a.cell_count()) = a.cells();
  cells.bottomRows(b.cell_count()) = b.cells().array() + na;
  std::vector<int> boundary = a.boundary_vertices();
  for (int x : b.boundary_vertices()) boundary.push_back(x + na);
  std::vector<CycleLoop> cycles = a.generator_cycles();
  for (auto loop : b.generator_cycles()) {
    for (int& x : loop.vertices) x += na;
    cycles.push_back(std::move(loop));
  }
  return Mesh(a.dim(), std::move(v), std::move(cells), std::move(boundary), Eigen::Vector2d::Zero(),
              std::move(cycles));
}

std::vector<int> component_labels(const Mesh& mesh) {
  const auto adj = mesh.adjacency();
  std::vector<int> label(adj.size(), -1);
  int next = 0;
  for (std::size_t root = 0; root < adj.size(); ++root) {
    if (label[root] >= 0) continue;
    std::queue<int> queue;
    queue.push(static_cast<int>(root));
    label[root] = next;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop();
      for (int w : adj[static_cast<std::size_t>(v)]) {
        if (label[static_cast<std::size_t>(w)] < 0) {
          label[static_cast<std::size_t>(w)] = next;
          queue.push(w);
        }
      }
    }
    ++next;
  }
  return label;
}

int component_count(const Mesh& mesh) {
  const auto labels = component_labels(mesh);
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

int euler_characteristic(const Mesh& mesh) {
  const int chi = mesh.vertex_count() - mesh.edge_count();
  return mesh.dim() == 2 ? chi + mesh.cell_count() : chi;
}

int first_betti_number(const Mesh& mesh) {
  const int components = component_count(mesh);
  if (mesh.dim() == 1) return mesh.edge_count() - mesh.vertex_count() + components;
  // Closed components contribute to the second Betti number.
  const auto labels = component_labels(mesh);
  std::vector<bool> has_boundary(static_cast<std::size_t>(components), false);
  for (const auto& e : mesh.boundary_edges()) has_boundary[static_cast<std::size_t>(labels[static_cast<std::size_t>(e[0])])] = true;
  const int closed = static_cast<int>(std::count(has_boundary.begin(), has_boundary.end(), false));
  return components + closed - euler_characteristic(mesh);
}

std::vector<std::string> validate(const Mesh& mesh) {
  std::vector<std::string> issues;
  auto issue = [&](std::string msg) { issues.push_back(std::move(msg)); };

  for (int c = 0; c < mesh.cell_count(); ++c) {
    std::set<int> distinct;
    for (int k = 0; k <= mesh.dim(); ++k) distinct.insert(mesh.cells()(c, k));
    if (static_cast<int>(distinct.size()) != mesh.dim() + 1) issue("cell " + std::to_string(c) + " repeats a vertex");
    const double m = mesh.signed_measure(c);
    if (!(m > 0.0)) issue("cell " + std::to_string(c) + " has non-positive measure");
  }

  if (mesh.dim() == 2) {
    // Each oriented edge may appear at most once; interior edges once per direction.
    std::set<std::pair<int, int>> directed;
    for (int c = 0; c < mesh.cell_count(); ++c) {
      const auto t = mesh.triangle(c);
      for (int k = 0; k < 3; ++k) {
        if (!directed.insert({t[static_cast<std::size_t>(k)], t[static_cast<std::size_t>((k + 1) % 3)]}).second)
          issue("inconsistent orientation at cell " + std::to_string(c));
      }
    }
    std::set<int> expected_boundary;
    for (std::size_t e = 0; e < mesh.edges().size(); ++e) {
      const int count = mesh.edge_cell_counts()[e];
      if (count < 1 || count > 2)
        issue("edge " + std::to_string(mesh.edges()[e][0]) + "-" + std::to_string(mesh.edges()[e][1]) +
              " shared by " + std::to_string(count) + " triangles");
      if (count == 1) {
        expected_boundary.insert(mesh.edges()[e][0]);
        expected_boundary.insert(mesh.edges()[e][1]);
      }
    }
    if (std::vector<int>(expected_boundary.begin(), expected_boundary.end()) != mesh.boundary_vertices())
      issue("boundary flags do not match boundary edges");
  } else {
    std::vector<int> degree(static_cast<std::size_t>(mesh.vertex_count()), 0);
    for (const auto& e : mesh.edges()) {
      ++degree[static_cast<std::size_t>(e[0])];
      ++degree[static_cast<std::size_t>(e[1])];
    }
    for (std::size_t e = 0; e < mesh.edges().size(); ++e)
      if (mesh.edge_cell_counts()[e] != 1) issue("1-D edge used by more than one cell");
    for (int v = 0; v < mesh.vertex_count(); ++v) {
      const int d = degree[static_cast<std::size_t>(v)];
      if (d < 1 || d > 2) issue("vertex " + std::to_string(v) + " has degree " + std::to_string(d));
      if ((d == 1) != mesh.is_boundary(v)) issue("boundary flag mismatch at vertex " + std::to_string(v));
    }
  }

  for (std::size_t k = 0; k < mesh.generator_cycles().size(); ++k) {
    const auto& loop = mesh.generator_cycles()[k];
    if (!loop.closed()) issue("generator cycle " + std::to_string(k) + " is not closed");
    for (std::size_t i = 0; i + 1 < loop.vertices.size(); ++i)
      if (mesh.find_edge(loop.vertices[i], loop.vertices[i + 1]) < 0)
        issue("generator cycle " + std::to_string(k) + " steps off the mesh edges");
  }
  const int betti = first_betti_number(mesh);
  if (betti != static_cast<int>(mesh.generator_cycles().size()))
    issue("first Betti number " + std::to_string(betti) + " but " +
          std::to_string(mesh.generator_cycles().size()) + " generator cycles stored");
  return issues;
}

}  // namespace schrolab
