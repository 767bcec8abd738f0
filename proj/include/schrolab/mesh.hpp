#pragma once

#include <Eigen/Core>

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace schrolab {

/// Closed loop of vertex indices walking consecutive mesh edges. The first
/// entry is repeated at the end.
struct CycleLoop {
  std::vector<int> vertices;

  bool closed() const { return vertices.size() >= 2 && vertices.front() == vertices.back(); }
  /// Number of edges traversed.
  std::size_t length() const { return vertices.empty() ? 0 : vertices.size() - 1; }
};

/// Simplicial 1-D or 2-D mesh.
///
/// Vertex positions are planar; 1-D meshes use the x coordinate as an
/// intrinsic arclength and keep y = 0. Periodic meshes (circle, torus) store
/// each vertex once and identify coordinates modulo `period()`; a zero
/// period component means the axis is not periodic. All geometric queries go
/// through `displacement`, which returns the minimum-image vector.
///
/// Immutable after construction.
class Mesh {
 public:
  Mesh(int dim, Eigen::MatrixX2d vertices, Eigen::MatrixXi cells, std::vector<int> boundary,
       Eigen::Vector2d period, std::vector<CycleLoop> generator_cycles);

  int dim() const { return dim_; }
  int vertex_count() const { return static_cast<int>(vertices_.rows()); }
  int cell_count() const { return static_cast<int>(cells_.rows()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const Eigen::MatrixX2d& vertices() const { return vertices_; }
  Eigen::Vector2d position(int v) const { return vertices_.row(v).transpose(); }
  /// cells x (dim + 1) vertex indices; triangles are counterclockwise.
  const Eigen::MatrixXi& cells() const { return cells_; }
  std::array<int, 3> triangle(int c) const { return {cells_(c, 0), cells_(c, 1), cells_(c, 2)}; }

  /// Sorted boundary vertex indices.
  const std::vector<int>& boundary_vertices() const { return boundary_; }
  bool is_boundary(int v) const { return boundary_flag_[static_cast<std::size_t>(v)]; }
  const Eigen::Vector2d& period() const { return period_; }
  bool periodic() const { return period_.x() > 0.0 || period_.y() > 0.0; }
  const std::vector<CycleLoop>& generator_cycles() const { return cycles_; }

  /// Unique undirected edges (i < j), sorted lexicographically.
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }
  /// Cells incident to each edge, parallel to `edges()`.
  const std::vector<int>& edge_cell_counts() const { return edge_cells_; }
  /// Index into `edges()` or -1.
  int find_edge(int a, int b) const;
  /// 2-D: edges with one incident triangle. 1-D: empty (boundary is a vertex set).
  std::vector<std::array<int, 2>> boundary_edges() const;

  /// Minimum-image vector from vertex `from` to vertex `to`.
  Eigen::Vector2d displacement(int from, int to) const;
  /// Corner positions of cell `c` unwrapped around its first vertex.
  std::array<Eigen::Vector2d, 3> cell_corners(int c) const;
  /// Edge length (1-D) or counterclockwise-signed area (2-D).
  double signed_measure(int c) const;
  double cell_measure(int c) const;
  double total_measure() const;
  double max_edge_length() const;
  /// Wraps a point into the fundamental domain of a periodic mesh.
  Eigen::Vector2d wrap(Eigen::Vector2d p) const;

  /// Neighbours of every vertex, ascending.
  std::vector<std::vector<int>> adjacency() const;

 private:
  int dim_;
  Eigen::MatrixX2d vertices_;
  Eigen::MatrixXi cells_;
  std::vector<int> boundary_;
  std::vector<bool> boundary_flag_;
  Eigen::Vector2d period_;
  std::vector<CycleLoop> cycles_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<int> edge_cells_;
};

Mesh gen_circle(int n, double radius);
Mesh gen_interval(int n, double length);
Mesh gen_disk(int rings, double radius);
Mesh gen_annulus(double r_in, double r_out, int rings);
Mesh gen_flat_torus(int nx, int ny, double lx, double ly);
Mesh gen_strip(int n_long, int n_wide, double length, double width);

/// Uniform midpoint subdivision. Boundary flags and generator cycles are
/// carried over; original vertices keep their indices.
Mesh refine(const Mesh& mesh);

/// Both meshes side by side, `b` translated by `offset`. Neither may be periodic.
Mesh disjoint_union(const Mesh& a, const Mesh& b, const Eigen::Vector2d& offset);

/// Connected-component label per vertex, labelled in order of lowest vertex.
std::vector<int> component_labels(const Mesh& mesh);
int component_count(const Mesh& mesh);
int euler_characteristic(const Mesh& mesh);
/// Rank of first homology computed from the combinatorics.
int first_betti_number(const Mesh& mesh);

/// Every structural invariant of a mesh; an empty result means valid.
std::vector<std::string> validate(const Mesh& mesh);

/// Plain-text mesh format:
///
///     dim n_vertices n_cells n_boundary n_cycles
///     period_x period_y
///     x y                      (n_vertices lines)
///     v0 v1 [v2]               (n_cells lines)
///     b                        (n_boundary lines)
///     k v0 v1 ... v(k-1)       (n_cycles lines, closed loops, k entries)
///
/// Doubles use the shortest round-trip representation, so output is
/// byte-reproducible and reloads bit-exactly.
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);
void save_mesh(const std::string& path, const Mesh& mesh);
Mesh load_mesh(const std::string& path);

}  // namespace schrolab
