#include "schrolab/errors.hpp"
#include "schrolab/format.hpp"
#include "schrolab/mesh.hpp"

#include <fstream>
#include <sstream>

namespace schrolab {

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::vector<std::string> next(const char* what) {
    std::string line;
    if (!std::getline(in_, line)) throw InvalidArgument(std::string("mesh file truncated while reading ") + what);
    ++line_;
    return tokens_of(line);
  }

  long long integer(const std::string& tok) const {
    long long v = 0;
    if (!parse_int(tok, v)) throw InvalidArgument("mesh file line " + std::to_string(line_) + ": bad integer '" + tok + "'");
    return v;
  }

  double real(const std::string& tok) const {
    double v = 0;
    if (!parse_double(tok, v)) throw InvalidArgument("mesh file line " + std::to_string(line_) + ": bad number '" + tok + "'");
    return v;
  }

  void expect(const std::vector<std::string>& toks, std::size_t count) const {
    if (toks.size() != count)
      throw InvalidArgument("mesh file line " + std::to_string(line_) + ": expected " + std::to_string(count) + " fields");
  }

 private:
  std::istream& in_;
  int line_ = 0;
};

}  // namespace

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << mesh.dim() << ' ' << mesh.vertex_count() << ' ' << mesh.cell_count() << ' '
      << mesh.boundary_vertices().size() << ' ' << mesh.generator_cycles().size() << '\n';
  out << format_exact(mesh.period().x()) << ' ' << format_exact(mesh.period().y()) << '\n';
  for (int v = 0; v < mesh.vertex_count(); ++v)
    out << format_exact(mesh.vertices()(v, 0)) << ' ' << format_exact(mesh.vertices()(v, 1)) << '\n';
  for (int c = 0; c < mesh.cell_count(); ++c) {
    for (int k = 0; k <= mesh.dim(); ++k) out << (k ? " " : "") << mesh.cells()(c, k);
    out << '\n';
  }
  for (int b : mesh.boundary_vertices()) out << b << '\n';
  for (const auto& loop : mesh.generator_cycles()) {
    out << loop.vertices.size();
    for (int v : loop.vertices) out << ' ' << v;
    out << '\n';
  }
}

Mesh read_mesh(std::istream& in) {
  LineReader r(in);
  auto header = r.next("header");
  r.expect(header, 5);
  const long long dim = r.integer(header[0]), nv = r.integer(header[1]), nc = r.integer(header[2]);
  const long long nb = r.integer(header[3]), ncyc = r.integer(header[4]);
  if (dim != 1 && dim != 2) throw InvalidArgument("mesh file: dimension must be 1 or 2");
  if (nv < 0 || nc < 0 || nb < 0 || ncyc < 0) throw InvalidArgument("mesh file: negative count in header");

  auto per = r.next("period");
  r.expect(per, 2);
  const Eigen::Vector2d period(r.real(per[0]), r.real(per[1]));

  Eigen::MatrixX2d vertices(nv, 2);
  for (long long v = 0; v < nv; ++v) {
    auto t = r.next("vertices");
    r.expect(t, 2);
    vertices(v, 0) = r.real(t[0]);
    vertices(v, 1) = r.real(t[1]);
  }
  Eigen::MatrixXi cells(nc, dim + 1);
  for (long long c = 0; c < nc; ++c) {
    auto t = r.next("cells");
    r.expect(t, static_cast<std::size_t>(dim + 1));
    for (long long k = 0; k <= dim; ++k) cells(c, k) = static_cast<int>(r.integer(t[static_cast<std::size_t>(k)]));
  }
  std::vector<int> boundary;
  for (long long b = 0; b < nb; ++b) {
    auto t = r.next("boundary");
    r.expect(t, 1);
    boundary.push_back(static_cast<int>(r.integer(t[0])));
  }
  std::vector<CycleLoop> cycles;
  for (long long k = 0; k < ncyc; ++k) {
    auto t = r.next("cycles");
    if (t.empty()) throw InvalidArgument("mesh file: empty cycle line");
    const long long len = r.integer(t[0]);
    r.expect(t, static_cast<std::size_t>(len + 1));
    CycleLoop loop;
    for (long long i = 1; i <= len; ++i) loop.vertices.push_back(static_cast<int>(r.integer(t[static_cast<std::size_t>(i)])));
    cycles.push_back(std::move(loop));
  }
  return Mesh(static_cast<int>(dim), std::move(vertices), std::move(cells), std::move(boundary), period,
              std::move(cycles));
}

void save_mesh(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open '" + path + "' for writing");
  write_mesh(out, mesh);
  if (!out) throw InvalidArgument("failed writing '" + path + "'");
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

}  // namespace schrolab
