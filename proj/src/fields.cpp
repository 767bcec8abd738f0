#include "schrolab/fields.hpp"

#include "schrolab/errors.hpp"
#include "schrolab/format.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

namespace schrolab {

double unit_from_bits(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

ComplexField sample(const Mesh& mesh, const std::function<Complex(const Eigen::Vector2d&)>& fn) {
  ComplexField f(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) f[v] = fn(mesh.position(v));
  return f;
}

ComplexField random_field(int size, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  ComplexField f(size);
  for (int i = 0; i < size; ++i) {
    const double modulus = 0.5 + unit_from_bits(engine());
    const double phase = 2.0 * std::numbers::pi * unit_from_bits(engine());
    f[i] = std::polar(modulus, phase);
  }
  return f;
}

Eigen::VectorXd random_unit_values(int size, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  Eigen::VectorXd x(size);
  for (int i = 0; i < size; ++i) x[i] = unit_from_bits(engine());
  return x;
}

void write_field(std::ostream& out, const ComplexField& f) {
  for (Eigen::Index i = 0; i < f.size(); ++i)
    out << i << ' ' << format_exact(f[i].real()) << ' ' << format_exact(f[i].imag()) << '\n';
}

ComplexField read_field(std::istream& in) {
  std::vector<Complex> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string idx, re, im, extra;
    if (!(ss >> idx)) continue;
    long long index = 0;
    double a = 0, b = 0;
    if (!(ss >> re >> im) || (ss >> extra) || !parse_int(idx, index) || !parse_double(re, a) || !parse_double(im, b))
      throw InvalidArgument("field file line " + std::to_string(lineno) + ": expected 'vertex re im'");
    if (index != static_cast<long long>(values.size()))
      throw InvalidArgument("field file line " + std::to_string(lineno) + ": vertex indices must be consecutive from 0");
    values.emplace_back(a, b);
  }
  ComplexField f(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) f[static_cast<Eigen::Index>(i)] = values[i];
  return f;
}

void save_field(const std::string& path, const ComplexField& f) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open '" + path + "' for writing");
  write_field(out, f);
}

ComplexField load_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open field file '" + path + "'");
  return read_field(in);
}

}  // namespace schrolab
