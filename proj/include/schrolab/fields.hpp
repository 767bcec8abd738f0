#pragma once

#include "schrolab/mesh.hpp"
#include "schrolab/operators.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>

namespace schrolab {

/// Samples `fn` at every vertex position.
ComplexField sample(const Mesh& mesh, const std::function<Complex(const Eigen::Vector2d&)>& fn);

/// Random nowhere-vanishing field: modulus in [0.5, 1.5], uniform phase.
ComplexField random_field(int size, std::uint64_t seed);
/// Random real values in [0, 1).
Eigen::VectorXd random_unit_values(int size, std::uint64_t seed);

/// Deterministic uniform double in [0, 1) from a 64-bit engine output.
double unit_from_bits(std::uint64_t bits);

/// Plain-text columns `vertex re im`, one vertex per line.
void write_field(std::ostream& out, const ComplexField& f);
ComplexField read_field(std::istream& in);
void save_field(const std::string& path, const ComplexField& f);
ComplexField load_field(const std::string& path);

}  // namespace schrolab
