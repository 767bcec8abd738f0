#pragma once

#include "schrolab/tolerances.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace schrolab {

enum class ExperimentKind { identity_convergence, theorem1, theorem2, counterexample, cutoff_limit, balance_fuzz };

/// Mesh family. `params` are the generator's positional arguments:
///   circle n radius | interval n length | disk rings radius |
///   annulus r_in r_out rings | torus nx ny lx ly |
///   strip n_long n_wide length width | two-disks rings radius gap |
///   file (uses `path`) | all (balance-fuzz only: one of each generator).
/// Level k is the base mesh refined k times.
struct MeshSpec {
  std::string generator = "disk";
  std::vector<double> params{4.0, 1.0};
  int levels = 1;
  std::string path;

  bool operator==(const MeshSpec&) const = default;
};

/// Prescribed vertex field.
///   random: nowhere-vanishing random field from the experiment seed
///   plane-wave: exp(i (wave . x))
///   smooth: a fixed smooth nowhere-vanishing field (periodic on periodic meshes)
///   gaussian: exp(-|x - center|^2 / (2 width^2) + i chirp |x - center|^2)
///   ground-state: eigenvector of A + M diag(V) nearest `shift`, V shifted
///     by the computed eigenvalue so that the pair is an exact kernel pair
///   file: plain-text field columns at `path`
struct FieldSpec {
  std::string kind = "smooth";
  std::array<double, 2> wave{1.0, 0.0};
  std::array<double, 2> center{0.0, 0.0};
  double width = 1.0;
  double chirp = 0.0;
  double shift = 0.0;
  std::string path;

  bool operator==(const FieldSpec&) const = default;
};

/// Potential. constant: V = value. bump: V = value (1 - r^2/radius^2)^2 for
/// r = |x - center| < radius, 0 outside. inverse-design-from-field: the
/// potential making the configured field an exact kernel element. file:
/// plain-text columns like a field.
struct PotentialSpec {
  std::string kind = "inverse-design-from-field";
  std::complex<double> value{0.0, 0.0};
  std::array<double, 2> center{0.0, 0.0};
  double radius = 0.5;
  std::string path;

  bool operator==(const PotentialSpec&) const = default;
};

/// Radial cutoffs around the vertex nearest `center`, one per plateau
/// radius, each ramping to zero over `ramp_width`.
struct CutoffSpec {
  std::array<double, 2> center{0.0, 0.0};
  double ramp_width = 1.0;
  std::vector<double> plateaus{0.5, 1.0, 2.0};

  bool operator==(const CutoffSpec&) const = default;
};

struct OutputSpec {
  std::string directory = ".";
  /// File names inside `directory`; empty means `<experiment>.report` and
  /// `<experiment>.csv`.
  std::string report;
  std::string csv;

  bool operator==(const OutputSpec&) const = default;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::counterexample;
  std::uint64_t seed = 0;
  /// Number of random cases (balance-fuzz, theorem1 with random fields).
  int cases = 1;
  MeshSpec mesh;
  FieldSpec field;
  PotentialSpec potential;
  CutoffSpec cutoff;
  Tolerances tolerances;
  OutputSpec output;

  bool operator==(const ExperimentConfig&) const = default;
};

std::string experiment_name(ExperimentKind kind);
/// Throws ConfigError (line 0) for unknown names.
ExperimentKind parse_experiment_name(const std::string& name);

/// Parses the sectioned key = value format. Unknown sections or keys,
/// duplicates, malformed values and a missing experiment id raise
/// ConfigError carrying the 1-based line number.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_string(const std::string& text);
/// Throws ConfigError (line 0) when the file cannot be opened.
ExperimentConfig load_config(const std::string& path);

/// Canonical text form listing every key; parse_config inverts it exactly.
std::string serialize_config(const ExperimentConfig& config);

}  // namespace schrolab
