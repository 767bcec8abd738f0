#pragma once

#include "schrolab/config.hpp"
#include "schrolab/mesh.hpp"
#include "schrolab/operators.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace schrolab {

/// Which tolerance a reported number is judged against. `exact` marks
/// integers and flags, `reported` marks numbers shown for transparency only.
enum class ToleranceClass { exact, roundoff, balance, discretization, order, spectral, vanishing, phase, energy, reported };

std::string class_label(ToleranceClass cls);

struct ReportValue {
  std::string key;
  std::string text;
  ToleranceClass cls = ToleranceClass::reported;
};

struct CaseResult {
  std::string label;
  std::vector<ReportValue> values;
  std::vector<std::string> notes;
  /// One entry per violated assertion; empty means the case passed.
  std::vector<std::string> failures;
  /// Wall-clock seconds; written only to the timing sidecar.
  double seconds = 0.0;

  bool passed() const { return failures.empty(); }
  void add(const std::string& key, double value, ToleranceClass cls);
  void add_count(const std::string& key, long long value);
  void add_flag(const std::string& key, bool value);
};

/// CSV series: header row plus rows of plain decimal (or empty) cells.
struct Series {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct RunReport {
  ExperimentConfig config;
  std::string environment;
  std::vector<CaseResult> cases;
  Series series;
  /// Where run() wrote its output; empty after execute().
  std::string report_path;
  std::string csv_path;
  std::string timing_path;

  bool passed() const;
};

/// A checker failed inside a case, e.g. a DomainError on a vanishing field.
class CaseError : public std::runtime_error {
 public:
  CaseError(const std::string& label, const std::string& what) : std::runtime_error(label + ": " + what) {}
};

/// Base mesh of the configured family refined `level` times.
Mesh build_mesh(const MeshSpec& spec, int level);

/// Runs the configured experiment over every refinement level without
/// touching the file system beyond configured input files.
RunReport execute(const ExperimentConfig& config);

/// Deterministic text document: config echo, environment, every case with
/// labelled values, and a summary ending in `status = pass|fail`.
std::string render_report(const RunReport& report);
std::string render_csv(const Series& series);
std::string render_timings(const RunReport& report);

/// Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::string& path, const std::string& content);

/// execute() followed by atomic writes of the report, the CSV series and
/// the timing sidecar (`<report>.timing`) into the configured directory.
RunReport run(const ExperimentConfig& config);

/// Reads `status = ...` from the summary of a rendered report. Throws
/// ConfigError when the file is missing or has no status line.
bool report_passed(const std::string& path);

}  // namespace schrolab
