#include "schrolab/cli.hpp"

#include "schrolab/config.hpp"
#include "schrolab/errors.hpp"
#include "schrolab/experiments.hpp"
#include "schrolab/mesh.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace schrolab {

namespace {

int gen_mesh(const std::string& generator, const std::vector<double>& params, int levels, const std::string& out,
             bool quiet) {
  if (generator == "file" || generator == "all") throw ConfigError("gen-mesh: '" + generator + "' is not a generator");
  MeshSpec spec;
  spec.generator = generator;
  spec.params = params;
  const Mesh mesh = build_mesh(spec, levels);
  std::ostringstream text;
  write_mesh(text, mesh);
  if (out.empty()) {
    std::cout << text.str();
    return 0;
  }
  write_atomic(out, text.str());
  if (!quiet)
    std::cout << "wrote " << out << ": " << mesh.vertex_count() << " vertices, " << mesh.cell_count() << " cells\n";
  return 0;
}

int run_experiment(const std::string& config_path, const std::string& out_dir, std::optional<std::uint64_t> seed,
                   bool quiet) {
  ExperimentConfig config = load_config(config_path);
  if (!out_dir.empty()) config.output.directory = out_dir;
  if (seed) config.seed = *seed;
  const RunReport report = run(config);
  if (!quiet) {
    for (const auto& c : report.cases) {
      std::cout << (c.passed() ? "PASS " : "FAIL ") << c.label << "\n";
      for (const auto& f : c.failures) std::cout << "  " << f << "\n";
    }
    std::cout << experiment_name(config.experiment) << ": " << (report.passed() ? "pass" : "fail") << "\n";
    std::cout << "report: " << report.report_path << "\ncsv: " << report.csv_path << "\n";
  }
  return report.passed() ? 0 : 1;
}

int validate_mesh(const std::string& path, bool quiet) {
  const Mesh mesh = load_mesh(path);
  const auto issues = validate(mesh);
  for (const auto& issue : issues) std::cout << "invalid: " << issue << "\n";
  if (issues.empty() && !quiet) {
    std::cout << "valid: dim " << mesh.dim() << ", " << mesh.vertex_count() << " vertices, " << mesh.edge_count()
              << " edges, " << mesh.cell_count() << " cells, " << mesh.boundary_vertices().size()
              << " boundary vertices, " << mesh.generator_cycles().size() << " generator cycles, euler characteristic "
              << euler_characteristic(mesh) << "\n";
  }
  return issues.empty() ? 0 : 1;
}

int show_report(const std::string& path, bool quiet) {
  const bool passed = report_passed(path);
  if (!quiet) {
    std::ifstream in(path);
    std::cout << in.rdbuf();
  }
  return passed ? 0 : 1;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Discrete Schrodinger operator experiments on simplicial meshes", "schrolab"};
  app.require_subcommand(1);
  app.fallthrough();
  bool quiet = false;
  app.add_flag("--quiet", quiet, "Suppress normal output");

  auto* gen = app.add_subcommand("gen-mesh", "Generate a mesh and write it in the plain-text mesh format");
  std::string generator;
  std::vector<double> params;
  std::string mesh_out;
  int levels = 0;
  gen->add_option("generator", generator, "circle | interval | disk | annulus | torus | strip | two-disks")->required();
  gen->add_option("params", params, "Generator parameters")->required();
  gen->add_option("--out", mesh_out, "Output file (default: standard output)");
  gen->add_option("--refine", levels, "Number of uniform refinements")->check(CLI::NonNegativeNumber);

  auto* run_cmd = app.add_subcommand("run", "Run an experiment described by a config file");
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  run_cmd->add_option("--config", config_path, "Experiment config file")->required();
  run_cmd->add_option("--out", out_dir, "Output directory (overrides [output] directory)");
  run_cmd->add_option("--seed", seed, "Random seed (overrides [experiment] seed)");

  auto* val = app.add_subcommand("validate-mesh", "Check a mesh file for structural consistency");
  std::string mesh_path;
  val->add_option("mesh", mesh_path, "Mesh file")->required();

  auto* show = app.add_subcommand("show-report", "Print a report; exit status reflects its pass/fail summary");
  std::string report_path;
  show->add_option("report", report_path, "Report file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*gen) return gen_mesh(generator, params, levels, mesh_out, quiet);
    if (*run_cmd) return run_experiment(config_path, out_dir, seed, quiet);
    if (*val) return validate_mesh(mesh_path, quiet);
    if (*show) return show_report(report_path, quiet);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << app.help();
  return 2;
}

}  // namespace schrolab
