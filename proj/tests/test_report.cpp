#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "schrolab/config.hpp"
#include "schrolab/errors.hpp"
#include "schrolab/experiments.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace schrolab;

namespace {

const ReportValue& find(const CaseResult& c, const std::string& key) {
  for (const auto& v : c.values)
    if (v.key == key) return v;
  FAIL("missing key " << key);
  throw std::logic_error("unreachable");
}

double number(const CaseResult& c, const std::string& key) { return std::stod(find(c, key).text); }

int error_line(const std::string& text) {
  try {
    parse_config_string(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("schrolab-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config: defaults survive a round trip") {
  ExperimentConfig c;
  c.experiment = ExperimentKind::theorem1;
  CHECK(parse_config_string(serialize_config(c)) == c);
}

TEST_CASE("config: every field round-trips exactly") {
  ExperimentConfig c;
  c.experiment = ExperimentKind::cutoff_limit;
  c.seed = 18446744073709551615ull;
  c.cases = 17;
  c.mesh = {"strip", {201, 11, 20, 1}, 3, ""};
  c.field.kind = "gaussian";
  c.field.center = {10.0, 0.1 + 0.2};
  c.field.width = 1.0 / 3.0;
  c.field.chirp = -0.3;
  c.potential.kind = "bump";
  c.potential.value = {5e-300, -1.0 / 7.0};
  c.cutoff.plateaus = {1, 2.5, 8};
  c.cutoff.ramp_width = 0.7;
  c.tolerances.roundoff = 3e-13;
  c.tolerances.branch_margin = 1e-9;
  c.output = {"out dir", "a.report", "b.csv"};
  const std::string text = serialize_config(c);
  const ExperimentConfig back = parse_config_string(text);
  CHECK(back == c);
  CHECK(serialize_config(back) == text);
}

TEST_CASE("config: comments, blank lines and partial files") {
  const ExperimentConfig c = parse_config_string(
      "# header\n\n[experiment]\nid = balance-fuzz   # trailing\ncases = 5\n[mesh]\ngenerator = all\nparams =\n");
  CHECK(c.experiment == ExperimentKind::balance_fuzz);
  CHECK(c.cases == 5);
  CHECK(c.mesh.generator == "all");
  CHECK(c.tolerances == Tolerances{});
  // canonical form of a partial file is stable
  CHECK(serialize_config(parse_config_string(serialize_config(c))) == serialize_config(c));
}

TEST_CASE("config errors carry the line number") {
  CHECK(error_line("[experiment]\nid = theorem1\n[bogus]\n") == 3);
  CHECK(error_line("[experiment]\nid = theorem1\nspeed = 3\n") == 3);
  CHECK(error_line("id = theorem1\n") == 1);
  CHECK(error_line("[experiment]\nid = theorem1\nid = theorem2\n") == 3);
  CHECK(error_line("[experiment]\nid = nonsense\n") == 2);
  CHECK(error_line("[experiment]\nid = theorem1\nseed = -4\n") == 3);
  CHECK(error_line("[experiment]\nid = theorem1\n[tolerances]\nroundoff = 0\n") == 4);
  CHECK(error_line("[experiment]\nid = theorem1\n[mesh]\nlevels = two\n") == 4);
  CHECK(error_line("[experiment]\nid = theorem1\n[tolerances]\nspectral = 1e-9 extra\n") == 4);
  CHECK(error_line("[experiment]\nid = theorem1\nno equals sign\n") == 3);
  // reopening a section is allowed; repeating a key inside it is not
  CHECK(error_line("[experiment]\nid = theorem1\n[mesh]\n[experiment]\nseed = 2\n") == -1);
  CHECK(error_line("[experiment]\nid = theorem1\n[mesh]\n[experiment]\nid = theorem2\n") == 5);
  // missing id is reported at the end of the input
  CHECK(error_line("[mesh]\ngenerator = disk\n") == 2);
  // semantic checks
  CHECK_THROWS_AS(parse_config_string("[experiment]\nid = theorem1\n[mesh]\ngenerator = disk\nparams = 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("[experiment]\nid = theorem1\n[mesh]\ngenerator = all\nparams =\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("[experiment]\nid = counterexample\n[mesh]\ngenerator = disk\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("[experiment]\nid = theorem1\n[mesh]\ngenerator = file\nparams =\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("experiment names") {
  for (auto k : {ExperimentKind::identity_convergence, ExperimentKind::theorem1, ExperimentKind::theorem2,
                 ExperimentKind::counterexample, ExperimentKind::cutoff_limit, ExperimentKind::balance_fuzz})
    CHECK(parse_experiment_name(experiment_name(k)) == k);
  CHECK_THROWS_AS(parse_experiment_name("Theorem1"), ConfigError);
}

TEST_CASE("counterexample experiment") {
  ExperimentConfig c;
  c.mesh = {"circle", {64, 1}, 3, ""};
  const RunReport r = execute(c);
  REQUIRE(r.cases.size() == 3);
  CHECK(r.passed());
  for (const CaseResult& k : r.cases) CHECK(find(k, "winding").text == "1");
  CHECK(number(r.cases[0], "max_imag_potential") <= 1e-12);
  CHECK(number(r.cases[0], "max_potential_deviation") <= 1e-2);
  CHECK(r.series.rows.size() == 3);
}

TEST_CASE("balance-fuzz: 100 seeded cases across every generator, reproducible") {
  ExperimentConfig c;
  c.experiment = ExperimentKind::balance_fuzz;
  c.seed = 7;
  c.cases = 100;
  c.mesh = {"all", {}, 1, ""};
  const RunReport a = execute(c);
  CHECK(a.passed());
  CHECK(a.cases.size() == 6);
  CHECK(a.series.rows.size() == 100);
  long long samples = 0;
  for (const auto& k : a.cases) samples += std::stoll(find(k, "samples").text);
  CHECK(samples == 100);
  const RunReport b = execute(c);
  CHECK(render_report(a) == render_report(b));
  CHECK(render_csv(a.series) == render_csv(b.series));
  c.seed = 8;
  CHECK(render_csv(execute(c).series) != render_csv(a.series));
}

TEST_CASE("identity convergence on a torus: second-order residual") {
  ExperimentConfig c;
  c.experiment = ExperimentKind::identity_convergence;
  c.mesh = {"torus", {16, 16, 1, 1}, 3, ""};
  const RunReport r = execute(c);
  CHECK(r.passed());
  REQUIRE(r.series.rows.size() == 3);
  const auto& header = r.series.header;
  const auto col = std::find(header.begin(), header.end(), "observed_order") - header.begin();
  REQUIRE(col < static_cast<long>(header.size()));
  CHECK(r.series.rows[0][static_cast<std::size_t>(col)].empty());
  for (std::size_t k = 1; k < 3; ++k) {
    const double o = std::stod(r.series.rows[k][static_cast<std::size_t>(col)]);
    CHECK(o >= 1.7);
    CHECK(o <= 2.3);
  }
}

TEST_CASE("theorem experiments run clean on designed and ground-state inputs") {
  ExperimentConfig t1;
  t1.experiment = ExperimentKind::theorem1;
  t1.seed = 3;
  t1.cases = 3;
  t1.mesh = {"disk", {3, 1}, 1, ""};
  t1.field.kind = "random";
  CHECK(execute(t1).passed());

  ExperimentConfig t2;
  t2.experiment = ExperimentKind::theorem2;
  t2.mesh = {"interval", {41, 2}, 1, ""};
  t2.field.kind = "ground-state";
  t2.field.shift = -1.0;
  t2.potential.kind = "bump";
  t2.potential.value = {4.0, 0.0};
  t2.potential.center = {1.0, 0.0};
  t2.potential.radius = 0.8;
  const RunReport r = execute(t2);
  CHECK(r.passed());
  CHECK(find(r.cases[0], "conclusion_verified").text == "true");

  ExperimentConfig cut;
  cut.experiment = ExperimentKind::cutoff_limit;
  cut.mesh = {"strip", {81, 5, 20, 1}, 1, ""};
  cut.field.kind = "gaussian";
  cut.field.center = {10.0, 0.5};
  cut.field.chirp = 0.4;
  cut.cutoff.center = {10.0, 0.5};
  cut.cutoff.plateaus = {1, 2, 3, 4, 5, 6, 7};
  CHECK(execute(cut).passed());
}

TEST_CASE("run writes byte-identical reports") {
  const auto dir = scratch("rerun");
  ExperimentConfig c;
  c.mesh = {"circle", {32, 1}, 2, ""};
  c.output.directory = dir.string();
  const RunReport a = run(c);
  const std::string first = slurp(a.report_path), csv = slurp(a.csv_path);
  const RunReport b = run(c);
  CHECK(slurp(b.report_path) == first);
  CHECK(slurp(b.csv_path) == csv);
  CHECK(std::filesystem::exists(a.timing_path));
  CHECK(first.find("seconds") == std::string::npos);
  CHECK(report_passed(a.report_path));
  // the report echoes a parseable config
  const auto start = first.find("== config ==\n") + 13;
  const auto stop = first.find("\n== case");
  CHECK(parse_config_string(first.substr(start, stop - start)) == c);
  for (const auto& entry : std::filesystem::directory_iterator(dir)) CHECK(entry.path().extension() != ".tmp");
  std::filesystem::remove_all(dir);
}

TEST_CASE("report status and atomic writes") {
  const auto dir = scratch("status");
  const std::string p = (dir / "x.report").string();
  write_atomic(p, "schrolab report\n== case 0: a ==\nstatus = pass\n== summary ==\nstatus = fail\n");
  CHECK_FALSE(report_passed(p));
  write_atomic(p, "status = pass\n");
  CHECK(report_passed(p));
  CHECK(slurp(p) == "status = pass\n");
  write_atomic(p, "nothing\n");
  CHECK_THROWS_AS(report_passed(p), ConfigError);
  CHECK_THROWS_AS(report_passed((dir / "missing").string()), ConfigError);
  CHECK_THROWS(write_atomic((dir / "no" / "such" / "dir").string(), "x"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("a vanishing configured field surfaces as a case failure or CaseError") {
  ExperimentConfig c;
  c.experiment = ExperimentKind::identity_convergence;
  c.mesh = {"interval", {11, 2}, 1, ""};
  c.field.kind = "plane-wave";  // |f| = 1, fine
  CHECK_NOTHROW(execute(c));
  c.field.kind = "gaussian";
  c.field.width = 1e-3;  // underflows to zero away from the centre
  CHECK_THROWS_AS(execute(c), CaseError);
}
