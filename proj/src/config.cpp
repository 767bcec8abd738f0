#include "schrolab/config.hpp"

#include "schrolab/errors.hpp"
#include "schrolab/format.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace schrolab {

namespace {

const std::vector<std::pair<ExperimentKind, std::string>> kExperiments = {
    {ExperimentKind::identity_convergence, "identity-convergence"},
    {ExperimentKind::theorem1, "theorem1"},
    {ExperimentKind::theorem2, "theorem2"},
    {ExperimentKind::counterexample, "counterexample"},
    {ExperimentKind::cutoff_limit, "cutoff-limit"},
    {ExperimentKind::balance_fuzz, "balance-fuzz"},
};

// Generator name -> number of positional parameters.
const std::map<std::string, std::size_t> kGenerators = {
    {"circle", 2}, {"interval", 2}, {"disk", 2},      {"annulus", 3}, {"torus", 4},
    {"strip", 4},  {"two-disks", 3}, {"file", 0},     {"all", 0},
};

const std::vector<std::string> kFieldKinds = {"random", "plane-wave", "smooth", "gaussian", "ground-state", "file"};
const std::vector<std::string> kPotentialKinds = {"constant", "bump", "inverse-design-from-field", "file"};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

double to_double(const std::string& t, const std::string& key, int line) {
  double x = 0.0;
  if (!parse_double(t, x)) throw ConfigError(key + ": expected a number, got '" + t + "'", line);
  return x;
}

std::vector<double> to_doubles(const std::string& v, const std::string& key, int line, std::size_t count) {
  std::vector<double> out;
  for (const auto& t : tokens(v)) out.push_back(to_double(t, key, line));
  if (count > 0 && out.size() != count)
    throw ConfigError(key + ": expected " + std::to_string(count) + " numbers", line);
  return out;
}

double to_single(const std::string& v, const std::string& key, int line) { return to_doubles(v, key, line, 1)[0]; }

double to_positive(const std::string& v, const std::string& key, int line) {
  const double x = to_single(v, key, line);
  if (!(x > 0.0)) throw ConfigError(key + ": must be positive", line);
  return x;
}

int to_count(const std::string& v, const std::string& key, int line) {
  long long x = 0;
  if (!parse_int(v, x) || x < 1 || x > 1000000000) throw ConfigError(key + ": expected a positive integer", line);
  return static_cast<int>(x);
}

std::string to_choice(const std::string& v, const std::string& key, int line, const std::vector<std::string>& allowed) {
  if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    throw ConfigError(key + ": '" + v + "' is not one of " + list, line);
  }
  return v;
}

std::array<double, 2> to_pair(const std::string& v, const std::string& key, int line) {
  const auto x = to_doubles(v, key, line, 2);
  return {x[0], x[1]};
}

std::string print(double x) { return format_exact(x); }
std::string print(const std::array<double, 2>& p) { return format_exact(p[0]) + " " + format_exact(p[1]); }
std::string print(const std::vector<double>& xs) {
  std::string s;
  for (double x : xs) s += (s.empty() ? "" : " ") + format_exact(x);
  return s;
}

struct Binding {
  std::string section;
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&, int)> parse;
  std::function<std::string(const ExperimentConfig&)> print;
};

const std::vector<Binding>& bindings() {
  static const std::vector<Binding> table = [] {
    std::vector<Binding> b;
    auto add = [&](std::string s, std::string k, auto p, auto w) { b.push_back({std::move(s), std::move(k), p, w}); };
    using C = ExperimentConfig;
    using S = const std::string&;

    add("experiment", "id", [](C& c, S v, int l) {
          try {
            c.experiment = parse_experiment_name(v);
          } catch (const ConfigError& e) {
            throw ConfigError(std::string("id: ") + e.what(), l);
          }
        },
        [](const C& c) { return experiment_name(c.experiment); });
    add("experiment", "seed", [](C& c, S v, int l) {
          const auto r = std::from_chars(v.data(), v.data() + v.size(), c.seed);
          if (v.empty() || r.ec != std::errc() || r.ptr != v.data() + v.size())
            throw ConfigError("seed: expected an unsigned integer", l);
        },
        [](const C& c) { return std::to_string(c.seed); });
    add("experiment", "cases", [](C& c, S v, int l) { c.cases = to_count(v, "cases", l); },
        [](const C& c) { return std::to_string(c.cases); });

    add("mesh", "generator", [](C& c, S v, int l) {
          if (!kGenerators.count(v)) throw ConfigError("generator: unknown generator '" + v + "'", l);
          c.mesh.generator = v;
        },
        [](const C& c) { return c.mesh.generator; });
    add("mesh", "params", [](C& c, S v, int l) { c.mesh.params = to_doubles(v, "params", l, 0); },
        [](const C& c) { return print(c.mesh.params); });
    add("mesh", "levels", [](C& c, S v, int l) { c.mesh.levels = to_count(v, "levels", l); },
        [](const C& c) { return std::to_string(c.mesh.levels); });
    add("mesh", "path", [](C& c, S v, int) { c.mesh.path = v; }, [](const C& c) { return c.mesh.path; });

    add("field", "kind", [](C& c, S v, int l) { c.field.kind = to_choice(v, "kind", l, kFieldKinds); },
        [](const C& c) { return c.field.kind; });
    add("field", "wave", [](C& c, S v, int l) { c.field.wave = to_pair(v, "wave", l); },
        [](const C& c) { return print(c.field.wave); });
    add("field", "center", [](C& c, S v, int l) { c.field.center = to_pair(v, "center", l); },
        [](const C& c) { return print(c.field.center); });
    add("field", "width", [](C& c, S v, int l) { c.field.width = to_positive(v, "width", l); },
        [](const C& c) { return print(c.field.width); });
    add("field", "chirp", [](C& c, S v, int l) { c.field.chirp = to_single(v, "chirp", l); },
        [](const C& c) { return print(c.field.chirp); });
    add("field", "shift", [](C& c, S v, int l) { c.field.shift = to_single(v, "shift", l); },
        [](const C& c) { return print(c.field.shift); });
    add("field", "path", [](C& c, S v, int) { c.field.path = v; }, [](const C& c) { return c.field.path; });

    add("potential", "kind", [](C& c, S v, int l) { c.potential.kind = to_choice(v, "kind", l, kPotentialKinds); },
        [](const C& c) { return c.potential.kind; });
    add("potential", "value", [](C& c, S v, int l) {
          const auto p = to_pair(v, "value", l);
          c.potential.value = {p[0], p[1]};
        },
        [](const C& c) { return print(std::array<double, 2>{c.potential.value.real(), c.potential.value.imag()}); });
    add("potential", "center", [](C& c, S v, int l) { c.potential.center = to_pair(v, "center", l); },
        [](const C& c) { return print(c.potential.center); });
    add("potential", "radius", [](C& c, S v, int l) { c.potential.radius = to_positive(v, "radius", l); },
        [](const C& c) { return print(c.potential.radius); });
    add("potential", "path", [](C& c, S v, int) { c.potential.path = v; }, [](const C& c) { return c.potential.path; });

    add("cutoff", "center", [](C& c, S v, int l) { c.cutoff.center = to_pair(v, "center", l); },
        [](const C& c) { return print(c.cutoff.center); });
    add("cutoff", "ramp_width", [](C& c, S v, int l) { c.cutoff.ramp_width = to_positive(v, "ramp_width", l); },
        [](const C& c) { return print(c.cutoff.ramp_width); });
    add("cutoff", "plateaus", [](C& c, S v, int l) {
          c.cutoff.plateaus = to_doubles(v, "plateaus", l, 0);
          if (c.cutoff.plateaus.empty()) throw ConfigError("plateaus: need at least one radius", l);
          for (double p : c.cutoff.plateaus)
            if (!(p >= 0.0)) throw ConfigError("plateaus: radii must be non-negative", l);
        },
        [](const C& c) { return print(c.cutoff.plateaus); });

    auto tol = [&](const char* key, double Tolerances::*member) {
      add("tolerances", key, [key, member](C& c, S v, int l) { c.tolerances.*member = to_positive(v, key, l); },
          [member](const C& c) { return print(c.tolerances.*member); });
    };
    tol("roundoff", &Tolerances::roundoff);
    tol("balance", &Tolerances::balance);
    tol("discretization", &Tolerances::discretization);
    tol("order", &Tolerances::order);
    tol("order_band", &Tolerances::order_band);
    tol("spectral", &Tolerances::spectral);
    tol("vanishing", &Tolerances::vanishing);
    tol("phase", &Tolerances::phase);
    tol("energy", &Tolerances::energy);
    tol("branch_margin", &Tolerances::branch_margin);

    add("output", "directory", [](C& c, S v, int l) {
          if (v.empty()) throw ConfigError("directory: must not be empty", l);
          c.output.directory = v;
        },
        [](const C& c) { return c.output.directory; });
    add("output", "report", [](C& c, S v, int) { c.output.report = v; }, [](const C& c) { return c.output.report; });
    add("output", "csv", [](C& c, S v, int) { c.output.csv = v; }, [](const C& c) { return c.output.csv; });
    return b;
  }();
  return table;
}

}  // namespace

std::string experiment_name(ExperimentKind kind) {
  for (const auto& [k, name] : kExperiments)
    if (k == kind) return name;
  throw InvalidArgument("experiment_name: unknown kind");
}

ExperimentKind parse_experiment_name(const std::string& name) {
  for (const auto& [k, n] : kExperiments)
    if (n == name) return k;
  throw ConfigError("unknown experiment '" + name + "'");
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::map<std::string, int> seen;  // "section.key" -> line
  std::string section;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError("malformed section header", line);
      section = trim(text.substr(1, text.size() - 2));
      const bool known = std::any_of(bindings().begin(), bindings().end(),
                                     [&](const Binding& b) { return b.section == section; });
      if (!known) throw ConfigError("unknown section [" + section + "]", line);
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    if (section.empty()) throw ConfigError("key outside of any section", line);
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    const auto it = std::find_if(bindings().begin(), bindings().end(),
                                 [&](const Binding& b) { return b.section == section && b.key == key; });
    if (it == bindings().end()) throw ConfigError("unknown key '" + key + "' in [" + section + "]", line);
    if (!seen.emplace(section + "." + key, line).second) throw ConfigError("duplicate key '" + key + "'", line);
    it->parse(c, value, line);
  }
  if (!seen.count("experiment.id")) throw ConfigError("missing [experiment] id", line > 0 ? line : 1);

  const auto params_line = seen.count("mesh.params") ? seen["mesh.params"] : seen.count("mesh.generator") ? seen["mesh.generator"] : 1;
  const std::size_t arity = kGenerators.at(c.mesh.generator);
  if (arity > 0 && c.mesh.params.size() != arity)
    throw ConfigError("params: generator '" + c.mesh.generator + "' takes " + std::to_string(arity) + " numbers",
                      params_line);
  if (c.mesh.generator == "file" && c.mesh.path.empty()) throw ConfigError("mesh: generator 'file' needs a path", params_line);
  if (c.mesh.generator == "all" && c.experiment != ExperimentKind::balance_fuzz)
    throw ConfigError("mesh: generator 'all' is only valid for balance-fuzz", params_line);
  if (c.experiment == ExperimentKind::counterexample && c.mesh.generator != "circle")
    throw ConfigError("counterexample: mesh generator must be circle", params_line);
  if (c.experiment == ExperimentKind::counterexample && c.mesh.params[1] != 1.0)
    throw ConfigError("counterexample: the circle radius must be 1", params_line);
  return c;
}

ExperimentConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string serialize_config(const ExperimentConfig& config) {
  std::string out;
  std::string section;
  for (const auto& b : bindings()) {
    if (b.section != section) {
      if (!section.empty()) out += "\n";
      section = b.section;
      out += "[" + section + "]\n";
    }
    const std::string v = b.print(config);
    out += b.key + (v.empty() ? " =" : " = " + v) + "\n";
  }
  return out;
}

}  // namespace schrolab
