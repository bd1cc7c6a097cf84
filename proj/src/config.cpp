#include "fqsde/config.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "fqsde/builtin.hpp"
#include "fqsde/errors.hpp"

namespace fqsde {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& text, const std::string& key) {
  std::istringstream is(text);
  double v = 0.0;
  if (!(is >> v) || !(is >> std::ws).eof()) throw ConfigError("key '" + key + "' expects a number, got '" + text + "'", key);
  return v;
}

int to_int(const std::string& text, const std::string& key) {
  const double v = to_double(text, key);
  if (v != static_cast<int>(v)) throw ConfigError("key '" + key + "' expects an integer, got '" + text + "'", key);
  return static_cast<int>(v);
}

/// "e1e3" -> mask with bits 0 and 2; "I" -> 0.
Mask parse_monomial(const std::string& label, const std::string& key, int generators) {
  if (label == "I") return 0;
  Mask mask = 0;
  std::size_t i = 0;
  int last = 0;
  while (i < label.size()) {
    if (label[i] != 'e') throw ConfigError("malformed monomial '" + label + "'", key);
    std::size_t j = ++i;
    while (j < label.size() && std::isdigit(static_cast<unsigned char>(label[j]))) ++j;
    if (j == i) throw ConfigError("malformed monomial '" + label + "'", key);
    const int g = std::stoi(label.substr(i, j - i));
    if (g <= last || g > generators)
      throw ConfigError("monomial '" + label + "' needs increasing generator indices in 1.." + std::to_string(generators), key);
    mask |= Mask{1} << (g - 1);
    last = g;
    i = j;
  }
  return mask;
}

Complex to_complex(const std::string& text, const std::string& key) {
  std::istringstream is(text);
  double re = 0.0;
  double im = 0.0;
  if (!(is >> re)) throw ConfigError("key '" + key + "' expects 're [im]'", key);
  if (!(is >> std::ws).eof() && !(is >> im)) throw ConfigError("key '" + key + "' expects 're [im]'", key);
  if (!(is >> std::ws).eof()) throw ConfigError("key '" + key + "' expects 're [im]'", key);
  return {re, im};
}

class Reader {
 public:
  explicit Reader(const ConfigMap& config) : config_(config) {}

  bool has(const std::string& key) const { return config_.count(key) > 0; }
  const std::string* find(const std::string& key) {
    const auto it = config_.find(key);
    if (it == config_.end()) return nullptr;
    used_.insert(key);
    return &it->second;
  }
  double number(const std::string& key, double fallback) {
    const std::string* v = find(key);
    return v ? to_double(*v, key) : fallback;
  }
  int integer(const std::string& key, int fallback) {
    const std::string* v = find(key);
    return v ? to_int(*v, key) : fallback;
  }
  /// Numeric keys under `prefix.` other than the listed ones.
  ParamMap params(const std::string& prefix, const std::set<std::string>& skip) {
    ParamMap out;
    for (const auto& [key, value] : config_) {
      if (key.rfind(prefix + ".", 0) != 0) continue;
      const std::string name = key.substr(prefix.size() + 1);
      if (skip.count(name)) continue;
      used_.insert(key);
      out[name] = to_double(value, key);
    }
    return out;
  }
  void mark(const std::string& key) { used_.insert(key); }
  void reject_unused() const {
    for (const auto& [key, value] : config_)
      if (!used_.count(key)) throw ConfigError("unknown configuration key '" + key + "'", key);
  }

 private:
  const ConfigMap& config_;
  std::set<std::string> used_;
};

TimeGrid read_grid(Reader& r) {
  const double t0 = r.number("grid.t0", 0.0);
  const double T = r.number("grid.T", 1.0);
  const int n = r.integer("grid.n", 8);
  if (const std::string* nodes = r.find("grid.nodes")) {
    std::vector<double> values;
    std::istringstream is(*nodes);
    std::string item;
    while (std::getline(is, item, ',')) values.push_back(to_double(trim(item), "grid.nodes"));
    try {
      return TimeGrid::from_nodes(values);
    } catch (const DomainError& e) {
      throw ConfigError(e.what(), "grid.nodes");
    }
  }
  try {
    return TimeGrid::uniform(t0, T, n);
  } catch (const DomainError& e) {
    throw ConfigError(e.what(), "grid.n");
  }
}

Driver read_driver(Reader& r) {
  const std::string* kind = r.find("driver.kind");
  Driver d;
  d.kind = kind ? parse_driver_kind(*kind) : DriverKind::FermionField;
  const bool linear = d.kind == DriverKind::LinearCombination;
  for (const char* key : {"driver.alpha1.re", "driver.alpha1.im", "driver.alpha2.re", "driver.alpha2.im"})
    if (!linear && r.has(key)) throw ConfigError("key '" + std::string(key) + "' needs driver.kind = linear", key);
  if (linear) {
    d.alpha1 = {r.number("driver.alpha1.re", 1.0), r.number("driver.alpha1.im", 0.0)};
    d.alpha2 = {r.number("driver.alpha2.re", 0.0), r.number("driver.alpha2.im", 0.0)};
  }
  return d;
}

}  // namespace

ConfigMap parse_config(const std::string& text) {
  ConfigMap out;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'", trim(line));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key", "");
    if (value.empty()) throw ConfigError("key '" + key + "' has no value", key);
    if (!out.emplace(key, value).second) throw ConfigError("key '" + key + "' is given twice", key);
  }
  return out;
}

ConfigMap read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'", path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

ProblemConfig build_problem_config(const ConfigMap& config) {
  Reader r(config);
  const TimeGrid grid = read_grid(r);
  const Driver driver = read_driver(r);
  const double p = r.number("p", 4.0);
  if (!(p > 2.0)) throw ConfigError("exponent p must exceed 2", "p");

  std::optional<QsdeProblem> base;
  if (const std::string* name = r.find("problem")) {
    if (!grid.is_uniform()) throw ConfigError("a built-in problem needs a uniform grid", "grid.nodes");
    base = make_builtin_problem(*name, BuiltinOptions{grid.n(), grid.t0(), grid.T(), driver, p});
  }
  const SpacePtr space = base ? base->space : make_space(grid, driver.layout());
  QsdeProblem problem = base ? *base : QsdeProblem(space, CliffordElement::identity(space));
  problem.driver = driver;
  problem.p = p;

  for (const char* c : {"F", "G", "H"}) {
    const std::string prefix = std::string(c) + ".";
    const std::string* name = r.find(prefix + "name");
    ParamMap params = r.params(c, {"name"});
    if (!name) {
      if (!params.empty()) throw ConfigError("parameters for " + std::string(c) + " need " + prefix + "name", prefix + params.begin()->first);
      continue;
    }
    CoefficientMap m = make_coefficient(*name, params, p, prefix);
    (c[0] == 'F' ? problem.F : c[0] == 'G' ? problem.G : problem.H) = std::move(m);
  }

  if (const std::string* rname = r.find("R.name")) {
    const double c = r.number("R.contraction", 0.0);
    ParamMap params;
    if (const std::string* s = r.find("R.shift")) params["shift"] = to_double(*s, "R.shift");
    problem.R = make_nonlocal(*rname, c, params, "R.");
  } else {
    for (const char* key : {"R.contraction", "R.shift"})
      if (r.has(key)) throw ConfigError("key '" + std::string(key) + "' needs R.name", key);
  }
  if (const std::string* mode = r.find("R.mode")) {
    if (*mode == "pointwise")
      problem.mode = NonlocalMode::Pointwise;
    else if (*mode == "initial")
      problem.mode = NonlocalMode::InitialOnly;
    else
      throw ConfigError("R.mode must be 'pointwise' or 'initial'", "R.mode");
  }

  bool z_given = false;
  Matrix z = Matrix::Zero(space->dim(), space->dim());
  for (const auto& [key, value] : config) {
    if (key.rfind("Z.", 0) != 0) continue;
    r.mark(key);
    const Mask s = parse_monomial(key.substr(2), key, space->generator_count());
    if (s != 0) throw ConfigError("Z must lie in the initial algebra; '" + key + "' is not scalar", key);
    z += to_complex(value, key) * space->monomial(s);
    z_given = true;
  }
  if (z_given) problem.Z = CliffordElement(space, z);

  ProblemConfig out{problem, {}};
  out.options.tol = r.number("solve.tol", out.options.tol);
  out.options.max_outer = r.integer("solve.max_outer", out.options.max_outer);
  out.options.max_inner = r.integer("solve.max_inner", out.options.max_inner);
  if (!(out.options.tol > 0.0)) throw ConfigError("solve.tol must be positive", "solve.tol");
  if (out.options.max_outer < 1) throw ConfigError("solve.max_outer must be at least 1", "solve.max_outer");
  if (out.options.max_inner < 1) throw ConfigError("solve.max_inner must be at least 1", "solve.max_inner");
  r.reject_unused();
  out.problem.validate();
  return out;
}

}  // namespace fqsde
