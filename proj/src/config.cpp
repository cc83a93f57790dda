#include "msint/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "msint/errors.hpp"

namespace msint {

std::string to_string(InitialKind k) {
  switch (k) {
    case InitialKind::Solitary: return "solitary";
    case InitialKind::Gaussian: return "gaussian";
    case InitialKind::PlaneWave: return "plane_wave";
    case InitialKind::SymmetricRandom: return "symmetric_random";
    case InitialKind::File: return "file";
  }
  return "?";
}

double parse_number(const std::string& s) {
  auto one = [&](const std::string& t) {
    size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(t, &pos);
    } catch (const std::exception&) {
      throw ConfigError("not a number: '" + s + "'");
    }
    while (pos < t.size() && std::isspace(static_cast<unsigned char>(t[pos]))) ++pos;
    if (pos != t.size()) throw ConfigError("not a number: '" + s + "'");
    return v;
  };
  const auto slash = s.find('/');
  if (slash == std::string::npos) return one(s);
  const double den = one(s.substr(slash + 1));
  if (den == 0) throw ConfigError("zero denominator in '" + s + "'");
  return one(s.substr(0, slash)) / den;
}

namespace {

[[noreturn]] void fail(const YAML::Node& n, const std::string& msg) {
  const auto mk = n.Mark();
  if (mk.is_null()) throw ConfigError(msg);
  throw ConfigError("line " + std::to_string(mk.line + 1) + ": " + msg);
}

void check_keys(const YAML::Node& n, const std::string& block,
                std::initializer_list<const char*> allowed) {
  if (!n.IsMap()) fail(n, block + " must be a mapping");
  for (const auto& kv : n) {
    const std::string k = kv.first.as<std::string>();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
      fail(kv.first, "unknown key '" + k + "' in " + block);
  }
}

double num(const YAML::Node& n, const std::string& what) {
  if (!n.IsScalar()) fail(n, what + " must be a number");
  try {
    const double v = parse_number(n.as<std::string>());
    if (!std::isfinite(v)) fail(n, what + " must be finite");
    return v;
  } catch (const ConfigError& e) {
    fail(n, what + ": " + e.what());
  }
}

long long integer(const YAML::Node& n, const std::string& what) {
  const double v = num(n, what);
  if (v != std::floor(v) || std::abs(v) > 9e15) fail(n, what + " must be an integer");
  return static_cast<long long>(v);
}

std::string str(const YAML::Node& n, const std::string& what) {
  if (!n.IsScalar()) fail(n, what + " must be a string");
  return n.as<std::string>();
}

bool boolean(const YAML::Node& n, const std::string& what) {
  const std::string s = str(n, what);
  if (s == "true") return true;
  if (s == "false") return false;
  fail(n, what + " must be true or false");
}

std::vector<double> num_list(const YAML::Node& n, const std::string& what, size_t len = 0) {
  if (!n.IsSequence()) fail(n, what + " must be a list");
  if (len && n.size() != len) fail(n, what + " must have " + std::to_string(len) + " entries");
  std::vector<double> v;
  for (const auto& e : n) v.push_back(num(e, what));
  return v;
}

void parse_model(const YAML::Node& n, RunConfig& c) {
  check_keys(n, "model", {"a", "b", "c", "d", "generators", "alpha", "beta", "nonlinearity"});
  ModelCoefficients& m = c.model;
  if (n["generators"]) {
    const YAML::Node g = n["generators"];
    check_keys(g, "model.generators", {"theta", "nu", "mu"});
    for (const char* k : {"theta", "nu", "mu"})
      if (!g[k]) fail(g, std::string("model.generators.") + k + " is required");
    try {
      m = coefficients_from_generators(num(g["theta"], "theta"), num(g["nu"], "nu"),
                                       num(g["mu"], "mu"));
    } catch (const DomainError& e) {
      fail(g, std::string("model.generators: ") + e.what());
    }
  }
  if (n["a"]) m.a = num(n["a"], "model.a");
  if (n["b"]) m.b = num(n["b"], "model.b");
  if (n["c"]) m.c = num(n["c"], "model.c");
  if (n["d"]) m.d = num(n["d"], "model.d");
  if (n["nonlinearity"]) {
    if (n["alpha"] || n["beta"]) fail(n["nonlinearity"], "give either nonlinearity or alpha/beta");
    const std::string s = str(n["nonlinearity"], "model.nonlinearity");
    if (s == "reference")
      m = with_reference_nonlinearity(m);
    else if (s == "hamiltonian")
      m = with_hamiltonian_nonlinearity(m);
    else if (s != "none")
      fail(n["nonlinearity"], "model.nonlinearity must be reference, hamiltonian or none");
  }
  if (n["alpha"]) {
    const auto v = num_list(n["alpha"], "model.alpha", 3);
    m.alpha11 = v[0], m.alpha12 = v[1], m.alpha22 = v[2];
  }
  if (n["beta"]) {
    const auto v = num_list(n["beta"], "model.beta", 3);
    m.beta11 = v[0], m.beta12 = v[1], m.beta22 = v[2];
  }
  try {
    validate(m);
  } catch (const DomainError& e) {
    fail(n, std::string("model: ") + e.what());
  }
}

void parse_grid(const YAML::Node& n, RunConfig& c) {
  check_keys(n, "grid", {"x0", "length", "nodes"});
  if (!n["length"] || !n["nodes"]) fail(n, "grid.length and grid.nodes are required");
  const double x0 = n["x0"] ? num(n["x0"], "grid.x0") : 0.0;
  const double len = num(n["length"], "grid.length");
  const long long nodes = integer(n["nodes"], "grid.nodes");
  if (nodes > (1 << 24)) fail(n["nodes"], "grid.nodes is too large");
  try {
    c.grid = make_grid(x0, len, static_cast<int>(nodes));
  } catch (const DomainError& e) {
    fail(n, std::string("grid: ") + e.what());
  }
}

void parse_scheme(const YAML::Node& n, RunConfig& c) {
  check_keys(n, "scheme", {"kind", "operator", "dt", "t_end", "fp_tol", "fp_max_iters"});
  SchemeConfig& s = c.scheme;
  if (n["kind"]) {
    const std::string k = str(n["kind"], "scheme.kind");
    if (k == "imr_reduced")
      s.kind = SchemeKind::ImrReduced;
    else if (k == "imr_full")
      s.kind = SchemeKind::ImrFull;
    else if (k == "box")
      s.kind = SchemeKind::PreissmanBox;
    else
      fail(n["kind"], "scheme.kind must be imr_reduced, imr_full or box");
  }
  if (n["operator"]) {
    const std::string o = str(n["operator"], "scheme.operator");
    if (o == "spectral")
      s.op = OperatorChoice::Spectral;
    else if (o == "central")
      s.op = OperatorChoice::CentralDiff;
    else
      fail(n["operator"], "scheme.operator must be spectral or central");
  }
  if (n["dt"]) s.dt = num(n["dt"], "scheme.dt");
  if (n["t_end"]) c.t_end = num(n["t_end"], "scheme.t_end");
  if (n["fp_tol"]) s.fp_tol = num(n["fp_tol"], "scheme.fp_tol");
  if (n["fp_max_iters"]) s.fp_max_iters = static_cast<int>(integer(n["fp_max_iters"], "scheme.fp_max_iters"));
  try {
    validate(s);
  } catch (const ConfigError& e) {
    fail(n, e.what());
  }
  if (!(c.t_end >= 0)) fail(n, "scheme.t_end must be >= 0");
}

void parse_initial(const YAML::Node& n, RunConfig& c, const std::string& base_dir) {
  check_keys(n, "initial", {"kind", "c_s", "tol", "max_newton", "amplitude", "A", "width",
                            "center", "mode", "seed", "decay", "path", "remove_mean"});
  InitialBlock& b = c.initial;
  if (!n["kind"]) fail(n, "initial.kind is required");
  const std::string k = str(n["kind"], "initial.kind");
  std::set<std::string> allowed{"kind", "remove_mean"};
  if (k == "solitary") {
    b.kind = InitialKind::Solitary;
    allowed.insert({"c_s", "tol", "max_newton", "amplitude"});
  } else if (k == "gaussian") {
    b.kind = InitialKind::Gaussian;
    allowed.insert({"A", "width", "center"});
  } else if (k == "plane_wave") {
    b.kind = InitialKind::PlaneWave;
    allowed.insert({"A", "mode"});
  } else if (k == "symmetric_random") {
    b.kind = InitialKind::SymmetricRandom;
    allowed.insert({"seed", "decay", "amplitude"});
  } else if (k == "file") {
    b.kind = InitialKind::File;
    allowed.insert({"path"});
  } else {
    fail(n["kind"], "initial.kind must be solitary, gaussian, plane_wave, symmetric_random or file");
  }
  for (const auto& kv : n) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) fail(kv.first, "key '" + key + "' does not apply to initial.kind " + k);
  }
  if (n["c_s"]) b.c_s = num(n["c_s"], "initial.c_s");
  if (n["tol"]) b.tol = num(n["tol"], "initial.tol");
  if (n["max_newton"]) b.max_newton = static_cast<int>(integer(n["max_newton"], "initial.max_newton"));
  if (n["amplitude"]) b.amplitude = num(n["amplitude"], "initial.amplitude");
  if (n["A"]) b.A = num(n["A"], "initial.A");
  if (n["width"]) b.width = num(n["width"], "initial.width");
  if (n["center"]) b.center = num(n["center"], "initial.center");
  if (n["mode"]) b.mode = static_cast<int>(integer(n["mode"], "initial.mode"));
  if (n["seed"]) {
    const long long s = integer(n["seed"], "initial.seed");
    if (s < 0) fail(n["seed"], "initial.seed must be >= 0");
    b.seed = static_cast<unsigned long long>(s);
  }
  if (n["decay"]) b.decay = num(n["decay"], "initial.decay");
  if (n["remove_mean"]) b.remove_mean = boolean(n["remove_mean"], "initial.remove_mean");
  if (b.kind == InitialKind::Solitary) {
    if (b.c_s == 0) fail(n, "initial.c_s must be nonzero");
    if (!(b.tol > 0) || b.max_newton < 1) fail(n, "initial.tol must be > 0 and max_newton >= 1");
  }
  if (b.kind == InitialKind::Gaussian && !(b.width > 0)) fail(n, "initial.width must be > 0");
  if (b.kind == InitialKind::SymmetricRandom && !(b.decay > 0)) fail(n, "initial.decay must be > 0");
  if (b.kind == InitialKind::File) {
    if (!n["path"]) fail(n, "initial.path is required for kind file");
    std::filesystem::path p = str(n["path"], "initial.path");
    if (p.is_relative()) p = (std::filesystem::path(base_dir) / p).lexically_normal();
    if (!std::filesystem::is_regular_file(p)) fail(n["path"], "initial.path does not exist: " + p.string());
    b.path = p.string();
  }
}

void parse_output(const YAML::Node& n, RunConfig& c) {
  check_keys(n, "output", {"dir", "stride", "diagnostics"});
  OutputBlock& o = c.output;
  if (n["dir"]) o.dir = str(n["dir"], "output.dir");
  if (n["stride"]) {
    const long long s = integer(n["stride"], "output.stride");
    if (s < 1) fail(n["stride"], "output.stride must be >= 1");
    o.stride = static_cast<int>(s);
  }
  if (n["diagnostics"]) {
    const YAML::Node d = n["diagnostics"];
    if (!d.IsSequence()) fail(d, "output.diagnostics must be a list");
    static const std::set<std::string> known{"E_h", "I_h",       "frakI_h",   "H_h",
                                             "C1",  "C2",        "local_laws", "symplecticity"};
    o.diagnostics.clear();
    for (const auto& e : d) {
      const std::string s = str(e, "output.diagnostics entry");
      if (!known.count(s)) fail(e, "unknown diagnostic '" + s + "'");
      o.diagnostics.push_back(s);
    }
  }
}

void parse_dispersion(const YAML::Node& n, RunConfig& c) {
  check_keys(n, "dispersion", {"modes", "steps"});
  DispersionBlock& d = c.dispersion;
  if (n["modes"]) {
    d.modes.clear();
    if (n["modes"].IsSequence()) {
      for (const auto& e : n["modes"]) d.modes.push_back(static_cast<int>(integer(e, "dispersion.modes")));
    } else {
      const long long k = integer(n["modes"], "dispersion.modes");
      if (k < 1) fail(n["modes"], "dispersion.modes must be >= 1");
      for (int p = 1; p <= k; ++p) d.modes.push_back(p);
    }
    for (int p : d.modes)
      if (p < 0) fail(n["modes"], "dispersion.modes must be >= 0");
  }
  if (n["steps"]) {
    d.steps = static_cast<int>(integer(n["steps"], "dispersion.steps"));
    if (d.steps < 1) fail(n["steps"], "dispersion.steps must be >= 1");
  }
}

void parse_convergence(const YAML::Node& n, RunConfig& c) {
  check_keys(n, "convergence", {"time_steps", "reference_dt", "t_end", "nodes", "reference_nodes"});
  ConvergenceBlock& v = c.convergence;
  if (n["time_steps"]) v.time_steps = num_list(n["time_steps"], "convergence.time_steps");
  if (n["reference_dt"]) v.reference_dt = num(n["reference_dt"], "convergence.reference_dt");
  if (n["t_end"]) v.t_end = num(n["t_end"], "convergence.t_end");
  if (n["nodes"]) {
    v.nodes.clear();
    for (double x : num_list(n["nodes"], "convergence.nodes")) v.nodes.push_back(static_cast<int>(x));
  }
  if (n["reference_nodes"]) v.reference_nodes = static_cast<int>(integer(n["reference_nodes"], "convergence.reference_nodes"));
  for (double dt : v.time_steps)
    if (!(dt > 0)) fail(n, "convergence.time_steps must be > 0");
  if (!(v.reference_dt > 0) || !(v.t_end > 0)) fail(n, "convergence.reference_dt and t_end must be > 0");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quote(const std::string& s) {
  std::string r = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') r += '\\';
    r += ch;
  }
  return r + "\"";
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("line " + std::to_string(e.mark.line + 1) + ": syntax error: " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError("config must be a mapping at top level");
  check_keys(root, "config", {"model", "grid", "scheme", "initial", "output", "tangent",
                              "dispersion", "convergence"});
  if (!root["model"]) throw ConfigError("model block is required");
  if (!root["grid"]) throw ConfigError("grid block is required");
  RunConfig c;
  parse_model(root["model"], c);
  parse_grid(root["grid"], c);
  if (root["scheme"]) parse_scheme(root["scheme"], c);
  if (root["initial"]) parse_initial(root["initial"], c, base_dir);
  if (root["output"]) parse_output(root["output"], c);
  if (root["tangent"]) {
    const YAML::Node t = root["tangent"];
    TangentBlock tb;
    if (!t.IsNull()) {
      check_keys(t, "tangent", {"seed"});
      if (t["seed"]) {
        const long long s = integer(t["seed"], "tangent.seed");
        if (s < 0) fail(t["seed"], "tangent.seed must be >= 0");
        tb.seed = static_cast<unsigned long long>(s);
      }
    }
    c.tangent = tb;
  }
  if (c.dispersion.modes.empty())
    for (int p = 1; p <= 32; ++p) c.dispersion.modes.push_back(p);
  if (root["dispersion"]) parse_dispersion(root["dispersion"], c);
  if (root["convergence"]) parse_convergence(root["convergence"], c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_config(ss.str(), dir.empty() ? "." : dir.string());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream o;
  const auto& m = c.model;
  o << "model:\n";
  o << "  a: " << fmt(m.a) << "\n  b: " << fmt(m.b) << "\n  c: " << fmt(m.c) << "\n  d: " << fmt(m.d)
    << "\n";
  if (m.generators)
    o << "  generators: {theta: " << fmt(m.generators->theta) << ", nu: " << fmt(m.generators->nu)
      << ", mu: " << fmt(m.generators->mu) << "}\n";
  o << "  alpha: [" << fmt(m.alpha11) << ", " << fmt(m.alpha12) << ", " << fmt(m.alpha22) << "]\n";
  o << "  beta: [" << fmt(m.beta11) << ", " << fmt(m.beta12) << ", " << fmt(m.beta22) << "]\n";
  o << "grid:\n  x0: " << fmt(c.grid.x0) << "\n  length: " << fmt(c.grid.length)
    << "\n  nodes: " << c.grid.n << "\n";
  o << "scheme:\n  kind: " << to_string(c.scheme.kind) << "\n  operator: " << to_string(c.scheme.op)
    << "\n  dt: " << fmt(c.scheme.dt) << "\n  t_end: " << fmt(c.t_end)
    << "\n  fp_tol: " << fmt(c.scheme.fp_tol) << "\n  fp_max_iters: " << c.scheme.fp_max_iters << "\n";
  const auto& b = c.initial;
  o << "initial:\n  kind: " << to_string(b.kind) << "\n";
  switch (b.kind) {
    case InitialKind::Solitary:
      o << "  c_s: " << fmt(b.c_s) << "\n  tol: " << fmt(b.tol) << "\n  max_newton: " << b.max_newton
        << "\n";
      if (b.amplitude) o << "  amplitude: " << fmt(*b.amplitude) << "\n";
      break;
    case InitialKind::Gaussian:
      o << "  A: " << fmt(b.A) << "\n  width: " << fmt(b.width) << "\n";
      if (b.center) o << "  center: " << fmt(*b.center) << "\n";
      break;
    case InitialKind::PlaneWave: o << "  A: " << fmt(b.A) << "\n  mode: " << b.mode << "\n"; break;
    case InitialKind::SymmetricRandom:
      o << "  seed: " << b.seed << "\n  decay: " << fmt(b.decay) << "\n";
      if (b.amplitude) o << "  amplitude: " << fmt(*b.amplitude) << "\n";
      break;
    case InitialKind::File: o << "  path: " << quote(b.path) << "\n"; break;
  }
  o << "  remove_mean: " << (b.remove_mean ? "true" : "false") << "\n";
  o << "output:\n  dir: " << quote(c.output.dir) << "\n  stride: " << c.output.stride
    << "\n  diagnostics: [";
  for (size_t i = 0; i < c.output.diagnostics.size(); ++i)
    o << (i ? ", " : "") << c.output.diagnostics[i];
  o << "]\n";
  if (c.tangent) o << "tangent:\n  seed: " << c.tangent->seed << "\n";
  o << "dispersion:\n  modes: [";
  for (size_t i = 0; i < c.dispersion.modes.size(); ++i) o << (i ? ", " : "") << c.dispersion.modes[i];
  o << "]\n  steps: " << c.dispersion.steps << "\n";
  const auto& v = c.convergence;
  o << "convergence:\n  time_steps: [";
  for (size_t i = 0; i < v.time_steps.size(); ++i) o << (i ? ", " : "") << fmt(v.time_steps[i]);
  o << "]\n  reference_dt: " << fmt(v.reference_dt) << "\n  t_end: " << fmt(v.t_end) << "\n  nodes: [";
  for (size_t i = 0; i < v.nodes.size(); ++i) o << (i ? ", " : "") << v.nodes[i];
  o << "]\n  reference_nodes: " << v.reference_nodes << "\n";
  return o.str();
}

}  // namespace msint
