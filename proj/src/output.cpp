#include "msint/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "msint/errors.hpp"

namespace msint {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& recs,
                           const std::vector<std::string>& selected,
                           const std::optional<Truncation>& trunc) {
  auto has = [&](const char* k) {
    for (const auto& s : selected)
      if (s == k) return true;
    return false;
  };
  using Getter = std::optional<double> (*)(const DiagnosticsRecord&);
  struct Col {
    const char* name;
    Getter get;
    bool err;
  };
  std::vector<Col> cols;
  const bool ham = !recs.empty() && recs.front().H.has_value();
  if (has("E_h")) cols.push_back({"E_h", [](const DiagnosticsRecord& r) -> std::optional<double> { return r.E; }, true});
  if (has("I_h")) cols.push_back({"I_h", [](const DiagnosticsRecord& r) -> std::optional<double> { return r.I; }, true});
  if (has("frakI_h")) cols.push_back({"frakI_h", [](const DiagnosticsRecord& r) -> std::optional<double> { return r.frakI; }, true});
  if (has("H_h") && ham) cols.push_back({"H_h", [](const DiagnosticsRecord& r) { return r.H; }, true});
  if (has("C1")) cols.push_back({"C1", [](const DiagnosticsRecord& r) -> std::optional<double> { return r.C1; }, true});
  if (has("C2")) cols.push_back({"C2", [](const DiagnosticsRecord& r) -> std::optional<double> { return r.C2; }, true});
  if (has("local_laws")) {
    cols.push_back({"local_energy_residual", [](const DiagnosticsRecord& r) { return r.local_energy_residual; }, false});
    cols.push_back({"local_momentum_residual", [](const DiagnosticsRecord& r) { return r.local_momentum_residual; }, false});
  }
  if (has("symplecticity"))
    cols.push_back({"symplecticity", [](const DiagnosticsRecord& r) { return r.symplecticity; }, true});

  std::ofstream out = open_out(path);
  out << "t";
  for (const auto& c : cols) out << "," << c.name;
  for (const auto& c : cols)
    if (c.err) out << ",err_" << c.name;
  out << ",iterations\n";
  auto cell = [](std::optional<double> v) { return v ? fmt_double(*v) : std::string("nan"); };
  for (const auto& r : recs) {
    out << fmt_double(r.t);
    for (const auto& c : cols) out << "," << cell(c.get(r));
    for (const auto& c : cols) {
      if (!c.err) continue;
      const auto v = c.get(r), v0 = c.get(recs.front());
      out << "," << (v && v0 ? fmt_double(std::abs(*v - *v0)) : std::string("nan"));
    }
    out << "," << r.iterations << "\n";
  }
  if (trunc)
    out << "# TRUNCATED after t=" << fmt_double(trunc->last_good_time) << ": " << trunc->message
        << "\n";
}

void write_profile_csv(const std::string& path, const StateField& s,
                       const std::vector<std::pair<std::string, std::string>>& meta) {
  std::ofstream out = open_out(path);
  for (const auto& [k, v] : meta) out << "# " << k << " = " << v << "\n";
  out << "x,eta,u\n";
  for (int j = 0; j < s.grid.n; ++j)
    out << fmt_double(s.grid.x(j)) << "," << fmt_double(s.eta[j]) << "," << fmt_double(s.u[j]) << "\n";
}

StateField read_profile_csv(const std::string& path, const GridSpec& g) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read initial-data file " + path);
  StateField s{g, {}, {}};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("x,", 0) == 0) continue;
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ','))
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected x,eta,u");
    try {
      s.eta.push_back(std::stod(b));
      s.u.push_back(std::stod(c));
    } catch (const std::exception&) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  if (static_cast<int>(s.eta.size()) != g.n)
    throw ConfigError(path + ": has " + std::to_string(s.eta.size()) + " rows, grid has " +
                      std::to_string(g.n) + " nodes");
  return s;
}

void write_dispersion_csv(const std::string& path, const std::vector<DispersionRow>& rows) {
  std::ofstream out = open_out(path);
  out << "p,xi,k,omega_exact,Omega_pred,Omega_measured,residual\n";
  for (const auto& r : rows)
    out << r.p << "," << fmt_double(r.xi) << "," << fmt_double(r.k) << "," << fmt_double(r.omega_exact)
        << "," << fmt_double(r.Omega_pred) << "," << fmt_double(r.Omega_measured) << ","
        << fmt_double(r.residual) << "\n";
}

void write_check_csv(const std::string& path, const std::vector<CheckRow>& rows) {
  std::ofstream out = open_out(path);
  out << "check,value,bound,pass\n";
  for (const auto& r : rows)
    out << r.name << "," << fmt_double(r.value) << "," << fmt_double(r.bound) << ","
        << (r.pass ? "true" : "false") << "\n";
}

void write_convergence_csv(const std::string& path,
                           const std::vector<std::pair<std::string, ConvergenceStudy>>& studies) {
  std::ofstream out = open_out(path);
  out << "study,step,nodes,error,order,slope\n";
  for (const auto& [name, st] : studies)
    for (const auto& r : st.rows)
      out << name << "," << fmt_double(r.step) << "," << r.nodes << "," << fmt_double(r.error) << ","
          << fmt_double(r.order) << "," << fmt_double(st.slope) << "\n";
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
}

}  // namespace msint
