#include "msint/convergence.hpp"

#include <cmath>

#include "msint/errors.hpp"

namespace msint {

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  if (n < 2 || y.size() != n) throw InsufficientDataError("slope fit needs at least 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

StateField advance(const StateField& s, const SemiDiscreteSystem& sys, const SchemeConfig& c,
                   double t_end) {
  RunOptions o;
  o.t_end = t_end;
  o.sample_every = 1 << 30;
  const Trajectory tr = run(s, sys, c, o);
  if (tr.failed) throw StepFailure("convergence run failed: " + tr.message, 0, 0);
  return tr.final_state;
}

double sup_error(const StateField& a, const StateField& ref, int stride) {
  double e = 0;
  for (size_t j = 0; j < a.eta.size(); ++j) {
    e = std::max(e, std::abs(a.eta[j] - ref.eta[j * stride]));
    e = std::max(e, std::abs(a.u[j] - ref.u[j * stride]));
  }
  return e;
}

void fill_orders(ConvergenceStudy& st) {
  std::vector<double> x, y;
  for (size_t i = 0; i < st.rows.size(); ++i) {
    if (i > 0)
      st.rows[i].order = std::log(st.rows[i - 1].error / st.rows[i].error) /
                         std::log(st.rows[i - 1].step / st.rows[i].step);
    x.push_back(st.rows[i].step);
    y.push_back(st.rows[i].error);
  }
  st.slope = loglog_slope(x, y);
}

}  // namespace

ConvergenceStudy time_convergence(const StateField& initial, const SemiDiscreteSystem& sys,
                                  SchemeConfig scheme, double t_end,
                                  const std::vector<double>& dts, double reference_dt) {
  for (double dt : dts) {
    const double r = dt / reference_dt;
    if (std::abs(r - std::round(r)) > 1e-9 || std::abs(t_end / dt - std::round(t_end / dt)) > 1e-9)
      throw DomainError("time steps must be multiples of reference_dt and divide t_end");
  }
  scheme.dt = reference_dt;
  const StateField ref = advance(initial, sys, scheme, t_end);
  ConvergenceStudy st;
  for (double dt : dts) {
    scheme.dt = dt;
    st.rows.push_back({dt, sys.n(), sup_error(advance(initial, sys, scheme, t_end), ref, 1), 0});
  }
  fill_orders(st);
  return st;
}

ConvergenceStudy space_convergence(const ModelCoefficients& m, double x0, double length,
                                   const std::vector<int>& nodes, int reference_nodes,
                                   OperatorChoice op, SchemeConfig scheme, double t_end,
                                   const InitialFactory& init) {
  scheme.kind = SchemeKind::ImrReduced;
  SchemeConfig ref_scheme = scheme;
  ref_scheme.op = OperatorChoice::Spectral;
  const GridSpec gref = make_grid(x0, length, reference_nodes);
  const StateField ref =
      advance(init(gref), make_system(m, gref, ref_scheme), ref_scheme, t_end);
  ConvergenceStudy st;
  for (int n : nodes) {
    if (reference_nodes % n != 0) throw DomainError("reference_nodes must be a multiple of N");
    const GridSpec g = make_grid(x0, length, n);
    scheme.op = op;
    const StateField s = advance(init(g), make_system(m, g, scheme), scheme, t_end);
    st.rows.push_back({g.h(), n, sup_error(s, ref, reference_nodes / n), 0});
  }
  fill_orders(st);
  return st;
}

}  // namespace msint
