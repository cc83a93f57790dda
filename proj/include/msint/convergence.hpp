#pragma once

#include <functional>
#include <vector>

#include "msint/integrate.hpp"

namespace msint {

struct ConvergenceRow {
  double step = 0;   // dt or h
  int nodes = 0;
  double error = 0;  // sup-norm over eta and u at t_end
  double order = 0;  // against the previous row, 0 for the first
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  double slope = 0;  // least-squares slope of log(error) vs log(step)
};

// Self-convergence in dt against a run with reference_dt (which must
// divide every dt in the list). Scheme kind ImrReduced or PreissmanBox.
ConvergenceStudy time_convergence(const StateField& initial, const SemiDiscreteSystem& sys,
                                  SchemeConfig scheme, double t_end,
                                  const std::vector<double>& dts, double reference_dt);

using InitialFactory = std::function<StateField(const GridSpec&)>;

// Spatial convergence at fixed dt: each N in `nodes` runs with operator
// `op` and is compared, at its own nodes, with a spectral run on
// reference_nodes (a multiple of every N).
ConvergenceStudy space_convergence(const ModelCoefficients& m, double x0, double length,
                                   const std::vector<int>& nodes, int reference_nodes,
                                   OperatorChoice op, SchemeConfig scheme, double t_end,
                                   const InitialFactory& init);

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace msint
