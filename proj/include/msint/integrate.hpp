#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "msint/invariants.hpp"
#include "msint/semidiscrete.hpp"

namespace msint {

enum class OperatorChoice { CentralDiff, Spectral };
enum class SchemeKind { ImrReduced, ImrFull, PreissmanBox };
std::string to_string(OperatorChoice o);
std::string to_string(SchemeKind k);

struct SchemeConfig {
  double dt = 0.1;
  double fp_tol = 1e-12;
  int fp_max_iters = 100;
  OperatorChoice op = OperatorChoice::Spectral;
  SchemeKind kind = SchemeKind::ImrReduced;
  bool operator==(const SchemeConfig&) const = default;
};
// Throws ConfigError unless dt > 0, fp_tol > 0, fp_max_iters >= 1.
void validate(const SchemeConfig& c);

CirculantOperator make_operator(const GridSpec& g, OperatorChoice op);
// Semi-discrete system matching the scheme kind (box form for PreissmanBox).
SemiDiscreteSystem make_system(const ModelCoefficients& m, const GridSpec& g,
                               const SchemeConfig& c);

struct StepReport {
  int iterations = 0;
  double residual = 0;
  bool converged = false;
};

struct ReducedStep {
  StateField state;
  StateField midpoint;
  StepReport report;
};

struct FullStep {
  ZGridField state;
  ZGridField midpoint;
  StepReport report;
};

// The step functions accept any nonzero finite dt, including negative
// values (used for the reversibility property); SchemeConfig::dt itself
// must be positive for runs.
ReducedStep imr_step_reduced(const StateField& s, const SemiDiscreteSystem& sys,
                             const SchemeConfig& c);
ReducedStep box_step(const StateField& s, const SemiDiscreteSystem& sys, const SchemeConfig& c);

// Per-mode factorized left operator (I(x)K) + dt/2 (D(x)M) - dt/2 (I(x)L).
// On modes where the symbol of D vanishes the block is singular (the
// (phi, p) pairs only enter through p - phi/dt); there the p1 and p2 rows
// are replaced by phi1_mid = phi1^n and phi2_mid = phi2^n.
class FullImrSolver {
 public:
  FullImrSolver(const SemiDiscreteSystem& sys, double dt);
  ~FullImrSolver();
  FullStep step(const ZGridField& z, double fp_tol, int max_iters) const;
  // Linearized step about a frozen midpoint.
  TangentPair tangent(const TangentPair& pair, const ZGridField& mid, double fp_tol,
                      int max_iters) const;
  double dt() const { return dt_; }
  const SemiDiscreteSystem& system() const { return sys_; }

 private:
  struct Impl;
  SemiDiscreteSystem sys_;
  double dt_;
  std::unique_ptr<Impl> impl_;
};

// Uses a solver cached per (system, dt).
FullStep imr_step_full(const ZGridField& z, const SemiDiscreteSystem& sys, const SchemeConfig& c);
TangentPair tangent_step(const TangentPair& pair, const ZGridField& base_midpoint,
                         const SemiDiscreteSystem& sys, const SchemeConfig& c);

// Random full-form tangent pair; the eta and u components carry no content
// on zero-symbol modes of D_h, where the gauge rows replace the dynamics.
TangentPair random_tangent_pair(const SemiDiscreteSystem& sys, unsigned long long seed);

struct RunOptions {
  double t_end = 0;
  int sample_every = 1;
  bool keep_states = false;
  // Local-law residuals on each sample, from reconstructed auxiliaries.
  bool local_laws = false;
  std::optional<TangentPair> tangent;  // full-form runs only
};

struct Trajectory {
  std::vector<DiagnosticsRecord> records;
  std::vector<StateField> states;  // sampled, when keep_states
  StateField final_state;
  std::optional<ZGridField> final_z;
  std::optional<TangentPair> final_tangent;
  bool failed = false;
  double last_good_time = 0;
  std::string message;
  long total_iterations = 0;
};

// ImrReduced or PreissmanBox.
Trajectory run(const StateField& initial, const SemiDiscreteSystem& sys, const SchemeConfig& c,
               const RunOptions& opt);
// ImrFull.
Trajectory run(const ZGridField& initial, const SemiDiscreteSystem& sys, const SchemeConfig& c,
               const RunOptions& opt);

}  // namespace msint
