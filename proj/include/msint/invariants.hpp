#pragma once

#include <optional>
#include <vector>

#include "msint/semidiscrete.hpp"

namespace msint {

struct DiagnosticsRecord {
  double t = 0;
  double E = 0, I = 0, frakI = 0;
  std::optional<double> H;
  double C1 = 0, C2 = 0;
  std::optional<double> local_energy_residual, local_momentum_residual;
  std::optional<double> symplecticity;
  int iterations = 0;
};

// Both tangent vectors have the shape of the evolved state.
struct TangentPair {
  ZGridField U, V;
};

// Euclidean inner product <x, y> = sum_j x_j y_j (no h factor).
double inner(const Field& x, const Field& y);

double energy_E_h(const StateField& s, const ModelCoefficients& m, const CirculantOperator& D);
// (dE/deta, dE/du) for skew D.
StateField energy_gradient(const StateField& s, const ModelCoefficients& m,
                           const CirculantOperator& D);
double momentum_I_h(const StateField& s, const ModelCoefficients& m, const CirculantOperator& D);
StateField momentum_gradient(const StateField& s, const ModelCoefficients& m,
                             const CirculantOperator& D);
double frak_I_h(const StateField& s, const ModelCoefficients& m, const CirculantOperator& D);
double hamiltonian_H_h(const StateField& s, const ModelCoefficients& m, const CirculantOperator& D);
StateField hamiltonian_gradient(const StateField& s, const ModelCoefficients& m,
                                const CirculantOperator& D);
std::pair<double, double> linear_invariants(const StateField& s);

// <A_h, D eta> + <B_h, D u>: the time derivative of I_h along rhs_reduced.
double momentum_leakage(const StateField& s, const ModelCoefficients& m,
                        const CirculantOperator& D);

struct LocalLawResiduals {
  double energy = 0, momentum = 0;
  // sup over nodes of the largest individual term, for relative bounds
  double energy_scale = 0, momentum_scale = 0;
};

// Per-node densities: E_j, F_j, I_j (local momentum density), M_j.
struct LocalDensities {
  Field energy, energy_flux, momentum, momentum_flux;
};
LocalDensities local_densities(const ZGridField& z, const ZGridField& zdot,
                               const SemiDiscreteSystem& sys);

// Local laws with the time derivatives of the densities obtained by the
// chain rule from a supplied zdot.
LocalLawResiduals local_law_residuals(const ZGridField& z, const ZGridField& zdot,
                                      const SemiDiscreteSystem& sys);

// Local laws along equally spaced samples; zdot and the density rates come
// from 4th-order central differences, evaluated at every sample with two
// neighbours on each side. Needs at least 5 samples.
LocalLawResiduals local_law_residuals(const std::vector<ZGridField>& samples, double spacing,
                                      const SemiDiscreteSystem& sys);

// sum_j <K U_j, V_j>
double total_symplecticity(const TangentPair& pair, const Mat10& K);

DiagnosticsRecord diagnostics(const StateField& s, const SemiDiscreteSystem& sys, double t);

}  // namespace msint
