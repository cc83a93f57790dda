#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "msint/semidiscrete.hpp"

namespace msint {

struct SolitaryWaveSpec {
  double c_s = 1.2;
  GridSpec grid;
  double tol = 1e-10;
  int max_newton = 50;
  std::optional<double> amplitude;
};

enum class WaveClass { CSW, GSW };
std::string to_string(WaveClass c);

struct SolitaryProfile {
  StateField state;
  WaveClass cls = WaveClass::CSW;
  double residual = 0;
  int newton_iterations = 0;
  double tail_ratio = 0;  // sup over the outer 10% of |eta| divided by the peak
  std::vector<std::string> warnings;
};

// R1 = u + A(eta,u) + a D^2 u + c b D^2 eta - c eta
// R2 = eta + B(eta,u) + a D^2 eta + c d D^2 u - c u
StateField traveling_residual(const StateField& s, double c_s, const ModelCoefficients& m,
                              const CirculantOperator& D);

// Newton on traveling_residual with the spectral operator. Profiles are
// centred at x0 + (N-1)h/2 so that the reversal j -> N-1-j is their mirror.
// Throws NewtonFailure when neither the direct solve nor the continuation
// in c_s converges.
SolitaryProfile solve_profile(const SolitaryWaveSpec& spec, const ModelCoefficients& m);

// Tail oscillation over the outer 10% of the domain relative to the peak.
double tail_ratio(const Field& eta);
WaveClass classify_profile(const Field& eta);

struct Gaussian {
  double A = 1, w = 1;
  std::optional<double> center;  // default: domain centre
};
struct PlaneWaveMode {
  int p = 1;
  double A = 1;
};
struct SymmetricRandom {
  unsigned long long seed = 7;
  double decay = 0.5;  // spectral amplitudes ~ exp(-decay |p|)
  double amplitude = 0.1;
};
using StandardField = std::variant<Gaussian, PlaneWaveMode, SymmetricRandom>;

StateField standard_field(const GridSpec& g, const StandardField& kind);

}  // namespace msint
