#pragma once

#include <utility>
#include <vector>

#include "msint/integrate.hpp"

namespace msint {

// (omega_plus, omega_minus) = +-k(1 - a k^2)/sqrt((1 + b k^2)(1 + d k^2)).
// Throws DomainError when a denominator factor is not positive.
std::pair<double, double> continuous_omega(double k, const ModelCoefficients& m);

enum class SpatialMap { CentralDiff, Spectral, ImrSpace };

// Effective wavenumber k with D_h e^{i xi x} = i k e^{i xi x}.
// ImrSpace: (2/h) tan(xi h/2), PoleError at xi h = +-pi.
double spatial_wavenumber_map(double xi, SpatialMap kind, double h);

// omega = (2/dt) tan(Omega dt/2); PoleError at |Omega dt| >= pi.
double imr_time_map(double Omega, double dt);
double imr_time_map_inverse(double omega, double dt);

// psi2(Omega)^2 - omega(psi1(xi))^2 with psi1 = (2/h) tan(xi h/2) and
// psi2 = (2/dt) tan(Omega dt/2); xi is a wavenumber, Omega a frequency.
double box_conjugacy_check(double xi, double Omega, double h, double dt,
                           const ModelCoefficients& m);

SpatialMap spatial_map_for(const SchemeConfig& c);

// (2/dt) arctan(omega(k(xi)) dt/2) on the plus branch.
double predicted_frequency(double xi, const ModelCoefficients& m, const GridSpec& g,
                           const SchemeConfig& c);

// Seeds the plus eigenmode of Fourier mode p on a linear (alpha = beta = 0)
// system, advances `steps` steps with the configured scheme and returns the
// mean phase advance per step divided by dt.
double measure_frequency(const ModelCoefficients& m, const GridSpec& g, const SchemeConfig& c,
                         int p, int steps = 16);

struct DispersionRow {
  int p = 0;
  double xi = 0, k = 0, omega_exact = 0, Omega_pred = 0, Omega_measured = 0, residual = 0;
};

std::vector<DispersionRow> dispersion_table(const ModelCoefficients& m, const GridSpec& g,
                                            const SchemeConfig& c, const std::vector<int>& modes,
                                            int steps = 16);

}  // namespace msint
