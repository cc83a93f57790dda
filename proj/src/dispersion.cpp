#include "msint/dispersion.hpp"

#include <cmath>
#include <numbers>

#include "msint/errors.hpp"

namespace msint {

std::pair<double, double> continuous_omega(double k, const ModelCoefficients& m) {
  const double db = 1 + m.b * k * k, dd = 1 + m.d * k * k;
  if (!(db > 0) || !(dd > 0)) throw DomainError("dispersion relation: nonpositive denominator");
  const double w = k * (1 - m.a * k * k) / std::sqrt(db * dd);
  return {w, -w};
}

double spatial_wavenumber_map(double xi, SpatialMap kind, double h) {
  if (!(h > 0)) throw DomainError("spacing must be > 0");
  switch (kind) {
    case SpatialMap::CentralDiff: return std::sin(xi * h) / h;
    case SpatialMap::Spectral: return xi;
    case SpatialMap::ImrSpace: {
      const double half = xi * h / 2;
      if (std::abs(std::cos(half)) < 1e-14)
        throw PoleError("spatial map (2/h)tan(xi h/2) has a pole at xi h = pi");
      return 2 / h * std::tan(half);
    }
  }
  return 0;
}

double imr_time_map(double Omega, double dt) {
  if (std::abs(Omega * dt) >= std::numbers::pi - 1e-14)
    throw PoleError("IMR time map has a pole at |Omega dt| = pi");
  return 2 / dt * std::tan(Omega * dt / 2);
}

double imr_time_map_inverse(double omega, double dt) {
  return 2 / dt * std::atan(omega * dt / 2);
}

double box_conjugacy_check(double xi, double Omega, double h, double dt,
                           const ModelCoefficients& m) {
  const double psi1 = spatial_wavenumber_map(xi, SpatialMap::ImrSpace, h);
  const double psi2 = imr_time_map(Omega, dt);
  const double w = continuous_omega(psi1, m).first;
  return psi2 * psi2 - w * w;
}

SpatialMap spatial_map_for(const SchemeConfig& c) {
  if (c.kind == SchemeKind::PreissmanBox) return SpatialMap::ImrSpace;
  return c.op == OperatorChoice::CentralDiff ? SpatialMap::CentralDiff : SpatialMap::Spectral;
}

double predicted_frequency(double xi, const ModelCoefficients& m, const GridSpec& g,
                           const SchemeConfig& c) {
  const double k = spatial_wavenumber_map(xi, spatial_map_for(c), g.h());
  return imr_time_map_inverse(continuous_omega(k, m).first, c.dt);
}

double measure_frequency(const ModelCoefficients& m, const GridSpec& g, const SchemeConfig& c,
                         int p, int steps) {
  if (m.alpha11 != 0 || m.alpha12 != 0 || m.alpha22 != 0 || m.beta11 != 0 || m.beta12 != 0 ||
      m.beta22 != 0)
    throw DomainError("measure_frequency needs a linear model (alpha = beta = 0)");
  if (p < 0 || p > g.n / 2) throw DomainError("mode index out of range");
  if (steps < 1) throw DomainError("steps must be >= 1");
  if (p == 0) return 0.0;
  SchemeConfig cc = c;
  if (cc.kind == SchemeKind::ImrFull) cc.kind = SchemeKind::ImrReduced;
  const SemiDiscreteSystem sys = make_system(m, g, cc);

  const double r = -std::sqrt(std::real(sys.nb()[p] / sys.nd()[p]));
  const double xi = 2 * std::numbers::pi * p / g.length;
  StateField s = StateField::zeros(g);
  for (int j = 0; j < g.n; ++j) {
    s.eta[j] = std::cos(xi * (g.x(j) - g.x0));
    s.u[j] = r * s.eta[j];
  }

  auto amp = [&](const StateField& f) {
    const Spectrum E = rfft(f.eta), U = rfft(f.u);
    double total = 0;
    for (size_t q = 0; q < E.size(); ++q) total += std::norm(E[q]) + std::norm(U[q]);
    return std::make_tuple(E[p], U[p], total);
  };

  auto [e0, u0, t0] = amp(s);
  double phase = 0;
  for (int n = 0; n < steps; ++n) {
    const ReducedStep st =
        cc.kind == SchemeKind::PreissmanBox ? box_step(s, sys, cc) : imr_step_reduced(s, sys, cc);
    auto [e1, u1, t1] = amp(st.state);
    const double n0 = std::norm(e0) + std::norm(u0), n1 = std::norm(e1) + std::norm(u1);
    if (!(n0 > 0) || n1 < 1e-16 * t0 || n0 < (1 - 1e-8) * t0)
      throw MeasurementError("mode amplitude collapsed or the seed is not a single mode");
    const cplx ratio = (std::conj(e0) * e1 + std::conj(u0) * u1) / n0;
    phase += std::arg(ratio);
    s = st.state;
    e0 = e1;
    u0 = u1;
    t0 = t1;
  }
  return phase / steps / cc.dt;
}

std::vector<DispersionRow> dispersion_table(const ModelCoefficients& m, const GridSpec& g,
                                            const SchemeConfig& c, const std::vector<int>& modes,
                                            int steps) {
  std::vector<DispersionRow> rows;
  for (int p : modes) {
    DispersionRow r;
    r.p = p;
    r.xi = 2 * std::numbers::pi * p / g.length;
    r.k = spatial_wavenumber_map(r.xi, spatial_map_for(c), g.h());
    r.omega_exact = continuous_omega(r.k, m).first;
    r.Omega_pred = imr_time_map_inverse(r.omega_exact, c.dt);
    r.Omega_measured = measure_frequency(m, g, c, p, steps);
    r.residual = r.Omega_measured - r.Omega_pred;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace msint
