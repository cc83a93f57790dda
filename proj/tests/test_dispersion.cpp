#include <cmath>
#include <numbers>

#include "doctest.h"
#include "msint/dispersion.hpp"
#include "msint/errors.hpp"

using namespace msint;

namespace {

constexpr double pi = std::numbers::pi;

ModelCoefficients linear(double a, double b, double d) {
  ModelCoefficients m;
  m.a = m.c = a;
  m.b = b;
  m.d = d;
  return m;
}

SchemeConfig scheme(double dt, SchemeKind kind = SchemeKind::ImrReduced,
                    OperatorChoice op = OperatorChoice::Spectral) {
  SchemeConfig c;
  c.dt = dt;
  c.kind = kind;
  c.op = op;
  c.fp_tol = 1e-15;
  return c;
}

}  // namespace

TEST_CASE("continuous dispersion relation") {
  CHECK(continuous_omega(0, linear(0, 0.2, 0.2)).first == 0.0);
  const auto [wp, wm] = continuous_omega(1, linear(0, 1.0 / 6, 1.0 / 6));
  CHECK(wp == doctest::Approx(6.0 / 7).epsilon(1e-15));
  CHECK(wm == doctest::Approx(-6.0 / 7).epsilon(1e-15));
  // a = c = 1/6, b = d = 0: k(1 - a k^2) at k = 1
  CHECK(continuous_omega(1, linear(1.0 / 6, 0, 0)).first == doctest::Approx(5.0 / 6).epsilon(1e-15));
  CHECK_THROWS_AS(continuous_omega(1, linear(0, -2, 0)), DomainError);
  for (double k : {0.3, 1.0, 2.5}) CHECK(continuous_omega(-k, linear(0.1, 0.2, 0.05)).first ==
                                         -continuous_omega(k, linear(0.1, 0.2, 0.05)).first);
}

TEST_CASE("spatial wavenumber maps") {
  for (auto kind : {SpatialMap::CentralDiff, SpatialMap::Spectral, SpatialMap::ImrSpace})
    CHECK(spatial_wavenumber_map(0, kind, 0.3) == 0.0);
  CHECK(spatial_wavenumber_map(pi, SpatialMap::CentralDiff, 0.5) == doctest::Approx(2).epsilon(1e-15));
  CHECK(spatial_wavenumber_map(1.7, SpatialMap::Spectral, 0.5) == 1.7);
  CHECK(spatial_wavenumber_map(1.0, SpatialMap::ImrSpace, 0.5) == doctest::Approx(4 * std::tan(0.25)));
  CHECK_THROWS_AS(spatial_wavenumber_map(pi / 0.5, SpatialMap::ImrSpace, 0.5), PoleError);
  for (auto kind : {SpatialMap::CentralDiff, SpatialMap::ImrSpace})
    for (double xi : {0.4, 1.1})
      CHECK(spatial_wavenumber_map(-xi, kind, 0.5) == -spatial_wavenumber_map(xi, kind, 0.5));
  // k = xi + O(xi^3 h^2)
  const double xi = 0.5;
  const double e1 = std::abs(spatial_wavenumber_map(xi, SpatialMap::CentralDiff, 0.1) - xi);
  const double e2 = std::abs(spatial_wavenumber_map(xi, SpatialMap::CentralDiff, 0.05) - xi);
  CHECK(e1 / e2 == doctest::Approx(4).epsilon(0.01));
}

TEST_CASE("implicit-midpoint time map") {
  CHECK(imr_time_map(0, 0.1) == 0.0);
  CHECK(imr_time_map(pi / 2 / 0.1, 0.1) == doctest::Approx(2 / 0.1).epsilon(1e-14));
  CHECK_THROWS_AS(imr_time_map(pi / 0.1, 0.1), PoleError);
  for (double x = -2.9; x < 3; x += 0.1) {
    const double Omega = x / 0.1;
    CHECK(imr_time_map_inverse(imr_time_map(Omega, 0.1), 0.1) == doctest::Approx(Omega).epsilon(1e-14));
    CHECK(imr_time_map(-Omega, 0.1) == -imr_time_map(Omega, 0.1));
  }
}

TEST_CASE("box conjugacy residual") {
  const auto m = linear(0.1, 0.2, 0.05);
  CHECK(box_conjugacy_check(0, 0, 0.5, 0.1, m) == 0.0);
  const double h = 0.5, dt = 0.1;
  for (double xi : {0.2, 1.0, 3.0}) {
    const double w = continuous_omega(spatial_wavenumber_map(xi, SpatialMap::ImrSpace, h), m).first;
    const double Omega = imr_time_map_inverse(w, dt);
    CHECK(std::abs(box_conjugacy_check(xi, Omega, h, dt, m)) < 1e-12 * std::max(1.0, w * w));
    CHECK(std::abs(box_conjugacy_check(xi, Omega * 1.1 + 0.1, h, dt, m)) > 1e-3);
  }
}

TEST_CASE("measured IMR frequency matches the closed form") {
  const auto m = linear(0, 1.0 / 6, 1.0 / 6);
  const GridSpec g = make_grid(0, 2 * pi, 32);
  const auto c = scheme(0.1);
  CHECK(measure_frequency(m, g, c, 0) == 0.0);
  const double pred = imr_time_map_inverse(6.0 / 7, 0.1);
  CHECK(predicted_frequency(1.0, m, g, c) == doctest::Approx(pred).epsilon(1e-15));
  CHECK(std::abs(measure_frequency(m, g, c, 1) - pred) < 1e-10);
  for (int p = 1; p < 16; ++p) CHECK(std::abs(measure_frequency(m, g, c, p) - predicted_frequency(p, m, g, c)) < 1e-10);
}

TEST_CASE("measured frequencies for central differences and the box scheme") {
  const auto m = linear(1.0 / 9, 1.0 / 9, 0.05);
  const GridSpec ge = make_grid(0, 40, 64), go = make_grid(0, 40, 63);
  const auto cc = scheme(0.1, SchemeKind::ImrReduced, OperatorChoice::CentralDiff);
  const auto cb = scheme(0.1, SchemeKind::PreissmanBox);
  CHECK(spatial_map_for(cb) == SpatialMap::ImrSpace);
  for (int p = 1; p < 31; ++p) {
    const double xi = 2 * pi * p / ge.length;
    CHECK(std::abs(measure_frequency(m, ge, cc, p) - predicted_frequency(xi, m, ge, cc)) < 1e-10);
    const double Ob = measure_frequency(m, go, cb, p);
    CHECK(std::abs(Ob - predicted_frequency(xi, m, go, cb)) < 1e-8);
    CHECK(std::abs(box_conjugacy_check(xi, Ob, go.h(), cb.dt, m)) < 1e-8 * std::max(1.0, Ob * Ob / 0.01));
  }
}

TEST_CASE("measured frequency approaches the continuous one at second order") {
  const auto m = linear(0, 1.0 / 6, 1.0 / 6);
  const GridSpec g = make_grid(0, 2 * pi, 32);
  const double w = 6.0 / 7;
  const double e1 = std::abs(measure_frequency(m, g, scheme(0.1), 1) - w);
  const double e2 = std::abs(measure_frequency(m, g, scheme(0.05), 1) - w);
  CHECK(e1 / e2 == doctest::Approx(4).epsilon(0.01));
}

TEST_CASE("group-velocity sign preserved below the pole") {
  const auto m = linear(1.0 / 6, 0, 0);
  const GridSpec g = make_grid(0, 20, 64);
  for (auto op : {OperatorChoice::Spectral, OperatorChoice::CentralDiff}) {
    const auto c = scheme(0.05, SchemeKind::ImrReduced, op);
    const auto map = spatial_map_for(c);
    std::vector<double> Om;
    for (int p = 1; p <= 12; ++p) Om.push_back(measure_frequency(m, g, c, p));
    for (int p = 2; p <= 11; ++p) {
      const double dOm = Om[p] - Om[p - 2];
      const double k0 = spatial_wavenumber_map(2 * pi * (p - 1) / g.length, map, g.h());
      const double k1 = spatial_wavenumber_map(2 * pi * (p + 1) / g.length, map, g.h());
      const double dw = continuous_omega(k1, m).first - continuous_omega(k0, m).first;
      if (std::abs(dw) > 1e-6) CHECK((dOm > 0) == (dw > 0));
    }
  }
}

TEST_CASE("measurement errors") {
  ModelCoefficients m = linear(0, 0.2, 0.2);
  m.alpha12 = 0.46;
  const GridSpec g = make_grid(0, 10, 32);
  CHECK_THROWS_AS(measure_frequency(m, g, scheme(0.1), 1), DomainError);
  CHECK_THROWS_AS(measure_frequency(linear(0, 0.2, 0.2), g, scheme(0.1), 17), DomainError);
  // the Nyquist mode has zero spectral symbol and no travelling content
  CHECK(measure_frequency(linear(0, 0.2, 0.2), g, scheme(0.1), 16) == doctest::Approx(0).epsilon(1e-14));
}

TEST_CASE("dispersion table rows are consistent") {
  const auto m = linear(0, 0.25, 1.0 / 12);
  const GridSpec g = make_grid(-32, 64, 64);
  const auto c = scheme(0.1, SchemeKind::ImrReduced, OperatorChoice::CentralDiff);
  std::vector<int> modes;
  for (int p = 1; p <= 32; ++p) modes.push_back(p);
  const auto rows = dispersion_table(m, g, c, modes);
  REQUIRE(rows.size() == 32);
  for (const auto& r : rows) {
    CHECK(r.residual == r.Omega_measured - r.Omega_pred);
    CHECK(std::abs(r.residual) < 1e-8);
    CHECK(r.k == doctest::Approx(std::sin(r.xi * g.h()) / g.h()));
  }
}
