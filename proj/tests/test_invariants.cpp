#include <cmath>

#include "doctest.h"
#include "msint/errors.hpp"
#include "msint/integrate.hpp"
#include "msint/invariants.hpp"
#include "msint/waves.hpp"
#include "oracles.hpp"

using namespace msint;

namespace {

ModelCoefficients coeffs(double a, double b, double d, bool ham = false) {
  ModelCoefficients m;
  m.a = m.c = a;
  m.b = b;
  m.d = d;
  return ham ? with_hamiltonian_nonlinearity(m) : with_reference_nonlinearity(m);
}

double directional(const StateField& grad, const StateField& dir) {
  return inner(grad.eta, dir.eta) + inner(grad.u, dir.u);
}

}  // namespace

TEST_CASE("invariants match the dense oracle at N = 16") {
  const GridSpec g = make_grid(-4, 8, 16);
  const auto m = coeffs(1.0 / 6, 0.2, 0.2, true);
  const auto D = spectral_derivative(g);
  const auto s = oracle::random_state(g, 7);
  const auto o = oracle::invariants(oracle::spectral(16, 8), m, oracle::vec(s.eta), oracle::vec(s.u));
  CHECK(energy_E_h(s, m, D) == doctest::Approx(o.E).epsilon(1e-12));
  CHECK(momentum_I_h(s, m, D) == doctest::Approx(o.I).epsilon(1e-12));
  CHECK(frak_I_h(s, m, D) == doctest::Approx(o.frakI).epsilon(1e-12));
  CHECK(hamiltonian_H_h(s, m, D) == doctest::Approx(o.H).epsilon(1e-12));
  const auto [c1, c2] = linear_invariants(s);
  CHECK(c1 == doctest::Approx(o.C1).epsilon(1e-12));
  CHECK(c2 == doctest::Approx(o.C2).epsilon(1e-12));
}

TEST_CASE("H_h only for the Hamiltonian class") {
  const GridSpec g = make_grid(0, 8, 16);
  CHECK_THROWS_AS(hamiltonian_H_h(StateField::zeros(g), coeffs(0, 0.2, 0.2), spectral_derivative(g)),
                  StructuralError);
  const auto sys = SemiDiscreteSystem::general(coeffs(0, 0.2, 0.2), spectral_derivative(g));
  CHECK(!diagnostics(StateField::zeros(g), sys, 0).H.has_value());
}

TEST_CASE("gradients agree with finite differences") {
  const GridSpec g = make_grid(0, 8, 16);
  const auto m = coeffs(1.0 / 6, 0.2, 0.2, true);
  const auto D = central_difference(g);
  const auto s = oracle::random_state(g, 8), dir = oracle::random_state(g, 9);
  auto fd = [&](auto f) {
    const double h = 1e-6;
    StateField sp = s, sm = s;
    for (int j = 0; j < g.n; ++j) {
      sp.eta[j] += h * dir.eta[j], sp.u[j] += h * dir.u[j];
      sm.eta[j] -= h * dir.eta[j], sm.u[j] -= h * dir.u[j];
    }
    return (f(sp) - f(sm)) / (2 * h);
  };
  CHECK(directional(energy_gradient(s, m, D), dir) ==
        doctest::Approx(fd([&](const StateField& x) { return energy_E_h(x, m, D); })).epsilon(1e-7));
  CHECK(directional(momentum_gradient(s, m, D), dir) ==
        doctest::Approx(fd([&](const StateField& x) { return momentum_I_h(x, m, D); })).epsilon(1e-7));
  CHECK(directional(hamiltonian_gradient(s, m, D), dir) ==
        doctest::Approx(fd([&](const StateField& x) { return hamiltonian_H_h(x, m, D); })).epsilon(1e-7));
}

TEST_CASE("semi-discrete rates: E_h conserved, I_h leaks by <A, D eta> + <B, D u>") {
  const GridSpec g = make_grid(0, 10, 32);
  for (const auto& m : {coeffs(0, 0.25, 1.0 / 12), coeffs(1.0 / 9, 1.0 / 9, 0), coeffs(0, 1.0 / 6, 1.0 / 6, true)})
    for (bool spectral : {false, true}) {
      const auto D = spectral ? spectral_derivative(g) : central_difference(g);
      const auto sys = SemiDiscreteSystem::general(m, D);
      const auto s = oracle::random_state(g, 10);
      const auto r = rhs_reduced(s, sys);
      const double scale = std::max(1.0, oracle::supnorm(r.eta) + oracle::supnorm(r.u));
      CHECK(std::abs(directional(energy_gradient(s, m, D), r)) < 1e-12 * scale * g.n);
      CHECK(directional(momentum_gradient(s, m, D), r) ==
            doctest::Approx(momentum_leakage(s, m, D)).epsilon(1e-10));
    }
}

TEST_CASE("Hamiltonian form: rhs = J grad H with J = -[[0, D N^-1], [D N^-1, 0]]") {
  const GridSpec g = make_grid(0, 10, 32);
  const auto m = coeffs(1.0 / 6, 0.1, 0.1, true);
  const auto D = spectral_derivative(g);
  const auto sys = SemiDiscreteSystem::general(m, D);
  const auto s = oracle::random_state(g, 12);
  const auto r = rhs_reduced(s, sys);
  const auto gH = hamiltonian_gradient(s, m, D);
  const Field je = helmholtz_solve(m.b, D, D.apply(gH.u)), ju = helmholtz_solve(m.b, D, D.apply(gH.eta));
  for (int j = 0; j < g.n; ++j) {
    CHECK(std::abs(r.eta[j] + je[j]) < 1e-12);
    CHECK(std::abs(r.u[j] + ju[j]) < 1e-12);
  }
}

TEST_CASE("symmetric states: momentum leakage vanishes") {
  const GridSpec g = make_grid(-10, 20, 64);
  const auto s = standard_field(g, SymmetricRandom{7, 0.3, 0.3});
  const auto m = coeffs(1.0 / 9, 1.0 / 9, 0);
  CHECK(std::abs(momentum_leakage(s, m, central_difference(g))) < 1e-12);
  CHECK(std::abs(momentum_leakage(s, m, spectral_derivative(g))) < 1e-12);
  const auto r = oracle::random_state(g, 1);
  CHECK(std::abs(momentum_leakage(r, m, spectral_derivative(g))) > 1e-6);
}

TEST_CASE("local conservation laws with rhs-supplied derivatives") {
  for (bool spectral : {false, true}) {
    const GridSpec g = make_grid(0, 10, 24);
    const auto D = spectral ? spectral_derivative(g) : central_difference(g);
    const auto sys = SemiDiscreteSystem::general(coeffs(1.0 / 9, 1.0 / 9, 0.05), D);
    for (unsigned seed = 1; seed <= 10; ++seed) {
      const auto s = oracle::smooth_state(g, seed, 0.3);
      const auto aux = reconstruct_aux(s, rhs_reduced(s, sys), sys);
      const auto r = local_law_residuals(aux.z, aux.zdot, sys);
      CHECK(r.energy <= 1e-10 * r.energy_scale);
      CHECK(r.momentum <= 1e-10 * r.momentum_scale);
      CHECK(r.energy_scale > 0);
    }
  }
}

TEST_CASE("local conservation laws from sampled trajectories decay at fourth order") {
  const GridSpec g = make_grid(0, 10, 24);
  const auto m = coeffs(0, 0.2, 0.1);
  const auto sys = SemiDiscreteSystem::general(m, spectral_derivative(g));
  const auto s0 = oracle::smooth_state(g, 3, 0.2);
  // RK4 reference trajectory with a step far below the sample spacings
  auto sample = [&](double spacing) {
    const int sub = static_cast<int>(std::lround(spacing / 1e-3));
    const double dt = spacing / sub;
    std::vector<ZGridField> out;
    StateField s = s0;
    for (int k = 0; k < 5; ++k) {
      if (k > 0)
        for (int i = 0; i < sub; ++i) {
          auto add = [&](const StateField& a, const StateField& b, double c) {
            StateField r = a;
            for (int j = 0; j < g.n; ++j) r.eta[j] += c * b.eta[j], r.u[j] += c * b.u[j];
            return r;
          };
          const auto k1 = rhs_reduced(s, sys);
          const auto k2 = rhs_reduced(add(s, k1, dt / 2), sys);
          const auto k3 = rhs_reduced(add(s, k2, dt / 2), sys);
          const auto k4 = rhs_reduced(add(s, k3, dt), sys);
          for (int j = 0; j < g.n; ++j) {
            s.eta[j] += dt / 6 * (k1.eta[j] + 2 * k2.eta[j] + 2 * k3.eta[j] + k4.eta[j]);
            s.u[j] += dt / 6 * (k1.u[j] + 2 * k2.u[j] + 2 * k3.u[j] + k4.u[j]);
          }
        }
      out.push_back(reconstruct_aux(s, rhs_reduced(s, sys), sys).z);
    }
    return local_law_residuals(out, spacing, sys);
  };
  const auto r1 = sample(0.08), r2 = sample(0.04), r3 = sample(0.02);
  const double o1 = std::log2(r1.energy / r2.energy), o2 = std::log2(r2.energy / r3.energy);
  const double m1 = std::log2(r1.momentum / r2.momentum), m2 = std::log2(r2.momentum / r3.momentum);
  CHECK(o1 == doctest::Approx(4).epsilon(0.1));
  CHECK(o2 == doctest::Approx(4).epsilon(0.1));
  CHECK(m1 == doctest::Approx(4).epsilon(0.1));
  CHECK(m2 == doctest::Approx(4).epsilon(0.1));
  CHECK_THROWS_AS(local_law_residuals(std::vector<ZGridField>(4, ZGridField::zeros(g)), 0.1, sys),
                  InsufficientDataError);
}

TEST_CASE("total symplecticity is antisymmetric in the pair") {
  const GridSpec g = make_grid(0, 10, 16);
  const auto sys = SemiDiscreteSystem::general(coeffs(0, 0.2, 0.2), spectral_derivative(g), FormKind::FullGeneral);
  const auto tp = random_tangent_pair(sys, 4);
  const Mat10 K = ms_matrices(sys.coeffs()).K;
  const double w = total_symplecticity(tp, K);
  CHECK(std::abs(w) > 1e-3);
  CHECK(total_symplecticity({tp.V, tp.U}, K) == doctest::Approx(-w).epsilon(1e-14));
  CHECK(total_symplecticity({tp.U, tp.U}, K) == doctest::Approx(0).epsilon(1e-14));
}
