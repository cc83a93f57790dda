#include <cmath>
#include <numbers>

#include "doctest.h"
#include "msint/errors.hpp"
#include "msint/semidiscrete.hpp"
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

}  // namespace

TEST_CASE("rhs_reduced matches the dense oracle at N = 16") {
  const GridSpec g = make_grid(-3, 9, 16);
  const ModelCoefficients sets[] = {coeffs(0, 1.0 / 6, 1.0 / 6), coeffs(1.0 / 6, 0, 0),
                                    coeffs(0, 0.25, 1.0 / 12), coeffs(1.0 / 9, 1.0 / 9, 0)};
  for (const auto& m : sets)
    for (bool spectral : {false, true}) {
      const auto D = spectral ? spectral_derivative(g) : central_difference(g);
      const oracle::Mat Dd = spectral ? oracle::spectral(16, 9) : oracle::central(16, g.h());
      const auto sys = SemiDiscreteSystem::general(m, D);
      const auto s = oracle::random_state(g, 21);
      const auto r = rhs_reduced(s, sys);
      const auto [et, ut] = oracle::rhs(Dd, m, oracle::vec(s.eta), oracle::vec(s.u));
      const double scale = std::max(1.0, std::max(et.cwiseAbs().maxCoeff(), ut.cwiseAbs().maxCoeff()));
      CHECK(oracle::supdiff(r.eta, oracle::field(et)) < 1e-12 * scale);
      CHECK(oracle::supdiff(r.u, oracle::field(ut)) < 1e-12 * scale);
    }
}

TEST_CASE("box form rhs matches the dense M_x-weighted oracle; even N is rejected") {
  const GridSpec g = make_grid(0, 7.5, 15);
  const auto m = coeffs(1.0 / 9, 1.0 / 9, 0.05);
  const auto sys = SemiDiscreteSystem::box(m, g);
  const auto s = oracle::random_state(g, 8);
  const auto r = rhs_reduced(s, sys);
  const auto [et, ut] = oracle::rhs_box(g.h(), m, oracle::vec(s.eta), oracle::vec(s.u));
  CHECK(oracle::supdiff(r.eta, oracle::field(et)) < 1e-11);
  CHECK(oracle::supdiff(r.u, oracle::field(ut)) < 1e-11);
  CHECK_THROWS_AS(SemiDiscreteSystem::box(m, make_grid(0, 8, 16)), SingularityError);
}

TEST_CASE("construction errors") {
  const GridSpec g = make_grid(0, 10, 16);
  ModelCoefficients m = coeffs(0, 1.0 / 6, 1.0 / 6);
  m.c = 0.3;
  CHECK_THROWS_AS(SemiDiscreteSystem::general(m, spectral_derivative(g)), StructuralError);
  m = coeffs(0, 1.0 / 6, 1.0 / 6);
  m.b = -1;
  CHECK_THROWS_AS(SemiDiscreteSystem::general(m, spectral_derivative(g)), DomainError);
  const auto sys = SemiDiscreteSystem::general(coeffs(0, 0.1, 0.1), spectral_derivative(g));
  CHECK_THROWS_AS(rhs_reduced(StateField::zeros(make_grid(0, 10, 8)), sys), DomainError);
}

TEST_CASE("kernel property: linear invariants have zero rate") {
  const GridSpec g = make_grid(0, 12, 32);
  for (bool spectral : {false, true}) {
    const auto D = spectral ? spectral_derivative(g) : central_difference(g);
    const auto sys = SemiDiscreteSystem::general(coeffs(1.0 / 9, 1.0 / 9, 0), D);
    const auto r = rhs_reduced(oracle::random_state(g, 2), sys);
    double s1 = 0, s2 = 0;
    for (int j = 0; j < g.n; ++j) s1 += r.eta[j], s2 += r.u[j];
    CHECK(std::abs(s1) < 1e-13);
    CHECK(std::abs(s2) < 1e-13);
  }
}

TEST_CASE("rhs_reduced_tangent is the derivative of rhs_reduced") {
  const GridSpec g = make_grid(0, 12, 32);
  const auto sys = SemiDiscreteSystem::general(coeffs(0, 0.25, 1.0 / 12), spectral_derivative(g));
  const auto s = oracle::random_state(g, 3), dir = oracle::random_state(g, 4);
  const auto t = rhs_reduced_tangent(s, dir, sys);
  const double h = 1e-6;
  StateField sp = s, sm = s;
  for (int j = 0; j < g.n; ++j) {
    sp.eta[j] += h * dir.eta[j], sp.u[j] += h * dir.u[j];
    sm.eta[j] -= h * dir.eta[j], sm.u[j] -= h * dir.u[j];
  }
  const auto rp = rhs_reduced(sp, sys), rm = rhs_reduced(sm, sys);
  for (int j = 0; j < g.n; ++j) {
    CHECK(std::abs((rp.eta[j] - rm.eta[j]) / (2 * h) - t.eta[j]) < 1e-6);
    CHECK(std::abs((rp.u[j] - rm.u[j]) / (2 * h) - t.u[j]) < 1e-6);
  }
}

TEST_CASE("residual_full matches the Kronecker oracle") {
  const GridSpec g = make_grid(-2, 6, 16);
  const auto m = coeffs(1.0 / 9, 1.0 / 9, 0.05);
  const auto sys = SemiDiscreteSystem::general(m, spectral_derivative(g), FormKind::FullGeneral);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> U(-1, 1);
  ZGridField z = ZGridField::zeros(g), zd = ZGridField::zeros(g);
  for (double& v : z.z) v = U(rng);
  for (double& v : zd.z) v = U(rng);
  const auto r = residual_full(z, zd, sys);
  const oracle::Vec ro = oracle::residual_full(oracle::spectral(16, 6), m, oracle::vec(z.z), oracle::vec(zd.z));
  CHECK(oracle::supdiff(r, oracle::field(ro)) < 1e-12 * 10);
}

TEST_CASE("reconstructed auxiliaries satisfy the full system") {
  for (bool spectral : {false, true})
    for (int n : {16, 33}) {
      const GridSpec g = make_grid(0, 10, n);
      const auto D = spectral ? spectral_derivative(g) : central_difference(g);
      const auto sys = SemiDiscreteSystem::general(coeffs(1.0 / 9, 1.0 / 9, 0.05), D);
      const auto s = oracle::smooth_state(g, 5);
      const auto aux = reconstruct_aux(s, rhs_reduced(s, sys), sys);
      CHECK(oracle::supdiff(aux.z.component(zc::eta), s.eta) == 0.0);
      const auto r = residual_full(aux.z, aux.zdot, sys);
      CHECK(oracle::supnorm(r) < 1e-12 * std::max(1.0, D.max_abs_symbol()));
    }
}

TEST_CASE("reconstruction rejects content on zero modes") {
  const GridSpec g = make_grid(0, 10, 16);
  const auto sys = SemiDiscreteSystem::general(coeffs(0, 0.1, 0.1), spectral_derivative(g));
  auto s = oracle::smooth_state(g, 5);
  for (double& v : s.eta) v += 0.5;
  CHECK_THROWS_AS(reconstruct_aux(s, rhs_reduced(s, sys), sys), ReconstructionError);
  const auto box = SemiDiscreteSystem::box(coeffs(0, 0.1, 0.1), make_grid(0, 10, 15));
  const auto s15 = oracle::smooth_state(make_grid(0, 10, 15), 5);
  CHECK_THROWS(reconstruct_aux(s15, rhs_reduced(s15, box), box));
}

TEST_CASE("ZGridField accessors") {
  const GridSpec g = make_grid(0, 1, 4);
  ZGridField z = ZGridField::zeros(g);
  z.at(2, zc::u) = 3;
  CHECK(z.node(2)[zc::u] == 3);
  CHECK(z.component(zc::u) == Field{0, 0, 3, 0});
  z.set_component(zc::eta, {1, 2, 3, 4});
  CHECK(z.reduced().eta == Field{1, 2, 3, 4});
  CHECK(z.reduced().u == Field{0, 0, 3, 0});
}
