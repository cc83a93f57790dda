#include "msint/model.hpp"

#include <cmath>

#include "msint/errors.hpp"

namespace msint {

std::string to_string(StructureClass s) {
  switch (s) {
    case StructureClass::Generic: return "Generic";
    case StructureClass::MultiSymplectic: return "MultiSymplectic";
    case StructureClass::MultiSymplecticHamiltonian: return "MultiSymplecticHamiltonian";
  }
  return "?";
}

ModelCoefficients coefficients_from_generators(double theta, double nu, double mu) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw DomainError("theta must lie in [0,1], got " + std::to_string(theta));
  const double t2 = theta * theta;
  ModelCoefficients m;
  m.a = 0.5 * (t2 - 1.0 / 3.0) * nu;
  m.b = 0.5 * (t2 - 1.0 / 3.0) * (1.0 - nu);
  m.c = 0.5 * (1.0 - t2) * mu;
  m.d = 0.5 * (1.0 - t2) * (1.0 - mu);
  m.generators = Generators{theta, nu, mu};
  return m;
}

void validate(const ModelCoefficients& m) {
  const double all[] = {m.a, m.b, m.c, m.d, m.alpha11, m.alpha12,
                        m.alpha22, m.beta11, m.beta12, m.beta22};
  for (double v : all)
    if (!std::isfinite(v)) throw DomainError("model coefficients must be finite");
  if (m.b < 0) throw DomainError("b must be >= 0");
  if (m.d < 0) throw DomainError("d must be >= 0");
  if (m.generators) {
    auto g = coefficients_from_generators(m.generators->theta, m.generators->nu,
                                          m.generators->mu);
    if (std::abs(g.a - m.a) > 1e-14 || std::abs(g.b - m.b) > 1e-14 ||
        std::abs(g.c - m.c) > 1e-14 || std::abs(g.d - m.d) > 1e-14)
      throw DomainError("(a,b,c,d) disagree with the theta/nu/mu generators");
  }
}

namespace {
bool eq(double x, double y) { return std::abs(x - y) <= kStructureTol; }
}  // namespace

StructureClass classify_structure(const ModelCoefficients& m) {
  const bool ms = eq(m.a, m.c) && eq(m.alpha12, 2 * m.beta11) && eq(m.beta12, 2 * m.alpha22);
  if (!ms) return StructureClass::Generic;
  const bool ham = eq(m.beta12, 2 * m.alpha11) && eq(m.beta12, 2 * m.alpha22) &&
                   eq(m.alpha12, 2 * m.beta11) && eq(m.alpha12, 2 * m.beta22) && eq(m.b, m.d);
  return ham ? StructureClass::MultiSymplecticHamiltonian : StructureClass::MultiSymplectic;
}

bool is_multisymplectic(const ModelCoefficients& m) {
  return classify_structure(m) != StructureClass::Generic;
}

ModelCoefficients with_reference_nonlinearity(ModelCoefficients m) {
  m.alpha11 = 0;
  m.alpha12 = 0.46;
  m.alpha22 = 0;
  m.beta11 = 0.23;
  m.beta12 = 0;
  m.beta22 = 0.73;
  return m;
}

ModelCoefficients with_hamiltonian_nonlinearity(ModelCoefficients m) {
  m = with_reference_nonlinearity(m);
  m.beta22 = 0.23;
  return m;
}

namespace {
void require_ms(const ModelCoefficients& m, const char* who) {
  if (!is_multisymplectic(m))
    throw StructuralError(std::string(who) +
                          ": coefficients are not multi-symplectic (need a=c, "
                          "alpha12=2beta11, beta12=2alpha22)");
}
}  // namespace

double potential_S(const Vec10& z, const ModelCoefficients& m) {
  require_ms(m, "potential_S");
  const double e = z[zc::eta], u = z[zc::u];
  return z[zc::p1] * e - e * u - m.alpha11 / 3 * e * e * e - m.beta11 * e * e * u -
         m.beta12 / 2 * e * u * u + m.b / 2 * z[zc::v1] * z[zc::w1] - m.beta22 / 3 * u * u * u +
         m.d / 2 * z[zc::v2] * z[zc::w2] - m.a * z[zc::v1] * z[zc::v2] + z[zc::p2] * u;
}

Vec10 grad_S_nonlinear(const Vec10& z, const ModelCoefficients& m) {
  const double e = z[zc::eta], u = z[zc::u];
  Vec10 g{};
  g[zc::eta] = -(m.alpha11 * e * e + 2 * m.beta11 * e * u + m.beta12 / 2 * u * u);
  g[zc::u] = -(m.beta11 * e * e + m.beta12 * e * u + m.beta22 * u * u);
  return g;
}

Vec10 grad_S(const Vec10& z, const ModelCoefficients& m) {
  require_ms(m, "grad_S");
  Vec10 g = matvec(ms_matrices(m).L, z);
  const Vec10 n = grad_S_nonlinear(z, m);
  for (int i = 0; i < kZDim; ++i) g[i] += n[i];
  return g;
}

Mat10 hess_S_nonlinear(const Vec10& z, const ModelCoefficients& m) {
  const double e = z[zc::eta], u = z[zc::u];
  Mat10 H{};
  H[zc::eta][zc::eta] = -(2 * m.alpha11 * e + 2 * m.beta11 * u);
  H[zc::eta][zc::u] = H[zc::u][zc::eta] = -(2 * m.beta11 * e + m.beta12 * u);
  H[zc::u][zc::u] = -(m.beta12 * e + 2 * m.beta22 * u);
  return H;
}

MSStructure ms_matrices(const ModelCoefficients& m) {
  require_ms(m, "ms_matrices");
  MSStructure s;
  auto& K = s.K;
  auto& M = s.M;
  auto& L = s.L;
  using namespace zc;
  K[eta][phi1] = 0.5;
  K[eta][v1] = -m.b / 2;
  K[phi1][eta] = -0.5;
  K[v1][eta] = m.b / 2;
  K[u][phi2] = 0.5;
  K[u][v2] = -m.d / 2;
  K[phi2][u] = -0.5;
  K[v2][u] = m.d / 2;

  M[eta][w1] = -m.b / 2;
  M[eta][v2] = m.a;
  M[phi1][p1] = -1;
  M[v1][u] = -m.c;
  M[w1][eta] = m.b / 2;
  M[p1][phi1] = 1;
  M[u][v1] = m.c;
  M[u][w2] = -m.d / 2;
  M[phi2][p2] = -1;
  M[v2][eta] = -m.a;
  M[w2][u] = m.d / 2;
  M[p2][phi2] = 1;

  L[eta][p1] = L[p1][eta] = 1;
  L[eta][u] = L[u][eta] = -1;
  L[v1][w1] = L[w1][v1] = m.b / 2;
  L[v1][v2] = L[v2][v1] = -m.a;
  L[v2][w2] = L[w2][v2] = m.d / 2;
  L[u][p2] = L[p2][u] = 1;
  return s;
}

Vec10 matvec(const Mat10& A, const Vec10& x) {
  Vec10 y{};
  for (int i = 0; i < kZDim; ++i) {
    double s = 0;
    for (int j = 0; j < kZDim; ++j) s += A[i][j] * x[j];
    y[i] = s;
  }
  return y;
}

double dot(const Vec10& x, const Vec10& y) {
  double s = 0;
  for (int i = 0; i < kZDim; ++i) s += x[i] * y[i];
  return s;
}

}  // namespace msint
