#pragma once

#include <array>
#include <optional>
#include <string>

namespace msint {

struct Generators {
  double theta = 0, nu = 0, mu = 0;
  bool operator==(const Generators&) const = default;
};

struct ModelCoefficients {
  double a = 0, b = 0, c = 0, d = 0;
  double alpha11 = 0, alpha12 = 0, alpha22 = 0;
  double beta11 = 0, beta12 = 0, beta22 = 0;
  std::optional<Generators> generators;

  bool operator==(const ModelCoefficients&) const = default;
};

enum class StructureClass { Generic, MultiSymplectic, MultiSymplecticHamiltonian };

std::string to_string(StructureClass s);

// Absolute tolerance for the equalities behind classify_structure.
inline constexpr double kStructureTol = 1e-12;

ModelCoefficients coefficients_from_generators(double theta, double nu, double mu);

// Throws DomainError when b < 0, d < 0 or the generators disagree with (a,b,c,d).
void validate(const ModelCoefficients& m);

StructureClass classify_structure(const ModelCoefficients& m);
bool is_multisymplectic(const ModelCoefficients& m);

// Fig. 1 nonlinearity set, and the same set with beta22 moved to 0.23 so
// that the Hamiltonian conditions hold.
ModelCoefficients with_reference_nonlinearity(ModelCoefficients m);
ModelCoefficients with_hamiltonian_nonlinearity(ModelCoefficients m);

inline double nonlinearity_A(double eta, double u, const ModelCoefficients& m) {
  return m.alpha11 * eta * eta + m.alpha12 * eta * u + m.alpha22 * u * u;
}
inline double nonlinearity_B(double eta, double u, const ModelCoefficients& m) {
  return m.beta11 * eta * eta + m.beta12 * eta * u + m.beta22 * u * u;
}

// z = (eta, phi1, v1, w1, p1, u, phi2, v2, w2, p2)
namespace zc {
inline constexpr int eta = 0, phi1 = 1, v1 = 2, w1 = 3, p1 = 4;
inline constexpr int u = 5, phi2 = 6, v2 = 7, w2 = 8, p2 = 9;
}  // namespace zc

inline constexpr int kZDim = 10;
using Vec10 = std::array<double, kZDim>;
using Mat10 = std::array<std::array<double, kZDim>, kZDim>;

struct MSStructure {
  Mat10 K{}, M{}, L{};
};

double potential_S(const Vec10& z, const ModelCoefficients& m);
Vec10 grad_S(const Vec10& z, const ModelCoefficients& m);
// grad_S(z) - L z; only the eta and u slots are nonzero.
Vec10 grad_S_nonlinear(const Vec10& z, const ModelCoefficients& m);
// Hessian of the cubic part of S (nonzero only in the (eta,u) block).
Mat10 hess_S_nonlinear(const Vec10& z, const ModelCoefficients& m);
MSStructure ms_matrices(const ModelCoefficients& m);

Vec10 matvec(const Mat10& A, const Vec10& x);
double dot(const Vec10& x, const Vec10& y);

}  // namespace msint
