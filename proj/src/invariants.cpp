#include "msint/invariants.hpp"

#include <algorithm>
#include <cmath>

#include "msint/errors.hpp"

namespace msint {

double inner(const Field& x, const Field& y) {
  double s = 0;
  for (size_t j = 0; j < x.size(); ++j) s += x[j] * y[j];
  return s;
}

namespace {

double sum(const Field& x) {
  double s = 0;
  for (double v : x) s += v;
  return s;
}

Field d2(const CirculantOperator& D, const Field& f) { return D.apply(D.apply(f)); }

}  // namespace

double energy_E_h(const StateField& s, const ModelCoefficients& m, const CirculantOperator& D) {
  const Field De = D.apply(s.eta), Du = D.apply(s.u);
  double cubic = 0;
  for (size_t j = 0; j < s.eta.size(); ++j) {
    const double e = s.eta[j], u = s.u[j];
    cubic += m.alpha11 / 3 * e * e * e + m.beta11 * e * e * u + m.beta12 / 2 * e * u * u +
             m.beta22 / 3 * u * u * u;
  }
  return -inner(s.eta, s.u) + m.a * inner(De, Du) - cubic;
}

StateField energy_gradient(const StateField& s, const ModelCoefficients& m,
                           const CirculantOperator& D) {
  const Field D2e = d2(D, s.eta), D2u = d2(D, s.u);
  StateField g{s.grid, Field(s.eta.size()), Field(s.u.size())};
  for (size_t j = 0; j < s.eta.size(); ++j) {
    const double e = s.eta[j], u = s.u[j];
    g.eta[j] = -(u + m.a * D2u[j] + m.alpha11 * e * e + 2 * m.beta11 * e * u + m.beta12 / 2 * u * u);
    g.u[j] = -(e + m.a * D2e[j] + m.beta11 * e * e + m.beta12 * e * u + m.beta22 * u * u);
  }
  return g;
}

double momentum_I_h(const StateField& s, const ModelCoefficients& m, const CirculantOperator& D) {
  const Field De = D.apply(s.eta), Du = D.apply(s.u);
  return 0.5 * (inner(s.eta, s.eta) + inner(s.u, s.u) + m.b * inner(De, De) + m.d * inner(Du, Du));
}

StateField momentum_gradient(const StateField& s, const ModelCoefficients& m,
                             const CirculantOperator& D) {
  const Field D2e = d2(D, s.eta), D2u = d2(D, s.u);
  StateField g{s.grid, Field(s.eta.size()), Field(s.u.size())};
  for (size_t j = 0; j < s.eta.size(); ++j) {
    g.eta[j] = s.eta[j] - m.b * D2e[j];
    g.u[j] = s.u[j] - m.d * D2u[j];
  }
  return g;
}

double frak_I_h(const StateField& s, const ModelCoefficients& m, const CirculantOperator& D) {
  return inner(s.eta, s.u) + m.b * inner(D.apply(s.eta), D.apply(s.u));
}

double hamiltonian_H_h(const StateField& s, const ModelCoefficients& m, const CirculantOperator& D) {
  if (classify_structure(m) != StructureClass::MultiSymplecticHamiltonian)
    throw StructuralError("H_h is defined only for the multi-symplectic Hamiltonian class");
  const Field D2U = d2(D, s.eta), D2V = d2(D, s.u);
  double G = 0;
  for (size_t j = 0; j < s.eta.size(); ++j) {
    const double U = s.eta[j], V = s.u[j];
    G += m.beta11 / 3 * U * U * U + m.beta12 / 2 * U * U * V + m.beta22 * U * V * V +
         m.alpha22 / 3 * V * V * V;
  }
  return 0.5 * (inner(s.eta, s.eta) + inner(s.u, s.u) + m.a * inner(s.eta, D2U) +
                m.a * inner(s.u, D2V)) +
         G;
}

StateField hamiltonian_gradient(const StateField& s, const ModelCoefficients& m,
                                const CirculantOperator& D) {
  const Field D2U = d2(D, s.eta), D2V = d2(D, s.u);
  StateField g{s.grid, Field(s.eta.size()), Field(s.u.size())};
  for (size_t j = 0; j < s.eta.size(); ++j) {
    const double U = s.eta[j], V = s.u[j];
    g.eta[j] = U + m.a * D2U[j] + m.beta11 * U * U + m.beta12 * U * V + m.beta22 * V * V;
    g.u[j] = V + m.a * D2V[j] + m.beta12 / 2 * U * U + 2 * m.beta22 * U * V + m.alpha22 * V * V;
  }
  return g;
}

std::pair<double, double> linear_invariants(const StateField& s) { return {sum(s.eta), sum(s.u)}; }

double momentum_leakage(const StateField& s, const ModelCoefficients& m,
                        const CirculantOperator& D) {
  return inner(hadamard_A(s.eta, s.u, m), D.apply(s.eta)) +
         inner(hadamard_B(s.eta, s.u, m), D.apply(s.u));
}

namespace {

std::vector<double> componentwise(const CirculantOperator& D, const ZGridField& z) {
  std::vector<double> out(z.z.size());
  for (int c = 0; c < kZDim; ++c) {
    const Field f = D.apply(z.component(c));
    for (int j = 0; j < z.grid.n; ++j) out[kZDim * j + c] = f[j];
  }
  return out;
}

Vec10 slice(const std::vector<double>& v, int j) {
  Vec10 r;
  for (int c = 0; c < kZDim; ++c) r[c] = v[kZDim * j + c];
  return r;
}

struct NodeTerms {
  double dE_chain[3];  // grad S . zdot, -1/2 zdot' M Cz, -1/2 z' M C zdot
  double flux_E[2];    // 1/2 Cz' M zdot, 1/2 z' M C zdot
  double dI_chain[2];  // 1/2 zdot' K Cz, 1/2 z' K C zdot
  double flux_M[3];    // grad S . Cz, -1/2 Cz' K zdot, -1/2 z' K C zdot
};

NodeTerms node_terms(const Vec10& zj, const Vec10& zd, const Vec10& cz, const Vec10& czd,
                     const MSStructure& ms, const ModelCoefficients& m) {
  const Vec10 g = grad_S(zj, m);
  NodeTerms t;
  t.dE_chain[0] = dot(g, zd);
  t.dE_chain[1] = -0.5 * dot(zd, matvec(ms.M, cz));
  t.dE_chain[2] = -0.5 * dot(zj, matvec(ms.M, czd));
  t.flux_E[0] = 0.5 * dot(cz, matvec(ms.M, zd));
  t.flux_E[1] = 0.5 * dot(zj, matvec(ms.M, czd));
  t.dI_chain[0] = 0.5 * dot(zd, matvec(ms.K, cz));
  t.dI_chain[1] = 0.5 * dot(zj, matvec(ms.K, czd));
  t.flux_M[0] = dot(g, cz);
  t.flux_M[1] = -0.5 * dot(cz, matvec(ms.K, zd));
  t.flux_M[2] = -0.5 * dot(zj, matvec(ms.K, czd));
  return t;
}

double absmax(std::initializer_list<double> v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

LocalDensities local_densities(const ZGridField& z, const ZGridField& zdot,
                               const SemiDiscreteSystem& sys) {
  const auto& m = sys.coeffs();
  const MSStructure ms = ms_matrices(m);
  const std::vector<double> Cz = componentwise(sys.D(), z);
  const int n = z.grid.n;
  LocalDensities d{Field(n), Field(n), Field(n), Field(n)};
  for (int j = 0; j < n; ++j) {
    const Vec10 zj = z.node(j), zd = zdot.node(j), cz = slice(Cz, j);
    const double S = potential_S(zj, m);
    d.energy[j] = S - 0.5 * dot(zj, matvec(ms.M, cz));
    d.energy_flux[j] = 0.5 * dot(zj, matvec(ms.M, zd));
    d.momentum[j] = 0.5 * dot(zj, matvec(ms.K, cz));
    d.momentum_flux[j] = S - 0.5 * dot(zj, matvec(ms.K, zd));
  }
  return d;
}

LocalLawResiduals local_law_residuals(const ZGridField& z, const ZGridField& zdot,
                                      const SemiDiscreteSystem& sys) {
  const auto& m = sys.coeffs();
  const MSStructure ms = ms_matrices(m);
  const std::vector<double> Cz = componentwise(sys.D(), z), Czd = componentwise(sys.D(), zdot);
  LocalLawResiduals r;
  for (int j = 0; j < z.grid.n; ++j) {
    const NodeTerms t = node_terms(z.node(j), zdot.node(j), slice(Cz, j), slice(Czd, j), ms, m);
    const double rE = t.dE_chain[0] + t.dE_chain[1] + t.dE_chain[2] + t.flux_E[0] + t.flux_E[1];
    const double rM = t.dI_chain[0] + t.dI_chain[1] + t.flux_M[0] + t.flux_M[1] + t.flux_M[2];
    r.energy = std::max(r.energy, std::abs(rE));
    r.momentum = std::max(r.momentum, std::abs(rM));
    r.energy_scale = std::max(r.energy_scale, absmax({t.dE_chain[0], t.dE_chain[1], t.dE_chain[2],
                                                      t.flux_E[0], t.flux_E[1]}));
    r.momentum_scale = std::max(r.momentum_scale, absmax({t.dI_chain[0], t.dI_chain[1],
                                                          t.flux_M[0], t.flux_M[1], t.flux_M[2]}));
  }
  return r;
}

LocalLawResiduals local_law_residuals(const std::vector<ZGridField>& samples, double spacing,
                                      const SemiDiscreteSystem& sys) {
  if (samples.size() < 5)
    throw InsufficientDataError("local_law_residuals needs at least 5 samples, got " +
                                std::to_string(samples.size()));
  if (!(spacing > 0)) throw DomainError("sample spacing must be > 0");
  const auto& m = sys.coeffs();
  const MSStructure ms = ms_matrices(m);
  const size_t ns = samples.size();
  const int n = samples[0].grid.n;

  auto fd = [&](const std::vector<double>& fm2, const std::vector<double>& fm1,
                const std::vector<double>& fp1, const std::vector<double>& fp2) {
    std::vector<double> r(fm2.size());
    for (size_t i = 0; i < r.size(); ++i)
      r[i] = (fm2[i] - 8 * fm1[i] + 8 * fp1[i] - fp2[i]) / (12 * spacing);
    return r;
  };

  // zdot at the interior samples
  std::vector<ZGridField> zdot(ns, ZGridField::zeros(samples[0].grid));
  for (size_t k = 2; k + 2 < ns; ++k)
    zdot[k].z = fd(samples[k - 2].z, samples[k - 1].z, samples[k + 1].z, samples[k + 2].z);

  // density values at all samples need zdot only for the fluxes, so the
  // rates of E_j and I_j use densities evaluated with a dummy zdot
  std::vector<Field> Ej(ns), Ij(ns);
  for (size_t k = 0; k < ns; ++k) {
    const LocalDensities d = local_densities(samples[k], samples[k], sys);
    Ej[k] = d.energy;
    Ij[k] = d.momentum;
  }

  LocalLawResiduals r;
  for (size_t k = 2; k + 2 < ns; ++k) {
    const std::vector<double> dE = fd(Ej[k - 2], Ej[k - 1], Ej[k + 1], Ej[k + 2]);
    const std::vector<double> dI = fd(Ij[k - 2], Ij[k - 1], Ij[k + 1], Ij[k + 2]);
    const std::vector<double> Cz = componentwise(sys.D(), samples[k]);
    const std::vector<double> Czd = componentwise(sys.D(), zdot[k]);
    for (int j = 0; j < n; ++j) {
      const NodeTerms t =
          node_terms(samples[k].node(j), zdot[k].node(j), slice(Cz, j), slice(Czd, j), ms, m);
      const double rE = dE[j] + t.flux_E[0] + t.flux_E[1];
      const double rM = dI[j] + t.flux_M[0] + t.flux_M[1] + t.flux_M[2];
      r.energy = std::max(r.energy, std::abs(rE));
      r.momentum = std::max(r.momentum, std::abs(rM));
      r.energy_scale = std::max(r.energy_scale, absmax({dE[j], t.flux_E[0], t.flux_E[1]}));
      r.momentum_scale =
          std::max(r.momentum_scale, absmax({dI[j], t.flux_M[0], t.flux_M[1], t.flux_M[2]}));
    }
  }
  return r;
}

double total_symplecticity(const TangentPair& pair, const Mat10& K) {
  double s = 0;
  for (int j = 0; j < pair.U.grid.n; ++j) s += dot(matvec(K, pair.U.node(j)), pair.V.node(j));
  return s;
}

DiagnosticsRecord diagnostics(const StateField& s, const SemiDiscreteSystem& sys, double t) {
  const auto& m = sys.coeffs();
  const auto& D = sys.D();
  DiagnosticsRecord r;
  r.t = t;
  r.E = energy_E_h(s, m, D);
  r.I = momentum_I_h(s, m, D);
  r.frakI = frak_I_h(s, m, D);
  if (classify_structure(m) == StructureClass::MultiSymplecticHamiltonian)
    r.H = hamiltonian_H_h(s, m, D);
  auto [c1, c2] = linear_invariants(s);
  r.C1 = c1;
  r.C2 = c2;
  return r;
}

}  // namespace msint
