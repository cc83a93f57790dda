#include "msint/semidiscrete.hpp"

#include <algorithm>
#include <cmath>

#include "msint/errors.hpp"

namespace msint {

Vec10 ZGridField::node(int j) const {
  Vec10 v;
  for (int c = 0; c < kZDim; ++c) v[c] = z[kZDim * j + c];
  return v;
}

void ZGridField::set_node(int j, const Vec10& v) {
  for (int c = 0; c < kZDim; ++c) z[kZDim * j + c] = v[c];
}

Field ZGridField::component(int c) const {
  Field f(grid.n);
  for (int j = 0; j < grid.n; ++j) f[j] = z[kZDim * j + c];
  return f;
}

void ZGridField::set_component(int c, const Field& f) {
  for (int j = 0; j < grid.n; ++j) z[kZDim * j + c] = f[j];
}

StateField ZGridField::reduced() const { return {grid, component(zc::eta), component(zc::u)}; }

SemiDiscreteSystem SemiDiscreteSystem::general(const ModelCoefficients& m,
                                               const CirculantOperator& D, FormKind form) {
  validate(m);
  if (!is_multisymplectic(m))
    throw StructuralError("semi-discretization needs multi-symplectic coefficients (a=c, "
                          "alpha12=2beta11, beta12=2alpha22)");
  if (form == FormKind::BoxSpatial) return box(m, D.grid());
  SemiDiscreteSystem s(m, D, form);
  const int nh = half_size(D.size());
  s.nb_.resize(nh);
  s.nd_.resize(nh);
  s.g_.resize(nh);
  s.q_.resize(nh);
  for (int p = 0; p < nh; ++p) {
    const cplx sg = D.symbol_at(p);
    s.nb_[p] = 1.0 - m.b * sg * sg;
    s.nd_[p] = 1.0 - m.d * sg * sg;
    s.g_[p] = sg * (1.0 + m.a * sg * sg);
    s.q_[p] = sg;
    if (std::abs(s.nb_[p]) < 1e-14 || std::abs(s.nd_[p]) < 1e-14)
      throw SingularityError("N_h(b) or N_h(d) is singular at mode " + std::to_string(p));
  }
  return s;
}

SemiDiscreteSystem SemiDiscreteSystem::box(const ModelCoefficients& m, const GridSpec& grid) {
  validate(m);
  if (!is_multisymplectic(m))
    throw StructuralError("box scheme needs multi-symplectic coefficients");
  if (grid.n % 2 == 0)
    throw SingularityError("box scheme needs an odd number of nodes: M_x is singular for N = " +
                           std::to_string(grid.n));
  const CirculantOperator Dx = forward_difference(grid);
  SemiDiscreteSystem s(m, Dx, FormKind::BoxSpatial);
  s.Mx_ = average(grid);
  const int nh = half_size(grid.n);
  s.nb_.resize(nh);
  s.nd_.resize(nh);
  s.g_.resize(nh);
  s.q_.resize(nh);
  for (int p = 0; p < nh; ++p) {
    const cplx lam = Dx.symbol_at(p);
    const cplx mu = s.Mx_->symbol_at(p);
    s.nb_[p] = mu * mu * mu - m.b * lam * lam * mu;
    s.nd_[p] = mu * mu * mu - m.d * lam * lam * mu;
    s.g_[p] = m.a * lam * lam * lam + mu * mu * lam;
    s.q_[p] = lam * mu;
  }
  return s;
}

Field SemiDiscreteSystem::nonlinear_arg(const Field& f) const {
  return Mx_ ? Mx_->apply(f) : f;
}

Field hadamard_A(const Field& eta, const Field& u, const ModelCoefficients& m) {
  Field r(eta.size());
  for (size_t j = 0; j < eta.size(); ++j) r[j] = nonlinearity_A(eta[j], u[j], m);
  return r;
}

Field hadamard_B(const Field& eta, const Field& u, const ModelCoefficients& m) {
  Field r(eta.size());
  for (size_t j = 0; j < eta.size(); ++j) r[j] = nonlinearity_B(eta[j], u[j], m);
  return r;
}

namespace {

void check_sizes(const StateField& s, const SemiDiscreteSystem& sys) {
  if (static_cast<int>(s.eta.size()) != sys.n() || static_cast<int>(s.u.size()) != sys.n())
    throw DomainError("state size does not match the system grid");
}

StateField rhs_modes(const StateField& s, const Field& A, const Field& B,
                     const SemiDiscreteSystem& sys) {
  const int n = sys.n();
  const Spectrum E = rfft(s.eta), U = rfft(s.u), Ah = rfft(A), Bh = rfft(B);
  Spectrum Ed(E.size()), Ud(U.size());
  for (size_t p = 0; p < E.size(); ++p) {
    Ed[p] = -(sys.g()[p] * U[p] + sys.q()[p] * Ah[p]) / sys.nb()[p];
    Ud[p] = -(sys.g()[p] * E[p] + sys.q()[p] * Bh[p]) / sys.nd()[p];
  }
  return {s.grid, irfft(Ed, n), irfft(Ud, n)};
}

}  // namespace

StateField rhs_reduced(const StateField& s, const SemiDiscreteSystem& sys) {
  check_sizes(s, sys);
  if (sys.is_box()) return rhs_box(s, sys);
  const auto& m = sys.coeffs();
  return rhs_modes(s, hadamard_A(s.eta, s.u, m), hadamard_B(s.eta, s.u, m), sys);
}

StateField rhs_reduced_tangent(const StateField& s, const StateField& dir,
                               const SemiDiscreteSystem& sys) {
  check_sizes(s, sys);
  check_sizes(dir, sys);
  const auto& m = sys.coeffs();
  const Field e = sys.nonlinear_arg(s.eta), u = sys.nonlinear_arg(s.u);
  const Field de = sys.nonlinear_arg(dir.eta), du = sys.nonlinear_arg(dir.u);
  Field A(e.size()), B(e.size());
  for (size_t j = 0; j < e.size(); ++j) {
    A[j] = (2 * m.alpha11 * e[j] + m.alpha12 * u[j]) * de[j] +
           (m.alpha12 * e[j] + 2 * m.alpha22 * u[j]) * du[j];
    B[j] = (2 * m.beta11 * e[j] + m.beta12 * u[j]) * de[j] +
           (m.beta12 * e[j] + 2 * m.beta22 * u[j]) * du[j];
  }
  return rhs_modes(dir, A, B, sys);
}

StateField rhs_box(const StateField& s, const SemiDiscreteSystem& sys) {
  if (s.grid.n % 2 == 0)
    throw SingularityError("box scheme needs an odd number of nodes (M_x is singular for even N)");
  if (!sys.is_box()) throw DomainError("rhs_box needs a box-form system");
  check_sizes(s, sys);
  const auto& m = sys.coeffs();
  const Field e = sys.nonlinear_arg(s.eta), u = sys.nonlinear_arg(s.u);
  return rhs_modes(s, hadamard_A(e, u, m), hadamard_B(e, u, m), sys);
}

namespace {

// Applies D_h to each of the 10 components.
std::vector<double> apply_componentwise(const CirculantOperator& D, const ZGridField& z) {
  std::vector<double> out(z.z.size());
  for (int c = 0; c < kZDim; ++c) {
    const Field f = D.apply(z.component(c));
    for (int j = 0; j < z.grid.n; ++j) out[kZDim * j + c] = f[j];
  }
  return out;
}

}  // namespace

std::vector<double> residual_full(const ZGridField& z, const ZGridField& zdot,
                                  const SemiDiscreteSystem& sys) {
  if (sys.is_box()) throw DomainError("residual_full needs a general-operator system");
  const int n = sys.n();
  if (z.grid.n != n || zdot.grid.n != n) throw DomainError("field size does not match system");
  const MSStructure ms = ms_matrices(sys.coeffs());
  const std::vector<double> Dz = apply_componentwise(sys.D(), z);
  std::vector<double> r(z.z.size());
  for (int j = 0; j < n; ++j) {
    const Vec10 zj = z.node(j), zd = zdot.node(j);
    Vec10 dz;
    for (int c = 0; c < kZDim; ++c) dz[c] = Dz[kZDim * j + c];
    const Vec10 a = matvec(ms.K, zd), b = matvec(ms.M, dz), g = grad_S(zj, sys.coeffs());
    for (int c = 0; c < kZDim; ++c) r[kZDim * j + c] = a[c] + b[c] - g[c];
  }
  return r;
}

Field inverse_derivative(const CirculantOperator& D, const Field& f, const char* what) {
  const int n = D.size();
  Spectrum F = rfft(f);
  double scale = 1.0;
  for (double v : f) scale = std::max(scale, std::abs(v));
  const double tiny = 1e-13 * std::max(1.0, D.max_abs_symbol());
  for (int p = 0; p < half_size(n); ++p) {
    const cplx s = D.symbol_at(p);
    if (std::abs(s) <= tiny) {
      if (std::abs(F[p]) / n > kKernelTol * scale)
        throw ReconstructionError(std::string("reconstruct_aux: ") + what +
                                  " has content on a zero mode of D_h (mode " +
                                  std::to_string(p) + ")");
      F[p] = 0;
    } else {
      F[p] /= s;
    }
  }
  return irfft(F, n);
}

AuxFields reconstruct_aux(const StateField& s, const StateField& s_dot,
                          const SemiDiscreteSystem& sys, const std::optional<StateField>& s_ddot) {
  if (sys.is_box()) throw DomainError("reconstruct_aux needs a general-operator system");
  check_sizes(s, sys);
  check_sizes(s_dot, sys);
  const auto& m = sys.coeffs();
  const auto& D = sys.D();
  const StateField dd = s_ddot ? *s_ddot : rhs_reduced_tangent(s, s_dot, sys);

  // (I + a D^2) f
  auto helm = [&](const Field& f) {
    const Field d2 = D.apply(D.apply(f));
    Field r(f.size());
    for (size_t j = 0; j < f.size(); ++j) r[j] = f[j] + m.a * d2[j];
    return r;
  };

  const Field A = hadamard_A(s.eta, s.u, m), B = hadamard_B(s.eta, s.u, m);
  Field Ad(s.eta.size()), Bd(s.eta.size());
  for (size_t j = 0; j < Ad.size(); ++j) {
    const double e = s.eta[j], u = s.u[j];
    Ad[j] = (2 * m.alpha11 * e + m.alpha12 * u) * s_dot.eta[j] +
            (m.alpha12 * e + 2 * m.alpha22 * u) * s_dot.u[j];
    Bd[j] = (2 * m.beta11 * e + m.beta12 * u) * s_dot.eta[j] +
            (m.beta12 * e + 2 * m.beta22 * u) * s_dot.u[j];
  }

  // p = 1/2 D^{-1} x' - b D x' + (I + a D^2) y + N
  auto pvar = [&](const Field& xd, const Field& y, const Field& nl, double bb, const char* w) {
    const Field inv = inverse_derivative(D, xd, w);
    const Field dx = D.apply(xd);
    const Field hy = helm(y);
    Field r(xd.size());
    for (size_t j = 0; j < r.size(); ++j) r[j] = 0.5 * inv[j] - bb * dx[j] + hy[j] + nl[j];
    return r;
  };

  AuxFields out{ZGridField::zeros(s.grid), ZGridField::zeros(s.grid)};
  ZGridField& z = out.z;
  ZGridField& zd = out.zdot;

  z.set_component(zc::eta, s.eta);
  z.set_component(zc::u, s.u);
  z.set_component(zc::phi1, inverse_derivative(D, s.eta, "eta"));
  z.set_component(zc::phi2, inverse_derivative(D, s.u, "u"));
  z.set_component(zc::v1, D.apply(s.eta));
  z.set_component(zc::v2, D.apply(s.u));
  z.set_component(zc::w1, s_dot.eta);
  z.set_component(zc::w2, s_dot.u);
  z.set_component(zc::p1, pvar(s_dot.eta, s.u, A, m.b, "eta_t"));
  z.set_component(zc::p2, pvar(s_dot.u, s.eta, B, m.d, "u_t"));

  zd.set_component(zc::eta, s_dot.eta);
  zd.set_component(zc::u, s_dot.u);
  zd.set_component(zc::phi1, inverse_derivative(D, s_dot.eta, "eta_t"));
  zd.set_component(zc::phi2, inverse_derivative(D, s_dot.u, "u_t"));
  zd.set_component(zc::v1, D.apply(s_dot.eta));
  zd.set_component(zc::v2, D.apply(s_dot.u));
  zd.set_component(zc::w1, dd.eta);
  zd.set_component(zc::w2, dd.u);
  zd.set_component(zc::p1, pvar(dd.eta, s_dot.u, Ad, m.b, "eta_tt"));
  zd.set_component(zc::p2, pvar(dd.u, s_dot.eta, Bd, m.d, "u_tt"));
  return out;
}

}  // namespace msint
