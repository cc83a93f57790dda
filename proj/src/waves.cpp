#include "msint/waves.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "msint/errors.hpp"

namespace msint {

std::string to_string(WaveClass c) { return c == WaveClass::CSW ? "CSW" : "GSW"; }

StateField traveling_residual(const StateField& s, double c, const ModelCoefficients& m,
                              const CirculantOperator& D) {
  const Field D2e = D.apply(D.apply(s.eta)), D2u = D.apply(D.apply(s.u));
  StateField r{s.grid, Field(s.eta.size()), Field(s.u.size())};
  for (size_t j = 0; j < s.eta.size(); ++j) {
    const double e = s.eta[j], u = s.u[j];
    r.eta[j] = u + nonlinearity_A(e, u, m) + m.a * D2u[j] + c * m.b * D2e[j] - c * e;
    r.u[j] = e + nonlinearity_B(e, u, m) + m.a * D2e[j] + c * m.d * D2u[j] - c * u;
  }
  return r;
}

double tail_ratio(const Field& eta) {
  const size_t n = eta.size(), w = std::max<size_t>(1, n / 20);
  double peak = 0, tail = 0;
  for (double v : eta) peak = std::max(peak, std::abs(v));
  for (size_t j = 0; j < w; ++j) tail = std::max({tail, std::abs(eta[j]), std::abs(eta[n - 1 - j])});
  return peak > 0 ? tail / peak : 0.0;
}

WaveClass classify_profile(const Field& eta) {
  return tail_ratio(eta) > 1e-8 ? WaveClass::GSW : WaveClass::CSW;
}

namespace {

using Vec = Eigen::VectorXd;
using LinOp = std::function<Vec(const Vec&)>;

// Right-preconditioned restarted GMRES: solves A x = b with A M^{-1} y = b,
// x = M^{-1} y. Returns the relative residual reached.
double gmres(const LinOp& A, const LinOp& Minv, const Vec& b, Vec& x, int restart, int max_cycles,
             double rtol) {
  const double bnorm = b.norm();
  if (bnorm == 0) {
    x.setZero(b.size());
    return 0;
  }
  x.setZero(b.size());
  double rel = 1;
  for (int cycle = 0; cycle < max_cycles; ++cycle) {
    const Vec r = b - A(x);
    const double beta = r.norm();
    rel = beta / bnorm;
    if (rel <= rtol) break;
    std::vector<Vec> V{r / beta};
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(restart + 1, restart);
    Vec cs = Vec::Zero(restart), sn = Vec::Zero(restart), g = Vec::Zero(restart + 1);
    g[0] = beta;
    int k = 0;
    for (; k < restart; ++k) {
      Vec w = A(Minv(V[k]));
      for (int i = 0; i <= k; ++i) {
        H(i, k) = w.dot(V[i]);
        w -= H(i, k) * V[i];
      }
      H(k + 1, k) = w.norm();
      for (int i = 0; i < k; ++i) {
        const double t = cs[i] * H(i, k) + sn[i] * H(i + 1, k);
        H(i + 1, k) = -sn[i] * H(i, k) + cs[i] * H(i + 1, k);
        H(i, k) = t;
      }
      const double den = std::hypot(H(k, k), H(k + 1, k));
      cs[k] = H(k, k) / den;
      sn[k] = H(k + 1, k) / den;
      H(k, k) = den;
      H(k + 1, k) = 0;
      g[k + 1] = -sn[k] * g[k];
      g[k] *= cs[k];
      rel = std::abs(g[k + 1]) / bnorm;
      const double hn = w.norm();
      if (rel <= rtol || hn == 0) {
        ++k;
        break;
      }
      V.push_back(w / hn);
    }
    Vec y = H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    Vec upd = Vec::Zero(b.size());
    for (int i = 0; i < k; ++i) upd += y[i] * V[i];
    x += Minv(upd);
    if (rel <= rtol) break;
  }
  return rel;
}

Field symmetrize(const Field& f) {
  const size_t n = f.size();
  Field r(n);
  for (size_t j = 0; j < n; ++j) r[j] = 0.5 * (f[j] + f[n - 1 - j]);
  return r;
}

double supnorm(const StateField& s) {
  double m = 0;
  for (double v : s.eta) m = std::max(m, std::abs(v));
  for (double v : s.u) m = std::max(m, std::abs(v));
  return m;
}

struct NewtonResult {
  StateField state;
  double residual;
  int iterations;
  bool converged;
};

NewtonResult newton(StateField z, double c, const ModelCoefficients& m, const CirculantOperator& D,
                    double tol, int max_newton) {
  const int n = D.size(), nh = half_size(n);
  std::vector<double> p11(nh), p12(nh), p22(nh), det(nh);
  for (int p = 0; p < nh; ++p) {
    const double k2 = std::norm(D.symbol_at(p));
    p11[p] = -c * (1 + m.b * k2);
    p12[p] = 1 - m.a * k2;
    p22[p] = -c * (1 + m.d * k2);
    double dt = p11[p] * p22[p] - p12[p] * p12[p];
    const double floor = 1e-3 * std::max(1.0, std::abs(p11[p] * p22[p]));
    if (std::abs(dt) < floor) dt = dt < 0 ? -floor : floor;
    det[p] = dt;
  }
  const LinOp prec = [&](const Vec& r) {
    Field r1(r.data(), r.data() + n), r2(r.data() + n, r.data() + 2 * n);
    const Spectrum R1 = rfft(r1), R2 = rfft(r2);
    Spectrum X1(nh), X2(nh);
    for (int p = 0; p < nh; ++p) {
      X1[p] = (p22[p] * R1[p] - p12[p] * R2[p]) / det[p];
      X2[p] = (p11[p] * R2[p] - p12[p] * R1[p]) / det[p];
    }
    const Field x1 = irfft(X1, n), x2 = irfft(X2, n);
    Vec out(2 * n);
    std::copy(x1.begin(), x1.end(), out.data());
    std::copy(x2.begin(), x2.end(), out.data() + n);
    return out;
  };

  double res = 0;
  double first = -1;
  for (int it = 0; it <= max_newton; ++it) {
    z.eta = symmetrize(z.eta);
    z.u = symmetrize(z.u);
    const StateField r = traveling_residual(z, c, m, D);
    res = supnorm(r);
    if (first < 0) first = res;
    if (!std::isfinite(res) || res > 1e6 * std::max(1.0, first)) return {z, res, it, false};
    if (res <= tol) return {z, res, it, true};
    if (it == max_newton) break;
    Field Ae(n), Au(n), Be(n), Bu(n);
    for (int j = 0; j < n; ++j) {
      const double e = z.eta[j], u = z.u[j];
      Ae[j] = 2 * m.alpha11 * e + m.alpha12 * u;
      Au[j] = m.alpha12 * e + 2 * m.alpha22 * u;
      Be[j] = 2 * m.beta11 * e + m.beta12 * u;
      Bu[j] = m.beta12 * e + 2 * m.beta22 * u;
    }
    ModelCoefficients lin_m = m;
    lin_m.alpha11 = lin_m.alpha12 = lin_m.alpha22 = lin_m.beta11 = lin_m.beta12 = lin_m.beta22 = 0;
    const LinOp J = [&](const Vec& v) {
      StateField dv{z.grid, Field(v.data(), v.data() + n), Field(v.data() + n, v.data() + 2 * n)};
      const StateField lin = traveling_residual(dv, c, lin_m, D);
      Vec out(2 * n);
      for (int j = 0; j < n; ++j) {
        out[j] = lin.eta[j] + Ae[j] * dv.eta[j] + Au[j] * dv.u[j];
        out[n + j] = lin.u[j] + Be[j] * dv.eta[j] + Bu[j] * dv.u[j];
      }
      return out;
    };
    Vec rhs(2 * n);
    for (int j = 0; j < n; ++j) {
      rhs[j] = -r.eta[j];
      rhs[n + j] = -r.u[j];
    }
    Vec dz;
    gmres(J, prec, rhs, dz, 60, 20, 1e-12);
    for (int j = 0; j < n; ++j) {
      z.eta[j] += dz[j];
      z.u[j] += dz[n + j];
    }
  }
  return {z, res, max_newton, false};
}

StateField initial_guess(const GridSpec& g, double c, const ModelCoefficients& m,
                         std::optional<double> amplitude) {
  const double kn = (m.alpha11 + m.alpha12 + m.alpha22 + m.beta11 + m.beta12 + m.beta22) / 2;
  const double gam = m.a + (m.b + m.d) / 2;
  double A = amplitude.value_or(kn != 0 ? std::clamp(3 * (c - 1) / (2 * kn), 0.1, 2.0) : 0.1);
  const double K = std::sqrt(std::abs(kn * A / (6 * std::max(gam, 1e-3))));
  const double xc = g.x0 + (g.n - 1) * g.h() / 2;
  StateField s = StateField::zeros(g);
  for (int j = 0; j < g.n; ++j) {
    const double ch = std::cosh(K * (g.x(j) - xc));
    s.eta[j] = A / (ch * ch);
    s.u[j] = s.eta[j] / c;
  }
  return s;
}

}  // namespace

SolitaryProfile solve_profile(const SolitaryWaveSpec& spec, const ModelCoefficients& m) {
  validate(m);
  if (!is_multisymplectic(m)) throw StructuralError("solve_profile needs multi-symplectic coefficients");
  if (!std::isfinite(spec.c_s) || spec.c_s == 0) throw DomainError("solitary speed must be nonzero");
  if (!(spec.tol > 0) || spec.max_newton < 1) throw DomainError("invalid Newton settings");
  const CirculantOperator D = spectral_derivative(spec.grid);
  SolitaryProfile out;

  const StateField guess = initial_guess(spec.grid, spec.c_s, m, spec.amplitude);
  {
    double peak = 0;
    for (double v : guess.eta) peak = std::max(peak, std::abs(v));
    if (std::max(std::abs(guess.eta.front()), std::abs(guess.eta.back())) > 1e-8 * peak)
      out.warnings.push_back("initial guess does not decay below 1e-8 at the boundary; "
                             "the domain may be too short");
  }

  NewtonResult nr = newton(guess, spec.c_s, m, D, spec.tol, spec.max_newton);
  if (!nr.converged) {
    StateField z = initial_guess(spec.grid, 1.05, m, std::nullopt);
    bool ok = spec.c_s > 1.05;
    for (double c = 1.05; ok && c < spec.c_s - 1e-12; c += 0.05) {
      const NewtonResult step = newton(z, c, m, D, spec.tol, spec.max_newton);
      ok = step.converged;
      z = step.state;
    }
    if (ok) nr = newton(z, spec.c_s, m, D, spec.tol, spec.max_newton);
    if (!ok || !nr.converged)
      throw NewtonFailure("solitary-wave Newton iteration did not converge (residual " +
                              std::to_string(nr.residual) + ")",
                          nr.residual);
    out.warnings.push_back("converged through continuation in c_s");
  }
  out.state = nr.state;
  out.residual = nr.residual;
  out.newton_iterations = nr.iterations;
  out.tail_ratio = tail_ratio(out.state.eta);
  out.cls = out.tail_ratio > 1e-8 ? WaveClass::GSW : WaveClass::CSW;
  return out;
}

StateField standard_field(const GridSpec& g, const StandardField& kind) {
  StateField s = StateField::zeros(g);
  if (const auto* G = std::get_if<Gaussian>(&kind)) {
    if (!(G->w > 0)) throw DomainError("Gaussian width must be > 0");
    const double xc = G->center.value_or(g.x0 + (g.n - 1) * g.h() / 2);
    for (int j = 0; j < g.n; ++j) {
      const double r = (g.x(j) - xc) / G->w;
      s.eta[j] = G->A * std::exp(-r * r);
    }
  } else if (const auto* P = std::get_if<PlaneWaveMode>(&kind)) {
    for (int j = 0; j < g.n; ++j)
      s.eta[j] = P->A * std::cos(2 * std::numbers::pi * P->p * (g.x(j) - g.x0) / g.length);
  } else {
    const auto& R = std::get<SymmetricRandom>(kind);
    if (!(R.decay > 0)) throw DomainError("SymmetricRandom decay must be > 0");
    std::mt19937_64 rng(R.seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    const int nh = half_size(g.n);
    for (Field* f : {&s.eta, &s.u}) {
      Spectrum F(nh);
      for (int p = 1; p < nh; ++p) {
        if (2 * p == g.n) continue;
        const double w = std::exp(-R.decay * p);
        const double re = nd(rng), im = nd(rng);
        F[p] = cplx(re, im) * w * (g.n / 2.0);
      }
      *f = symmetrize(irfft(F, g.n));
      for (double& v : *f) v *= R.amplitude;
    }
  }
  return s;
}

}  // namespace msint
