#include "msint/integrate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <list>
#include <mutex>
#include <random>

#include "msint/errors.hpp"

namespace msint {

std::string to_string(OperatorChoice o) {
  return o == OperatorChoice::CentralDiff ? "central" : "spectral";
}

std::string to_string(SchemeKind k) {
  switch (k) {
    case SchemeKind::ImrReduced: return "imr_reduced";
    case SchemeKind::ImrFull: return "imr_full";
    case SchemeKind::PreissmanBox: return "box";
  }
  return "?";
}

void validate(const SchemeConfig& c) {
  if (!(std::isfinite(c.dt) && c.dt > 0)) throw ConfigError("scheme.dt must be > 0");
  if (!(std::isfinite(c.fp_tol) && c.fp_tol > 0)) throw ConfigError("scheme.fp_tol must be > 0");
  if (c.fp_max_iters < 1) throw ConfigError("scheme.fp_max_iters must be >= 1");
}

CirculantOperator make_operator(const GridSpec& g, OperatorChoice op) {
  return op == OperatorChoice::CentralDiff ? central_difference(g) : spectral_derivative(g);
}

SemiDiscreteSystem make_system(const ModelCoefficients& m, const GridSpec& g,
                               const SchemeConfig& c) {
  switch (c.kind) {
    case SchemeKind::PreissmanBox: return SemiDiscreteSystem::box(m, g);
    case SchemeKind::ImrFull:
      return SemiDiscreteSystem::general(m, make_operator(g, c.op), FormKind::FullGeneral);
    case SchemeKind::ImrReduced: break;
  }
  return SemiDiscreteSystem::general(m, make_operator(g, c.op), FormKind::ReducedGeneral);
}

namespace {

void check_dt(double dt) {
  if (!std::isfinite(dt) || dt == 0) throw DomainError("time step must be finite and nonzero");
}

double supdiff(const Field& a, const Field& b) {
  double m = 0;
  for (size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

// Midpoint iteration shared by the reduced IMR and the box scheme: per mode
//   (2nb/dt) Em + g Um = (2nb/dt) E0 - q A^(mid)
//   g Em + (2nd/dt) Um = (2nd/dt) U0 - q B^(mid)
ReducedStep midpoint_step(const StateField& s, const SemiDiscreteSystem& sys,
                          const SchemeConfig& c) {
  check_dt(c.dt);
  if (static_cast<int>(s.eta.size()) != sys.n() || static_cast<int>(s.u.size()) != sys.n())
    throw DomainError("state size does not match the system grid");
  const int n = sys.n(), nh = half_size(n);
  const double dt = c.dt;
  const auto& m = sys.coeffs();
  const Spectrum E0 = rfft(s.eta), U0 = rfft(s.u);
  std::vector<cplx> a11(nh), a22(nh), det(nh);
  for (int p = 0; p < nh; ++p) {
    a11[p] = 2.0 * sys.nb()[p] / dt;
    a22[p] = 2.0 * sys.nd()[p] / dt;
    det[p] = a11[p] * a22[p] - sys.g()[p] * sys.g()[p];
    if (std::abs(det[p]) < 1e-14 * std::max(1.0, std::abs(a11[p] * a22[p])))
      throw SingularityError("midpoint 2x2 block is singular at mode " + std::to_string(p));
  }

  StateField mid = s;
  StepReport rep;
  Spectrum Em(nh), Um(nh);
  for (int it = 1; it <= c.fp_max_iters; ++it) {
    const Field e = sys.nonlinear_arg(mid.eta), u = sys.nonlinear_arg(mid.u);
    const Spectrum Ah = rfft(hadamard_A(e, u, m)), Bh = rfft(hadamard_B(e, u, m));
    for (int p = 0; p < nh; ++p) {
      const cplx r1 = a11[p] * E0[p] - sys.q()[p] * Ah[p];
      const cplx r2 = a22[p] * U0[p] - sys.q()[p] * Bh[p];
      Em[p] = (a22[p] * r1 - sys.g()[p] * r2) / det[p];
      Um[p] = (a11[p] * r2 - sys.g()[p] * r1) / det[p];
    }
    StateField next{s.grid, irfft(Em, n), irfft(Um, n)};
    rep.iterations = it;
    rep.residual = std::max(supdiff(next.eta, mid.eta), supdiff(next.u, mid.u));
    mid = std::move(next);
    if (!std::isfinite(rep.residual)) break;
    if (rep.residual <= c.fp_tol) {
      rep.converged = true;
      break;
    }
  }
  if (!rep.converged)
    throw StepFailure("fixed point did not converge (residual " + std::to_string(rep.residual) +
                          " after " + std::to_string(rep.iterations) + " iterations)",
                      rep.residual, rep.iterations);
  StateField out{s.grid, Field(n), Field(n)};
  for (int j = 0; j < n; ++j) {
    out.eta[j] = 2 * mid.eta[j] - s.eta[j];
    out.u[j] = 2 * mid.u[j] - s.u[j];
  }
  return {std::move(out), std::move(mid), rep};
}

}  // namespace

ReducedStep imr_step_reduced(const StateField& s, const SemiDiscreteSystem& sys,
                             const SchemeConfig& c) {
  if (sys.is_box()) throw DomainError("imr_step_reduced needs a general-operator system");
  return midpoint_step(s, sys, c);
}

ReducedStep box_step(const StateField& s, const SemiDiscreteSystem& sys, const SchemeConfig& c) {
  if (s.grid.n % 2 == 0)
    throw SingularityError("box scheme needs an odd number of nodes: M_x is singular for N = " +
                           std::to_string(s.grid.n));
  if (!sys.is_box()) throw DomainError("box_step needs a box-form system");
  return midpoint_step(s, sys, c);
}

// ---------------------------------------------------------------------------

using CMat = Eigen::Matrix<cplx, kZDim, kZDim>;
using CVec = Eigen::Matrix<cplx, kZDim, 1>;

struct FullImrSolver::Impl {
  std::vector<Eigen::PartialPivLU<CMat>> lu;
  std::vector<char> gauge;
  CMat K;
};

FullImrSolver::~FullImrSolver() = default;

FullImrSolver::FullImrSolver(const SemiDiscreteSystem& sys, double dt)
    : sys_(sys), dt_(dt), impl_(std::make_unique<Impl>()) {
  check_dt(dt);
  if (sys.is_box()) throw DomainError("full-form IMR needs a general-operator system");
  const MSStructure ms = ms_matrices(sys.coeffs());
  const int nh = half_size(sys.n());
  const double zero_tol = 1e-13 * std::max(1.0, sys.D().max_abs_symbol());
  for (int r = 0; r < kZDim; ++r)
    for (int c = 0; c < kZDim; ++c) impl_->K(r, c) = ms.K[r][c];
  impl_->lu.reserve(nh);
  impl_->gauge.assign(nh, 0);
  for (int p = 0; p < nh; ++p) {
    const cplx sg = sys.D().symbol_at(p);
    CMat B;
    for (int r = 0; r < kZDim; ++r)
      for (int c = 0; c < kZDim; ++c)
        B(r, c) = ms.K[r][c] + 0.5 * dt * sg * ms.M[r][c] - 0.5 * dt * ms.L[r][c];
    if (std::abs(sg) <= zero_tol) {
      impl_->gauge[p] = 1;
      B.row(zc::p1).setZero();
      B(zc::p1, zc::phi1) = 1;
      B.row(zc::p2).setZero();
      B(zc::p2, zc::phi2) = 1;
    }
    impl_->lu.emplace_back(B);
    const double rc = impl_->lu.back().rcond();
    if (!(rc > 1e-13))
      throw ConfigError("full-form IMR block is singular at mode " + std::to_string(p) +
                        " (rcond " + std::to_string(rc) + "); b and d must be positive");
  }
}

namespace {

std::vector<Spectrum> spectra(const std::vector<double>& z, int n) {
  std::vector<Spectrum> out(kZDim);
  Field f(n);
  for (int c = 0; c < kZDim; ++c) {
    for (int j = 0; j < n; ++j) f[j] = z[kZDim * j + c];
    out[c] = rfft(f);
  }
  return out;
}

void to_nodal(const std::vector<Spectrum>& S, int n, std::vector<double>& z) {
  for (int c = 0; c < kZDim; ++c) {
    const Field f = irfft(S[c], n);
    for (int j = 0; j < n; ++j) z[kZDim * j + c] = f[j];
  }
}

}  // namespace

FullStep FullImrSolver::step(const ZGridField& z, double fp_tol, int max_iters) const {
  const int n = sys_.n(), nh = half_size(n);
  if (z.grid.n != n || static_cast<int>(z.z.size()) != kZDim * n)
    throw DomainError("field size does not match the system grid");
  const auto& m = sys_.coeffs();
  const std::vector<Spectrum> Z0 = spectra(z.z, n);
  std::vector<CVec> base(nh);
  for (int p = 0; p < nh; ++p) {
    CVec v;
    for (int c = 0; c < kZDim; ++c) v[c] = Z0[c][p];
    base[p] = impl_->K * v;
    if (impl_->gauge[p]) {
      base[p][zc::p1] = Z0[zc::phi1][p];
      base[p][zc::p2] = Z0[zc::phi2][p];
    }
  }

  ZGridField mid = z, next = z;
  StepReport rep;
  std::vector<Spectrum> S(kZDim, Spectrum(nh));
  Field ne(n), nu(n);
  for (int it = 1; it <= max_iters; ++it) {
    for (int j = 0; j < n; ++j) {
      const Vec10 g = grad_S_nonlinear(mid.node(j), m);
      ne[j] = g[zc::eta];
      nu[j] = g[zc::u];
    }
    const Spectrum Ne = rfft(ne), Nu = rfft(nu);
    for (int p = 0; p < nh; ++p) {
      CVec r = base[p];
      r[zc::eta] += 0.5 * dt_ * Ne[p];
      r[zc::u] += 0.5 * dt_ * Nu[p];
      const CVec x = impl_->lu[p].solve(r);
      for (int c = 0; c < kZDim; ++c) S[c][p] = x[c];
    }
    to_nodal(S, n, next.z);
    rep.iterations = it;
    rep.residual = supdiff(next.z, mid.z);
    std::swap(mid.z, next.z);
    if (!std::isfinite(rep.residual)) break;
    if (rep.residual <= fp_tol) {
      rep.converged = true;
      break;
    }
  }
  if (!rep.converged)
    throw StepFailure("full-form fixed point did not converge (residual " +
                          std::to_string(rep.residual) + ")",
                      rep.residual, rep.iterations);
  ZGridField out = z;
  for (size_t i = 0; i < out.z.size(); ++i) out.z[i] = 2 * mid.z[i] - z.z[i];
  return {std::move(out), std::move(mid), rep};
}

TangentPair FullImrSolver::tangent(const TangentPair& pair, const ZGridField& mid, double fp_tol,
                                   int max_iters) const {
  const int n = sys_.n(), nh = half_size(n);
  const auto& m = sys_.coeffs();
  std::vector<Mat10> H(n);
  for (int j = 0; j < n; ++j) H[j] = hess_S_nonlinear(mid.node(j), m);

  auto advance = [&](const ZGridField& U0) {
    if (U0.grid.n != n) throw DomainError("tangent field size does not match the system grid");
    const std::vector<Spectrum> S0 = spectra(U0.z, n);
    std::vector<CVec> base(nh);
    for (int p = 0; p < nh; ++p) {
      CVec v;
      for (int c = 0; c < kZDim; ++c) v[c] = S0[c][p];
      base[p] = impl_->K * v;
      if (impl_->gauge[p]) {
        base[p][zc::p1] = S0[zc::phi1][p];
        base[p][zc::p2] = S0[zc::phi2][p];
      }
    }
    ZGridField cur = U0, nxt = U0;
    std::vector<Spectrum> S(kZDim, Spectrum(nh));
    Field he(n), hu(n);
    bool ok = false;
    double res = 0;
    int it = 1;
    for (; it <= max_iters; ++it) {
      for (int j = 0; j < n; ++j) {
        const Vec10 hv = matvec(H[j], cur.node(j));
        he[j] = hv[zc::eta];
        hu[j] = hv[zc::u];
      }
      const Spectrum He = rfft(he), Hu = rfft(hu);
      for (int p = 0; p < nh; ++p) {
        CVec r = base[p];
        r[zc::eta] += 0.5 * dt_ * He[p];
        r[zc::u] += 0.5 * dt_ * Hu[p];
        const CVec x = impl_->lu[p].solve(r);
        for (int c = 0; c < kZDim; ++c) S[c][p] = x[c];
      }
      to_nodal(S, n, nxt.z);
      res = supdiff(nxt.z, cur.z);
      std::swap(cur.z, nxt.z);
      double scale = 1;
      for (double v : cur.z) scale = std::max(scale, std::abs(v));
      if (!std::isfinite(res)) break;
      if (res <= fp_tol * scale) {
        ok = true;
        break;
      }
    }
    if (!ok)
      throw StepFailure("tangent fixed point did not converge", res, std::min(it, max_iters));
    ZGridField out = U0;
    for (size_t i = 0; i < out.z.size(); ++i) out.z[i] = 2 * cur.z[i] - U0.z[i];
    return out;
  };
  return {advance(pair.U), advance(pair.V)};
}

namespace {

struct CacheEntry {
  ModelCoefficients m;
  std::vector<cplx> symbol;
  double dt;
  std::shared_ptr<const FullImrSolver> solver;
};

std::shared_ptr<const FullImrSolver> cached_solver(const SemiDiscreteSystem& sys, double dt) {
  static std::mutex mtx;
  static std::list<CacheEntry> cache;
  std::lock_guard<std::mutex> lock(mtx);
  for (auto it = cache.begin(); it != cache.end(); ++it)
    if (it->dt == dt && it->m == sys.coeffs() && it->symbol == sys.D().symbol()) {
      cache.splice(cache.begin(), cache, it);
      return cache.front().solver;
    }
  auto s = std::make_shared<const FullImrSolver>(sys, dt);
  cache.push_front({sys.coeffs(), sys.D().symbol(), dt, s});
  if (cache.size() > 4) cache.pop_back();
  return s;
}

}  // namespace

FullStep imr_step_full(const ZGridField& z, const SemiDiscreteSystem& sys, const SchemeConfig& c) {
  return cached_solver(sys, c.dt)->step(z, c.fp_tol, c.fp_max_iters);
}

TangentPair tangent_step(const TangentPair& pair, const ZGridField& base_midpoint,
                         const SemiDiscreteSystem& sys, const SchemeConfig& c) {
  return cached_solver(sys, c.dt)->tangent(pair, base_midpoint, c.fp_tol, c.fp_max_iters);
}

TangentPair random_tangent_pair(const SemiDiscreteSystem& sys, unsigned long long seed) {
  const GridSpec& g = sys.grid();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  const double zero_tol = 1e-13 * std::max(1.0, sys.D().max_abs_symbol());
  auto make = [&] {
    ZGridField f = ZGridField::zeros(g);
    for (double& v : f.z) v = nd(rng);
    for (int c : {zc::eta, zc::u}) {
      Spectrum F = rfft(f.component(c));
      for (int p = 0; p < half_size(g.n); ++p)
        if (std::abs(sys.D().symbol_at(p)) <= zero_tol) F[p] = 0;
      f.set_component(c, irfft(F, g.n));
    }
    return f;
  };
  ZGridField U = make();
  ZGridField V = make();
  return {std::move(U), std::move(V)};
}

// ---------------------------------------------------------------------------

namespace {

long step_count(const SchemeConfig& c, const RunOptions& opt) {
  validate(c);
  if (!(opt.t_end >= 0) || !std::isfinite(opt.t_end)) throw DomainError("t_end must be >= 0");
  if (opt.sample_every < 1) throw DomainError("sample_every must be >= 1");
  return std::lround(opt.t_end / c.dt);
}

void add_local_laws(DiagnosticsRecord& r, const StateField& s, const SemiDiscreteSystem& sys) {
  if (sys.is_box()) return;
  try {
    const AuxFields aux = reconstruct_aux(s, rhs_reduced(s, sys), sys);
    const LocalLawResiduals l = local_law_residuals(aux.z, aux.zdot, sys);
    r.local_energy_residual = l.energy;
    r.local_momentum_residual = l.momentum;
  } catch (const ReconstructionError&) {
  }
}

}  // namespace

Trajectory run(const StateField& initial, const SemiDiscreteSystem& sys, const SchemeConfig& c,
               const RunOptions& opt) {
  if (c.kind == SchemeKind::ImrFull)
    throw ConfigError("run(StateField) handles imr_reduced and box schemes");
  const long nsteps = step_count(c, opt);
  Trajectory tr;
  StateField s = initial;
  auto sample = [&](long k, int its) {
    DiagnosticsRecord r = diagnostics(s, sys, k * c.dt);
    r.iterations = its;
    if (opt.local_laws) add_local_laws(r, s, sys);
    tr.records.push_back(r);
    if (opt.keep_states) tr.states.push_back(s);
  };
  sample(0, 0);
  for (long k = 1; k <= nsteps; ++k) {
    ReducedStep st;
    try {
      st = c.kind == SchemeKind::PreissmanBox ? box_step(s, sys, c) : imr_step_reduced(s, sys, c);
    } catch (const StepFailure& e) {
      tr.failed = true;
      tr.message = e.what();
      break;
    }
    s = std::move(st.state);
    tr.total_iterations += st.report.iterations;
    tr.last_good_time = k * c.dt;
    if (k % opt.sample_every == 0 || k == nsteps) sample(k, st.report.iterations);
  }
  tr.final_state = s;
  return tr;
}

Trajectory run(const ZGridField& initial, const SemiDiscreteSystem& sys, const SchemeConfig& c,
               const RunOptions& opt) {
  if (c.kind != SchemeKind::ImrFull) throw ConfigError("run(ZGridField) handles imr_full only");
  const long nsteps = step_count(c, opt);
  const auto solver = cached_solver(sys, c.dt);
  const Mat10 K = ms_matrices(sys.coeffs()).K;
  Trajectory tr;
  ZGridField z = initial;
  std::optional<TangentPair> tp = opt.tangent;
  auto sample = [&](long k, int its) {
    const StateField s = z.reduced();
    DiagnosticsRecord r = diagnostics(s, sys, k * c.dt);
    r.iterations = its;
    if (tp) r.symplecticity = total_symplecticity(*tp, K);
    if (opt.local_laws) add_local_laws(r, s, sys);
    tr.records.push_back(r);
    if (opt.keep_states) tr.states.push_back(s);
  };
  sample(0, 0);
  for (long k = 1; k <= nsteps; ++k) {
    try {
      FullStep st = solver->step(z, c.fp_tol, c.fp_max_iters);
      if (tp) tp = solver->tangent(*tp, st.midpoint, c.fp_tol, c.fp_max_iters);
      z = std::move(st.state);
      tr.total_iterations += st.report.iterations;
      tr.last_good_time = k * c.dt;
      if (k % opt.sample_every == 0 || k == nsteps) sample(k, st.report.iterations);
    } catch (const StepFailure& e) {
      tr.failed = true;
      tr.message = e.what();
      break;
    }
  }
  tr.final_state = z.reduced();
  tr.final_z = z;
  tr.final_tangent = tp;
  return tr;
}

}  // namespace msint
