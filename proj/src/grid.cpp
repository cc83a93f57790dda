#include "msint/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "msint/errors.hpp"

namespace msint {

std::vector<double> GridSpec::nodes() const {
  std::vector<double> x(n);
  for (int j = 0; j < n; ++j) x[j] = this->x(j);
  return x;
}

GridSpec make_grid(double x0, double length, int n) {
  if (n < 4) throw DomainError("grid needs at least 4 nodes");
  if (!(length > 0) || !std::isfinite(length)) throw DomainError("grid length must be > 0");
  if (!std::isfinite(x0)) throw DomainError("grid origin must be finite");
  return GridSpec{x0, length, n};
}

std::string to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::ForwardDiff: return "forward_difference";
    case OperatorKind::Average: return "average";
    case OperatorKind::CentralDiff: return "central";
    case OperatorKind::Spectral: return "spectral";
    case OperatorKind::Identity: return "identity";
    case OperatorKind::Composite: return "composite";
  }
  return "?";
}

CirculantOperator CirculantOperator::from_symbol(const GridSpec& g, std::vector<cplx> symbol,
                                                 OperatorKind kind) {
  const int n = g.n;
  if (static_cast<int>(symbol.size()) != n) throw DomainError("symbol length must equal N");
  Spectrum half(symbol.begin(), symbol.begin() + half_size(n));
  Field col = irfft(half, n);
  return CirculantOperator(g, kind, std::move(symbol), std::move(col));
}

CirculantOperator CirculantOperator::from_first_column(const GridSpec& g, Field column,
                                                       OperatorKind kind) {
  const int n = g.n;
  if (static_cast<int>(column.size()) != n) throw DomainError("column length must equal N");
  Spectrum half = rfft(column);
  std::vector<cplx> sym(n);
  for (int p = 0; p < n; ++p) sym[p] = p <= n / 2 ? half[p] : std::conj(half[n - p]);
  return CirculantOperator(g, kind, std::move(sym), std::move(column));
}

Field CirculantOperator::apply(const Field& x) const {
  return irfft(apply_spectrum(rfft(x)), grid_.n);
}

Spectrum CirculantOperator::apply_spectrum(const Spectrum& X) const {
  Spectrum Y(X.size());
  for (size_t p = 0; p < X.size(); ++p) Y[p] = symbol_[p] * X[p];
  return Y;
}

Field CirculantOperator::apply_direct(const Field& x) const {
  const int n = grid_.n;
  Field y(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double s = 0;
    for (int k = 0; k < n; ++k) s += column_[((j - k) % n + n) % n] * x[k];
    y[j] = s;
  }
  return y;
}

CirculantOperator CirculantOperator::compose(const CirculantOperator& o) const {
  std::vector<cplx> s(symbol_.size());
  for (size_t p = 0; p < s.size(); ++p) s[p] = symbol_[p] * o.symbol_[p];
  return from_symbol(grid_, std::move(s));
}

CirculantOperator CirculantOperator::power(int k) const {
  if (k < 0) throw DomainError("negative operator power");
  CirculantOperator r = identity_operator(grid_);
  for (int i = 0; i < k; ++i) r = r.compose(*this);
  return r;
}

CirculantOperator CirculantOperator::combine(double alpha, const CirculantOperator& o,
                                             double beta) const {
  std::vector<cplx> s(symbol_.size());
  for (size_t p = 0; p < s.size(); ++p) s[p] = alpha * symbol_[p] + beta * o.symbol_[p];
  return from_symbol(grid_, std::move(s));
}

double CirculantOperator::max_abs_symbol() const {
  double m = 0;
  for (auto& s : symbol_) m = std::max(m, std::abs(s));
  return m;
}

bool CirculantOperator::is_skew(double rel_tol) const {
  const double tol = rel_tol * std::max(1.0, max_abs_symbol());
  for (auto& s : symbol_)
    if (std::abs(s.real()) > tol) return false;
  return true;
}

namespace {

template <class F>
CirculantOperator analytic(const GridSpec& g, OperatorKind kind, F f) {
  std::vector<cplx> s(g.n);
  for (int p = 0; p < g.n; ++p) s[p] = f(p);
  return CirculantOperator::from_symbol(g, std::move(s), kind);
}

// e^{+i 2 pi p / N}
cplx up(int p, int n) { return unit_root(-static_cast<long long>(p), n); }

}  // namespace

CirculantOperator identity_operator(const GridSpec& g) {
  return analytic(g, OperatorKind::Identity, [](int) { return cplx(1, 0); });
}

CirculantOperator forward_difference(const GridSpec& g) {
  const double h = g.h();
  return analytic(g, OperatorKind::ForwardDiff,
                  [&](int p) { return (up(p, g.n) - 1.0) / h; });
}

CirculantOperator average(const GridSpec& g) {
  return analytic(g, OperatorKind::Average, [&](int p) { return (up(p, g.n) + 1.0) / 2.0; });
}

CirculantOperator central_difference(const GridSpec& g) {
  const double h = g.h();
  return analytic(g, OperatorKind::CentralDiff, [&](int p) {
    const cplx s = (up(p, g.n) - up(-p, g.n)) / (2.0 * h);
    return cplx(0.0, s.imag());
  });
}

CirculantOperator spectral_derivative(const GridSpec& g) {
  const double s = 2.0 * std::numbers::pi / g.length;
  return analytic(g, OperatorKind::Spectral, [&](int p) {
    if (g.n % 2 == 0 && p == g.n / 2) return cplx(0, 0);
    return cplx(0.0, s * signed_mode(p, g.n));
  });
}

CirculantOperator staggered_central(const GridSpec& g) {
  const double h = g.h();
  return analytic(g, OperatorKind::Composite,
                  [&](int p) { return (up(2 * p, g.n) - 1.0) / (2.0 * h); });
}

Field helmholtz_solve(double alpha, const CirculantOperator& D, const Field& rhs) {
  const int n = D.size();
  if (static_cast<int>(rhs.size()) != n) throw DomainError("helmholtz_solve: size mismatch");
  if (!D.is_skew()) throw DomainError("helmholtz_solve: operator is not skew-symmetric");
  Spectrum X = rfft(rhs);
  for (int p = 0; p < half_size(n); ++p) {
    const double lam = D.symbol_at(p).imag();
    const double den = 1.0 + alpha * lam * lam;
    if (std::abs(den) < 1e-14)
      throw SingularityError("helmholtz_solve: I - alpha D^2 is singular at mode " +
                             std::to_string(p));
    X[p] /= den;
  }
  return irfft(X, n);
}

Field ReversalOperator::apply(const Field& x) const {
  return Field(x.rbegin(), x.rend());
}

ReversalOperator reversal(const GridSpec& g) { return ReversalOperator(g); }

bool anticommute_check(const CirculantOperator& D) {
  const ReversalOperator R(D.grid());
  std::mt19937_64 rng(20240531);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double tol = 1e-12 * std::max(1.0, D.max_abs_symbol());
  for (int trial = 0; trial < 20; ++trial) {
    Field x(D.size());
    for (double& v : x) v = U(rng);
    const Field a = D.apply(R.apply(x));
    const Field b = R.apply(D.apply(x));
    for (int j = 0; j < D.size(); ++j)
      if (std::abs(a[j] + b[j]) > tol) return false;
  }
  return true;
}

ParityReport parity_singularity_report(const GridSpec& g, ParityOperator which, double alpha) {
  const CirculantOperator Mx = average(g);
  CirculantOperator op = Mx;
  if (which == ParityOperator::PrkOperator) {
    const CirculantOperator Dx = forward_difference(g);
    op = Mx.combine(1.0, Dx.compose(staggered_central(g)), -alpha);
  }
  ParityReport r;
  r.min_abs_symbol = std::abs(op.symbol_at(0));
  for (int p = 0; p < g.n; ++p) r.min_abs_symbol = std::min(r.min_abs_symbol, std::abs(op.symbol_at(p)));
  r.invertible = r.min_abs_symbol > 1e-14 * std::max(1.0, op.max_abs_symbol());
  return r;
}

}  // namespace msint
