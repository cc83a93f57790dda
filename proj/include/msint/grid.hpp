#pragma once

#include <string>
#include <vector>

#include "msint/fft.hpp"

namespace msint {

struct GridSpec {
  double x0 = 0;
  double length = 1;
  int n = 4;

  double h() const { return length / n; }
  double x(int j) const { return x0 + j * h(); }
  std::vector<double> nodes() const;

  bool operator==(const GridSpec&) const = default;
};

// Throws DomainError unless n >= 4 and length > 0.
GridSpec make_grid(double x0, double length, int n);

enum class OperatorKind { ForwardDiff, Average, CentralDiff, Spectral, Identity, Composite };
std::string to_string(OperatorKind k);

// Shift-invariant operator on periodic grid data. Convention:
// (C z)_j = sum_k c_{(j-k) mod N} z_k with c the first column, so the
// eigenvalue on e^{i 2 pi p j / N} is DFT(c)_p.
class CirculantOperator {
 public:
  // symbol has N entries in DFT order and must be conjugate-symmetric.
  static CirculantOperator from_symbol(const GridSpec& g, std::vector<cplx> symbol,
                                       OperatorKind kind = OperatorKind::Composite);
  static CirculantOperator from_first_column(const GridSpec& g, Field column,
                                             OperatorKind kind = OperatorKind::Composite);

  const GridSpec& grid() const { return grid_; }
  OperatorKind kind() const { return kind_; }
  int size() const { return grid_.n; }
  const Field& first_column() const { return column_; }
  const std::vector<cplx>& symbol() const { return symbol_; }
  cplx symbol_at(int p) const { return symbol_[p]; }

  Field apply(const Field& x) const;
  // Multiplies a half spectrum (modes 0..N/2) by the symbol.
  Spectrum apply_spectrum(const Spectrum& X) const;
  // O(N^2) application through the first column.
  Field apply_direct(const Field& x) const;

  CirculantOperator compose(const CirculantOperator& o) const;
  CirculantOperator power(int k) const;
  // alpha*this + beta*o
  CirculantOperator combine(double alpha, const CirculantOperator& o, double beta) const;

  // Purely imaginary symbol, i.e. skew-symmetric matrix.
  bool is_skew(double rel_tol = 1e-12) const;
  double max_abs_symbol() const;

 private:
  CirculantOperator(GridSpec g, OperatorKind k, std::vector<cplx> sym, Field col)
      : grid_(g), kind_(k), symbol_(std::move(sym)), column_(std::move(col)) {}
  GridSpec grid_;
  OperatorKind kind_;
  std::vector<cplx> symbol_;
  Field column_;
};

CirculantOperator identity_operator(const GridSpec& g);
CirculantOperator forward_difference(const GridSpec& g);
CirculantOperator average(const GridSpec& g);
CirculantOperator central_difference(const GridSpec& g);
// Even N: the Nyquist entry of the symbol is zero.
CirculantOperator spectral_derivative(const GridSpec& g);
// Staggered central difference (Z_{j+2} - Z_j)/(2h) = M_x D_x, the form
// that makes D_x D_c = M_x D_x^2 hold exactly.
CirculantOperator staggered_central(const GridSpec& g);

// (I - alpha D^2) w = rhs, solved mode by mode. D must be skew.
Field helmholtz_solve(double alpha, const CirculantOperator& D, const Field& rhs);

class ReversalOperator {
 public:
  explicit ReversalOperator(GridSpec g) : grid_(g) {}
  Field apply(const Field& x) const;
  const GridSpec& grid() const { return grid_; }

 private:
  GridSpec grid_;
};

ReversalOperator reversal(const GridSpec& g);

// D R + R D on 20 random inputs, sup-norm <= 1e-12 * max(1, max|symbol|).
bool anticommute_check(const CirculantOperator& D);

enum class ParityOperator { AverageMx, PrkOperator };
struct ParityReport {
  bool invertible = false;
  double min_abs_symbol = 0;
};
// PrkOperator is M_x - alpha D_x D_c with D_x D_c = M_x D_x^2.
ParityReport parity_singularity_report(const GridSpec& g, ParityOperator which,
                                       double alpha = 0.0);

}  // namespace msint
