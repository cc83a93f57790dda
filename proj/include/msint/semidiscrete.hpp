#pragma once

#include <optional>
#include <vector>

#include "msint/grid.hpp"
#include "msint/model.hpp"

namespace msint {

struct StateField {
  GridSpec grid;
  Field eta, u;

  static StateField zeros(const GridSpec& g) { return {g, Field(g.n, 0.0), Field(g.n, 0.0)}; }
};

// Node-major storage: z[10*j + c].
struct ZGridField {
  GridSpec grid;
  std::vector<double> z;

  static ZGridField zeros(const GridSpec& g) { return {g, std::vector<double>(10 * g.n, 0.0)}; }
  double& at(int j, int c) { return z[10 * j + c]; }
  double at(int j, int c) const { return z[10 * j + c]; }
  Vec10 node(int j) const;
  void set_node(int j, const Vec10& v);
  Field component(int c) const;
  void set_component(int c, const Field& f);
  StateField reduced() const;
};

enum class FormKind { ReducedGeneral, FullGeneral, BoxSpatial };

// Immutable spatial semi-discretization. Per Fourier mode p (half spectrum)
// the linear part reads  nb*eta_t + g*u + q*A^ = 0,  nd*u_t + g*eta + q*B^ = 0.
// General forms: nb = 1 - b s^2, g = s(1 + a s^2), q = s with s the symbol of
// D_h. Box form: nb = mu^3 - b lam^2 mu, g = a lam^3 + mu^2 lam, q = lam mu
// with lam, mu the symbols of D_x, M_x, and the quadratics are evaluated on
// (M_x eta, M_x u).
class SemiDiscreteSystem {
 public:
  static SemiDiscreteSystem general(const ModelCoefficients& m, const CirculantOperator& D,
                                    FormKind form = FormKind::ReducedGeneral);
  static SemiDiscreteSystem box(const ModelCoefficients& m, const GridSpec& g);

  const ModelCoefficients& coeffs() const { return coeffs_; }
  const GridSpec& grid() const { return D_.grid(); }
  const CirculantOperator& D() const { return D_; }
  FormKind form() const { return form_; }
  bool is_box() const { return form_ == FormKind::BoxSpatial; }
  int n() const { return D_.size(); }

  const std::vector<cplx>& nb() const { return nb_; }
  const std::vector<cplx>& nd() const { return nd_; }
  const std::vector<cplx>& g() const { return g_; }
  const std::vector<cplx>& q() const { return q_; }

  // Arguments of the quadratics: identity for general forms, M_x for the box.
  Field nonlinear_arg(const Field& f) const;

 private:
  SemiDiscreteSystem(ModelCoefficients m, CirculantOperator D, FormKind f)
      : coeffs_(m), D_(std::move(D)), form_(f) {}
  ModelCoefficients coeffs_;
  CirculantOperator D_;
  FormKind form_;
  std::optional<CirculantOperator> Mx_;
  std::vector<cplx> nb_, nd_, g_, q_;
};

// Hadamard quadratics on nodal values.
Field hadamard_A(const Field& eta, const Field& u, const ModelCoefficients& m);
Field hadamard_B(const Field& eta, const Field& u, const ModelCoefficients& m);

StateField rhs_reduced(const StateField& s, const SemiDiscreteSystem& sys);
// Directional derivative of rhs_reduced at s along dir.
StateField rhs_reduced_tangent(const StateField& s, const StateField& dir,
                               const SemiDiscreteSystem& sys);
StateField rhs_box(const StateField& s, const SemiDiscreteSystem& sys);

// (I (x) K) zdot + (D_h (x) M) z - grad S(z), node-major.
std::vector<double> residual_full(const ZGridField& z, const ZGridField& zdot,
                                  const SemiDiscreteSystem& sys);

struct AuxFields {
  ZGridField z;
  ZGridField zdot;
};

// Rebuilds the full 10-component field (and its time derivative) from a
// reduced state and its time derivative. state_ddot defaults to the
// derivative of rhs_reduced along state_dot, which is exact when state_dot
// comes from rhs_reduced.
AuxFields reconstruct_aux(const StateField& s, const StateField& s_dot,
                          const SemiDiscreteSystem& sys,
                          const std::optional<StateField>& s_ddot = std::nullopt);

// Tolerance on mode amplitudes that must vanish where the symbol of D_h does.
inline constexpr double kKernelTol = 1e-10;

// Solves D_h phi = f per mode with the zero-mean gauge; throws
// ReconstructionError when f has content on a zero mode of the symbol.
Field inverse_derivative(const CirculantOperator& D, const Field& f, const char* what);

}  // namespace msint
