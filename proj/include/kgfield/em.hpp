#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "kgfield/field.hpp"

namespace kgfield {

/// Stationary background on a small 2-D lattice: real vector potential A,
/// scalar potential phi (must vanish in the stationary-magnetic mode), coupling q.
struct EMBackground {
  Lattice lattice;
  std::vector<RGrid> A;
  RGrid phi;
  double q;

  static EMBackground zero(const Lattice& lattice, double q);
  static EMBackground constant(const Lattice& lattice, double q, const Vec3& A0);
  /// A = (-B L/(2 pi) sin(2 pi y / L), 0): periodic field strength B cos(2 pi y / L).
  static EMBackground periodic_field(const Lattice& lattice, double q, double B);

  /// A + grad Lambda with the spectral gradient.
  EMBackground gauge_shifted(const RGrid& lambda) const;

  /// Throws PreconditionError unless d = 2, N <= 32, grids match and phi == 0.
  void validate() const;
};

/// Hermitian operator on the node space with its eigendecomposition.
class DenseOperator {
public:
  DenseOperator(Lattice lattice, Eigen::MatrixXcd matrix, double hermiticity_residual);

  const Lattice& lattice() const { return lattice_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const Eigen::VectorXd& eigenvalues() const { return evals_; }
  const Eigen::MatrixXcd& eigenvectors() const { return evecs_; }
  /// max |H - H^dagger| / max |H| before symmetrization.
  double hermiticity_residual() const { return herm_; }

  /// f(H) = V diag(f(lambda)) V^dagger.
  Eigen::MatrixXcd function(const std::function<double(double)>& f) const;
  CGrid apply(const CGrid& v) const;
  CGrid apply_function(const std::function<double(double)>& f, const CGrid& v) const;

private:
  Lattice lattice_;
  Eigen::MatrixXcd matrix_;
  Eigen::VectorXd evals_;
  Eigen::MatrixXcd evecs_;
  double herm_;
};

/// Dense -(grad - iqA)^2 + M^2, assembled column by column.
DenseOperator build_Dq(const EMBackground& bg, const ModelParams& params, int workers = 0);

/// The a-inner product with D replaced by the dense operator.
cplx em_inner_a(const DenseOperator& op, const ModelParams& params, const FieldSamples& f1,
                const FieldSamples& f2);

struct EMEvolution {
  FieldSamples samples;
  cplx inner;
};

/// Evolves chi'' + D_q chi = 0 from (psi0, psidot0) by time t in the eigenbasis.
EMEvolution em_inner_and_evolve(const CGrid& psi0, const CGrid& psidot0, const DenseOperator& op,
                                const ModelParams& params, double t);

/// Complex second-order jet in (t, x, y, z): value, gradient and Hessian.
struct Jet {
  cplx v{};
  std::array<cplx, 4> g{};
  std::array<std::array<cplx, 4>, 4> h{};

  Jet() = default;
  Jet(cplx value) : v(value) {}
  static Jet variable(double value, int index);
};

Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator-(const Jet& a);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet exp(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);

using JetEvent = std::array<Jet, 4>;
using JetFunction = std::function<Jet(const JetEvent&)>;

/// Closed-form background for the gauge-transformation check. Phi must be a
/// time antiderivative of phi vanishing at the reference time.
struct EMProfile {
  int dim = 2;
  double q = 1.0;
  double mass = 1.0;
  JetFunction phi;
  JetFunction Phi;
  std::array<JetFunction, 3> A;
};

struct GaugeResidual {
  /// max |chi'' + D^_q chi - u R[psi]| over the events, relative to the term scale.
  double transformed;
  /// max |R[psi]|: the residual of the untransformed equation.
  double untransformed;
  /// max |chi'' + D^_q chi|.
  double transformed_equation;
  /// max |d_t Phi - phi|.
  double antiderivative;
};

GaugeResidual em_gauge_residual(const EMProfile& profile, const JetFunction& psi,
                                const std::vector<Event>& events);

} // namespace kgfield
