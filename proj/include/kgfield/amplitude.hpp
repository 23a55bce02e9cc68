#pragma once

#include <optional>
#include <vector>

#include "kgfield/planewave.hpp"

namespace kgfield {

struct Monomial {
  cplx coeff{1.0, 0.0};
  std::array<int, 3> power{0, 0, 0};
};

/// scale * exp(-|k - center|^2 / (2 width^2)) * P(k - center); an empty
/// term list means P = 1.
struct GaussianPoly {
  cplx scale{1.0, 0.0};
  Vec3 center{0.0, 0.0, 0.0};
  double width = 1.0;
  std::vector<Monomial> terms;

  cplx operator()(const Vec3& k) const;
  /// Radius beyond which the Gaussian factor is below 1e-17 of its peak,
  /// padded for the polynomial degree.
  double support_radius() const;
};

/// Continuum field psi(x) = int d^dk/(2pi)^d [a+(k) e^{ip+.x} + a-(k) e^{ip-.x}],
/// possibly viewed from a boosted frame. In the current frame the amplitude
/// is a'(k') = (w/w') a(k) with (eps w, k) = L^{-1} (eps w', k').
class AmplitudeField {
public:
  AmplitudeField(ModelParams params, int dim, std::optional<GaussianPoly> plus,
                 std::optional<GaussianPoly> minus, int order = 64);

  const ModelParams& params() const { return params_; }
  int dim() const { return dim_; }
  int order() const { return order_; }
  AmplitudeField with_order(int order) const;
  AmplitudeField with_params(const ModelParams& params) const;

  bool has_sector(int epsilon) const;
  cplx amplitude(int epsilon, const Vec3& k) const;

  /// Quadrature box for a sector in the current frame.
  Vec3 box_center(int epsilon) const;
  double box_radius(int epsilon) const;

  /// Scale the quadrature box radius (truncation checks).
  AmplitudeField with_radius_scale(double s) const;

  /// Field values in the current frame (quadrature of the mode integral).
  cplx psi(const Event& x) const;

  AmplitudeField boosted(const Boost& boost) const;

private:
  ModelParams params_;
  int dim_;
  std::optional<GaussianPoly> plus_, minus_;
  int order_;
  Matrix4 to_rest_;
  double radius_growth_ = 1.0;
  double radius_scale_ = 1.0;
};

/// kappa int d^dk/(2pi)^d (w/M) [(1+a) a1+* a2+ + (1-a) a1-* a2-] by tensor
/// Gauss-Legendre over the union of the sector boxes.
cplx continuum_inner_a(const AmplitudeField& f1, const AmplitudeField& f2);

/// int d^dk/(2pi)^d sum_eps |a_eps|^2 (L2 mass of the amplitudes).
double amplitude_mass(const AmplitudeField& f);

/// Relative change of the amplitude mass when the box radius doubles;
/// throws NumericalError above 1e-10.
double truncation_check(const AmplitudeField& f);

struct InvarianceResult {
  cplx before;
  cplx after;
  double rel_dev;
};

InvarianceResult invariance_check(const AmplitudeField& f1, const AmplitudeField& f2,
                                  const Boost& boost);

} // namespace kgfield
