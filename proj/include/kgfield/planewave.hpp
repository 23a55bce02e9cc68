#pragma once

#include <vector>

#include "kgfield/core.hpp"

namespace kgfield {

/// One mode coeff * e^{-i eps w x0 + i k.x} with w = sqrt(k^2 + M^2).
struct PlaneWaveMode {
  int epsilon = +1;
  Vec3 k{0.0, 0.0, 0.0};
  cplx coeff{1.0, 0.0};
};

using Matrix4 = std::array<std::array<double, 4>, 4>;

class Boost {
public:
  enum class Mode { exact, infinitesimal };

  explicit Boost(Vec3 beta, Mode mode = Mode::exact);

  const Vec3& beta() const { return beta_; }
  Mode mode() const { return mode_; }
  double speed() const;
  double gamma() const;

  /// Passive transformation x'^mu = L^mu_nu x^nu.
  Matrix4 matrix() const;
  Matrix4 inverse_matrix() const;

private:
  Vec3 beta_;
  Mode mode_;
};

FourVector lorentz_apply(const Matrix4& m, const FourVector& v);

class PlaneWaveField {
public:
  PlaneWaveField(ModelParams params, int dim, std::vector<PlaneWaveMode> modes);

  const ModelParams& params() const { return params_; }
  int dim() const { return dim_; }
  const std::vector<PlaneWaveMode>& modes() const { return modes_; }

  double omega(std::size_t i) const;
  /// Contravariant four-momentum (eps w, k) of mode i; e^{ip.x} is its phase.
  FourVector momentum(std::size_t i) const;
  cplx phase(std::size_t i, const Event& x) const;

  cplx psi(const Event& x) const;
  /// d_mu psi (covariant index).
  std::array<cplx, 4> dpsi(const Event& x) const;
  /// psi_c = i D^{-1/2} psidot; mode-wise eps * coeff.
  cplx psi_c(const Event& x) const;
  /// D^{-1/2} psidot.
  cplx dinvsqrt_psidot(const Event& x) const;

private:
  ModelParams params_;
  int dim_;
  std::vector<PlaneWaveMode> modes_;
};

/// Boost the four-momentum of every mode; coefficients are unchanged so that
/// psi'(x') = psi(x) with x' = L x.
PlaneWaveField boost_planewave(const PlaneWaveField& field, const Boost& boost);

Event boost_event(const Boost& boost, const Event& x);

/// J_a^mu at an event (contravariant components, index 0 is time).
std::array<cplx, 4> current_Ja_at(const PlaneWaveField& field, double a, const Event& x);
/// d_mu J_a^mu at an event, from the bilinear mode expansion.
cplx divergence_Ja_at(const PlaneWaveField& field, double a, const Event& x);

/// Probability current calJ_a^mu at an event.
FourVector current_calJa_at(const PlaneWaveField& field, double a, const Event& x);
/// d_mu calJ_a^mu at an event, from the bilinear mode expansion.
double divergence_calJa_at(const PlaneWaveField& field, double a, const Event& x);

} // namespace kgfield
