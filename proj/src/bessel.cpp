#include "kgfield/bessel.hpp"

#include <cmath>

#include "kgfield/quadrature.hpp"

namespace kgfield {
namespace {

void check_args(double r, int dim) {
  if (dim != 3) throw PreconditionError("localized-state profile is defined for three dimensions only");
  if (!(r > 0.0) || !std::isfinite(r)) throw PreconditionError("profile radius must be positive");
}

} // namespace

double besselK(double nu, double z) {
  if (!(z > 0.0) || !std::isfinite(z)) throw PreconditionError("besselK: argument must be positive");
  // Beyond t_max the integrand is below exp(-700) of its value at 0.
  const double t_max = std::acosh(1.0 + 700.0 / z) + 1.0;
  return integrate([&](double t) { return std::exp(-z * std::cosh(t) + std::abs(nu) * t) *
                                          0.5 * (1.0 + std::exp(-2.0 * std::abs(nu) * t)); },
                   0.0, t_max, 1e-13);
}

double besselK_profile(double r, const ModelParams& params, int dim) {
  check_args(r, dim);
  const double M = params.mass();
  const double norm = std::sqrt(M / params.kappa()) /
                      (std::pow(2.0, 0.75) * std::pow(kPi, 1.5) * kGammaQuarter);
  return norm * std::pow(M / r, 1.25) * besselK(1.25, M * r);
}

double besselK_profile_kintegral(double r, const ModelParams& params, int dim) {
  check_args(r, dim);
  const double M = params.mass();
  const double m2 = M * M;
  // k (k^2+M^2)^{-1/4} = k^{1/2} - (M^2/4) k^{-3/2} + h(k), h = O(k^{-7/2}).
  auto h = [&](double k) {
    const double x = m2 / (k * k);
    if (x > 0.05) return k * std::pow(k * k + m2, -0.25) - std::sqrt(k) + 0.25 * m2 * std::pow(k, -1.5);
    // Binomial tail sum_{n>=2} C(-1/4, n) x^n, free of cancellation.
    double term = 1.0, tail = 0.0;
    for (int n = 1; n <= 24; ++n) {
      term *= (-0.25 - (n - 1)) / n * x;
      if (n >= 2) tail += term;
    }
    return std::sqrt(k) * tail;
  };
  // int_0^inf k^{mu-1} sin(kr) dk = Gamma(mu) sin(pi mu / 2) r^{-mu}, continued to mu = 3/2, -1/2.
  const double lead = std::tgamma(1.5) * std::sin(0.75 * kPi) * std::pow(r, -1.5);
  const double next = -0.25 * m2 * std::tgamma(-0.5) * std::sin(-0.25 * kPi) * std::sqrt(r);
  const double split = 4.0 * M;
  const double near = integrate_singular([&](double k) { return std::sin(k * r) * h(k); }, 0.0, split, 1e-13);
  const double far = integrate_fourier_sine(h, r, split, 1e-16);
  const double integral = lead + next + near + far;
  return std::sqrt(M / params.kappa()) * integral / (2.0 * kPi * kPi * r);
}

} // namespace kgfield
