#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace kgfield {

using cplx = std::complex<double>;
using CGrid = std::vector<cplx>;
using RGrid = std::vector<double>;

/// Spatial vector; components beyond the lattice dimension are zero.
using Vec3 = std::array<double, 3>;

/// Spacetime event (x^0, x^1, x^2, x^3).
using Event = std::array<double, 4>;

/// Contravariant four-vector components.
using FourVector = std::array<double, 4>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Raised when a caller violates an operation's precondition.
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical self-check inside an operation fails.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Mass scale M (inverse Compton length), overall scale kappa, and the
/// inner-product parameter a in (-1, 1). Units: hbar = c = 1.
class ModelParams {
public:
  ModelParams(double mass, double kappa, double a);

  double mass() const { return mass_; }
  double kappa() const { return kappa_; }
  double a() const { return a_; }

  ModelParams with_a(double a) const { return {mass_, kappa_, a}; }
  ModelParams with_kappa(double kappa) const { return {mass_, kappa, a_}; }
  ModelParams with_mass(double mass) const { return {mass, kappa_, a_}; }

  bool operator==(const ModelParams&) const = default;

private:
  double mass_;
  double kappa_;
  double a_;
};

/// Minkowski product with signature (-,+,+,+).
inline double minkowski_dot(const FourVector& p, const FourVector& q) {
  return -p[0] * q[0] + p[1] * q[1] + p[2] * q[2] + p[3] * q[3];
}

double max_abs(const CGrid& g);
double max_abs(const RGrid& g);
double max_abs_diff(const CGrid& a, const CGrid& b);
double max_abs_diff(const RGrid& a, const RGrid& b);

} // namespace kgfield
