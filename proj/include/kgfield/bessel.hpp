#pragma once

#include "kgfield/core.hpp"

namespace kgfield {

/// Gamma(1/4) to 20 significant digits.
inline constexpr double kGammaQuarter = 3.6256099082219083119;

/// K_nu(z) = int_0^inf exp(-z cosh t) cosh(nu t) dt, z > 0.
double besselK(double nu, double z);

/// Equal-time radial profile of a localized state in three dimensions,
/// sqrt(M/kappa) [2^{3/4} pi^{3/2} Gamma(1/4)]^{-1} (M/r)^{5/4} K_{5/4}(M r).
double besselK_profile(double r, const ModelParams& params, int dim = 3);

/// Same profile from the radial momentum integral
/// sqrt(M/kappa)/(2 pi^2 r) int_0^inf k sin(kr) (k^2+M^2)^{-1/4} dk,
/// with the two leading large-k terms summed in closed form.
double besselK_profile_kintegral(double r, const ModelParams& params, int dim = 3);

} // namespace kgfield
