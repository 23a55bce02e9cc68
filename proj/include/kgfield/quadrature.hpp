#pragma once

#include <functional>
#include <vector>

namespace kgfield {

/// Gauss-Legendre nodes and weights on [lo, hi].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int order, double lo, double hi);

/// Adaptive integral of f over [lo, hi] (relative tolerance rel_tol).
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double rel_tol = 1e-13);

/// Adaptive integral of f over [lo, infinity).
double integrate_semi_infinite(const std::function<double(double)>& f, double lo,
                               double rel_tol = 1e-13);

/// Adaptive integral of f over [lo, hi] tolerating integrable endpoint singularities.
double integrate_singular(const std::function<double(double)>& f, double lo, double hi,
                          double rel_tol = 1e-13);

/// int_lo^infinity f(k) sin(omega k) dk for slowly decaying f.
double integrate_fourier_sine(const std::function<double(double)>& f, double omega, double lo,
                              double abs_tol = 1e-15);

} // namespace kgfield
