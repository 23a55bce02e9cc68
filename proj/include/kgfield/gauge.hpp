#pragma once

#include <optional>
#include <string>
#include <variant>

#include "kgfield/field.hpp"

namespace kgfield {

/// diag(e^{-i(a+1) theta}, e^{-i(a-1) theta}) acting on (psi+, psi-).
struct GaugeElement {
  double theta;
  double a;

  std::array<cplx, 2> diagonal() const;
};

/// psi_eps -> e^{-i(a+eps) theta} psi_eps.
LatticeField gauge_transform(const LatticeField& field, double theta, double a);

/// e^{-i a theta}[cos theta - i sin theta C] psi.
LatticeField gauge_transform_cos_sin(const LatticeField& field, double theta, double a);

/// max |[g(dtheta) psi - psi]/dtheta + i(C + a) psi| over the nodes at t0.
double generator_check(const LatticeField& field, double a, double dtheta);

/// Total probability from the phase-space form with pi = (lambda/2) psidot*,
/// lambda = 1/M.
double charge_phase_space(const LatticeField& field, double t);

struct Rational {
  long long p;
  long long q;
};

/// Irrational parameter: a name and a numerical approximation.
struct IrrationalTag {
  std::string name;
  double approx;
};

using GaugeParameter = std::variant<Rational, IrrationalTag>;

struct GroupClass {
  enum class Kind { U1, Rplus } kind;
  /// Smallest positive theta with g_a(theta) = identity (U(1) case).
  std::optional<double> period;
  /// Largest deviation from the identity at the period (U1) or smallest
  /// distance from the identity over the sampled multiples of 2 pi (Rplus).
  double witness;
};

/// Parse "p/q", "p" or "irrational:<name>=<value>".
GaugeParameter parse_gauge_parameter(const std::string& text);

GroupClass group_classify(const GaugeParameter& a);

} // namespace kgfield
