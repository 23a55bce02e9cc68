#pragma once

#include <string>
#include <vector>

#include "kgfield/currents.hpp"
#include "kgfield/random_fields.hpp"

namespace kgfield {

struct SchrodingerReference {
  Lattice lattice;
  RGrid rho;
  std::vector<RGrid> j;
};

/// rho = |psi|^2, j = -(i/2M)[psi* grad psi - psi grad psi*] on the dealiasing lattice.
SchrodingerReference schrodinger_reference(const LatticeField& field, double t);

/// Fixed packet profile on a fixed lattice; only the mass grows along the ladder.
struct LimitSweep {
  Lattice lattice;
  PacketSpec profile;
  std::vector<double> masses;
  /// Currents are compared at t0 + time_offset.
  double time_offset = 0.3;

  /// masses M0 * 2^j, j = 0 .. count-1.
  static std::vector<double> ladder(double m0, int count = 6);
};

/// kappa = 1/(1+a), the normalization that makes the limiting density |psi|^2.
ModelParams limit_params(double mass, double a);

struct LimitRow {
  double mass;
  double rel_dev_rho;
  double rel_dev_j;
};

struct LimitTable {
  std::vector<LimitRow> rows;
  double slope_rho;
  double slope_j;
};

/// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// One ladder point of limit_deviation.
LimitRow limit_row(const LimitSweep& sweep, double mass, CurrentChoice which, double a);

/// Relative L2 deviation of the chosen current from the Schrodinger reference
/// along the ladder, for the nonrelativistic preparation psidot = -iM psi.
LimitTable limit_deviation(const LimitSweep& sweep, CurrentChoice which, double a);

enum class LadderQuantity {
  /// ||(D^{-1/2} - (1/M - laplacian/(2M^3))) phi|| (expected slope -5).
  operator_expansion,
  /// ||psi_c - psi|| / ||psi||.
  psi_c,
  /// ||psi~_a - (1+a) psi|| / ||(1+a) psi||.
  psi_tilde,
  /// ||J_a^0 - calJ_a^0|| / ||calJ_a^0||.
  mutual_density,
  /// Relative residual of the free Schrodinger equation for chi = e^{iMt} psi
  /// built from a positive-energy packet.
  chi_schrodinger,
};

const char* to_string(LadderQuantity q);

struct LadderResult {
  std::vector<double> masses;
  std::vector<double> values;
  double slope;
};

LadderResult ladder_check(const LimitSweep& sweep, LadderQuantity q, double a);

} // namespace kgfield
