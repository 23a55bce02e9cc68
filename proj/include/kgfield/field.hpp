#pragma once

#include <utility>

#include "kgfield/lattice.hpp"
#include "kgfield/spectral.hpp"

namespace kgfield {

/// Node samples of a field and its time derivative at one instant.
struct FieldSamples {
  CGrid psi;
  CGrid psidot;
};

/// Klein-Gordon field on a periodic box, stored as positive and negative
/// frequency mode coefficients referred to the time t0:
///   psi(t, x) = sum_k [phi+(k) e^{-i w (t - t0)} + phi-(k) e^{+i w (t - t0)}] e^{ik.x}.
class LatticeField {
public:
  LatticeField(Lattice lattice, ModelParams params, CGrid phi_plus, CGrid phi_minus,
               double t0 = 0.0);

  static LatticeField zero(const Lattice& lattice, const ModelParams& params, double t0 = 0.0);

  const Lattice& lattice() const { return lattice_; }
  const ModelParams& params() const { return params_; }
  const CGrid& phi_plus() const { return plus_; }
  const CGrid& phi_minus() const { return minus_; }
  double t0() const { return t0_; }
  const std::vector<double>& omega() const { return *omega_; }

  LatticeField with_params(const ModelParams& params) const;

  /// Mode coefficients of psi and psidot at time t.
  FieldSamples coefficients_at(double t) const;
  /// Positive- and negative-frequency coefficient grids at time t.
  std::pair<CGrid, CGrid> sector_coefficients_at(double t) const;
  FieldSamples evaluate(double t) const;

  LatticeField operator+(const LatticeField& other) const;
  LatticeField operator-(const LatticeField& other) const;
  LatticeField operator*(cplx s) const;

  /// Largest coefficient difference against a field on the same lattice.
  double max_coeff_diff(const LatticeField& other) const;
  bool compatible(const LatticeField& other) const;

private:
  Lattice lattice_;
  ModelParams params_;
  CGrid plus_;
  CGrid minus_;
  double t0_;
  std::shared_ptr<const std::vector<double>> omega_;
};

inline LatticeField operator*(cplx s, const LatticeField& f) { return f * s; }

LatticeField from_initial_data(const CGrid& psi0, const CGrid& psidot0, const Lattice& lattice,
                               const ModelParams& params, double t0 = 0.0);

/// Samples at time t; thin wrapper over LatticeField::evaluate.
FieldSamples evaluate(const LatticeField& field, double t);

/// psi_c = i D^{-1/2} psidot: flips the sign of the negative-frequency sector.
LatticeField apply_C(const LatticeField& field);

/// psi_(+/-) = (psi +/- C psi) / 2.
std::pair<LatticeField, LatticeField> energy_split(const LatticeField& field);

/// Same field referred to t0 + dt (re-phased exactly).
LatticeField evolve(const LatticeField& field, double dt);

/// max |(d0^2 - laplacian + M^2) psi| over the grid at time t.
double kg_residual(const LatticeField& field, double t);

/// max over sectors of |i d0 psi_e - e D^{1/2} psi_e| at time t.
double foldy_residual(const LatticeField& field, double t);

namespace testing {
/// kg_residual with the mode frequencies scaled by omega_scale in the time
/// derivative only; a negative control for the residual check.
double kg_residual_corrupted(const LatticeField& field, double t, double omega_scale);
} // namespace testing

} // namespace kgfield
