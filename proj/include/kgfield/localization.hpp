#pragma once

#include <utility>
#include <vector>

#include "kgfield/field.hpp"

namespace kgfield {

/// Image of a field in L2 + L2: mode coefficients of (xi1, xi2), with the
/// lattice, (M, kappa) and reference time carried along.
struct TwoComponent {
  Lattice lattice;
  ModelParams params;
  double t0;
  CGrid xi1;
  CGrid xi2;
};

/// <xi|xi'> = V sum_k (conj xi1 xi1' + conj xi2 xi2').
cplx two_component_inner(const TwoComponent& x, const TwoComponent& y);

/// xi = (1/2) sqrt(kappa/M) D^{1/4} (sqrt(1+a)(psi + psi_c), sqrt(1-a)(psi - psi_c)) at t0.
TwoComponent map_Ua(const LatticeField& field, double a);

/// Inverse of map_Ua; the returned field is referred to time t.
LatticeField map_Ua_inverse(const TwoComponent& xi, double a, double t);
/// Inverse of the a = 0 map.
LatticeField map_U_inverse(const TwoComponent& xi, double t);

/// U_a^{-1} U: divides the sectors by sqrt(1 +- a).
LatticeField map_calU_a(const LatticeField& field, double a);
/// Inverse of map_calU_a: multiplies the sectors by sqrt(1 +- a).
LatticeField map_calU_a_inverse(const LatticeField& field, double a);

struct PositionOptions {
  /// Compare the conjugation route with the closed form before returning.
  bool cross_check = true;
  double tolerance = 1e-9;
  /// Offset from t0 at which the closed form is also compared.
  double check_offset = 0.5;
  /// Minimum fraction of wavefunction mass in the central half of the box.
  double interior_fraction = 0.999;
  /// Largest wavefunction magnitude allowed on the outermost nodes, relative to its max.
  double boundary_tolerance = 1e-8;
};

/// Position operator, one field per axis, from U^{-1} (x (x) 1) U.
std::vector<LatticeField> position_apply(const LatticeField& field, const PositionOptions& opt = {});

/// Closed form (x + i p / (2(p^2+M^2)) - i tau p/(p^2+M^2) d_0) psi at time t,
/// sampled on the nodes.
CGrid position_closed_form(const LatticeField& field, int axis, double t);

/// Momentum operator through the U conjugation (one field per axis).
std::vector<LatticeField> momentum_apply(const LatticeField& field);

struct LocalizedState {
  int epsilon;
  Vec3 y;
  std::size_t node;
  LatticeField field;

  /// The state divided by sqrt(cell volume): the lattice analogue of the
  /// Dirac-normalized state, whose self inner product is 1/cell volume.
  LatticeField dirac_normalized() const;
};

/// Kronecker-normalized localized state at a lattice node, referred to t0.
LocalizedState localized_state(int epsilon, const Vec3& y, const Lattice& lattice,
                               const ModelParams& params, double t0 = 0.0);

/// f(eps, x) = sqrt(kappa/M) D^{1/4} psi_eps(t0, x), returned as (f+, f-) grids.
std::pair<CGrid, CGrid> wavefunction_f(const LatticeField& field);

/// Wavefunctions computed as (psi_a^{(eps,x)}, psi_a)_a with psi_a = calU_a psi.
std::pair<CGrid, CGrid> wavefunction_f_via(const LatticeField& field, double a);

/// rho_a at t0 from psi'_a = calU_a^{-1} psi.
RGrid rho_a_via_calU(const LatticeField& field);

struct Region {
  Vec3 lo;
  Vec3 hi;
};

/// Validates a region against a lattice (lo < hi, inside the box).
void check_region(const Region& region, const Lattice& lattice);

/// Probability of finding the particle in the region (nodes with lo <= x < hi).
double probability_region(const LatticeField& field, const Region& region, bool normalize = false);

} // namespace kgfield
