#pragma once

#include <utility>

#include "kgfield/field.hpp"
#include "kgfield/planewave.hpp"

namespace kgfield {

enum class CurrentKind { twisted_chiral, probability, rosenstein_horwitz };

const char* to_string(CurrentKind kind);

/// Sampled (J^0, J^1, ..., J^d) on a spatial lattice at time t.
template <class T>
struct FourVectorGrid {
  CurrentKind kind;
  double t;
  Lattice lattice;
  std::vector<std::vector<T>> components;
};

using ComplexCurrent = FourVectorGrid<cplx>;
using RealCurrent = FourVectorGrid<double>;

/// Lattice with twice the points of the field lattice; quadratic products of
/// lattice fields are alias-free there.
Lattice dealiasing_lattice(const Lattice& lattice);

/// Node samples of mode coefficients on the dealiasing lattice.
CGrid padded_grid(const CGrid& coeffs, const Lattice& lattice);

/// Nodes of the dealiasing lattice shared with the field lattice.
RGrid restrict_to_field_lattice(const RGrid& padded, const Lattice& lattice);
CGrid restrict_to_field_lattice(const CGrid& padded, const Lattice& lattice);

/// J_a^mu = -(i kappa/2M) psi* d<->^mu (psi_c + a psi).
ComplexCurrent current_Ja(const LatticeField& field, double t);

/// (kappa/2M){psi* D^{1/2} psi + psidot* D^{-1/2} psidot + ia[psi* psidot - psidot* psi]}.
CGrid current_Ja0_energy_form(const LatticeField& field, double t);

enum class CurrentChoice { Ja, calJa };

/// max |d_mu J^mu| / max |J| with d_0 taken from the mode phases.
double continuity_residual(const LatticeField& field, double t, CurrentChoice which);

/// Pointwise d_mu J^mu on the dealiasing lattice.
CGrid divergence_Ja(const LatticeField& field, double t);
RGrid divergence_calJa(const LatticeField& field, double t);

/// Probability current with D^{+-1/4} applied mode-wise; component 0 uses
/// the rho_a form.
RealCurrent current_calJa(const LatticeField& field, double t);

/// Time component of the probability current from the mu = 0 case of its
/// general Im{...} form (cross-check against rho_a).
RGrid current_calJa0_literal(const LatticeField& field, double t);

/// (kappa/2M){|D^{1/4}psi|^2 + |D^{1/4}psi_c|^2 + a[...]} at the field lattice nodes.
/// Round-off negatives above -1e-14 max are clipped; larger ones throw.
RGrid rho_a(const LatticeField& field, double t);

/// int rho_a over the box.
double total_probability(const LatticeField& field, double t);
/// int J_a^0 over the box.
cplx total_Ja0(const LatticeField& field, double t);

/// Re and Im parts of J_a^mu from the energy components.
std::pair<RealCurrent, RealCurrent> split_re_im(const LatticeField& field, double t);

/// Two positive-energy plane waves c1 e^{ik1.x} + c2 e^{ik2.x}.
struct TwoModeOracle {
  Vec3 k1{0.0, 0.0, 0.0};
  Vec3 k2{0.0, 0.0, 0.0};
  cplx c1{1.0, 0.0};
  cplx c2{1.0, 0.0};
  ModelParams params{1.0, 1.0, 0.0};
  int dim = 1;

  double omega1() const;
  double omega2() const;
  FourVector kmu1() const;
  FourVector kmu2() const;
  PlaneWaveField field() const;
};

struct TwoModeValues {
  FourVector calJ;
  std::array<cplx, 4> J;
  FourVector K;
  double Ksq;
  double div_calJ;
  double div_J;
};

/// Closed-form currents, K^mu and divergences of the two-mode superposition.
TwoModeValues two_mode_oracle(const TwoModeOracle& o, double a, const Event& x);

struct NonCovariance {
  double Ksq_before;
  double Ksq_after;
  double delta;
  double k1k2_before;
  double k1k2_after;
};

/// K_mu K^mu before and after boosting both modes.
NonCovariance noncovariance_demo(const TwoModeOracle& o, const Boost& boost);

} // namespace kgfield
