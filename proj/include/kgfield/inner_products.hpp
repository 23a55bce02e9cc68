#pragma once

#include "kgfield/field.hpp"

namespace kgfield {

struct InnerProductValue {
  cplx value;
  double a;
  double kappa;
  double g;
};

/// <f|g> = sum over nodes conj(f) g * cell volume.
cplx grid_inner(const CGrid& f, const CGrid& g, const Lattice& lattice);
/// Same product from mode coefficients (Parseval): V sum conj(f^) g^.
cplx coeff_inner(const CGrid& f, const CGrid& g, const Lattice& lattice);

/// ig [<psi1|psidot2> - <psidot1|psi2>] by grid quadrature at time t.
cplx kg_inner(const LatticeField& f1, const LatticeField& f2, double g, double t);

/// (1/2M)[<psi1|D^{1/2}psi2> + <psidot1|D^{-1/2}psidot2>] from mode sums at time t.
cplx inner_plain(const LatticeField& f1, const LatticeField& f2, double t);

/// The positive-definite family (kappa/2M){...} from mode sums at time t.
cplx inner_a(const LatticeField& f1, const LatticeField& f2, double t);
InnerProductValue inner_a_value(const LatticeField& f1, const LatticeField& f2, double t);

/// kappa [(1+a)(psi1+, psi2+)_KG - (1-a)(psi1-, psi2-)_KG] with g = 1/(2M).
cplx inner_a_split(const LatticeField& f1, const LatticeField& f2, double t);

/// kappa [(psi1, psi2) + a (psi1, psi2)_KG] with g = 1/(2M).
cplx inner_a_decomposed(const LatticeField& f1, const LatticeField& f2, double t);

/// True when the field came from real initial data: phi-(k) = conj(phi+(-k)).
bool is_real_field(const LatticeField& f, double rel_tol = 1e-12);

/// Re (K psi1, K psi2)_KG with K psi = psi_+; inputs must be real fields.
double wald_inner(const LatticeField& f1, const LatticeField& f2, double g, double t);

} // namespace kgfield
