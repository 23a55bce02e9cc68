#include "kgfield/inner_products.hpp"

#include <cmath>

namespace kgfield {
namespace {

void require_same(const LatticeField& a, const LatticeField& b, const char* what) {
  if (!(a.lattice() == b.lattice())) throw PreconditionError(std::string(what) + ": lattice mismatch");
  if (!(a.params() == b.params())) throw PreconditionError(std::string(what) + ": parameter mismatch");
}

} // namespace

cplx grid_inner(const CGrid& f, const CGrid& g, const Lattice& lattice) {
  if (f.size() != lattice.size() || g.size() != lattice.size())
    throw PreconditionError("grid_inner: grid does not match lattice");
  cplx s{};
  for (std::size_t i = 0; i < f.size(); ++i) s += std::conj(f[i]) * g[i];
  return s * lattice.cell_volume();
}

cplx coeff_inner(const CGrid& f, const CGrid& g, const Lattice& lattice) {
  if (f.size() != lattice.size() || g.size() != lattice.size())
    throw PreconditionError("coeff_inner: grid does not match lattice");
  cplx s{};
  for (std::size_t i = 0; i < f.size(); ++i) s += std::conj(f[i]) * g[i];
  return s * lattice.volume();
}

cplx kg_inner(const LatticeField& f1, const LatticeField& f2, double g, double t) {
  if (!(f1.lattice() == f2.lattice())) throw PreconditionError("kg_inner: lattice mismatch");
  if (!(f1.params().mass() == f2.params().mass())) throw PreconditionError("kg_inner: mass mismatch");
  if (!(g > 0.0)) throw PreconditionError("kg_inner: g must be positive");
  const FieldSamples s1 = f1.evaluate(t), s2 = f2.evaluate(t);
  const Lattice& L = f1.lattice();
  return cplx(0.0, g) * (grid_inner(s1.psi, s2.psidot, L) - grid_inner(s1.psidot, s2.psi, L));
}

cplx inner_plain(const LatticeField& f1, const LatticeField& f2, double t) {
  if (!(f1.lattice() == f2.lattice())) throw PreconditionError("inner_plain: lattice mismatch");
  if (!(f1.params().mass() == f2.params().mass())) throw PreconditionError("inner_plain: mass mismatch");
  const Lattice& L = f1.lattice();
  const double M = f1.params().mass();
  const FieldSamples c1 = f1.coefficients_at(t), c2 = f2.coefficients_at(t);
  CGrid dpsi = c2.psi, ddot = c2.psidot;
  scale_D_power(dpsi, L, M, 0.5);
  scale_D_power(ddot, L, M, -0.5);
  return (coeff_inner(c1.psi, dpsi, L) + coeff_inner(c1.psidot, ddot, L)) / (2.0 * M);
}

cplx inner_a(const LatticeField& f1, const LatticeField& f2, double t) {
  require_same(f1, f2, "inner_a");
  const Lattice& L = f1.lattice();
  const ModelParams& P = f1.params();
  const double M = P.mass();
  const FieldSamples c1 = f1.coefficients_at(t), c2 = f2.coefficients_at(t);
  CGrid dpsi = c2.psi, ddot = c2.psidot;
  scale_D_power(dpsi, L, M, 0.5);
  scale_D_power(ddot, L, M, -0.5);
  const cplx sym = coeff_inner(c1.psi, dpsi, L) + coeff_inner(c1.psidot, ddot, L);
  const cplx skew = coeff_inner(c1.psi, c2.psidot, L) - coeff_inner(c1.psidot, c2.psi, L);
  return P.kappa() / (2.0 * M) * (sym + cplx(0.0, P.a()) * skew);
}

InnerProductValue inner_a_value(const LatticeField& f1, const LatticeField& f2, double t) {
  const ModelParams& P = f1.params();
  return {inner_a(f1, f2, t), P.a(), P.kappa(), 1.0 / (2.0 * P.mass())};
}

cplx inner_a_split(const LatticeField& f1, const LatticeField& f2, double t) {
  require_same(f1, f2, "inner_a_split");
  const ModelParams& P = f1.params();
  const double g = 1.0 / (2.0 * P.mass());
  const auto [p1, m1] = energy_split(f1);
  const auto [p2, m2] = energy_split(f2);
  return P.kappa() * ((1.0 + P.a()) * kg_inner(p1, p2, g, t) - (1.0 - P.a()) * kg_inner(m1, m2, g, t));
}

cplx inner_a_decomposed(const LatticeField& f1, const LatticeField& f2, double t) {
  require_same(f1, f2, "inner_a_decomposed");
  const ModelParams& P = f1.params();
  return P.kappa() * (inner_plain(f1, f2, t) + P.a() * kg_inner(f1, f2, 1.0 / (2.0 * P.mass()), t));
}

bool is_real_field(const LatticeField& f, double rel_tol) {
  const Lattice& L = f.lattice();
  const double scale = std::max(max_abs(f.phi_plus()), max_abs(f.phi_minus()));
  if (scale == 0.0) return true;
  for (std::size_t i = 0; i < L.size(); ++i) {
    const std::size_t j = L.negated(i);
    if (std::abs(f.phi_minus()[i] - std::conj(f.phi_plus()[j])) > rel_tol * scale) return false;
  }
  return true;
}

double wald_inner(const LatticeField& f1, const LatticeField& f2, double g, double t) {
  if (!is_real_field(f1) || !is_real_field(f2))
    throw PreconditionError("wald_inner: inputs must be built from real initial data");
  const LatticeField k1 = energy_split(f1).first;
  const LatticeField k2 = energy_split(f2).first;
  return kg_inner(k1, k2, g, t).real();
}

} // namespace kgfield
