#include "kgfield/localization.hpp"

#include <algorithm>
#include <cmath>

#include "kgfield/inner_products.hpp"

namespace kgfield {
namespace {

const cplx I(0.0, 1.0);

void check_a(double a) {
  if (!(a > -1.0 && a < 1.0)) throw PreconditionError("a must lie in the open interval (-1, 1)");
}

LatticeField scale_sectors(const LatticeField& f, double sp, double sm) {
  CGrid p = f.phi_plus(), m = f.phi_minus();
  for (auto& v : p) v *= sp;
  for (auto& v : m) v *= sm;
  return {f.lattice(), f.params(), std::move(p), std::move(m), f.t0()};
}

double central_fraction(const std::pair<CGrid, CGrid>& f, const Lattice& L) {
  double inner = 0.0, total = 0.0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    const double w = std::norm(f.first[i]) + std::norm(f.second[i]);
    total += w;
    const Vec3 x = L.position(i);
    bool central = true;
    for (int ax = 0; ax < L.dim(); ++ax)
      if (std::abs(x[ax]) > 0.25 * L.length(ax)) central = false;
    if (central) inner += w;
  }
  return total > 0.0 ? inner / total : 1.0;
}

double boundary_ratio(const std::pair<CGrid, CGrid>& f, const Lattice& L) {
  double edge = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    const double v = std::max(std::abs(f.first[i]), std::abs(f.second[i]));
    peak = std::max(peak, v);
    const auto idx = L.unflatten(i);
    for (int ax = 0; ax < L.dim(); ++ax)
      if (idx[ax] == 0 || idx[ax] == L.points(ax) - 1) edge = std::max(edge, v);
  }
  return peak > 0.0 ? edge / peak : 0.0;
}

} // namespace

cplx two_component_inner(const TwoComponent& x, const TwoComponent& y) {
  if (!(x.lattice == y.lattice)) throw PreconditionError("two_component_inner: lattice mismatch");
  cplx s{};
  for (std::size_t i = 0; i < x.xi1.size(); ++i)
    s += std::conj(x.xi1[i]) * y.xi1[i] + std::conj(x.xi2[i]) * y.xi2[i];
  return s * x.lattice.volume();
}

TwoComponent map_Ua(const LatticeField& field, double a) {
  check_a(a);
  const ModelParams& P = field.params();
  const double s = std::sqrt(P.kappa() / P.mass());
  const auto& w = field.omega();
  TwoComponent xi{field.lattice(), P, field.t0(), field.phi_plus(), field.phi_minus()};
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double q = s * std::sqrt(w[i]);
    xi.xi1[i] *= q * std::sqrt(1.0 + a);
    xi.xi2[i] *= q * std::sqrt(1.0 - a);
  }
  return xi;
}

LatticeField map_Ua_inverse(const TwoComponent& xi, double a, double t) {
  check_a(a);
  const double s = std::sqrt(xi.params.mass() / xi.params.kappa());
  const auto w = frequencies(xi.lattice, xi.params.mass());
  CGrid p = xi.xi1, m = xi.xi2;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double q = s / std::sqrt(w[i]);
    p[i] *= q / std::sqrt(1.0 + a);
    m[i] *= q / std::sqrt(1.0 - a);
  }
  return evolve(LatticeField(xi.lattice, xi.params, std::move(p), std::move(m), xi.t0), t - xi.t0);
}

LatticeField map_U_inverse(const TwoComponent& xi, double t) { return map_Ua_inverse(xi, 0.0, t); }

LatticeField map_calU_a(const LatticeField& field, double a) {
  check_a(a);
  return scale_sectors(field, 1.0 / std::sqrt(1.0 + a), 1.0 / std::sqrt(1.0 - a));
}

LatticeField map_calU_a_inverse(const LatticeField& field, double a) {
  check_a(a);
  return scale_sectors(field, std::sqrt(1.0 + a), std::sqrt(1.0 - a));
}

std::vector<LatticeField> position_apply(const LatticeField& field, const PositionOptions& opt) {
  const Lattice& L = field.lattice();
  const auto f = wavefunction_f(field);
  if (central_fraction(f, L) < opt.interior_fraction)
    throw PreconditionError("position_apply: field is not localized in the central half of the box");
  if (boundary_ratio(f, L) > opt.boundary_tolerance)
    throw PreconditionError("position_apply: wavefunction reaches the box boundary (wrap-around)");

  const TwoComponent xi = map_Ua(field, 0.0);
  const CGrid g1 = to_grid(xi.xi1, L), g2 = to_grid(xi.xi2, L);
  std::vector<LatticeField> out;
  for (int ax = 0; ax < L.dim(); ++ax) {
    CGrid h1(g1.size()), h2(g2.size());
    for (std::size_t i = 0; i < g1.size(); ++i) {
      const double x = L.position(i)[ax];
      h1[i] = x * g1[i];
      h2[i] = x * g2[i];
    }
    TwoComponent y = xi;
    y.xi1 = to_coeffs(h1, L);
    y.xi2 = to_coeffs(h2, L);
    out.push_back(map_U_inverse(y, field.t0()));
  }

  if (opt.cross_check) {
    for (int ax = 0; ax < L.dim(); ++ax) {
      for (double t : {field.t0(), field.t0() + opt.check_offset}) {
        const CGrid direct = out[ax].evaluate(t).psi;
        const CGrid closed = position_closed_form(field, ax, t);
        const double scale = std::max(max_abs(direct), 1e-300);
        if (max_abs_diff(direct, closed) > opt.tolerance * scale)
          throw NumericalError("position_apply: conjugation and closed-form routes disagree");
      }
    }
  }
  return out;
}

CGrid position_closed_form(const LatticeField& field, int axis, double t) {
  const Lattice& L = field.lattice();
  if (axis < 0 || axis >= L.dim()) throw PreconditionError("position_closed_form: bad axis");
  const double M = field.params().mass();
  const double tau = t - field.t0();
  const FieldSamples c = field.coefficients_at(t);
  const CGrid psi = to_grid(c.psi, L);
  CGrid extra(L.size());
  const auto& k2 = L.k_squared();
  for (std::size_t i = 0; i < L.size(); ++i) {
    const double p = L.wavevector(i)[axis];
    const double den = k2[i] + M * M;
    extra[i] = I * p / (2.0 * den) * c.psi[i] - I * tau * p / den * c.psidot[i];
  }
  CGrid out = to_grid(extra, L);
  for (std::size_t i = 0; i < L.size(); ++i) out[i] += L.position(i)[axis] * psi[i];
  return out;
}

std::vector<LatticeField> momentum_apply(const LatticeField& field) {
  const Lattice& L = field.lattice();
  const TwoComponent xi = map_Ua(field, 0.0);
  std::vector<LatticeField> out;
  for (int ax = 0; ax < L.dim(); ++ax) {
    // p = -i grad acting on the xi grids.
    TwoComponent y = xi;
    y.xi1 = derivative_coeffs(xi.xi1, L, ax);
    y.xi2 = derivative_coeffs(xi.xi2, L, ax);
    for (auto& v : y.xi1) v *= -I;
    for (auto& v : y.xi2) v *= -I;
    out.push_back(map_U_inverse(y, field.t0()));
  }
  return out;
}

LatticeField LocalizedState::dirac_normalized() const {
  return field * cplx(1.0 / std::sqrt(field.lattice().cell_volume()), 0.0);
}

LocalizedState localized_state(int epsilon, const Vec3& y, const Lattice& lattice,
                               const ModelParams& params, double t0) {
  if (epsilon != 1 && epsilon != -1) throw PreconditionError("localized_state: epsilon must be +1 or -1");
  const std::size_t node = lattice.node_at(y);
  const Vec3 yn = lattice.position(node);
  const auto w = frequencies(lattice, params.mass());
  const double s = std::sqrt(params.mass() / params.kappa());
  const double norm = std::sqrt(lattice.cell_volume()) / lattice.volume();
  CGrid c(lattice.size()), z(lattice.size());
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const Vec3 k = lattice.wavevector(i);
    const double phase = -(k[0] * yn[0] + k[1] * yn[1] + k[2] * yn[2]);
    c[i] = s / std::sqrt(w[i]) * norm * std::polar(1.0, phase);
  }
  LatticeField f = epsilon > 0 ? LatticeField(lattice, params, std::move(c), std::move(z), t0)
                               : LatticeField(lattice, params, std::move(z), std::move(c), t0);
  return {epsilon, yn, node, std::move(f)};
}

std::pair<CGrid, CGrid> wavefunction_f(const LatticeField& field) {
  const TwoComponent xi = map_Ua(field, 0.0);
  return {to_grid(xi.xi1, field.lattice()), to_grid(xi.xi2, field.lattice())};
}

std::pair<CGrid, CGrid> wavefunction_f_via(const LatticeField& field, double a) {
  const LatticeField psi_a = map_calU_a(field, a).with_params(field.params().with_a(a));
  const TwoComponent xi = map_Ua(psi_a, a);
  return {to_grid(xi.xi1, field.lattice()), to_grid(xi.xi2, field.lattice())};
}

RGrid rho_a_via_calU(const LatticeField& field) {
  const Lattice& L = field.lattice();
  const ModelParams& P = field.params();
  const double M = P.mass(), a = P.a();
  const double ap = 0.5 * (std::sqrt(1.0 + a) + std::sqrt(1.0 - a));
  const double am = 0.5 * (std::sqrt(1.0 + a) - std::sqrt(1.0 - a));
  const FieldSamples s = field.evaluate(field.t0());
  // psi'_a = a+ psi + i a- D^{-1/2} psidot,  psidot'_a = -i a- D^{1/2} psi + a+ psidot.
  const CGrid dpsi = apply_D_power(s.psi, 0.5, L, M);
  const CGrid ddot = apply_D_power(s.psidot, -0.5, L, M);
  CGrid u(L.size()), v(L.size());
  for (std::size_t i = 0; i < L.size(); ++i) {
    u[i] = ap * s.psi[i] + I * am * ddot[i];
    v[i] = -I * am * dpsi[i] + ap * s.psidot[i];
  }
  const CGrid A = apply_D_power(u, 0.25, L, M);
  const CGrid B = apply_D_power(v, -0.25, L, M);
  RGrid r(L.size());
  for (std::size_t i = 0; i < L.size(); ++i)
    r[i] = P.kappa() / (2.0 * M) * (std::norm(A[i]) + std::norm(B[i]));
  return r;
}

void check_region(const Region& region, const Lattice& lattice) {
  for (int ax = 0; ax < lattice.dim(); ++ax) {
    const double half = 0.5 * lattice.length(ax);
    if (!(region.lo[ax] < region.hi[ax])) throw PreconditionError("Region: lo must be below hi");
    if (region.lo[ax] < -half - 1e-12 || region.hi[ax] > half + 1e-12)
      throw PreconditionError("Region: box extends outside the periodic domain");
  }
}

double probability_region(const LatticeField& field, const Region& region, bool normalize) {
  const Lattice& L = field.lattice();
  check_region(region, L);
  const LatticeField psi0 = field.with_params(field.params().with_a(0.0));
  const double norm = inner_a(psi0, psi0, field.t0()).real();
  if (!normalize && std::abs(norm - 1.0) > 1e-10)
    throw PreconditionError("probability_region: field is not normalized (pass normalize to rescale)");
  if (!(norm > 0.0)) throw PreconditionError("probability_region: zero field");
  const auto f = wavefunction_f(field);
  double s = 0.0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    const Vec3 x = L.position(i);
    bool inside = true;
    for (int ax = 0; ax < L.dim(); ++ax)
      if (!(x[ax] >= region.lo[ax] && x[ax] < region.hi[ax])) inside = false;
    if (inside) s += std::norm(f.first[i]) + std::norm(f.second[i]);
  }
  return std::clamp(s * L.cell_volume() / norm, 0.0, 1.0);
}

} // namespace kgfield
