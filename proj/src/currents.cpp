#include "kgfield/currents.hpp"

#include <algorithm>
#include <cmath>

namespace kgfield {
namespace {

const cplx I(0.0, 1.0);

// Coefficient grids of the field and its charge-graded partner at time t.
struct Modes {
  CGrid psi, psidot, psiddot;
  CGrid psic, psicdot;
};

Modes modes_at(const LatticeField& f, double t) {
  const auto [p, m] = f.sector_coefficients_at(t);
  const auto& w = f.omega();
  const std::size_t n = p.size();
  Modes r{CGrid(n), CGrid(n), CGrid(n), CGrid(n), CGrid(n)};
  for (std::size_t i = 0; i < n; ++i) {
    r.psi[i] = p[i] + m[i];
    r.psidot[i] = -I * w[i] * (p[i] - m[i]);
    r.psiddot[i] = -w[i] * w[i] * (p[i] + m[i]);
    r.psic[i] = p[i] - m[i];
    r.psicdot[i] = -I * w[i] * (p[i] + m[i]);
  }
  return r;
}

CGrid combine(const CGrid& x, cplx s, const CGrid& y, cplx u) {
  CGrid r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = s * x[i] + u * y[i];
  return r;
}

CGrid scaled(CGrid c, const Lattice& L, double M, double alpha) {
  scale_D_power(c, L, M, alpha);
  return c;
}

// Sum over axes of the spectral derivative of component grids on the padded lattice.
CGrid spectral_divergence(const std::vector<CGrid>& comps, const Lattice& Lp) {
  CGrid total(Lp.size());
  for (int ax = 0; ax < Lp.dim(); ++ax) {
    const CGrid d = to_grid(derivative_coeffs(to_coeffs(comps[ax], Lp), Lp, ax), Lp);
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += d[i];
  }
  return total;
}

double max_component(const std::vector<CGrid>& comps) {
  double m = 0.0;
  for (const auto& c : comps) m = std::max(m, max_abs(c));
  return m;
}

struct CalJParts {
  Lattice Lp;
  CGrid A, B, P, C, Adot, Bdot;
  std::vector<CGrid> dP, dC;
};

CalJParts calj_parts(const LatticeField& f, double t) {
  const Lattice& L = f.lattice();
  const double M = f.params().mass();
  const Modes m = modes_at(f, t);
  CalJParts r{dealiasing_lattice(L), {}, {}, {}, {}, {}, {}, {}, {}};
  const CGrid a = scaled(m.psi, L, M, 0.25), b = scaled(m.psic, L, M, 0.25);
  const CGrid p = scaled(m.psi, L, M, -0.25), c = scaled(m.psic, L, M, -0.25);
  r.A = padded_grid(a, L);
  r.B = padded_grid(b, L);
  r.P = padded_grid(p, L);
  r.C = padded_grid(c, L);
  r.Adot = padded_grid(scaled(m.psidot, L, M, 0.25), L);
  r.Bdot = padded_grid(scaled(m.psicdot, L, M, 0.25), L);
  for (int ax = 0; ax < L.dim(); ++ax) {
    r.dP.push_back(padded_grid(derivative_coeffs(p, L, ax), L));
    r.dC.push_back(padded_grid(derivative_coeffs(c, L, ax), L));
  }
  return r;
}

RGrid clip_density(CGrid raw) {
  RGrid out(raw.size());
  double mx = 0.0;
  for (const auto& v : raw) mx = std::max(mx, v.real());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    double v = raw[i].real();
    if (v < 0.0) {
      if (v < -1e-14 * mx) throw NumericalError("rho_a: negative density beyond round-off");
      v = 0.0;
    }
    out[i] = v;
  }
  return out;
}

} // namespace

const char* to_string(CurrentKind kind) {
  switch (kind) {
    case CurrentKind::twisted_chiral: return "twisted_chiral";
    case CurrentKind::probability: return "probability";
    case CurrentKind::rosenstein_horwitz: return "rosenstein_horwitz";
  }
  return "unknown";
}

Lattice dealiasing_lattice(const Lattice& lattice) { return lattice.refined(2); }

CGrid padded_grid(const CGrid& coeffs, const Lattice& lattice) {
  const Lattice Lp = dealiasing_lattice(lattice);
  return to_grid(pad_coeffs(coeffs, lattice, Lp), Lp);
}

template <class T>
static std::vector<T> restrict_impl(const std::vector<T>& padded, const Lattice& L) {
  const Lattice Lp = dealiasing_lattice(L);
  if (padded.size() != Lp.size()) throw PreconditionError("restrict: grid is not on the dealiasing lattice");
  std::vector<T> out(L.size());
  for (std::size_t f = 0; f < L.size(); ++f) {
    auto idx = L.unflatten(f);
    for (int ax = 0; ax < L.dim(); ++ax) idx[ax] *= 2;
    out[f] = padded[Lp.flatten(idx)];
  }
  return out;
}

RGrid restrict_to_field_lattice(const RGrid& padded, const Lattice& lattice) {
  return restrict_impl(padded, lattice);
}
CGrid restrict_to_field_lattice(const CGrid& padded, const Lattice& lattice) {
  return restrict_impl(padded, lattice);
}

ComplexCurrent current_Ja(const LatticeField& field, double t) {
  const Lattice& L = field.lattice();
  const ModelParams& P = field.params();
  const double a = P.a();
  const cplx pref = I * P.kappa() / (2.0 * P.mass());
  const Modes m = modes_at(field, t);
  const CGrid tilde = combine(m.psic, 1.0, m.psi, a);
  const CGrid tildedot = combine(m.psicdot, 1.0, m.psidot, a);
  const CGrid psi = padded_grid(m.psi, L), psidot = padded_grid(m.psidot, L);
  const CGrid tg = padded_grid(tilde, L), tdg = padded_grid(tildedot, L);
  ComplexCurrent J{CurrentKind::twisted_chiral, t, dealiasing_lattice(L), {}};
  CGrid j0(psi.size());
  for (std::size_t i = 0; i < j0.size(); ++i)
    j0[i] = pref * (std::conj(psi[i]) * tdg[i] - std::conj(psidot[i]) * tg[i]);
  J.components.push_back(std::move(j0));
  for (int ax = 0; ax < L.dim(); ++ax) {
    const CGrid dpsi = padded_grid(derivative_coeffs(m.psi, L, ax), L);
    const CGrid dt = padded_grid(derivative_coeffs(tilde, L, ax), L);
    CGrid ji(psi.size());
    for (std::size_t i = 0; i < ji.size(); ++i)
      ji[i] = -pref * (std::conj(psi[i]) * dt[i] - std::conj(dpsi[i]) * tg[i]);
    J.components.push_back(std::move(ji));
  }
  return J;
}

CGrid current_Ja0_energy_form(const LatticeField& field, double t) {
  const Lattice& L = field.lattice();
  const ModelParams& P = field.params();
  const double M = P.mass();
  const Modes m = modes_at(field, t);
  const CGrid psi = padded_grid(m.psi, L), psidot = padded_grid(m.psidot, L);
  const CGrid dh = padded_grid(scaled(m.psi, L, M, 0.5), L);
  const CGrid ddot = padded_grid(scaled(m.psidot, L, M, -0.5), L);
  CGrid out(psi.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = P.kappa() / (2.0 * M) *
             (std::conj(psi[i]) * dh[i] + std::conj(psidot[i]) * ddot[i] +
              I * P.a() * (std::conj(psi[i]) * psidot[i] - std::conj(psidot[i]) * psi[i]));
  return out;
}

CGrid divergence_Ja(const LatticeField& field, double t) {
  const Lattice& L = field.lattice();
  const ModelParams& P = field.params();
  const double a = P.a();
  const cplx pref = I * P.kappa() / (2.0 * P.mass());
  const Modes m = modes_at(field, t);
  const auto& w = field.omega();
  CGrid tildeddot(m.psi.size());
  for (std::size_t i = 0; i < tildeddot.size(); ++i)
    tildeddot[i] = -w[i] * w[i] * (m.psic[i] + a * m.psi[i]);
  const CGrid tilde = combine(m.psic, 1.0, m.psi, a);
  const CGrid psi = padded_grid(m.psi, L), psiddot = padded_grid(m.psiddot, L);
  const CGrid tg = padded_grid(tilde, L), tddg = padded_grid(tildeddot, L);
  const ComplexCurrent J = current_Ja(field, t);
  std::vector<CGrid> spatial(J.components.begin() + 1, J.components.end());
  CGrid div = spectral_divergence(spatial, J.lattice);
  for (std::size_t i = 0; i < div.size(); ++i)
    div[i] += pref * (std::conj(psi[i]) * tddg[i] - std::conj(psiddot[i]) * tg[i]);
  return div;
}

RealCurrent current_calJa(const LatticeField& field, double t) {
  const ModelParams& P = field.params();
  const double a = P.a();
  const double pref = P.kappa() / (2.0 * P.mass());
  const CalJParts q = calj_parts(field, t);
  RealCurrent J{a == 0.0 ? CurrentKind::rosenstein_horwitz : CurrentKind::probability, t, q.Lp, {}};
  RGrid j0(q.A.size());
  for (std::size_t i = 0; i < j0.size(); ++i)
    j0[i] = pref * (std::norm(q.A[i]) + std::norm(q.B[i]) + 2.0 * a * (std::conj(q.A[i]) * q.B[i]).real());
  J.components.push_back(std::move(j0));
  for (int ax = 0; ax < field.lattice().dim(); ++ax) {
    RGrid ji(q.A.size());
    for (std::size_t i = 0; i < ji.size(); ++i) {
      const cplx z = std::conj(q.A[i]) * q.dC[ax][i] - q.B[i] * std::conj(q.dP[ax][i]) +
                     a * (std::conj(q.A[i]) * q.dP[ax][i] - q.B[i] * std::conj(q.dC[ax][i]));
      ji[i] = pref * z.imag();
    }
    J.components.push_back(std::move(ji));
  }
  return J;
}

RGrid current_calJa0_literal(const LatticeField& field, double t) {
  const Lattice& L = field.lattice();
  const ModelParams& P = field.params();
  const double M = P.mass(), a = P.a();
  const double pref = P.kappa() / (2.0 * M);
  const Modes m = modes_at(field, t);
  const CalJParts q = calj_parts(field, t);
  // d^0 = -d_0 on D^{-1/4} psi and D^{-1/4} psi_c.
  const CGrid uP = padded_grid(scaled(m.psidot, L, M, -0.25), L);
  const CGrid uC = padded_grid(scaled(m.psicdot, L, M, -0.25), L);
  RGrid out(q.A.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const cplx d0P = -uP[i], d0C = -uC[i];
    const cplx z = std::conj(q.A[i]) * d0C - q.B[i] * std::conj(d0P) +
                   a * (std::conj(q.A[i]) * d0P - q.B[i] * std::conj(d0C));
    out[i] = pref * z.imag();
  }
  return out;
}

RGrid divergence_calJa(const LatticeField& field, double t) {
  const ModelParams& P = field.params();
  const double a = P.a();
  const CalJParts q = calj_parts(field, t);
  const RealCurrent J = current_calJa(field, t);
  std::vector<CGrid> spatial;
  for (std::size_t c = 1; c < J.components.size(); ++c)
    spatial.emplace_back(J.components[c].begin(), J.components[c].end());
  const CGrid div = spectral_divergence(spatial, q.Lp);
  RGrid out(div.size());
  const double pref = P.kappa() / P.mass();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const cplx z = std::conj(q.A[i]) * q.Adot[i] + std::conj(q.B[i]) * q.Bdot[i] +
                   a * (std::conj(q.Adot[i]) * q.B[i] + std::conj(q.A[i]) * q.Bdot[i]);
    out[i] = div[i].real() + pref * z.real();
  }
  return out;
}

double continuity_residual(const LatticeField& field, double t, CurrentChoice which) {
  if (which == CurrentChoice::Ja) {
    const ComplexCurrent J = current_Ja(field, t);
    const double scale = max_component(J.components);
    if (scale == 0.0) return 0.0;
    return max_abs(divergence_Ja(field, t)) / scale;
  }
  const RealCurrent J = current_calJa(field, t);
  double scale = 0.0;
  for (const auto& c : J.components) scale = std::max(scale, max_abs(c));
  if (scale == 0.0) return 0.0;
  return max_abs(divergence_calJa(field, t)) / scale;
}

RGrid rho_a(const LatticeField& field, double t) {
  const Lattice& L = field.lattice();
  const ModelParams& P = field.params();
  const double M = P.mass(), a = P.a();
  const Modes m = modes_at(field, t);
  const CGrid A = to_grid(scaled(m.psi, L, M, 0.25), L);
  const CGrid B = to_grid(scaled(m.psic, L, M, 0.25), L);
  CGrid raw(A.size());
  const double pref = P.kappa() / (2.0 * M);
  for (std::size_t i = 0; i < raw.size(); ++i)
    raw[i] = pref * (std::norm(A[i]) + std::norm(B[i]) +
                     a * (std::conj(A[i]) * B[i] + A[i] * std::conj(B[i])).real());
  return clip_density(std::move(raw));
}

double total_probability(const LatticeField& field, double t) {
  const RGrid r = rho_a(field, t);
  double s = 0.0;
  for (double v : r) s += v;
  return s * field.lattice().cell_volume();
}

cplx total_Ja0(const LatticeField& field, double t) {
  const ComplexCurrent J = current_Ja(field, t);
  cplx s{};
  for (const auto& v : J.components[0]) s += v;
  return s * J.lattice.cell_volume();
}

std::pair<RealCurrent, RealCurrent> split_re_im(const LatticeField& field, double t) {
  const Lattice& L = field.lattice();
  const ModelParams& P = field.params();
  const double a = P.a();
  const double pref = P.kappa() / P.mass();
  const auto [p, m] = field.sector_coefficients_at(t);
  const auto& w = field.omega();
  const Lattice Lp = dealiasing_lattice(L);
  const CGrid gp = padded_grid(p, L), gm = padded_grid(m, L);
  RealCurrent re{CurrentKind::twisted_chiral, t, Lp, {}}, im{CurrentKind::twisted_chiral, t, Lp, {}};
  for (int mu = 0; mu <= L.dim(); ++mu) {
    CGrid up(p.size()), um(m.size());
    if (mu == 0) {
      for (std::size_t i = 0; i < p.size(); ++i) {
        up[i] = I * w[i] * p[i];
        um[i] = -I * w[i] * m[i];
      }
    } else {
      up = derivative_coeffs(p, L, mu - 1);
      um = derivative_coeffs(m, L, mu - 1);
    }
    const CGrid dp = padded_grid(up, L), dm = padded_grid(um, L);
    RGrid r(Lp.size()), s(Lp.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      const cplx pp = std::conj(gp[i]) * dp[i], mm = std::conj(gm[i]) * dm[i];
      const cplx pm = std::conj(gp[i]) * dm[i], mp = std::conj(gm[i]) * dp[i];
      r[i] = pref * ((1.0 + a) * pp - (1.0 - a) * mm + a * (pm + mp)).imag();
      s[i] = pref * (pm - mp).real();
    }
    re.components.push_back(std::move(r));
    im.components.push_back(std::move(s));
  }
  return {std::move(re), std::move(im)};
}

double TwoModeOracle::omega1() const {
  const double M = params.mass();
  return std::sqrt(k1[0] * k1[0] + k1[1] * k1[1] + k1[2] * k1[2] + M * M);
}

double TwoModeOracle::omega2() const {
  const double M = params.mass();
  return std::sqrt(k2[0] * k2[0] + k2[1] * k2[1] + k2[2] * k2[2] + M * M);
}

FourVector TwoModeOracle::kmu1() const { return {omega1(), k1[0], k1[1], k1[2]}; }
FourVector TwoModeOracle::kmu2() const { return {omega2(), k2[0], k2[1], k2[2]}; }

PlaneWaveField TwoModeOracle::field() const {
  return {params, dim, {{+1, k1, c1}, {+1, k2, c2}}};
}

TwoModeValues two_mode_oracle(const TwoModeOracle& o, double a, const Event& x) {
  if (o.c1 == cplx{} || o.c2 == cplx{}) throw PreconditionError("two_mode_oracle: coefficients must be nonzero");
  if (!(a > -1.0 && a < 1.0)) throw PreconditionError("two_mode_oracle: a must lie in (-1, 1)");
  const double M = o.params.mass(), kappa = o.params.kappa();
  const double w1 = o.omega1(), w2 = o.omega2();
  const FourVector q1 = o.kmu1(), q2 = o.kmu2();
  FourVector dq{};
  for (int mu = 0; mu < 4; ++mu) dq[mu] = q1[mu] - q2[mu];
  const cplx z = o.c1 * std::conj(o.c2) * std::polar(1.0, minkowski_dot(dq, x));
  const double n1 = std::norm(o.c1), n2 = std::norm(o.c2);
  TwoModeValues v{};
  for (int mu = 0; mu < 4; ++mu) {
    v.K[mu] = std::sqrt(w2 / w1) * q1[mu] + std::sqrt(w1 / w2) * q2[mu];
    v.calJ[mu] = (1.0 + a) * kappa / M * (n1 * q1[mu] + n2 * q2[mu] + z.real() * v.K[mu]);
    v.J[mu] = kappa * (1.0 + a) / M * (n1 * q1[mu] + n2 * q2[mu] + z.real() * (q1[mu] + q2[mu]));
  }
  v.Ksq = minkowski_dot(v.K, v.K);
  const double F = -kappa * (1.0 + a) / M * z.imag();
  v.div_calJ = (M * M + minkowski_dot(q1, q2)) * (std::sqrt(w1 / w2) - std::sqrt(w2 / w1)) * F;
  // (k1 - k2).(k1 + k2) = k1.k1 - k2.k2 = (-M^2) - (-M^2) on shell.
  v.div_J = ((-M * M) - (-M * M)) * F;
  return v;
}

NonCovariance noncovariance_demo(const TwoModeOracle& o, const Boost& boost) {
  if (std::abs(o.omega1() - o.omega2()) <= 1e-9)
    throw PreconditionError("noncovariance_demo: requires distinct mode frequencies");
  if (boost.mode() != Boost::Mode::exact) throw PreconditionError("noncovariance_demo: exact boost required");
  const Matrix4 L = boost.matrix();
  TwoModeOracle b = o;
  const FourVector p1 = lorentz_apply(L, o.kmu1()), p2 = lorentz_apply(L, o.kmu2());
  b.k1 = {p1[1], p1[2], p1[3]};
  b.k2 = {p2[1], p2[2], p2[3]};
  const Event origin{0.0, 0.0, 0.0, 0.0};
  NonCovariance r{};
  r.Ksq_before = two_mode_oracle(o, 0.0, origin).Ksq;
  r.Ksq_after = two_mode_oracle(b, 0.0, origin).Ksq;
  r.delta = std::abs(r.Ksq_after - r.Ksq_before);
  r.k1k2_before = minkowski_dot(o.kmu1(), o.kmu2());
  r.k1k2_after = minkowski_dot(b.kmu1(), b.kmu2());
  return r;
}

} // namespace kgfield
