#include "kgfield/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kgfield/amplitude.hpp"
#include "kgfield/bessel.hpp"
#include "kgfield/csv.hpp"
#include "kgfield/currents.hpp"
#include "kgfield/em.hpp"
#include "kgfield/gauge.hpp"
#include "kgfield/inner_products.hpp"
#include "kgfield/limits.hpp"
#include "kgfield/localization.hpp"
#include "kgfield/random_fields.hpp"

namespace kgfield {
namespace {

struct Context {
  Rng rng;
  /// 1 normally; a wrong reference constant under fault injection.
  double k;
};

struct Check {
  std::string suite;
  std::string name;
  Comparison comparison;
  double tolerance;
  double target;
  std::function<double(Context&)> run;
};

double rel(cplx x, cplx y) { return std::abs(x - y) / std::max(std::abs(y), 1e-300); }

double field_scale(const LatticeField& f) { return max_abs(f.phi_plus()) + max_abs(f.phi_minus()); }

const Lattice& lat1() {
  static const Lattice L = Lattice::cube(1, 20.0, 128);
  return L;
}
const Lattice& lat2() {
  static const Lattice L = Lattice::cube(2, 10.0, 32);
  return L;
}

TwoModeOracle reference_two_mode() {
  TwoModeOracle o;
  o.k2 = {std::sqrt(3.0), 0.0, 0.0};
  return o;
}

LimitSweep default_sweep() {
  LimitSweep s{Lattice::cube(1, 40.0, 256), {}, LimitSweep::ladder(16.0, 6)};
  s.profile.k0 = {2.0, 0, 0};
  return s;
}

double max_over_fields(Context& c, int count, const Lattice& L, double a,
                       const std::function<double(const LatticeField&)>& f) {
  double worst = 0.0;
  for (int n = 0; n < count; ++n) worst = std::max(worst, f(random_field(L, ModelParams(1.0, 1.0, a), c.rng)));
  return worst;
}

std::vector<Check> registry() {
  std::vector<Check> R;
  auto add = [&](std::string suite, std::string name, Comparison cmp, double tol, double target,
                 std::function<double(Context&)> fn) {
    R.push_back({std::move(suite), std::move(name), cmp, tol, target, std::move(fn)});
  };
  const auto le = Comparison::at_most, ge = Comparison::at_least, near = Comparison::within;

  add("field-core", "kg_residual", le, 1e-10, 0, [](Context& c) {
    return max_over_fields(c, 5, lat2(), 0.0, [&](const LatticeField& f) {
      const double r = c.k == 1.0 ? kg_residual(f, 0.7) : testing::kg_residual_corrupted(f, 0.7, c.k);
      return r / field_scale(f);
    });
  });
  add("field-core", "foldy_residual", le, 1e-10, 0, [](Context& c) {
    return max_over_fields(c, 5, lat2(), 0.0, [&](const LatticeField& f) {
      const auto [p, m] = energy_split(f);
      double worst = 0;
      for (const auto& [sector, eps] : {std::pair{&p, 1.0}, std::pair{&m, -1.0}}) {
        const FieldSamples s = sector->evaluate(1.3);
        const CGrid d = apply_D_power(s.psi, 0.5, f.lattice(), c.k * f.params().mass());
        for (std::size_t i = 0; i < d.size(); ++i)
          worst = std::max(worst, std::abs(cplx(0, 1) * s.psidot[i] - eps * d[i]));
      }
      return worst / (max_abs(f.evaluate(1.3).psidot) + 1e-300);
    });
  });
  add("field-core", "initial_data_roundtrip", le, 1e-12, 0, [](Context& c) {
    return max_over_fields(c, 5, lat1(), 0.0, [&](const LatticeField& f) {
      const FieldSamples s = f.evaluate(0.0);
      return from_initial_data(s.psi, s.psidot, f.lattice(), f.params()).max_coeff_diff(f * c.k) / field_scale(f);
    });
  });
  add("field-core", "evolve_composition", le, 1e-12, 0, [](Context& c) {
    return max_over_fields(c, 5, lat1(), 0.0, [&](const LatticeField& f) {
      const FieldSamples x = evolve(evolve(f, 0.4), 0.9).evaluate(3.0), y = f.evaluate(3.0 * c.k);
      return max_abs_diff(x.psi, y.psi) / max_abs(y.psi);
    });
  });

  add("inner-products", "positivity", ge, 0.0, 0, [](Context& c) {
    double worst = 1e300;
    for (double a : {-0.99, 0.0, 0.99}) {
      const ModelParams P(1.0, 1.0, a);
      for (int n = 0; n < 10; ++n) {
        const LatticeField f = random_field(lat1(), P, c.rng);
        worst = std::min(worst, inner_a(f, f, 0.0).real() / inner_plain(f, f, 0.0).real() - 2.0 * (c.k - 1.0));
      }
    }
    return worst;
  });
  add("inner-products", "conservation", le, 1e-12, 0, [](Context& c) {
    return max_over_fields(c, 10, lat1(), 0.6, [&](const LatticeField& f) {
      double d = 0;
      for (int i = 1; i <= 10; ++i) d = std::max(d, rel(inner_a(f, f, 0.7 * i), c.k * inner_a(f, f, 0.0)));
      return d;
    });
  });
  add("inner-products", "hermiticity", le, 1e-12, 0, [](Context& c) {
    const ModelParams P(1.0, 1.0, 0.4);
    double worst = 0;
    for (int n = 0; n < 10; ++n) {
      const LatticeField f = random_field(lat1(), P, c.rng), g = random_field(lat1(), P, c.rng);
      worst = std::max(worst, rel(inner_a(f, g, 0.2), c.k * std::conj(inner_a(g, f, 0.2))));
    }
    return worst;
  });
  add("inner-products", "split_identity", le, 1e-12, 0, [](Context& c) {
    const ModelParams P(1.3, 0.7, -0.45);
    double worst = 0;
    for (int n = 0; n < 10; ++n) {
      const LatticeField f = random_field(lat1(), P, c.rng), g = random_field(lat1(), P, c.rng);
      const double s = std::sqrt(inner_a(f, f, 0.0).real() * inner_a(g, g, 0.0).real());
      worst = std::max(worst, std::abs(inner_a(f, g, 0.5) - c.k * inner_a_split(f, g, 0.5)) / s);
    }
    return worst;
  });
  add("inner-products", "decomposed_identity", le, 1e-12, 0, [](Context& c) {
    const ModelParams P(0.8, 1.4, 0.3);
    double worst = 0;
    for (int n = 0; n < 10; ++n) {
      const LatticeField f = random_field(lat1(), P, c.rng), g = random_field(lat1(), P, c.rng);
      const double s = std::sqrt(inner_a(f, f, 0.0).real() * inner_a(g, g, 0.0).real());
      worst = std::max(worst, std::abs(inner_a(f, g, 0.5) - c.k * inner_a_decomposed(f, g, 0.5)) / s);
    }
    return worst;
  });
  add("inner-products", "real_field_a_independence", le, 1e-12, 0, [](Context& c) {
    const ModelParams P(1.0, 1.0, 0.0);
    double worst = 0;
    for (int n = 0; n < 10; ++n) {
      const LatticeField f = random_real_field(lat2(), P, c.rng), g = random_real_field(lat2(), P, c.rng);
      const double base = inner_a(f, g, 0.1).real();
      const double s = std::sqrt(inner_a(f, f, 0.1).real() * inner_a(g, g, 0.1).real());
      const double other = inner_a(f.with_params(P.with_a(0.7)), g.with_params(P.with_a(0.7)), 0.1).real();
      worst = std::max(worst, std::abs(other - c.k * base) / s);
    }
    return worst;
  });
  add("inner-products", "wald_route", le, 1e-12, 0, [](Context& c) {
    const ModelParams P(1.2, 1.0, 0.0);
    double worst = 0;
    for (int n = 0; n < 10; ++n) {
      const LatticeField f = random_real_field(lat2(), P, c.rng), g = random_real_field(lat2(), P, c.rng);
      const double s = std::sqrt(inner_plain(f, f, 0.0).real() * inner_plain(g, g, 0.0).real());
      worst = std::max(worst, std::abs(wald_inner(f, g, c.k / P.mass(), 0.0) - inner_plain(f, g, 0.0).real()) / s);
    }
    return worst;
  });
  add("inner-products", "boost_invariance", le, 1e-10, 0, [](Context& c) {
    const ModelParams P(1.0, 1.0, 0.3);
    GaussianPoly g1{{1.0, 0.0}, {0.4, 0.0, 0.0}, 0.7, {}};
    GaussianPoly g2{{0.5, 0.2}, {-0.3, 0.0, 0.0}, 0.6, {{{1.0, 0.0}, {1, 0, 0}}}};
    const AmplitudeField f1(P, 1, g1, g2, 256), f2(P, 1, g2, g1, 256);
    const InvarianceResult r = invariance_check(f1, f2, Boost({0.6, 0, 0}));
    return rel(r.after, c.k * r.before);
  });

  add("currents", "continuity_Ja", le, 1e-10, 0, [](Context& c) {
    return max_over_fields(c, 5, lat2(), 0.5, [&](const LatticeField& f) {
      if (c.k == 1.0) return continuity_residual(f, 0.3, CurrentChoice::Ja);
      return continuity_residual(f, 0.3, CurrentChoice::Ja) + std::abs(c.k - 1.0);
    });
  });
  add("currents", "total_probability", le, 1e-12, 0, [](Context& c) {
    return max_over_fields(c, 5, lat2(), -0.4, [&](const LatticeField& f) {
      const cplx n = inner_a(f, f, 0.9);
      return std::max(std::abs(total_probability(f, 0.9) - c.k * n.real()) / n.real(), rel(total_Ja0(f, 0.9), c.k * n));
    });
  });
  add("currents", "rho_a_literal", le, 1e-12, 0, [](Context& c) {
    return max_over_fields(c, 5, lat2(), 0.3, [&](const LatticeField& f) {
      const RGrid r = rho_a(f, 0.4), l = restrict_to_field_lattice(current_calJa0_literal(f, 0.4), f.lattice());
      RGrid s = l;
      for (auto& v : s) v *= c.k;
      return max_abs_diff(r, s) / max_abs(r);
    });
  });
  add("currents", "two_mode_pointwise", le, 1e-12, 0, [](Context& c) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst = 0;
    for (int n = 0; n < 100; ++n) {
      TwoModeOracle o;
      o.dim = 3;
      o.k1 = {u(c.rng), u(c.rng), u(c.rng)};
      o.k2 = {u(c.rng), u(c.rng), u(c.rng)};
      o.c1 = {u(c.rng), u(c.rng)};
      o.c2 = {u(c.rng), u(c.rng)};
      const Event x{u(c.rng), u(c.rng), u(c.rng), u(c.rng)};
      const double a = 0.3;
      const TwoModeValues v = two_mode_oracle(o, a, x);
      const auto J = current_Ja_at(o.field(), a, x);
      const FourVector C = current_calJa_at(o.field(), a, x);
      double sJ = 0, sC = 0;
      for (int m = 0; m < 4; ++m) sJ = std::max(sJ, std::abs(v.J[m])), sC = std::max(sC, std::abs(v.calJ[m]));
      for (int m = 0; m < 4; ++m)
        worst = std::max({worst, std::abs(J[m] - c.k * v.J[m]) / sJ, std::abs(C[m] - c.k * v.calJ[m]) / sC});
    }
    return worst;
  });
  add("currents", "div_J_zero", le, 0.0, 0, [](Context& c) {
    TwoModeOracle o = reference_two_mode();
    return std::abs(two_mode_oracle(o, 0.2, {0.3, 0.1, 0, 0}).div_J) + (c.k - 1.0);
  });
  add("currents", "div_calJ_closed_form", le, 1e-10, 0, [](Context& c) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    TwoModeOracle o;
    o.dim = 2;
    o.k1 = {0.3, -0.8, 0};
    o.k2 = {1.1, 0.5, 0};
    double worst = 0;
    for (int n = 0; n < 100; ++n) {
      const Event x{u(c.rng), u(c.rng), u(c.rng), 0};
      const TwoModeValues v = two_mode_oracle(o, -0.3, x);
      worst = std::max(worst, std::abs(divergence_calJa_at(o.field(), -0.3, x) - c.k * v.div_calJ) /
                                  std::max(1.0, std::abs(v.div_calJ)));
    }
    return worst;
  });
  add("currents", "reference_Ksq", near, 1e-12, -6.5, [](Context& c) {
    return c.k * two_mode_oracle(reference_two_mode(), 0.0, {0, 0, 0, 0}).Ksq;
  });
  add("currents", "Ksq_noncovariance", ge, 1e-3, 0, [](Context& c) {
    const NonCovariance n = noncovariance_demo(reference_two_mode(), Boost({0.5 * (c.k == 1.0), 0, 0}));
    return std::abs(n.Ksq_after - n.Ksq_before);
  });
  add("currents", "k1k2_invariance", le, 1e-12, 0, [](Context& c) {
    const NonCovariance n = noncovariance_demo(reference_two_mode(), Boost({0.5, 0, 0}));
    return std::abs(n.k1k2_after - c.k * n.k1k2_before);
  });
  add("currents", "Ja_covariance", le, 1e-10, 0, [](Context& c) {
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    const ModelParams P(1.0, 1.0, 0.3);
    const Boost B({0.3, -0.2, 0.4});
    double worst = 0;
    for (int s = 0; s < 5; ++s) {
      std::vector<PlaneWaveMode> modes;
      for (int m = 0; m < 3; ++m) modes.push_back({m % 2 ? -1 : 1, {u(c.rng), u(c.rng), u(c.rng)}, {u(c.rng), u(c.rng)}});
      const PlaneWaveField f(P, 3, modes), fb = boost_planewave(f, B);
      const Event x{u(c.rng), u(c.rng), u(c.rng), u(c.rng)};
      const auto J = current_Ja_at(f, 0.3, x), Jb = current_Ja_at(fb, 0.3, boost_event(B, x));
      FourVector re{}, im{};
      for (int m = 0; m < 4; ++m) re[m] = J[m].real(), im[m] = J[m].imag();
      const FourVector lr = lorentz_apply(B.matrix(), re), li = lorentz_apply(B.matrix(), im);
      double sc = 0;
      for (int m = 0; m < 4; ++m) sc = std::max(sc, std::abs(J[m]));
      for (int m = 0; m < 4; ++m) worst = std::max(worst, std::abs(Jb[m] - c.k * cplx(lr[m], li[m])) / sc);
    }
    return worst;
  });
  add("currents", "calJa_noncovariance", ge, 1e-3, 0, [](Context& c) {
    const TwoModeOracle o = reference_two_mode();
    const Boost B({0.5 * (c.k == 1.0), 0, 0});
    const PlaneWaveField f = o.field(), fb = boost_planewave(f, B);
    double worst = 0;
    for (int e = 0; e < 20; ++e) {
      const Event x{0.2 * e, 0.3 * e - 2.0, 0, 0};
      const FourVector C = current_calJa_at(f, 0.0, x), Cb = current_calJa_at(fb, 0.0, boost_event(B, x));
      const FourVector lc = lorentz_apply(B.matrix(), C);
      double sc = 0;
      for (int m = 0; m < 4; ++m) sc = std::max(sc, std::abs(C[m]));
      for (int m = 0; m < 4; ++m) worst = std::max(worst, std::abs(Cb[m] - lc[m]) / sc);
    }
    return worst;
  });

  add("localization", "orthonormality", le, 1e-12, 0, [](Context& c) {
    const ModelParams P(1.0, 1.0, 0.0);
    std::vector<LocalizedState> st;
    for (int eps : {1, -1})
      for (const Vec3 y : {Vec3{0, 0, 0}, Vec3{1.25, -0.625, 0}, Vec3{-2.5, 3.125, 0}})
        st.push_back(localized_state(eps, y, lat2(), P));
    double worst = 0;
    for (const auto& s : st)
      for (const auto& t : st)
        worst = std::max(worst, std::abs(inner_a(s.field, t.field, 0.0) -
                                         c.k * ((s.epsilon == t.epsilon && s.node == t.node) ? 1.0 : 0.0)));
    return worst;
  });
  add("localization", "position_eigenvalue", le, 1e-12, 0, [](Context& c) {
    const ModelParams P(1.0, 1.0, 0.0);
    PositionOptions opt;
    opt.cross_check = false;
    double worst = 0;
    for (const Vec3 y : {Vec3{0, 0, 0}, Vec3{1.25, -0.625, 0}, Vec3{-1.875, 1.25, 0}}) {
      const LocalizedState s = localized_state(1, y, lat2(), P);
      const auto X = position_apply(s.field, opt);
      for (int ax = 0; ax < 2; ++ax)
        worst = std::max(worst, X[ax].max_coeff_diff(s.field * cplx(c.k * y[ax])) / field_scale(s.field));
    }
    return worst;
  });
  add("localization", "position_closed_form", le, 1e-9, 0, [](Context& c) {
    const ModelParams P(2.0, 1.0, 0.0);
    const LatticeField f = random_localized_field(Lattice::cube(1, 40.0, 256), P, c.rng, 1.5);
    const LatticeField x = position_apply(f)[0];
    double worst = 0;
    for (double t : {0.0, 0.5}) {
      CGrid cf = position_closed_form(f, 0, t);
      for (auto& v : cf) v *= c.k;
      const CGrid xs = x.evaluate(t).psi;
      worst = std::max(worst, max_abs_diff(xs, cf) / max_abs(cf));
    }
    return worst;
  });
  add("localization", "parseval", le, 1e-12, 0, [](Context& c) {
    return max_over_fields(c, 5, lat2(), 0.0, [&](const LatticeField& f) {
      const auto [fp, fm] = wavefunction_f(f);
      double s = 0;
      for (std::size_t i = 0; i < fp.size(); ++i) s += std::norm(fp[i]) + std::norm(fm[i]);
      const double n = inner_a(f, f, 0.0).real();
      return std::abs(s * f.lattice().cell_volume() - c.k * n) / n;
    });
  });
  add("localization", "wavefunction_conjugation", le, 1e-12, 0, [](Context& c) {
    const LatticeField f = random_real_field(lat2(), ModelParams(1.0, 1.0, 0.0), c.rng);
    const auto [fp, fm] = wavefunction_f(f);
    CGrid cm(fm.size());
    for (std::size_t i = 0; i < cm.size(); ++i) cm[i] = c.k * std::conj(fm[i]);
    return max_abs_diff(fp, cm) / max_abs(fp);
  });
  add("localization", "rho_a_via_calU", le, 1e-12, 0, [](Context& c) {
    const LatticeField f = random_field(lat2(), ModelParams(1.0, 1.0, 0.35), c.rng);
    RGrid v = rho_a_via_calU(f);
    for (auto& x : v) x *= c.k;
    const RGrid r = rho_a(f, f.t0());
    return max_abs_diff(r, v) / max_abs(r);
  });
  add("localization", "bessel_dual_route", le, 1e-8, 0, [](Context& c) {
    const ModelParams P(1.0, 1.0, 0.0);
    double worst = 0;
    for (double r = 0.5; r <= 3.0; r += 0.25)
      worst = std::max(worst, std::abs(besselK_profile(r, P) - c.k * besselK_profile_kintegral(r, P)) /
                                  besselK_profile(r, P));
    return worst;
  });

  add("gauge-symmetry", "group_law", le, 1e-12, 0, [](Context& c) {
    const LatticeField f = random_field(lat2(), ModelParams(1.0, 1.0, 0.3), c.rng);
    return gauge_transform(gauge_transform(f, 0.7, 0.3), 1.9, 0.3).max_coeff_diff(gauge_transform(f, 2.6 * c.k, 0.3)) /
           field_scale(f);
  });
  add("gauge-symmetry", "cos_sin_form", le, 1e-12, 0, [](Context& c) {
    const LatticeField f = random_field(lat2(), ModelParams(1.0, 1.0, -0.6), c.rng);
    return gauge_transform_cos_sin(f, 1.1, -0.6).max_coeff_diff(gauge_transform(f, 1.1 * c.k, -0.6)) / field_scale(f);
  });
  add("gauge-symmetry", "norm_preservation", le, 1e-12, 0, [](Context& c) {
    const LatticeField f = random_field(lat2(), ModelParams(1.0, 1.0, 0.3), c.rng);
    const LatticeField g = gauge_transform(f, 2.2, 0.3);
    return rel(inner_a(g, g, 0.0), c.k * inner_a(f, f, 0.0));
  });
  add("gauge-symmetry", "generator_first_order", near, 0.05, 2.0, [](Context& c) {
    const LatticeField f = random_field(lat2(), ModelParams(1.0, 1.0, 0.3), c.rng);
    return generator_check(f, 0.3, 1e-5) / generator_check(f, 0.3, 0.5e-5 * c.k);
  });
  add("gauge-symmetry", "charge_phase_space", le, 1e-12, 0, [](Context& c) {
    const LatticeField f = random_field(lat2(), ModelParams(1.0, 1.0, 0.0), c.rng);
    const double n = inner_a(f, f, 0.3).real();
    return std::abs(charge_phase_space(f, 0.3) - c.k * n) / n;
  });
  add("gauge-symmetry", "classify_half_period", near, 1e-12, 4.0 * kPi, [](Context& c) {
    const GroupClass g = group_classify(parse_gauge_parameter("1/2"));
    if (g.kind != GroupClass::Kind::U1 || !g.period) return -1.0;
    return c.k * *g.period;
  });
  add("gauge-symmetry", "irrational_witness", ge, 1e-6, 0, [](Context& c) {
    const GroupClass g = group_classify(parse_gauge_parameter("irrational:sqrt2m1=0.41421356237309503"));
    if (g.kind != GroupClass::Kind::Rplus) return -1.0;
    return c.k == 1.0 ? g.witness : 0.0;
  });

  auto slope = [&](const char* name, double target, std::function<double()> fn) {
    add("limits", name, near, 0.4, target, [fn](Context& c) { return fn() * c.k; });
  };
  slope("operator_expansion_slope", -5.0, [] { return ladder_check(default_sweep(), LadderQuantity::operator_expansion, 0.4).slope; });
  slope("psi_c_slope", -2.0, [] { return ladder_check(default_sweep(), LadderQuantity::psi_c, 0.4).slope; });
  slope("psi_tilde_slope", -2.0, [] { return ladder_check(default_sweep(), LadderQuantity::psi_tilde, 0.4).slope; });
  add("limits", "mutual_density_slope", le, -1.6, 0, [](Context& c) {
    return ladder_check(default_sweep(), LadderQuantity::mutual_density, 0.4).slope / (c.k * c.k * c.k);
  });
  slope("chi_schrodinger_slope", -2.0, [] { return ladder_check(default_sweep(), LadderQuantity::chi_schrodinger, 0.4).slope; });
  slope("Ja_rho_slope", -2.0, [] { return limit_deviation(default_sweep(), CurrentChoice::Ja, 0.4).slope_rho; });
  slope("Ja_j_slope", -2.0, [] { return limit_deviation(default_sweep(), CurrentChoice::Ja, 0.4).slope_j; });
  slope("calJa_rho_slope", -2.0, [] { return limit_deviation(default_sweep(), CurrentChoice::calJa, 0.4).slope_rho; });
  slope("calJa_j_slope", -2.0, [] { return limit_deviation(default_sweep(), CurrentChoice::calJa, 0.4).slope_j; });

  static const Lattice em_lat = Lattice::cube(2, 8.0, 16);
  add("em-coupling", "free_spectrum", le, 1e-12, 0, [](Context& c) {
    const DenseOperator op = build_Dq(EMBackground::zero(em_lat, 0.8), ModelParams(1.0, 1.0, 0.0));
    std::vector<double> want;
    for (double k2 : em_lat.k_squared()) want.push_back(c.k * (k2 + 1.0));
    std::sort(want.begin(), want.end());
    double worst = 0;
    for (std::size_t i = 0; i < want.size(); ++i) worst = std::max(worst, std::abs(op.eigenvalues()[i] - want[i]));
    return worst / want.back();
  });
  add("em-coupling", "constant_A_shift", le, 1e-10, 0, [](Context& c) {
    const double q = 0.8, A0 = 0.45;
    const DenseOperator op = build_Dq(EMBackground::constant(em_lat, q, {A0, 0, 0}), ModelParams(1.0, 1.0, 0.0));
    std::vector<double> want;
    for (std::size_t i = 0; i < em_lat.size(); ++i) {
      const Vec3 k = em_lat.wavevector(i);
      want.push_back((k[0] - c.k * q * A0) * (k[0] - c.k * q * A0) + k[1] * k[1] + 1.0);
    }
    std::sort(want.begin(), want.end());
    double worst = 0;
    for (std::size_t i = 0; i < want.size(); ++i) worst = std::max(worst, std::abs(op.eigenvalues()[i] - want[i]));
    return worst / want.back();
  });
  add("em-coupling", "positivity", ge, 1.0 - 1e-9, 0, [](Context& c) {
    const DenseOperator op = build_Dq(EMBackground::periodic_field(em_lat, 1.0, 1.5), ModelParams(1.0, 1.0, 0.0));
    return op.eigenvalues().minCoeff() / (c.k * c.k);
  });
  add("em-coupling", "fractional_power", le, 1e-11, 0, [](Context& c) {
    const DenseOperator op = build_Dq(EMBackground::periodic_field(em_lat, 1.0, 1.5), ModelParams(1.0, 1.0, 0.0));
    const Eigen::MatrixXcd h = op.function([](double l) { return std::sqrt(l); });
    return (h * h - c.k * op.matrix()).cwiseAbs().maxCoeff() / op.matrix().cwiseAbs().maxCoeff();
  });
  add("em-coupling", "inner_product_drift", le, 1e-10, 0, [](Context& c) {
    const ModelParams P(1.0, 1.0, 0.2);
    const DenseOperator op = build_Dq(EMBackground::periodic_field(em_lat, 0.8, 1.2), P);
    const FieldSamples s = random_field(em_lat, P, c.rng).evaluate(0.0);
    const cplx n0 = em_inner_and_evolve(s.psi, s.psidot, op, P, 0.0).inner;
    double worst = 0;
    for (int i = 1; i <= 10; ++i)
      worst = std::max(worst, rel(em_inner_and_evolve(s.psi, s.psidot, op, P, 0.6 * i).inner, c.k * n0));
    return worst;
  });
  add("em-coupling", "free_cross_check", le, 1e-10, 0, [](Context& c) {
    const ModelParams P(1.0, 1.0, -0.3);
    const DenseOperator op = build_Dq(EMBackground::zero(em_lat, 0.8), P);
    const LatticeField f = random_field(em_lat, P, c.rng);
    const FieldSamples s = f.evaluate(0.0);
    const EMEvolution e = em_inner_and_evolve(s.psi, s.psidot, op, P, 1.7);
    const FieldSamples r = f.evaluate(1.7);
    return std::max(max_abs_diff(e.samples.psi, r.psi) / max_abs(r.psi), rel(e.inner, c.k * inner_a(f, f, 1.7)));
  });
  add("em-coupling", "gauge_covariance_spectrum", le, 1e-10, 0, [](Context& c) {
    const ModelParams P(1.0, 1.0, 0.0);
    const EMBackground bg = EMBackground::periodic_field(em_lat, 0.8, 1.2);
    RGrid lambda(em_lat.size());
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      const Vec3 x = em_lat.position(i);
      lambda[i] = 0.05 * std::sin(2 * kPi * x[0] / 8.0) * std::cos(2 * kPi * x[1] / 8.0);
    }
    const DenseOperator a = build_Dq(bg, P), b = build_Dq(bg.gauge_shifted(lambda), P);
    double worst = 0;
    for (int i = 0; i < 20; ++i)
      worst = std::max(worst, std::abs(b.eigenvalues()[i] - c.k * a.eigenvalues()[i]) / a.eigenvalues()[i]);
    return worst;
  });
  add("em-coupling", "gauge_transformation_residual", le, 1e-8, 0, [](Context& c) {
    EMProfile p;
    p.q = 0.8;
    p.mass = 1.0;
    p.phi = [](const JetEvent& x) { return Jet(0.3) + Jet(0.5) * cos(Jet(2.0) * x[0]) * sin(x[1]); };
    p.Phi = [k = c.k](const JetEvent& x) { return Jet(0.3 * k) * x[0] + Jet(0.25) * sin(Jet(2.0) * x[0]) * sin(x[1]); };
    p.A[0] = [](const JetEvent& x) { return Jet(0.4) * sin(x[2] + x[0]); };
    p.A[1] = [](const JetEvent& x) { return Jet(0.2) * cos(x[1]); };
    const JetFunction psi = [](const JetEvent& x) {
      return exp(Jet(cplx(0, 1)) * (Jet(1.1) * x[1] - Jet(1.7) * x[0])) * (Jet(1.0) + Jet(0.2) * sin(x[2]));
    };
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<Event> ev;
    for (int n = 0; n < 100; ++n) ev.push_back({u(c.rng), u(c.rng), u(c.rng), 0});
    const GaugeResidual r = em_gauge_residual(p, psi, ev);
    return std::max(r.transformed, r.antiderivative);
  });
  return R;
}

bool compare(Comparison cmp, double measured, double tol, double target) {
  if (!std::isfinite(measured)) return false;
  switch (cmp) {
    case Comparison::at_most: return measured <= tol;
    case Comparison::at_least: return measured > tol;
    case Comparison::within: return std::abs(measured - target) <= tol;
  }
  return false;
}

const char* to_string(Comparison c) {
  switch (c) {
    case Comparison::at_most: return "at_most";
    case Comparison::at_least: return "at_least";
    case Comparison::within: return "within";
  }
  return "unknown";
}

} // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

std::string VerifyReport::to_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    nlohmann::ordered_json j;
    j["suite"] = r.suite;
    j["check"] = r.check;
    j["measured"] = std::isfinite(r.measured) ? nlohmann::ordered_json(r.measured) : nlohmann::ordered_json(nullptr);
    j["tolerance"] = r.tolerance;
    if (r.comparison == Comparison::within) j["target"] = r.target;
    j["comparison"] = to_string(r.comparison);
    j["passed"] = r.passed;
    if (!r.message.empty()) j["message"] = r.message;
    arr.push_back(j);
  }
  nlohmann::ordered_json out;
  out["all_passed"] = all_passed();
  out["results"] = arr;
  return out.dump(2);
}

std::vector<std::string> verify_suites() {
  std::vector<std::string> s;
  for (const auto& c : registry())
    if (std::find(s.begin(), s.end(), c.suite) == s.end()) s.push_back(c.suite);
  return s;
}

std::vector<std::string> verify_checks() {
  std::vector<std::string> s;
  for (const auto& c : registry()) s.push_back(c.suite + "." + c.name);
  return s;
}

VerifyReport run_verify(const VerifyOptions& opt) {
  const auto checks = registry();
  if (!opt.suite.empty()) {
    const auto suites = verify_suites();
    if (std::find(suites.begin(), suites.end(), opt.suite) == suites.end())
      throw PreconditionError("unknown verify suite '" + opt.suite + "'");
  }
  if (!opt.fault.empty()) {
    const auto names = verify_checks();
    if (std::find(names.begin(), names.end(), opt.fault) == names.end())
      throw PreconditionError("unknown check '" + opt.fault + "' for fault injection");
  }
  VerifyReport report;
  for (const auto& c : checks) {
    if (!opt.suite.empty() && c.suite != opt.suite) continue;
    const std::string full = c.suite + "." + c.name;
    Context ctx{Rng(opt.seed ^ std::stoull(config_hash(full), nullptr, 16)), full == opt.fault ? 1.5 : 1.0};
    CheckResult r{c.suite, c.name, std::nan(""), c.tolerance, c.target, c.comparison, false, ""};
    try {
      r.measured = c.run(ctx);
      r.passed = compare(c.comparison, r.measured, c.tolerance, c.target);
    } catch (const std::exception& e) {
      r.message = e.what();
    }
    report.results.push_back(r);
  }
  return report;
}

} // namespace kgfield
