#include <doctest.h>

#include "kgfield/currents.hpp"
#include "kgfield/gauge.hpp"
#include "kgfield/inner_products.hpp"
#include "kgfield/random_fields.hpp"
#include "oracles.hpp"

using namespace kgfield;

TEST_CASE("property: J_a is conserved on random lattice fields") {
  for (unsigned seed = 0; seed < 10; ++seed) {
    Rng rng(200 + seed);
    const ModelParams P(0.6 + 0.1 * seed, 1.0, -0.8 + 0.17 * seed);
    const LatticeField f = random_field(Lattice::cube(2, 6.0, 16), P, rng);
    CHECK(continuity_residual(f, 0.1 * seed, CurrentChoice::Ja) < 1e-10);
  }
}

TEST_CASE("total probability: density integral, J^0 integral and phase-space form agree") {
  for (unsigned seed = 0; seed < 10; ++seed) {
    Rng rng(300 + seed);
    const ModelParams P(1.1, 0.7, -0.5 + 0.1 * seed);
    const LatticeField f = random_field(Lattice::cube(1, 9.0, 64), P, rng);
    const double tp = total_probability(f, 0.4);
    CHECK(tp == doctest::Approx(inner_a(f, f, 0.0).real()).epsilon(1e-12));
    CHECK(std::abs(total_Ja0(f, 0.4) - tp) < 1e-12 * tp);
    CHECK(charge_phase_space(f, 0.4) == doctest::Approx(tp).epsilon(1e-10));
  }
}

TEST_CASE("rho_a of a positive-energy field at a = 0 is (kappa/M)|D^{1/4} psi|^2") {
  Rng rng(17);
  const Lattice lat = Lattice::cube(1, 8.0, 32);
  const ModelParams P(1.3, 0.9, 0.0);
  const LatticeField f = random_sector_field(lat, P, rng, +1);
  const CGrid d = oracle::d_power(f.evaluate(0.7).psi, lat, P.mass(), 0.25);
  const RGrid rho = rho_a(f, 0.7);
  double scale = 0;
  for (auto x : rho) scale = std::max(scale, x);
  for (std::size_t j = 0; j < lat.size(); ++j)
    CHECK(std::abs(rho[j] - P.kappa() / P.mass() * std::norm(d[j])) < 1e-11 * scale);
}

TEST_CASE("property: rho_a is nonnegative and equals the literal time component") {
  for (unsigned seed = 0; seed < 10; ++seed) {
    Rng rng(400 + seed);
    const ModelParams P(1.0, 1.0, -0.9 + 0.2 * seed);
    const LatticeField f = random_field(Lattice::cube(2, 5.0, 8), P, rng);
    const RGrid rho = rho_a(f, 0.2);
    for (auto x : rho) CHECK(x >= 0.0);
    const RGrid lit = restrict_to_field_lattice(current_calJa0_literal(f, 0.2), f.lattice());
    double m = 0;
    for (std::size_t j = 0; j < rho.size(); ++j) m = std::max(m, std::abs(rho[j] - lit[j]));
    CHECK(m < 1e-12 * (1 + max_abs(rho)));
  }
}

TEST_CASE("single plane waves carry kappa(1 +- a)/M |c|^2 k^mu") {
  const ModelParams P(1.0, 1.5, 0.3);
  const cplx c(0.6, -0.8);
  for (int eps : {+1, -1}) {
    const PlaneWaveField f(P, 2, {{eps, {0.4, -1.2, 0.0}, c}});
    const FourVector k = f.momentum(0);
    for (const Event& x : {Event{0, 0, 0, 0}, Event{1.5, 2.0, -1.0, 0.0}}) {
      const auto J = current_Ja_at(f, P.a(), x);
      for (int mu = 0; mu < 3; ++mu) {
        const double expect = P.kappa() * (1 + eps * P.a()) / P.mass() * std::norm(c) * eps * k[mu];
        CHECK(std::abs(J[mu] - expect) < 1e-13);
      }
      CHECK(J[0].real() > 0);
    }
  }
}

TEST_CASE("two-mode oracle agrees with the pointwise current evaluators") {
  TwoModeOracle o;
  o.k1 = {0.3, 0, 0};
  o.k2 = {-1.1, 0, 0};
  o.c1 = {0.8, 0.3};
  o.c2 = {-0.2, 0.9};
  o.params = ModelParams(1.2, 0.9, 0.0);
  const PlaneWaveField f = o.field();
  Rng rng(77);
  std::uniform_real_distribution<double> u(-4, 4);
  for (double a : {-0.6, 0.0, 0.5}) {
    for (int i = 0; i < 50; ++i) {
      const Event x{u(rng), u(rng), 0, 0};
      const TwoModeValues v = two_mode_oracle(o, a, x);
      const auto J = current_Ja_at(f, a, x);
      const FourVector C = current_calJa_at(f, a, x);
      for (int mu = 0; mu < 2; ++mu) {
        CHECK(std::abs(v.J[mu] - J[mu]) < 1e-12);
        CHECK(std::abs(v.calJ[mu] - C[mu]) < 1e-12);
      }
      CHECK(v.div_J == 0.0);
      CHECK(std::abs(v.div_calJ - divergence_calJa_at(f, a, x)) < 1e-10);
      CHECK(std::abs(divergence_Ja_at(f, a, x)) < 1e-12);
    }
  }
}

TEST_CASE("reference configuration: K^2 = -6.5 and it changes under a boost") {
  TwoModeOracle o;
  o.k2 = {std::sqrt(3.0), 0, 0};
  const NonCovariance nc = noncovariance_demo(o, Boost({0.5, 0, 0}));
  CHECK(nc.Ksq_before == doctest::Approx(-6.5).epsilon(1e-12));
  CHECK(std::abs(nc.Ksq_after - nc.Ksq_before) > 1e-3);
  // k1.k2 = -w1 w2 + k1 k2 = -1 * 2 in the rest frame of mode 1
  CHECK(nc.k1k2_before == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(nc.k1k2_after == doctest::Approx(nc.k1k2_before).epsilon(1e-12));
}

TEST_CASE("calJ is conserved when the two frequencies coincide") {
  TwoModeOracle o;
  o.dim = 2;
  o.k1 = {1.0, 0.0, 0};
  o.k2 = {0.0, 1.0, 0};
  o.c2 = {0.3, -0.4};
  const PlaneWaveField f = o.field();
  for (const Event& x : {Event{0.3, 0.2, -1.0, 0}, Event{2.0, 1.0, 1.0, 0}})
    CHECK(std::abs(divergence_calJa_at(f, 0.2, x)) < 1e-10);
}

TEST_CASE("J_a transforms as a four-vector, calJ_a does not") {
  TwoModeOracle o;
  o.k2 = {std::sqrt(3.0), 0, 0};
  const PlaneWaveField f = o.field();
  const Boost B({0.5, 0, 0});
  const PlaneWaveField g = boost_planewave(f, B);
  const Matrix4 L = B.matrix();
  double worst_calJ = 0;
  for (const Event& x : {Event{0.1, 0.3, 0, 0}, Event{1.0, -2.0, 0, 0}, Event{-0.7, 0.9, 0, 0}}) {
    const auto J = current_Ja_at(f, 0.2, x);
    const auto Jp = current_Ja_at(g, 0.2, boost_event(B, x));
    const FourVector C = current_calJa_at(f, 0.2, x), Cp = current_calJa_at(g, 0.2, boost_event(B, x));
    for (int mu = 0; mu < 4; ++mu) {
      cplx lj = 0;
      double lc = 0;
      for (int nu = 0; nu < 4; ++nu) lj += L[mu][nu] * J[nu], lc += L[mu][nu] * C[nu];
      CHECK(std::abs(Jp[mu] - lj) < 1e-10);
      worst_calJ = std::max(worst_calJ, std::abs(Cp[mu] - lc));
    }
  }
  CHECK(worst_calJ > 1e-3);
}

TEST_CASE("J_a is real for definite-charge and real fields, complex otherwise") {
  Rng rng(55);
  const Lattice lat = Lattice::cube(1, 8.0, 32);
  const ModelParams P(1.0, 1.0, 0.4);
  auto imag_max = [](const RealCurrent& im) {
    double m = 0;
    for (const auto& c : im.components) m = std::max(m, max_abs(c));
    return m;
  };
  CHECK(imag_max(split_re_im(random_sector_field(lat, P, rng, +1), 0.3).second) < 1e-13);
  const LatticeField r = random_real_field(lat, P, rng);
  CHECK(imag_max(split_re_im(r, 0.3).second) < 1e-13);
  const auto a0 = split_re_im(r.with_params(P.with_a(0.0)), 0.3).first;
  const auto a9 = split_re_im(r.with_params(P.with_a(0.9)), 0.3).first;
  for (std::size_t mu = 0; mu < a0.components.size(); ++mu)
    CHECK(max_abs_diff(a0.components[mu], a9.components[mu]) < 1e-12);
  CHECK(imag_max(split_re_im(random_field(lat, P, rng), 0.3).second) > 1e-6);
}

TEST_CASE("charge-grading gauge phases leave currents and norm invariant") {
  Rng rng(66);
  const LatticeField f = random_field(Lattice::cube(1, 8.0, 32), ModelParams(1.0, 1.0, 0.3), rng);
  const LatticeField g = gauge_transform(f, 0.77, 0.3);
  CHECK(max_abs_diff(rho_a(f, 0.5), rho_a(g, 0.5)) < 1e-12);
  CHECK(total_probability(g, 0.0) == doctest::Approx(total_probability(f, 0.0)).epsilon(1e-13));
}
