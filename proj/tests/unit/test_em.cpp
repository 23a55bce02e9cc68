#include <doctest.h>

#include <algorithm>

#include "kgfield/em.hpp"
#include "kgfield/inner_products.hpp"
#include "kgfield/random_fields.hpp"
#include "oracles.hpp"

using namespace kgfield;

namespace {
std::vector<double> free_spectrum(const Lattice& lat, double M, Vec3 shift = {0, 0, 0}) {
  oracle::Geometry G(lat);
  std::vector<double> ev;
  for (std::size_t m = 0; m < G.size(); ++m) {
    const auto k = G.k(m);
    ev.push_back((k[0] - shift[0]) * (k[0] - shift[0]) + (k[1] - shift[1]) * (k[1] - shift[1]) + M * M);
  }
  std::sort(ev.begin(), ev.end());
  return ev;
}
} // namespace

TEST_CASE("dense operator spectrum for zero and constant potentials") {
  const Lattice lat = Lattice::cube(2, 8.0, 12);
  const ModelParams P(1.2, 1.0, 0.0);
  const DenseOperator d0 = build_Dq(EMBackground::zero(lat, 1.0), P, 2);
  const auto ref0 = free_spectrum(lat, 1.2);
  for (std::size_t i = 0; i < ref0.size(); ++i) CHECK(d0.eigenvalues()[i] == doctest::Approx(ref0[i]).epsilon(1e-12));
  CHECK(d0.hermiticity_residual() < 1e-13);
  const double q = 0.7;
  const Vec3 A0{0.3, -0.2, 0};
  const DenseOperator dc = build_Dq(EMBackground::constant(lat, q, A0), P);
  const auto refc = free_spectrum(lat, 1.2, {q * A0[0], q * A0[1], 0});
  for (std::size_t i = 0; i < refc.size(); ++i) CHECK(dc.eigenvalues()[i] == doctest::Approx(refc[i]).epsilon(1e-11));
}

TEST_CASE("periodic magnetic field: positive spectrum and gauge covariance") {
  const Lattice lat = Lattice::cube(2, 8.0, 16);
  const ModelParams P(1.0, 1.0, 0.0);
  const EMBackground bg = EMBackground::periodic_field(lat, 1.0, 0.9);
  const DenseOperator d = build_Dq(bg, P);
  CHECK(d.eigenvalues().minCoeff() > 0);
  RGrid lambda(lat.size());
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const Vec3 x = lat.position(i);
    lambda[i] = 0.2 * std::cos(2 * oracle::pi * x[0] / 8.0) * std::sin(2 * oracle::pi * x[1] / 8.0);
  }
  const DenseOperator dg = build_Dq(bg.gauge_shifted(lambda), P);
  for (int i = 0; i < 20; ++i) CHECK(dg.eigenvalues()[i] == doctest::Approx(d.eigenvalues()[i]).epsilon(1e-8));
  // D^{1/2} D^{1/2} = D
  const Eigen::MatrixXcd h = d.function([](double x) { return std::sqrt(x); });
  CHECK((h * h - d.matrix()).cwiseAbs().maxCoeff() < 1e-10 * d.matrix().cwiseAbs().maxCoeff());
}

TEST_CASE("free background reproduces the lattice inner product and conserves it") {
  Rng rng(13);
  const Lattice lat = Lattice::cube(2, 8.0, 12);
  const ModelParams P(1.0, 0.8, 0.35);
  const LatticeField f = random_field(lat, P, rng);
  const DenseOperator d = build_Dq(EMBackground::zero(lat, 1.0), P);
  const FieldSamples s = f.evaluate(0.0);
  CHECK(oracle::rel(em_inner_a(d, P, s, s), inner_a(f, f, 0.0)) < 1e-12);
  const DenseOperator dp = build_Dq(EMBackground::periodic_field(lat, 1.0, 1.1), P);
  const cplx n0 = em_inner_and_evolve(s.psi, s.psidot, dp, P, 0.0).inner;
  CHECK(n0.real() > 0);
  for (double t : {0.5, 2.0, 7.0}) {
    const EMEvolution e = em_inner_and_evolve(s.psi, s.psidot, dp, P, t);
    CHECK(oracle::rel(e.inner, n0) < 1e-12);
    CHECK(oracle::rel(em_inner_a(dp, P, e.samples, e.samples), n0) < 1e-12);
  }
  // free evolution in the eigenbasis matches the spectral field
  const EMEvolution e = em_inner_and_evolve(s.psi, s.psidot, d, P, 1.3);
  CHECK(oracle::max_diff(e.samples.psi, f.evaluate(1.3).psi) < 1e-11);
}

TEST_CASE("background validation") {
  CHECK_THROWS_AS(EMBackground::zero(Lattice::cube(3, 4.0, 4), 1.0).validate(), PreconditionError);
  CHECK_THROWS_AS(EMBackground::zero(Lattice::cube(2, 4.0, 64), 1.0).validate(), PreconditionError);
  EMBackground bg = EMBackground::zero(Lattice::cube(2, 4.0, 8), 1.0);
  bg.phi[3] = 0.1;
  CHECK_THROWS_AS(bg.validate(), PreconditionError);
}

TEST_CASE("jets differentiate to second order") {
  const Jet x = Jet::variable(0.7, 1), t = Jet::variable(-0.4, 0);
  const Jet f = exp(sin(x) * t) / (Jet(2.0) + cos(x));
  auto val = [](double xx, double tt) { return std::exp(std::sin(xx) * tt) / (2.0 + std::cos(xx)); };
  const double h = 1e-3;
  CHECK(std::abs(f.v - val(0.7, -0.4)) < 1e-15);
  CHECK(std::abs(f.g[1] - oracle::central_diff([&](double s) { return val(s, -0.4); }, 0.7, h)) < 1e-10);
  CHECK(std::abs(f.g[0] - oracle::central_diff([&](double s) { return val(0.7, s); }, -0.4, h)) < 1e-10);
  const double dxt = oracle::central_diff(
      [&](double s) { return oracle::central_diff([&](double r) { return val(r, s); }, 0.7, h); }, -0.4, h);
  CHECK(std::abs(f.h[1][0] - dxt) < 1e-7);
  CHECK(std::abs(f.h[0][1] - f.h[1][0]) < 1e-15);
}

TEST_CASE("gauge transformation of the minimally coupled equation") {
  EMProfile p;
  p.q = 0.8;
  p.mass = 1.1;
  const double w = 0.9;
  p.phi = [=](const JetEvent& x) { return Jet(0.3) * cos(Jet(w) * x[0]) * sin(x[1]); };
  p.Phi = [=](const JetEvent& x) { return Jet(0.3 / w) * sin(Jet(w) * x[0]) * sin(x[1]); };
  p.A[0] = [](const JetEvent& x) { return Jet(0.2) * sin(x[2]); };
  p.A[1] = [](const JetEvent& x) { return Jet(-0.1) * cos(x[1]); };
  p.A[2] = [](const JetEvent&) { return Jet(0.0); };
  const JetFunction psi = [](const JetEvent& x) {
    return exp(Jet(cplx(0, -1.3)) * x[0] + Jet(cplx(0, 0.4)) * x[1] - Jet(0.1) * x[2] * x[2]);
  };
  std::vector<Event> ev{{0, 0, 0, 0}, {0.4, 1.0, -0.5, 0}, {1.3, -0.7, 0.9, 0}};
  const GaugeResidual r = em_gauge_residual(p, psi, ev);
  CHECK(r.transformed < 1e-13);
  CHECK(r.antiderivative < 1e-14);
  CHECK(r.untransformed > 1e-3);
}
