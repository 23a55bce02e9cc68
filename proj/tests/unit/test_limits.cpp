#include <doctest.h>

#include "kgfield/limits.hpp"
#include "oracles.hpp"

using namespace kgfield;

namespace {
LimitSweep sweep() {
  LimitSweep s{Lattice::cube(1, 40.0, 256), {}, LimitSweep::ladder(16.0, 6)};
  s.profile.k0 = {2.0, 0, 0};
  s.profile.sigma = 1.0;
  return s;
}
} // namespace

TEST_CASE("log-log slope fit and ladder") {
  const std::vector<double> x{1, 2, 4, 8};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -2.5));
  CHECK(fit_loglog_slope(x, y) == doctest::Approx(-2.5).epsilon(1e-12));
  CHECK(LimitSweep::ladder(3.0, 4) == std::vector<double>{3, 6, 12, 24});
  CHECK(limit_params(5.0, 0.25).kappa() == doctest::Approx(0.8));
}

TEST_CASE("Schrodinger reference of a single mode: rho = |c|^2, j = k|c|^2/M") {
  const Lattice lat = Lattice::cube(1, 2 * oracle::pi, 16);
  const ModelParams P(3.0, 1.0, 0.0);
  const LatticeField f = plane_mode(lat, P, 2, +1, {0.6, 0.8});
  const SchrodingerReference r = schrodinger_reference(f, 0.4);
  for (double v : r.rho) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
  for (double v : r.j[0]) CHECK(v == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("nonrelativistic limit: currents approach the Schrodinger currents as M^-2") {
  const LimitSweep s = sweep();
  for (CurrentChoice which : {CurrentChoice::Ja, CurrentChoice::calJa}) {
    const LimitTable t = limit_deviation(s, which, 0.2);
    CHECK(t.slope_rho == doctest::Approx(-2.0).epsilon(0.1));
    CHECK(t.slope_j == doctest::Approx(-2.0).epsilon(0.1));
    for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(t.rows[i].rel_dev_j < t.rows[i - 1].rel_dev_j);
  }
}

TEST_CASE("ladder checks reproduce the expected orders") {
  const LimitSweep s = sweep();
  CHECK(ladder_check(s, LadderQuantity::operator_expansion, 0.0).slope == doctest::Approx(-5.0).epsilon(0.08));
  CHECK(ladder_check(s, LadderQuantity::psi_c, 0.0).slope == doctest::Approx(-2.0).epsilon(0.1));
  CHECK(ladder_check(s, LadderQuantity::psi_tilde, 0.3).slope == doctest::Approx(-2.0).epsilon(0.1));
  CHECK(ladder_check(s, LadderQuantity::chi_schrodinger, 0.0).slope == doctest::Approx(-2.0).epsilon(0.1));
  CHECK(ladder_check(s, LadderQuantity::mutual_density, 0.0).slope < -1.6);
}

TEST_CASE("limit sweeps reject short or unordered ladders") {
  LimitSweep s = sweep();
  s.masses = {16, 32, 64};
  CHECK_THROWS_AS(limit_deviation(s, CurrentChoice::Ja, 0.0), PreconditionError);
  s.masses = {16, 64, 32, 128};
  CHECK_THROWS_AS(limit_deviation(s, CurrentChoice::Ja, 0.0), PreconditionError);
}
