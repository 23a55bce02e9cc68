#include <doctest.h>

#include "kgfield/gauge.hpp"
#include "kgfield/inner_products.hpp"
#include "kgfield/random_fields.hpp"
#include "oracles.hpp"

using namespace kgfield;

TEST_CASE("gauge transformations form a one-parameter group") {
  Rng rng(91);
  const LatticeField f = random_field(Lattice::cube(1, 8.0, 32), ModelParams(1.0, 1.0, 0.3), rng);
  for (double a : {-0.5, 0.3}) {
    for (auto [t1, t2] : {std::pair{0.4, 1.1}, std::pair{-2.0, 5.0}}) {
      const LatticeField lhs = gauge_transform(gauge_transform(f, t1, a), t2, a);
      CHECK(lhs.max_coeff_diff(gauge_transform(f, t1 + t2, a)) < 1e-13);
      CHECK(gauge_transform_cos_sin(f, t1, a).max_coeff_diff(gauge_transform(f, t1, a)) < 1e-13);
      const GaugeElement g{t1, a};
      const auto d = g.diagonal();
      CHECK(std::abs(d[0] - std::polar(1.0, -(a + 1) * t1)) < 1e-15);
      CHECK(std::abs(d[1] - std::polar(1.0, -(a - 1) * t1)) < 1e-15);
    }
    CHECK(gauge_transform(f, 0.0, a).max_coeff_diff(f) == 0.0);
  }
}

TEST_CASE("property: gauge transformations preserve every inner product") {
  for (unsigned seed = 0; seed < 20; ++seed) {
    Rng rng(500 + seed);
    const double a = -0.9 + 0.09 * seed;
    const ModelParams P(1.0, 1.0, a);
    const Lattice lat = Lattice::cube(1, 8.0, 32);
    const LatticeField f = random_field(lat, P, rng), g = random_field(lat, P, rng);
    const double th = 0.37 * seed;
    CHECK(oracle::rel(inner_a(gauge_transform(f, th, a), gauge_transform(g, th, a), 0.0), inner_a(f, g, 0.0)) < 1e-12);
  }
}

TEST_CASE("the generator is -i(C + a) to first order") {
  Rng rng(92);
  const LatticeField f = random_field(Lattice::cube(1, 8.0, 32), ModelParams(1.0, 1.0, 0.2), rng);
  const double r1 = generator_check(f, 0.2, 1e-4), r2 = generator_check(f, 0.2, 5e-5);
  CHECK(r1 / r2 == doctest::Approx(2.0).epsilon(0.02));
  CHECK(r1 < 1e-3 * oracle::max_abs(f.evaluate(f.t0()).psi));
}

TEST_CASE("group classification: rational parameters give U(1) with the minimal period") {
  for (auto [p, q] : {std::pair{0LL, 1LL}, {1, 2}, {1, 3}, {-2, 5}, {3, 7}, {2, 3}}) {
    const std::string text = std::to_string(p) + "/" + std::to_string(q);
    const GroupClass g = group_classify(parse_gauge_parameter(text));
    REQUIRE(g.kind == GroupClass::Kind::U1);
    REQUIRE(g.period.has_value());
    CHECK(*g.period == doctest::Approx(oracle::gauge_period(p, q)).epsilon(1e-14));
    CHECK(g.witness < 1e-12);
  }
  const GroupClass half = group_classify(parse_gauge_parameter("1/2"));
  CHECK(*half.period == doctest::Approx(4 * oracle::pi));
}

TEST_CASE("group classification: irrational parameters give R+") {
  const GroupClass g = group_classify(parse_gauge_parameter("irrational:sqrt2/2=0.7071067811865476"));
  CHECK(g.kind == GroupClass::Kind::Rplus);
  CHECK_FALSE(g.period.has_value());
  CHECK(g.witness > 0.0);
}

TEST_CASE("gauge parameter parsing rejects malformed input") {
  for (const char* bad : {"", "x", "1/", "1/2/3", "irrational:", "irrational:=0.5", "irrational:x=0.5y"})
    CHECK_THROWS_AS(parse_gauge_parameter(bad), PreconditionError);
  for (const char* out_of_range : {"1/0", "3/2", "1/1", "2/4"})
    CHECK_THROWS_AS(group_classify(parse_gauge_parameter(out_of_range)), PreconditionError);
  CHECK(std::holds_alternative<Rational>(parse_gauge_parameter("0")));
}
