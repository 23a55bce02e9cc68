#include <doctest.h>

#include <cstring>
#include <sstream>

#include "kgfield/csv.hpp"
#include "kgfield/random_fields.hpp"
#include "kgfield/state_io.hpp"

using namespace kgfield;

TEST_CASE("state files round-trip bit-exactly") {
  Rng rng(1);
  const LatticeField f = random_field(Lattice(2, {3.5, 4.25, 1.0}, {8, 4, 1}), ModelParams(1.3, 0.7, -0.4), rng, 0.125);
  std::stringstream ss;
  write_state(ss, f);
  const std::string text = ss.str();
  CHECK(text.rfind("kgfield-state-v1\n", 0) == 0);
  const LatticeField g = read_state(ss);
  CHECK(g.lattice() == f.lattice());
  CHECK(g.params() == f.params());
  CHECK(g.t0() == f.t0());
  CHECK(g.max_coeff_diff(f) == 0.0);
  // payload: two grids of (re, im) little-endian doubles
  const auto data = text.find("data\n");
  REQUIRE(data != std::string::npos);
  CHECK(text.size() - (data + 5) == 2 * f.lattice().size() * 16);
  double first;
  std::memcpy(&first, text.data() + data + 5, 8);
  CHECK(first == f.phi_plus()[0].real());
}

TEST_CASE("state files reject bad headers and truncated payloads") {
  std::stringstream bad("kgfield-state-v0\n");
  CHECK_THROWS_AS(read_state(bad), PreconditionError);
  Rng rng(2);
  std::stringstream ss;
  write_state(ss, random_field(Lattice::cube(1, 4.0, 8), ModelParams(1, 1, 0), rng));
  std::string s = ss.str();
  s.resize(s.size() - 9);
  std::stringstream cut(s);
  CHECK_THROWS_AS(read_state(cut), PreconditionError);
}

TEST_CASE("plane-wave files round-trip") {
  const PlaneWaveField f(ModelParams(1.5, 0.5, 0.25), 2, {{+1, {0.1, 0.2, 0}, {1, -2}}, {-1, {-0.3, 0, 0}, {0.5, 0.25}}});
  std::stringstream ss;
  write_planewaves(ss, f);
  const PlaneWaveField g = read_planewaves(ss);
  CHECK(g.params() == f.params());
  CHECK(g.dim() == 2);
  REQUIRE(g.modes().size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(g.modes()[i].epsilon == f.modes()[i].epsilon);
    CHECK(g.modes()[i].k == f.modes()[i].k);
    CHECK(g.modes()[i].coeff == f.modes()[i].coeff);
  }
}

TEST_CASE("config hash is 64-bit FNV-1a") {
  CHECK(config_hash("") == "cbf29ce484222325");
  CHECK(config_hash("a") == "af63dc4c8601ec8c");
  CHECK(config_hash("foobar") == "85944171f73967e8");
}

TEST_CASE("CSV layout: header comments, columns, rows, footer") {
  CsvTable t({"x", "y"});
  t.add_row(std::vector<double>{0.1, 2.0});
  t.add_row(std::vector<std::string>{"a", "b"});
  t.add_footer("slope = -2");
  CHECK_THROWS_AS(t.add_row(std::vector<double>{1.0}), PreconditionError);
  CsvMeta meta{"00ff", {{"model.M", "1"}}, ""};
  std::ostringstream out;
  t.write(out, meta);
  CHECK(out.str() == "# tool: kgfield 1.0.0\n# config_hash: 00ff\n# param model.M = 1\nx,y\n0.1,2\na,b\n# slope = -2\n");
  meta.timestamp = "2026-01-01T00:00:00Z";
  std::ostringstream stamped;
  t.write(stamped, meta);
  CHECK(stamped.str().find("# generated: 2026-01-01T00:00:00Z\n") != std::string::npos);
}

TEST_CASE("numbers are written in shortest round-trip form") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0})
    CHECK(std::stod(format_number(v)) == v);
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(2.0) == "2");
}
