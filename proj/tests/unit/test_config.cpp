#include <doctest.h>

#include <sstream>

#include "peristab/config.hpp"
#include "peristab/errors.hpp"

using namespace peristab;

namespace {

Config parse(const std::string& text) {
  std::istringstream in(text);
  return Config::parse(in);
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("sections fall back to global keys") {
    Config c = parse("N = 4\n# comment\n[cuboid]\nm = 0.5\nextents = 2, 1, 1\n");
    c.use_section("cuboid");
    CHECK(c.get_int("N", 3) == 4);
    CHECK(c.get_double("m", 1.0) == 0.5);
    CHECK(c.get_list("extents", {}) == std::vector<double>{2.0, 1.0, 1.0});
    CHECK(c.get_double("dx", 0.25) == 0.25);
    REQUIRE(c.defaulted().size() == 1);
    CHECK(c.defaulted()[0] == "dx");
    CHECK(c.echo().size() == 4);
    CHECK_NOTHROW(c.check_unused());
  }

  TEST_CASE("malformed input is rejected") {
    CHECK_THROWS_AS(parse("[broken\n"), ConfigError);
    CHECK_THROWS_AS(parse("novalue\n"), ConfigError);
    CHECK_THROWS_AS(parse("a = 1\na = 2\n"), ConfigError);
    Config c = parse("n = 2.5\nx = abc\nb = maybe\n");
    CHECK_THROWS_AS(c.get_int("n", 0), ConfigError);
    CHECK_THROWS_AS(c.get_double("x", 0.0), ConfigError);
    CHECK_THROWS_AS(c.get_bool("b", false), ConfigError);
  }

  TEST_CASE("unused keys are reported") {
    Config c = parse("[dispersion]\nsamples = 11\nsampels = 12\n");
    c.use_section("dispersion");
    c.get_int("samples", 401);
    CHECK_THROWS_AS(c.check_unused(), ConfigError);
  }

  TEST_CASE("missing file") { CHECK_THROWS_AS(Config::load("/nonexistent/peristab.cfg"), ConfigError); }

  TEST_CASE("doubles round trip through their text form") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 6.02e23}) CHECK(std::stod(format_double(v)) == v);
  }
}
