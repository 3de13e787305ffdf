#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <limits>

#include "srta/coeff.hpp"

using namespace srta;

TEST_CASE("quarter-unit construction and accessors") {
  CHECK(Coeff{}.is_zero());
  CHECK(Coeff::from_int(3).quarter_units() == 12);
  CHECK(Coeff::from_half_units(3).quarter_units() == 6);
  CHECK(Coeff::from_quarter_units(5).quarter_units() == 5);
  CHECK(Coeff::from_int(-2).to_int() == -2);
  CHECK(Coeff::from_quarter_units(6).to_double() == 1.5);
  CHECK(Coeff::from_int(7).is_integer());
  CHECK_FALSE(Coeff::from_quarter_units(2).is_integer());
  CHECK_THROWS_AS(Coeff::from_quarter_units(1).to_int(), overflow_error);
}

TEST_CASE("exact arithmetic") {
  Coeff a = Coeff::from_int(3), b = Coeff::from_quarter_units(-2);
  CHECK((a + b).quarter_units() == 10);
  CHECK((a - b).quarter_units() == 14);
  CHECK((-b).quarter_units() == 2);
  CHECK(a.times(-5) == Coeff::from_int(-15));
  CHECK(a.abs() == a);
  CHECK((-a).abs() == a);
  CHECK(Coeff::from_int(1) < Coeff::from_int(2));
  CHECK(Coeff::from_quarter_units(-1) < Coeff{});
}

TEST_CASE("exact division stays in quarter-units or throws") {
  CHECK(Coeff::from_int(6).half() == Coeff::from_int(3));
  CHECK(Coeff::from_int(1).half() == Coeff::from_quarter_units(2));
  CHECK(Coeff::from_int(1).quarter() == Coeff::from_quarter_units(1));
  CHECK(Coeff::from_int(8).divided_by(-2) == Coeff::from_int(-4));
  CHECK_THROWS_AS(Coeff::from_quarter_units(1).half(), overflow_error);
  CHECK_THROWS_AS(Coeff::from_quarter_units(2).quarter(), overflow_error);
  CHECK_THROWS_AS(Coeff::from_int(1).divided_by(0), overflow_error);
  CHECK_THROWS_AS(Coeff::from_int(1).divided_by(3), overflow_error);
}

TEST_CASE("overflow aborts instead of wrapping") {
  Coeff big = Coeff::from_quarter_units(std::numeric_limits<std::int64_t>::max());
  CHECK_THROWS_AS(big + Coeff::from_quarter_units(1), overflow_error);
  CHECK_THROWS_AS(big.times(2), overflow_error);
  CHECK_THROWS_AS(Coeff::from_int(std::numeric_limits<std::int64_t>::max()),
                  overflow_error);
}

TEST_CASE("reduced fraction rendering") {
  CHECK(Coeff::from_int(3).str() == "3");
  CHECK(Coeff::from_quarter_units(2).str() == "1/2");
  CHECK(Coeff::from_quarter_units(-2).str() == "-1/2");
  CHECK(Coeff::from_quarter_units(5).str() == "5/4");
  CHECK(Coeff::from_quarter_units(0).str() == "0");
}
