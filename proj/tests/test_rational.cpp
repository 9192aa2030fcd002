#include <doctest.h>

#include "oq/error.hpp"
#include "oq/rational.hpp"

using namespace oq;

TEST_CASE("fraction parsing round-trips the wire format") {
  CHECK(rat_str(parse_rat("3/4")) == "3/4");
  CHECK(rat_str(parse_rat("6/8")) == "3/4");
  CHECK(rat_str(parse_rat("7")) == "7");
  CHECK(rat_str(parse_rat("-1/2")) == "-1/2");
  CHECK(rat_str(parse_rat("0")) == "0");
  CHECK(parse_rat("5/32") == Rat(5, 32));
}

TEST_CASE("malformed fractions are rejected") {
  CHECK_THROWS_AS(parse_rat(""), ParseError);
  CHECK_THROWS_AS(parse_rat("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rat("0.5"), ParseError);
  CHECK_THROWS_AS(parse_rat("1/2/3"), ParseError);
  CHECK_THROWS_AS(parse_rat("a"), ParseError);
  CHECK_THROWS_AS(parse_rat("1/"), ParseError);
  CHECK_THROWS_AS(parse_rat("/2"), ParseError);
}

TEST_CASE("decimal rendering rounds half away from zero") {
  CHECK(rat_decimal(Rat(1, 2), 3) == "0.500");
  CHECK(rat_decimal(Rat(2, 3), 4) == "0.6667");
  CHECK(rat_decimal(Rat(1, 3), 4) == "0.3333");
  CHECK(rat_decimal(Rat(-1, 3), 2) == "-0.33");
  CHECK(rat_decimal(Rat(5, 1000), 2) == "0.01");
  CHECK(rat_decimal(Rat(3, 2), 0) == "2");
  CHECK(rat_decimal(Rat(0), 2) == "0.00");
}

TEST_CASE("exact square roots") {
  CHECK(*exact_sqrt(Rat(1, 25)) == Rat(1, 5));
  CHECK(*exact_sqrt(Rat(9, 4)) == Rat(3, 2));
  CHECK(*exact_sqrt(Rat(0)) == Rat(0));
  CHECK(!exact_sqrt(Rat(1, 8)).has_value());
  CHECK(!exact_sqrt(Rat(-1)).has_value());
}

TEST_CASE("(1 - sqrt(eps)) factor comparisons stay exact") {
  // (1 - sqrt(1/4)) * 4 = 2 <= 2 and not <= 1.9
  CHECK(one_minus_sqrt_factor_leq(Rat(1, 4), Rat(4), Rat(2)));
  CHECK(!one_minus_sqrt_factor_leq(Rat(1, 4), Rat(4), Rat(19, 10)));
  // irrational sqrt(1/8): (1 - 0.3535..) * 2 = 1.29289..
  CHECK(one_minus_sqrt_factor_leq(Rat(1, 8), Rat(2), Rat(13, 10)));
  CHECK(!one_minus_sqrt_factor_leq(Rat(1, 8), Rat(2), Rat(129, 100)));
  CHECK(one_minus_sqrt_factor_leq(Rat(0), Rat(5), Rat(5)));
}

TEST_CASE("ceil(mean + sqrt(r)) without leaving the rationals") {
  CHECK(ceil_mean_plus_sqrt(Rat(6), Rat(4)) == 8);    // 6 + 2
  CHECK(ceil_mean_plus_sqrt(Rat(6), Rat(0)) == 6);    // sigma 0
  CHECK(ceil_mean_plus_sqrt(Rat(13, 2), Rat(0)) == 7);
  CHECK(ceil_mean_plus_sqrt(Rat(7, 4), Rat(7, 2)) == 4);  // 1.75 + 1.8708...
  CHECK(ceil_mean_plus_sqrt(Rat(0), Rat(2)) == 2);        // sqrt(2) = 1.41..
  CHECK(ceil_mean_plus_sqrt(Rat(2), Rat(4)) == 4);        // exact boundary
}
