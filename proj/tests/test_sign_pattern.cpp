#include "doctest.h"
#include "ittail/sign_pattern.hpp"

using namespace ittail;

TEST_CASE("parse and print") {
  CHECK(to_string(parse_signs("+,-,+")) == "+,-,+");
  CHECK(to_string(parse_signs("\xE2\x88\x92,+")) == "-,+");
  CHECK(parse_signs("").empty());
  CHECK_THROWS(parse_signs("+,+"));
  CHECK_THROWS(parse_signs("+,x"));
}

TEST_CASE("final and contiguous parts") {
  auto full = parse_signs("+,-,+");
  CHECK(is_final_part(parse_signs("+"), full));
  CHECK(is_final_part(parse_signs("-,+"), full));
  CHECK_FALSE(is_final_part(parse_signs("+,-"), full));
  CHECK(is_contiguous_part(parse_signs("+,-"), full));
  CHECK_FALSE(is_contiguous_part(parse_signs("-,+,-"), full));
  auto fp = final_parts(full);
  REQUIRE(fp.size() == 3);
  CHECK(to_string(fp[0]) == "+,-,+");
  CHECK(to_string(fp[2]) == "+");
}

TEST_CASE("matching against allowed sets") {
  std::vector<SignSequence> ifr{parse_signs("+,-,+")}, ifra{parse_signs("-,+")};
  CHECK(matches(parse_signs("+"), ifr));
  CHECK_FALSE(matches(parse_signs("-,+,-"), ifr));
  CHECK(matches(parse_signs("-,+"), ifra));
  CHECK_FALSE(matches(parse_signs("+,-"), ifra));
  CHECK(matches(SignSequence{}, ifra));
}

TEST_CASE("push, negate and concatenate") {
  SignPattern p;
  p.push(Sign::Plus, 1.0, 0.5, {});
  p.push(Sign::Plus, 2.0, 0.9, {});
  p.push(Sign::Minus, 3.0, -0.1, {2.0, 3.0});
  CHECK(p.str() == "+,-");
  CHECK(p.witnesses[0] == 2.0);
  REQUIRE(p.change_points.size() == 1);
  CHECK(negated(p).str() == "-,+");

  SignPattern q;
  q.push(Sign::Minus, 5.0, -1.0, {});
  q.push(Sign::Plus, 7.0, 1.0, {6.0, 7.0});
  auto c = concatenate(p, q, {3.0, 5.0});
  CHECK(c.str() == "+,-,+");
  CHECK(c.change_points.size() == 2);
  CHECK(c.witnesses[1] == 5.0);
}
