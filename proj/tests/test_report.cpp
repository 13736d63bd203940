#include <cmath>
#include <limits>

#include "doctest.h"
#include "ittail/report.hpp"

using namespace ittail;

TEST_CASE("non-finite numbers serialize as null") {
  CHECK(number(std::numeric_limits<double>::infinity()).is_null());
  CHECK(number(std::nan("")).is_null());
  CHECK(number(0.1).get<double>() == 0.1);
}

TEST_CASE("grid round-trips through json") {
  GridSpec g;
  g.a = log_space(0.05, 20.0, 7);
  g.b = lin_space(-1.0, 2.0, 5);
  g.cells = {{2.89, 0.0}, {1.0 / 3.0, 0.1}};
  g.scan.initial_grid = 513;
  g.scan.max_refinement_depth = 31;
  g.scan.x_max = 12.5;
  auto back = grid_from_json(Json::parse(to_json(g).dump()));
  CHECK(back.a == g.a);
  CHECK(back.b == g.b);
  CHECK(back.cells == g.cells);
  CHECK(back.scan.initial_grid == 513);
  CHECK(back.scan.max_refinement_depth == 31);
  CHECK(back.scan.x_max == 12.5);
}

TEST_CASE("outcome names round-trip") {
  for (auto o : {Outcome::Supported, Outcome::Refuted, Outcome::Inconclusive})
    CHECK(outcome_from_string(to_string(o)) == o);
  CHECK_THROWS(outcome_from_string("maybe"));
}

TEST_CASE("verdict document carries grid and witness") {
  GridSpec g;
  g.a = {2.89};
  g.b = {0.0};
  auto v = compare_ifra(MaxExp{{0.34, 1.0}}, MaxExp{{1.0, 11.0}}, 2, g);
  auto j = to_json(v);
  CHECK(j["outcome"] == "refuted");
  CHECK(j["witness"]["pattern"]["signs"] == "-,+,-");
  CHECK(j["grid"]["a"][0].get<double>() == 2.89);
}
