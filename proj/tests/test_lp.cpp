#include <doctest.h>

#include "oq/lp.hpp"

using namespace oq;

namespace {

LinearProgram small_lp() {
  // min -x - 2y  s.t.  x + y <= 4, y <= 3, x, y >= 0  -> x = 1, y = 3, obj -7
  LinearProgram lp;
  lp.c = {Rat(-1), Rat(-2)};
  lp.A = {{Rat(1), Rat(1)}, {Rat(0), Rat(1)}};
  lp.rel = {Rel::Le, Rel::Le};
  lp.b = {Rat(4), Rat(3)};
  return lp;
}

}  // namespace

TEST_CASE("simplex solves a small program with exact duals") {
  for (auto mode : {LpMode::Exact, LpMode::Float}) {
    LpSolution s = solve_lp(small_lp(), mode);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.objective == Rat(-7));
    CHECK(s.x[0] == Rat(1));
    CHECK(s.x[1] == Rat(3));
    // strong duality: y.b == objective, y <= 0 on Le rows
    CHECK(s.dual[0] * Rat(4) + s.dual[1] * Rat(3) == Rat(-7));
    CHECK(s.dual[0] <= 0);
    CHECK(s.dual[1] <= 0);
  }
}

TEST_CASE("equality and Ge rows") {
  // min x + y  s.t.  x + y = 1, x >= 1/4  ->  obj 1
  LinearProgram lp;
  lp.c = {Rat(1), Rat(1)};
  lp.A = {{Rat(1), Rat(1)}, {Rat(1), Rat(0)}};
  lp.rel = {Rel::Eq, Rel::Ge};
  lp.b = {Rat(1), Rat(1, 4)};
  LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == Rat(1));
  CHECK(s.x[0] >= Rat(1, 4));
  CHECK(s.x[0] + s.x[1] == Rat(1));
}

TEST_CASE("infeasible programs are reported") {
  LinearProgram lp;
  lp.c = {Rat(1)};
  lp.A = {{Rat(1)}, {Rat(1)}};
  lp.rel = {Rel::Le, Rel::Ge};
  lp.b = {Rat(1), Rat(2)};
  CHECK(solve_lp(lp).status == LpStatus::Infeasible);
  CHECK(solve_lp(lp, LpMode::Float).status == LpStatus::Infeasible);
}

TEST_CASE("unbounded programs are reported") {
  LinearProgram lp;
  lp.c = {Rat(-1)};
  lp.A = {{Rat(-1)}};
  lp.rel = {Rel::Le};
  lp.b = {Rat(0)};
  CHECK(solve_lp(lp).status == LpStatus::Unbounded);
}

TEST_CASE("negative right-hand sides are normalized") {
  // min x  s.t.  -x <= -2  ->  x = 2
  LinearProgram lp;
  lp.c = {Rat(1)};
  lp.A = {{Rat(-1)}};
  lp.rel = {Rel::Le};
  lp.b = {Rat(-2)};
  LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.x[0] == Rat(2));
  CHECK(s.objective == Rat(2));
  CHECK(s.dual[0] * Rat(-2) == Rat(2));
}

TEST_CASE("redundant rows get zero duals") {
  // x = 1 stated twice
  LinearProgram lp;
  lp.c = {Rat(3)};
  lp.A = {{Rat(1)}, {Rat(1)}};
  lp.rel = {Rel::Eq, Rel::Eq};
  lp.b = {Rat(1), Rat(1)};
  LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == Rat(3));
  CHECK(s.dual[0] * lp.b[0] + s.dual[1] * lp.b[1] == Rat(3));
}

TEST_CASE("degenerate vertices terminate under Bland's rule") {
  // multiple constraints through the optimum
  LinearProgram lp;
  lp.c = {Rat(-1), Rat(-1)};
  lp.A = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(1), Rat(1)}};
  lp.rel = {Rel::Le, Rel::Le, Rel::Le};
  lp.b = {Rat(1), Rat(1), Rat(2)};
  LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == Rat(-2));
}

TEST_CASE("fractional coefficients stay exact") {
  // min 7/3 x + 5/7 y  s.t.  x + y >= 22/7, x - y = 1/3
  LinearProgram lp;
  lp.c = {Rat(7, 3), Rat(5, 7)};
  lp.A = {{Rat(1), Rat(1)}, {Rat(1), Rat(-1)}};
  lp.rel = {Rel::Ge, Rel::Eq};
  lp.b = {Rat(22, 7), Rat(1, 3)};
  for (auto mode : {LpMode::Exact, LpMode::Float}) {
    LpSolution s = solve_lp(lp, mode);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.x[0] - s.x[1] == Rat(1, 3));
    CHECK(s.x[0] + s.x[1] == Rat(22, 7));
    // x = (22/7 + 1/3)/2 = 73/42, y = 73/42 - 1/3 = 59/42
    CHECK(s.x[0] == Rat(73, 42));
    CHECK(s.objective == Rat(7, 3) * Rat(73, 42) + Rat(5, 7) * Rat(59, 42));
  }
}
