#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "lc/lp.hpp"

using namespace lc;

TEST_CASE("feasible system with free variables") {
  // u2 <= u1 - 1, u1 <= u2 + 5
  std::vector<LinCon> cons;
  cons.push_back({{Rat(-1), Rat(1)}, Rel::LE, Rat(-1)});
  cons.push_back({{Rat(1), Rat(-1)}, Rel::LE, Rat(5)});
  auto r = lp_feasible(2, cons, {false, false});
  CHECK(r.feasible);
  CHECK(r.x[1] <= r.x[0] - 1);
}

TEST_CASE("infeasible system") {
  // x <= 1, x >= 2, x >= 0
  std::vector<LinCon> cons;
  cons.push_back({{Rat(1)}, Rel::LE, Rat(1)});
  cons.push_back({{Rat(1)}, Rel::GE, Rat(2)});
  auto r = lp_feasible(1, cons, {true});
  CHECK(!r.feasible);
}

TEST_CASE("optimization with exact rationals") {
  // max x + y st x + 2y <= 7/2, 3x + y <= 4, x,y >= 0
  std::vector<LinCon> cons;
  cons.push_back({{Rat(1), Rat(2)}, Rel::LE, Rat(7, 2)});
  cons.push_back({{Rat(3), Rat(1)}, Rel::LE, Rat(4)});
  auto r = lp_solve(2, cons, {Rat(1), Rat(1)}, {true, true});
  REQUIRE(r.feasible);
  CHECK(!r.unbounded);
  // vertex: x = 9/10, y = 13/10
  CHECK(r.objective == Rat(11, 5));
  CHECK(r.x[0] * 1 + r.x[1] * 2 <= Rat(7, 2));
  CHECK(r.x[0] * 3 + r.x[1] <= Rat(4));
}

TEST_CASE("equality constraints") {
  // x + y = 1, x - y = 1/3, x,y >= 0
  std::vector<LinCon> cons;
  cons.push_back({{Rat(1), Rat(1)}, Rel::EQ, Rat(1)});
  cons.push_back({{Rat(1), Rat(-1)}, Rel::EQ, Rat(1, 3)});
  auto r = lp_feasible(2, cons, {true, true});
  REQUIRE(r.feasible);
  CHECK(r.x[0] == Rat(2, 3));
  CHECK(r.x[1] == Rat(1, 3));
}

TEST_CASE("unbounded detection") {
  std::vector<LinCon> cons;
  cons.push_back({{Rat(1)}, Rel::GE, Rat(0)});
  auto r = lp_solve(1, cons, {Rat(1)}, {true});
  CHECK(r.feasible);
  CHECK(r.unbounded);
}

TEST_CASE("negative rhs normalization") {
  // -x <= -3  (x >= 3)
  std::vector<LinCon> cons;
  cons.push_back({{Rat(-1)}, Rel::LE, Rat(-3)});
  auto r = lp_feasible(1, cons, {true});
  REQUIRE(r.feasible);
  CHECK(r.x[0] >= 3);
}

TEST_CASE("redundant equalities do not break phase transition") {
  std::vector<LinCon> cons;
  cons.push_back({{Rat(1), Rat(1)}, Rel::EQ, Rat(2)});
  cons.push_back({{Rat(2), Rat(2)}, Rel::EQ, Rat(4)});
  auto r = lp_solve(2, cons, {Rat(1), Rat(0)}, {true, true});
  REQUIRE(r.feasible);
  CHECK(r.objective == Rat(2));
}
