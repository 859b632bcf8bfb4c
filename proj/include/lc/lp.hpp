#pragma once

// Exact rational linear programming: two-phase dense simplex with Bland's
// rule.  Small-scale by design; everything here is over mpq.

#include <vector>

#include "lc/rat.hpp"

namespace lc {

enum class Rel { LE, GE, EQ };

struct LinCon {
  std::vector<Rat> a;  // dense, length nvars
  Rel rel = Rel::LE;
  Rat b = 0;
};

struct LPResult {
  bool feasible = false;
  bool unbounded = false;
  std::vector<Rat> x;  // length nvars when feasible
  Rat objective = 0;
};

// Maximizes c.x subject to the constraints.  Variables with nonneg[i] true
// are restricted to >= 0, others are free.
LPResult lp_solve(int nvars, const std::vector<LinCon>& cons, const std::vector<Rat>& c,
                  const std::vector<bool>& nonneg);

LPResult lp_feasible(int nvars, const std::vector<LinCon>& cons, const std::vector<bool>& nonneg);

}  // namespace lc
