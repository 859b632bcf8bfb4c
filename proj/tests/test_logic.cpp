#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "lc/logic.hpp"
#include "lc/solver.hpp"

using namespace lc;

// Brute-force oracle: does any total assignment over nvars satisfy all
// formulas?  Also counts models.
static long count_models_bf(const std::vector<Formula>& fs, int nvars) {
  long count = 0;
  std::vector<bool> m(static_cast<size_t>(nvars), false);
  for (long mask = 0; mask < (1L << nvars); ++mask) {
    for (int v = 0; v < nvars; ++v) m[static_cast<size_t>(v)] = (mask >> v) & 1;
    bool ok = true;
    for (const auto& f : fs)
      if (!eval(f, m)) {
        ok = false;
        break;
      }
    if (ok) count++;
  }
  return count;
}

TEST_CASE("eval truth table semantics") {
  VarPool pool;
  VarId p = pool.add("P"), q = pool.add("Q");
  Formula imp = Formula::implies(Formula::atom(p), Formula::atom(q));
  // implication is FALSE only if antecedent TRUE and consequent FALSE
  CHECK(eval(imp, {false, false}));
  CHECK(eval(imp, {false, true}));
  CHECK(!eval(imp, {true, false}));
  CHECK(eval(imp, {true, true}));
  Formula eq = Formula::iff(Formula::atom(p), Formula::atom(q));
  CHECK(eval(eq, {false, false}));
  CHECK(!eval(eq, {false, true}));
  CHECK(eval(eq, {true, true}));
}

TEST_CASE("tseitin: P or (Q and R) uses one auxiliary") {
  VarPool pool;
  VarId p = pool.add("P"), q = pool.add("Q"), r = pool.add("R");
  Formula f = Formula::disj({Formula::atom(p), Formula::conj({Formula::atom(q), Formula::atom(r)})});
  ClauseSet cs = to_cnf({f}, pool);
  CHECK(pool.size() == 4);  // exactly 1 auxiliary
  CHECK(pool.is_aux(3));
  // equisatisfiability over the 8 source assignments
  for (int mask = 0; mask < 8; ++mask) {
    std::vector<bool> m = {bool(mask & 1), bool(mask & 2), bool(mask & 4)};
    bool want = eval(f, m);
    // solve with source values fixed by assumptions
    Solver s(cs);
    std::vector<int> assume;
    for (int v = 0; v < 3; ++v) assume.push_back(m[static_cast<size_t>(v)] ? v + 1 : -(v + 1));
    bool got = s.solve(assume) == SolveResult::Sat;
    CHECK(want == got);
  }
}

TEST_CASE("clause hygiene") {
  ClauseSet cs;
  cs.add({1, -2, 1});
  CHECK(cs.clauses.size() == 1);
  CHECK(cs.clauses[0].size() == 2);  // duplicate literal dropped
  cs.add({3, -3});
  CHECK(cs.clauses.size() == 1);  // tautology dropped
}

TEST_CASE("solver agrees with truth-table oracle on random formula sets") {
  std::mt19937 rng(12345);
  for (int iter = 0; iter < 300; ++iter) {
    int nvars = 1 + static_cast<int>(rng() % 8);
    VarPool pool;
    for (int v = 0; v < nvars; ++v) pool.add("x" + std::to_string(v));
    int nf = 1 + static_cast<int>(rng() % 6);
    std::vector<Formula> fs;
    // random formulas over random shapes
    std::function<Formula(int)> gen = [&](int depth) -> Formula {
      int pick = static_cast<int>(rng() % (depth > 2 ? 2 : 6));
      if (pick < 2) return Formula::atom(static_cast<VarId>(rng() % nvars));
      if (pick == 2) return Formula::neg(gen(depth + 1));
      if (pick == 3) return Formula::conj({gen(depth + 1), gen(depth + 1)});
      if (pick == 4) return Formula::disj({gen(depth + 1), gen(depth + 1)});
      return pick == 5 && rng() % 2 ? Formula::implies(gen(depth + 1), gen(depth + 1))
                                    : Formula::iff(gen(depth + 1), gen(depth + 1));
    };
    for (int i = 0; i < nf; ++i) fs.push_back(gen(0));
    long want = count_models_bf(fs, nvars);
    ClauseSet cs = to_cnf(fs, pool);
    cs.num_vars = std::max(cs.num_vars, nvars);
    Solver s(cs);
    bool sat = s.solve() == SolveResult::Sat;
    CHECK(sat == (want > 0));
    if (sat) {
      // returned model satisfies every formula
      std::vector<bool> m(s.model().begin(), s.model().begin() + nvars);
      for (const auto& f : fs) CHECK(eval(f, m));
    }
    // projected model count matches brute force
    std::vector<VarId> proj;
    for (int v = 0; v < nvars; ++v) proj.push_back(v);
    auto models = enumerate_models(cs, proj, 1u << nvars);
    CHECK(static_cast<long>(models.size()) == want);
  }
}

TEST_CASE("determinism: same input, same model") {
  VarPool pool;
  std::vector<Formula> fs;
  for (int v = 0; v < 10; ++v) pool.add("v" + std::to_string(v));
  for (int v = 0; v + 1 < 10; ++v)
    fs.push_back(Formula::disj({Formula::atom(v), Formula::atom(v + 1)}));
  ClauseSet cs = to_cnf(fs, pool);
  Solver s1(cs), s2(cs);
  REQUIRE(s1.solve() == SolveResult::Sat);
  REQUIRE(s2.solve() == SolveResult::Sat);
  CHECK(s1.model() == s2.model());
}

TEST_CASE("assumptions behave as first decisions and are reusable") {
  VarPool pool;
  VarId a = pool.add("a"), b = pool.add("b");
  std::vector<Formula> fs = {Formula::implies(Formula::atom(a), Formula::atom(b))};
  ClauseSet cs = to_cnf(fs, pool);
  Solver s(cs);
  CHECK(s.solve({a + 1, -(b + 1)}) == SolveResult::Unsat);
  CHECK(s.solve({a + 1}) == SolveResult::Sat);
  CHECK(s.model()[static_cast<size_t>(b)] == true);
  CHECK(s.solve({-(a + 1), -(b + 1)}) == SolveResult::Sat);
  CHECK(s.solve({a + 1, -(b + 1)}) == SolveResult::Unsat);
}

TEST_CASE("dimacs export carries labels") {
  VarPool pool;
  VarId p = pool.add("left"), q = pool.add("right");
  ClauseSet cs = to_cnf({Formula::disj({Formula::atom(p), Formula::atom(q)})}, pool);
  std::string d = to_dimacs(cs, pool);
  CHECK(d.find("c var 1 left") != std::string::npos);
  CHECK(d.find("c var 2 right") != std::string::npos);
  CHECK(d.find("p cnf") != std::string::npos);
}

TEST_CASE("unsat is a normal return") {
  VarPool pool;
  VarId p = pool.add("p");
  ClauseSet cs = to_cnf({Formula::atom(p), Formula::neg(Formula::atom(p))}, pool);
  Solver s(cs);
  CHECK(s.solve() == SolveResult::Unsat);
}
