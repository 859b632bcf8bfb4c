#pragma once

// Complete, deterministic CDCL solver.  UNSAT is an ordinary return value.
// Branching: lowest unassigned index, FALSE first.  Assumptions are placed
// as the first decisions, so a ClauseSet can be reused across many queries
// (fragment ladders, prefix search) without rebuilding.

#include <cstdint>
#include <vector>

#include "lc/logic.hpp"

namespace lc {

enum class SolveResult { Sat, Unsat };

class Solver {
 public:
  explicit Solver(const ClauseSet& cs);

  // assumptions: DIMACS literals, tried in order as the first decisions.
  SolveResult solve(const std::vector<int>& assumptions = {});

  // Total assignment over vars 0..num_vars-1; valid after Sat.
  const std::vector<bool>& model() const { return model_; }

  // Permanently add a clause (e.g. to block a model).
  void add_clause(std::vector<int> dimacs_lits);

  long conflicts() const { return conflicts_; }

 private:
  using Lit = int32_t;  // internal: 2*v for +v, 2*v+1 for -v
  static Lit mk(int dimacs) {
    int v = std::abs(dimacs) - 1;
    return dimacs > 0 ? 2 * v : 2 * v + 1;
  }
  static Lit neg(Lit l) { return l ^ 1; }
  static int var(Lit l) { return l >> 1; }

  struct Clause {
    std::vector<Lit> lits;
  };

  int nvars_ = 0;
  std::vector<Clause> clauses_;
  std::vector<std::vector<int>> watches_;  // per literal: clause indices
  std::vector<int8_t> assign_;             // -1 unassigned, 0 false, 1 true
  std::vector<int> level_;
  std::vector<int> reason_;  // clause index or -1
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  std::vector<int> unit_clauses_;
  size_t qhead_ = 0;
  int search_from_ = 0;  // all vars below are assigned
  std::vector<bool> model_;
  long conflicts_ = 0;

  bool value_true(Lit l) const { return assign_[var(l)] == (l & 1 ? 0 : 1); }
  bool value_false(Lit l) const { return assign_[var(l)] == (l & 1 ? 1 : 0); }
  bool unassigned(Lit l) const { return assign_[var(l)] < 0; }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void attach(int ci);
  bool enqueue(Lit l, int reason);
  int propagate();  // returns conflicting clause index or -1
  void cancel_until(int level);
  void analyze(int confl, std::vector<Lit>& learnt, int& bt_level);
  int attach_learnt(std::vector<Lit> learnt);  // returns clause index
};

// Distinct assignments to `proj` (0-based var ids) extendable to models,
// in deterministic order, up to max_models.  Builds its own solver.
std::vector<std::vector<bool>> enumerate_models(const ClauseSet& cs,
                                                const std::vector<VarId>& proj,
                                                size_t max_models);

}  // namespace lc
