#include "lc/solver.hpp"

#include <algorithm>
#include <stdexcept>

namespace lc {

Solver::Solver(const ClauseSet& cs) {
  nvars_ = cs.num_vars;
  assign_.assign(nvars_, -1);
  level_.assign(nvars_, 0);
  reason_.assign(nvars_, -1);
  watches_.assign(2 * static_cast<size_t>(nvars_), {});
  for (const auto& cl : cs.clauses) add_clause(cl);
}

void Solver::add_clause(std::vector<int> dimacs_lits) {
  // Solver may be mid-search only at level 0 (between solve calls).
  cancel_until(0);
  Clause c;
  for (int d : dimacs_lits) {
    int v = std::abs(d) - 1;
    if (v >= nvars_) {
      int old = nvars_;
      nvars_ = v + 1;
      assign_.resize(nvars_, -1);
      level_.resize(nvars_, 0);
      reason_.resize(nvars_, -1);
      watches_.resize(2 * static_cast<size_t>(nvars_));
      (void)old;
    }
    c.lits.push_back(mk(d));
  }
  if (c.lits.empty()) {
    // empty clause: store a trivially conflicting marker via two opposite
    // units on a fresh pseudo-state; simplest: remember unsatisfiability by
    // adding clauses x and -x over variable 0 if it exists, else create one.
    if (nvars_ == 0) {
      nvars_ = 1;
      assign_.assign(1, -1);
      level_.assign(1, 0);
      reason_.assign(1, -1);
      watches_.assign(2, {});
    }
    clauses_.push_back(Clause{{0}});
    attach(static_cast<int>(clauses_.size()) - 1);
    clauses_.push_back(Clause{{1}});
    attach(static_cast<int>(clauses_.size()) - 1);
    return;
  }
  clauses_.push_back(std::move(c));
  attach(static_cast<int>(clauses_.size()) - 1);
}

void Solver::attach(int ci) {
  auto& c = clauses_[static_cast<size_t>(ci)];
  if (c.lits.size() == 1) {
    // also enqueued at solve() start
    unit_clauses_.push_back(ci);
    watches_[static_cast<size_t>(c.lits[0])].push_back(ci);
  } else {
    watches_[static_cast<size_t>(c.lits[0])].push_back(ci);
    watches_[static_cast<size_t>(c.lits[1])].push_back(ci);
  }
}

bool Solver::enqueue(Lit l, int reason) {
  if (value_false(l)) return false;
  if (value_true(l)) return true;
  assign_[var(l)] = (l & 1) ? 0 : 1;
  level_[var(l)] = decision_level();
  reason_[var(l)] = reason;
  trail_.push_back(l);
  return true;
}

int Solver::propagate() {
  while (qhead_ < trail_.size()) {
    Lit p = trail_[qhead_++];
    Lit np = neg(p);  // literals watching np are now potentially false
    auto& wl = watches_[static_cast<size_t>(np)];
    size_t keep = 0;
    for (size_t i = 0; i < wl.size(); ++i) {
      int ci = wl[i];
      auto& c = clauses_[static_cast<size_t>(ci)];
      if (c.lits.size() == 1) {
        wl[keep++] = ci;
        if (value_false(c.lits[0])) {
          for (size_t j = i + 1; j < wl.size(); ++j) wl[keep++] = wl[j];
          wl.resize(keep);
          return ci;
        }
        continue;
      }
      // ensure c.lits[1] is the false watcher np
      if (c.lits[0] == np) std::swap(c.lits[0], c.lits[1]);
      if (value_true(c.lits[0])) {
        wl[keep++] = ci;
        continue;
      }
      bool moved = false;
      for (size_t k = 2; k < c.lits.size(); ++k) {
        if (!value_false(c.lits[k])) {
          std::swap(c.lits[1], c.lits[k]);
          watches_[static_cast<size_t>(c.lits[1])].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      wl[keep++] = ci;
      if (!enqueue(c.lits[0], ci)) {
        for (size_t j = i + 1; j < wl.size(); ++j) wl[keep++] = wl[j];
        wl.resize(keep);
        return ci;
      }
    }
    wl.resize(keep);
  }
  return -1;
}

void Solver::cancel_until(int lvl) {
  if (decision_level() <= lvl) return;
  size_t low = static_cast<size_t>(trail_lim_[static_cast<size_t>(lvl)]);
  for (size_t i = trail_.size(); i-- > low;) {
    int v = var(trail_[i]);
    assign_[v] = -1;
    reason_[v] = -1;
    if (v < search_from_) search_from_ = v;
  }
  trail_.resize(low);
  trail_lim_.resize(static_cast<size_t>(lvl));
  qhead_ = trail_.size();
}

void Solver::analyze(int confl, std::vector<Lit>& learnt, int& bt_level) {
  learnt.clear();
  learnt.push_back(0);  // slot for the asserting literal
  std::vector<bool> seen(static_cast<size_t>(nvars_), false);
  int counter = 0;
  Lit p = -1;
  size_t idx = trail_.size();
  int cur = confl;
  do {
    const auto& c = clauses_[static_cast<size_t>(cur)];
    for (size_t j = (p == -1 ? 0 : 1); j < c.lits.size(); ++j) {
      Lit q = c.lits[j];
      if (p != -1 && q == c.lits[0]) continue;
      int v = var(q);
      if (!seen[static_cast<size_t>(v)] && level_[v] > 0) {
        seen[static_cast<size_t>(v)] = true;
        if (level_[v] >= decision_level())
          counter++;
        else
          learnt.push_back(q);
      }
    }
    // next literal on trail to resolve on
    while (!seen[static_cast<size_t>(var(trail_[idx - 1]))]) idx--;
    p = trail_[idx - 1];
    idx--;
    seen[static_cast<size_t>(var(p))] = false;
    counter--;
    cur = reason_[var(p)];
  } while (counter > 0);
  learnt[0] = neg(p);
  // backtrack level = max level among the rest
  bt_level = 0;
  size_t max_i = 1;
  for (size_t i = 1; i < learnt.size(); ++i) {
    int l = level_[var(learnt[i])];
    if (l > bt_level) {
      bt_level = l;
      max_i = i;
    }
  }
  if (learnt.size() > 1) std::swap(learnt[1], learnt[max_i]);
}

int Solver::attach_learnt(std::vector<Lit> learnt) {
  Clause c;
  c.lits = std::move(learnt);
  clauses_.push_back(std::move(c));
  int ci = static_cast<int>(clauses_.size()) - 1;
  attach(ci);
  return ci;
}

SolveResult Solver::solve(const std::vector<int>& assumptions) {
  cancel_until(0);
  qhead_ = 0;  // re-propagate everything (clauses may have been added)
  for (int ci : unit_clauses_) {
    Lit l = clauses_[static_cast<size_t>(ci)].lits[0];
    if (!enqueue(l, ci)) return SolveResult::Unsat;
  }
  if (propagate() != -1) return SolveResult::Unsat;
  size_t next_assumption = 0;
  for (;;) {
    int confl = propagate();
    if (confl != -1) {
      conflicts_++;
      if (decision_level() == 0) return SolveResult::Unsat;
      if (decision_level() <= static_cast<int>(next_assumption)) {
        // conflict depends only on assumptions (and level 0)
        return SolveResult::Unsat;
      }
      std::vector<Lit> learnt;
      int bt;
      analyze(confl, learnt, bt);
      // never backjump into the middle of un-failed assumption levels
      cancel_until(bt);
      int ci = attach_learnt(learnt);
      if (clauses_[static_cast<size_t>(ci)].lits.size() == 1) {
        // asserting unit at its backtrack level
        if (!enqueue(clauses_[static_cast<size_t>(ci)].lits[0], ci)) return SolveResult::Unsat;
      } else {
        if (!enqueue(clauses_[static_cast<size_t>(ci)].lits[0], ci)) return SolveResult::Unsat;
      }
      if (bt < static_cast<int>(next_assumption)) next_assumption = static_cast<size_t>(bt);
      continue;
    }
    // place pending assumptions
    if (next_assumption < assumptions.size()) {
      Lit a = mk(assumptions[next_assumption]);
      if (var(a) >= nvars_) throw std::out_of_range("assumption over unknown variable");
      next_assumption++;
      if (value_true(a)) {
        trail_lim_.push_back(static_cast<int>(trail_.size()));  // keep level accounting aligned
        continue;
      }
      if (value_false(a)) return SolveResult::Unsat;
      trail_lim_.push_back(static_cast<int>(trail_.size()));
      enqueue(a, -1);
      continue;
    }
    // decide: lowest unassigned index, FALSE first
    int v = -1;
    for (int i = search_from_; i < nvars_; ++i)
      if (assign_[i] < 0) {
        v = i;
        break;
      } else {
        search_from_ = i + 1;
      }
    if (v == -1) {
      model_.assign(static_cast<size_t>(nvars_), false);
      for (int i = 0; i < nvars_; ++i) model_[static_cast<size_t>(i)] = assign_[i] == 1;
      return SolveResult::Sat;
    }
    trail_lim_.push_back(static_cast<int>(trail_.size()));
    enqueue(2 * v + 1, -1);  // FALSE first
  }
}

std::vector<std::vector<bool>> enumerate_models(const ClauseSet& cs,
                                                const std::vector<VarId>& proj,
                                                size_t max_models) {
  Solver s(cs);
  std::vector<std::vector<bool>> out;
  while (out.size() < max_models) {
    if (s.solve() != SolveResult::Sat) break;
    const auto& m = s.model();
    std::vector<bool> row;
    std::vector<int> block;
    row.reserve(proj.size());
    for (VarId v : proj) {
      bool val = static_cast<size_t>(v) < m.size() && m[static_cast<size_t>(v)];
      row.push_back(val);
      block.push_back(val ? -(v + 1) : (v + 1));
    }
    out.push_back(std::move(row));
    if (block.empty()) break;  // single projection
    s.add_clause(block);
  }
  return out;
}

}  // namespace lc
