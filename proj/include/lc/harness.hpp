#pragma once

// The computational compactness argument: lazily specified infinite
// instances as formula streams, fragment-ladder solving with stabilization
// tracking, and prefix-limit extraction over a countable variable
// enumeration.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lc/logic.hpp"
#include "lc/revealed_pref.hpp"
#include "lc/stoch_choice.hpp"

namespace lc {

// Generators are deterministic and restartable; every formula is finite and
// mentions only enumerated variables.  Variables are carried by label so the
// same stream can be replayed into any pool.
struct InfiniteInstance {
  std::string domain;
  // canonical variable enumeration (prefix_limit reads the first m)
  std::function<std::string(size_t)> var_label;
  // i-th formula, registering its variables in the supplied pool;
  // invalid Formula signals stream end (finite streams)
  std::function<Formula(size_t, VarPool&)> formula_at;
};

// First k formulae (fewer if the stream ends), deterministic.
std::vector<Formula> fragment(const InfiniteInstance& inst, size_t k, VarPool& pool);

struct RungRecord {
  size_t k = 0;
  bool sat = false;
  long conflicts = 0;
  std::string digest;  // FNV-1a over sorted label=value lines (SAT only)
};

struct Stabilization {
  bool stable = false;
  bool value = false;
  size_t first_stable_k = 0;  // rung from which the value never changed
};

struct LadderReport {
  std::vector<RungRecord> rungs;
  bool unsat = false;
  size_t first_unsat_k = 0;
  // label -> (k, value) across SAT rungs mentioning it
  std::map<std::string, std::vector<std::pair<size_t, bool>>> history;
  // stable = suffix-constant corroborated by at least two rungs
  std::map<std::string, Stabilization> stabilization;
};

// Solves fragments k = step, 2*step, ..., k_max (k_max always included).
// Stops at the first UNSAT rung: monotone, it certifies the whole stream.
LadderReport ladder_solve(const InfiniteInstance& inst, size_t k_max, size_t step);

struct PrefixResult {
  bool exhausted = true;
  std::vector<std::pair<std::string, bool>> prefix;  // first m labels in order
};

// DFS over the 2^m prefix tree (FALSE branch first), pruning with
// assumption-solves against each ladder rung.  Rung solvers are built once
// and reused across candidates.
PrefixResult prefix_limit(const InfiniteInstance& inst, int m, size_t k_max, size_t step);

// Every surviving prefix, up to max_results.
std::vector<std::vector<bool>> surviving_prefixes(const InfiniteInstance& inst, int m,
                                                  size_t k_max, size_t step,
                                                  size_t max_results = 64);

std::string ladder_report_json(const LadderReport& rep);
std::string prefix_result_json(const PrefixResult& pr);

// ---- built-in families ----

// Strict total orders over N extending the natural order on an initial
// segment that grows with the stream.  Variables gt(i,j), enumerated by
// max(i,j); formulas per new element: facts, totality/asymmetry, then
// transitivity triples.
InfiniteInstance szpilrajn_nat();

// Countably many mutually acceptable disjoint pairs; formula i forces pair i
// matched (the no-blocking unit).
InfiniteInstance matching_disjoint_pairs();

// Dynamic parity-line market: growing windows [-T, T], variables
// matched(a,t) keyed by arrival, enumerated in first-mention order.
InfiniteInstance parity_line_stream();

// Concatenated truncations T = t_lo..t_hi of the no-finite-presence market,
// each encoded on its window [-T, -1]; shared labels matched(k,t).
InfiniteInstance no_finite_presence_stream(int t_lo, int t_hi);

// Growing grid resolution n_max = 1, 2, ... of the rationalization fragment.
InfiniteInstance rationalization_stream(Dataset ds, GridConfig base);

// Growing resolution n_max = 1, 2, ... of the stochastic-choice fragment.
InfiniteInstance stochastic_stream(StochDataset ds, int L, int n_cap = 10);

// P, trivia, ..., then not-P at index `flip`.
InfiniteInstance contradiction_stream(size_t flip);

// Registry for the CLI: nullopt-like empty domain if unknown.
InfiniteInstance builtin_family(const std::string& name, bool* found = nullptr);

}  // namespace lc
