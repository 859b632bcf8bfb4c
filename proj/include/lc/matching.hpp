#pragma once

// One-to-one marriage markets: stability encodings (sound and deliberately
// flawed variant), Gale-Shapley and exhaustive oracles, man-optimality,
// misreport checks.

#include <optional>
#include <string>
#include <vector>

#include "lc/logic.hpp"

namespace lc {

struct Market {
  std::vector<std::string> men, women;
  // Preference lists, most preferred first.  Unlisted partners are
  // unacceptable.  men_pref[m] holds woman indices, women_pref[w] man indices.
  std::vector<std::vector<int>> men_pref, women_pref;
};

bool validate_market(const Market& mk, std::string* why = nullptr);

// matching[m] = woman index or -1.
using Matching = std::vector<int>;

// Rank of w in m's list, or -1 if unacceptable (lower is better).
int man_rank(const Market& mk, int m, int w);
int woman_rank(const Market& mk, int w, int m);

// Individually rational + no blocking pair; blocking pairs reported.
bool is_stable(const Market& mk, const Matching& mu,
               std::vector<std::pair<int, int>>* blocking = nullptr);

// Deferred acceptance, proposers in registration order.
Matching gale_shapley(const Market& mk, bool men_propose = true);

// Exhaustive backtracking oracle (intended for <= 7x7 markets).
std::vector<Matching> enumerate_stable(const Market& mk);

struct MarketEncoding {
  VarPool pool;
  std::vector<Formula> formulas;
  std::vector<std::vector<VarId>> var;  // var[m][w] = matched(m,w)
};

// Sound encoding: at-most-one per side, unacceptability units, and the
// no-blocking implication (unmatched mutually acceptable pair forces a
// better partner on one side).
MarketEncoding encode_stable(const Market& mk);

// Flawed alternative: replaces the no-blocking implication with pairwise
// "not both matched across a blocking square" constraints.  Admits the
// all-FALSE assignment.
MarketEncoding encode_stable_flawed(const Market& mk);

// Sound encoding plus, for every man matched in some stable matching, a
// disjunction forcing a woman he weakly prefers to his best stable partner.
// Stable set computed by the exhaustive oracle.
MarketEncoding encode_man_optimal(const Market& mk);

Matching decode_matching(const std::vector<bool>& model, const MarketEncoding& enc);

struct ManipulationReport {
  bool improves = false;     // strict improvement for the misreporting man
  int truthful_match = -2;   // woman index or -1
  int misreport_match = -2;
};

// Outcome comparison (true preferences) of man-proposing deferred acceptance
// under a misreported list for `man`.
ManipulationReport check_manipulation(const Market& mk, int man,
                                      const std::vector<int>& misreport);

// Sweeps every ordered sublist of m's acceptable set as a misreport.
// Returns a strictly improving misreport if one exists.
std::optional<std::vector<int>> find_profitable_misreport(const Market& mk, int man);

}  // namespace lc
