#pragma once

// Stochastic choice: ARSP checking, finite random-utility rationalization by
// exact linear feasibility, marginal-consistency checks, and the
// probability-grid fragment encoding.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lc/logic.hpp"
#include "lc/rat.hpp"

namespace lc {

struct StochEntry {
  std::vector<int> menu;  // distinct item indices
  int choice = 0;         // member of menu
  Rat prob;
};

struct StochDataset {
  std::vector<std::string> items;  // names; indices are positions
  std::vector<StochEntry> entries;
};

bool validate_stoch(const StochDataset& ds, std::string* why = nullptr);

struct ArspReport {
  bool holds = true;
  std::vector<int> witness;  // entry indices of a violating sequence
  Rat sum, best;             // sequence probability mass vs permutation max
};

// Checks every multiset sequence of entries up to length max_len against the
// permutation maximum over the union of its menus (exhaustive).
ArspReport check_arsp(const StochDataset& ds, int max_len);

struct OrderDistribution {
  std::vector<std::vector<int>> orders;  // permutations, best first
  std::vector<Rat> weight;
};

// McFadden-Richter linear feasibility over all |X|! orders.
std::optional<OrderDistribution> rationalize_finite(const StochDataset& ds);

Rat choice_prob_of(const OrderDistribution& od, const std::vector<int>& menu, int choice);

// p(a1..ak): probability the order ranks a1 above a2 above ... above ak.
using MarginalFamily = std::map<std::vector<int>, Rat>;

MarginalFamily marginals_of(const OrderDistribution& od, int n_items, int L);

struct MarginalCheck {
  bool ok = true;
  std::string violation;
};

// Singleton-one plus every insertion identity whose tuples are all stored.
MarginalCheck check_marginal_consistency(const MarginalFamily& mf, int n_items);

struct StochEncoding {
  VarPool pool;
  std::vector<Formula> formulas;
  int n_items = 0, n_max = 0, L = 0;
  std::vector<std::vector<int>> tuples;  // distinct-item tuples, length 1..L
  std::map<std::vector<int>, int> tuple_index;
  // onehot[t][n-1][j]: prob(n, tuple t, j * 2^-n)
  std::vector<std::vector<std::vector<VarId>>> onehot;
  // guaranteed-detection slack per dataset entry at the finest level
  std::vector<Rat> entry_slack;
};

// Formula types per level: existence, value uniqueness (via binary-digit
// channeling), refinement coherence, singleton-one, insertion identities
// within (m+1) grid steps for an m-tuple, and rationalization of recorded
// probabilities within (|A|-1)! grid steps.  Sums are computed by auxiliary
// ripple-carry adders.  Finest level is registered first.
StochEncoding encode_stoch_fragment(const StochDataset& ds, int n_max, int L);

// Finest-level values of every tuple.
MarginalFamily decode_marginals(const std::vector<bool>& model, const StochEncoding& enc);

// Values at a specific level (for coherence measurements).
MarginalFamily decode_marginals_at(const std::vector<bool>& model, const StochEncoding& enc,
                                   int level);

}  // namespace lc
