#pragma once

// Revealed preference: GARP check, Afriat inequalities over exact rationals,
// and grid-utility rationalization fragments.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "lc/logic.hpp"
#include "lc/rat.hpp"

namespace lc {

struct Observation {
  std::vector<Rat> price;   // strictly positive
  std::vector<Rat> bundle;  // nonnegative
};
using Dataset = std::vector<Observation>;

bool validate_dataset(const Dataset& ds, std::string* why = nullptr);

struct GarpReport {
  bool consistent = true;
  // on violation: observation indices forming a revealed-preference cycle
  // with a strict edge; cycle[0] == cycle.back()
  std::vector<int> cycle;
};

GarpReport check_garp(const Dataset& ds);

struct AfriatResult {
  bool feasible = false;
  std::vector<Rat> u, lambda;
};

// Afriat inequalities u_j <= u_i + lambda_i p_i.(x_j - x_i), lambda_i >= 1,
// solved exactly.
AfriatResult afriat_rationalize(const Dataset& ds);

struct GridConfig {
  int n_max = 4;
  int rational_pairs = 0;  // K: how many enumerated rational pairs to add
  bool midpoints = true;   // quasiconcavity witnesses for all point pairs
  std::vector<std::vector<Rat>> queries;
};

struct GridEncoding {
  VarPool pool;
  std::vector<Formula> formulas;
  std::vector<std::vector<Rat>> points;
  int n_max = 0;
  int n_strict = 0;  // first level whose grid can order the whole point set
  // vars[n-1][point][j]: utility(n, point, j * 2^-n)
  std::vector<std::vector<std::vector<VarId>>> vars;
  std::vector<std::array<int, 3>> qc_triples;      // (i, j, midpoint)
  std::vector<std::pair<int, int>> rational_pair;  // (points idx of q1, q2); k = pos+1
};

// Formula types per level: existence, uniqueness, refinement coherence,
// quasiconcavity over stored midpoint witnesses, monotonicity over
// comparable pairs, strict gaps over enumerated rational pairs (levels
// n > k), and rationalization implications per observation (strict on the
// grid, for strictly cheaper bundles, from level n_strict up).
GridEncoding encode_rationalization_fragment(const Dataset& ds, const GridConfig& cfg);

// Utility values (one per point) at the given level; nullopt if the model
// does not pick exactly one value per point.
std::optional<std::vector<Rat>> decode_grid_utility(const std::vector<bool>& model,
                                                    const GridEncoding& enc, int level);

// Semantic check of a decoded utility at the finest level.
bool verify_rationalization(const Dataset& ds, const GridEncoding& enc,
                            const std::vector<Rat>& vals, std::string* why = nullptr);

std::string grid_utility_json(const GridEncoding& enc, const std::vector<Rat>& vals);

}  // namespace lc
