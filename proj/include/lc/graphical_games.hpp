#pragma once

// Graphical games: discretization planning, eps-best-response sets, the
// eps-Nash grid encoding, and verification.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lc/logic.hpp"
#include "lc/rat.hpp"

namespace lc {

struct GraphicalGame {
  int n_players = 0;
  std::vector<std::vector<int>> neighbors;             // N(i), sorted, contains i
  std::vector<std::vector<std::string>> strategies;    // S_i labels
  // payoff[i]: strategy indices in N(i) order -> value
  std::vector<std::map<std::vector<int>, Rat>> payoff;
};

bool validate_game(const GraphicalGame& g, std::string* why = nullptr);

using MixedStrategy = std::vector<Rat>;  // over S_i
using MixedProfile = std::vector<MixedStrategy>;

// Exact multilinear expected payoff of player i (only neighbors matter).
Rat expected_payoff(const GraphicalGame& g, int player, const MixedProfile& profile);

struct DiscretizationPlan {
  Rat eps;
  std::vector<Rat> lipschitz;   // L_i
  std::vector<Rat> delta_hat;   // eps / (2 L_i); 0 denotes unbounded (constant payoffs)
  std::vector<Rat> delta;       // min over neighbors
  std::vector<long> denom;      // even lattice denominator per player
  std::vector<std::vector<MixedStrategy>> grid;
};

// L_i = payoff span * sum of neighbor strategy counts; delta_hat_i =
// eps/(2 L_i); delta_i = min over N(i); grid = simplex lattice points with an
// even denominator 2*ceil(1/(2 delta_i)) (mesh <= delta_i, contains pures and
// the uniform coin for binary strategy sets).  Players whose whole
// neighborhood has constant payoffs fall back to pure strategies only.
DiscretizationPlan plan_discretization(const GraphicalGame& g, const Rat& eps);

// Largest-remainder rounding of sigma onto player's lattice.
MixedStrategy grid_round(const DiscretizationPlan& plan, int player, const MixedStrategy& sigma);

// Grid strategies of `player` within eps of the exact best response (pure
// maximum) against the neighbor profile.
std::vector<MixedStrategy> eps_best_responses(const GraphicalGame& g, int player,
                                              const MixedProfile& profile, const Rat& eps,
                                              const DiscretizationPlan& plan);

struct NashEncoding {
  VarPool pool;
  std::vector<Formula> formulas;
  DiscretizationPlan plan;
  std::vector<std::vector<VarId>> plays;  // plays[i][k]: i plays grid point k
};

// Per-player existence and uniqueness over the grid, plus, for every
// combination of neighbor grid choices, implication into the eps-best-response
// disjunction.
NashEncoding encode_eps_nash(const GraphicalGame& g, const Rat& eps,
                             const DiscretizationPlan& plan);

std::optional<MixedProfile> decode_profile(const std::vector<bool>& model,
                                           const NashEncoding& enc);

struct NashCheck {
  bool ok = true;
  Rat worst_gain;
  int worst_player = -1;
};

// Best pure deviation per player; ok iff every gain <= eps.
NashCheck verify_eps_nash(const GraphicalGame& g, const MixedProfile& profile, const Rat& eps);

std::string profile_json(const GraphicalGame& g, const MixedProfile& profile);

}  // namespace lc
