#pragma once

// Trading networks with quasilinear utilities: demand enumeration, price
// bounds, substitutability spot-checks, the eps-Walrasian grid encoding, and
// refinement to exact equilibrium on finite instances.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lc/logic.hpp"
#include "lc/rat.hpp"

namespace lc {

struct Trade {
  int object = 0;  // equal to its index in the trade list
  int seller = 0;
  int buyer = 0;
};

struct TradingNetwork {
  int n_agents = 0;
  std::vector<Trade> trades;
  // utility[i]: bundle (sorted object-id list over incident objects) -> value;
  // missing bundles are -infinity
  std::vector<std::map<std::vector<int>, Rat>> utility;
};

// Objects agent i is a party to, ascending.
std::vector<int> incident_objects(const TradingNetwork& net, int agent);

// Endowment of i: incident objects i sells.
std::vector<int> endowment(const TradingNetwork& net, int agent);

bool validate_network(const TradingNetwork& net, std::string* why = nullptr);

// Quasilinear payoff of holding `bundle` at `prices`; nullopt when the value
// is -infinity.
std::optional<Rat> payoff(const TradingNetwork& net, int agent, const std::vector<int>& bundle,
                          const std::map<int, Rat>& prices);

// All bundles within eps of the payoff maximum; eps = 0 is exact demand.
std::vector<std::vector<int>> demand(const TradingNetwork& net, int agent,
                                     const std::map<int, Rat>& prices, const Rat& eps);

// Smallest positive integer strictly above every finite marginal difference
// of o for both endpoint agents.
int compute_price_bound(const TradingNetwork& net, int object);

struct SubstCheck {
  bool ok = true;
  std::string counterexample;
};

// Tests the substitutability definition over all ordered pairs p <= p' from
// the sample with singleton demands (partial certificate).
SubstCheck check_substitutable(const TradingNetwork& net, int agent,
                               const std::vector<std::map<int, Rat>>& sample);

// Integer price vectors over O_i with coordinates in [-H, H].
std::vector<std::map<int, Rat>> integer_price_sample(const TradingNetwork& net, int agent, int H);

struct PriceGrid {
  int n = 1;               // resolution: admissible prices are multiples of 1/n
  std::vector<int> bound;  // H_o per object
};

PriceGrid build_grid(const TradingNetwork& net, int n);

struct MarketOutcome {
  std::vector<Rat> price;   // per object
  std::vector<bool> bought;  // per object: consumed by buyer (else kept by seller)
};

std::vector<int> outcome_bundle(const TradingNetwork& net, const MarketOutcome& out, int agent);

struct NetworkEncoding {
  VarPool pool;
  std::vector<Formula> formulas;
  PriceGrid grid;
  // price_var[o][k]: price(o) = (k - n*H_o) / n
  std::vector<std::vector<VarId>> price_var;
  std::vector<VarId> consumes_buyer;  // per object: buyer consumes o
};

// Formulae: per-object price existence and uniqueness on the grid, the
// buyer-xor-seller clearing biconditional, and per-agent demand implications
// for every full price combination over its incident objects, with per-agent
// slack |O_i| / n.
NetworkEncoding encode_eps_walrasian(const TradingNetwork& net, const PriceGrid& grid);

std::optional<MarketOutcome> decode_outcome(const std::vector<bool>& model,
                                            const NetworkEncoding& enc);

// Per-agent membership of the allocated bundle in its eps_i-demand.
bool verify_eps_walrasian(const TradingNetwork& net, const MarketOutcome& out,
                          const std::vector<Rat>& eps, std::string* why = nullptr);

// Exhaustive oracle: all allocations admitting exact equilibrium prices
// (box-bounded LP feasibility), with midpoint prices.
std::vector<MarketOutcome> exact_equilibria(const TradingNetwork& net);

struct RefineResult {
  bool converged = false;
  MarketOutcome outcome;
  std::string report;
};

// Solves the encoding along the resolution sequence, requires the allocation
// to stabilize, then fixes exact prices by sequential min/max LP midpoints
// and verifies with eps = 0.
RefineResult refine_to_exact(const TradingNetwork& net, const std::vector<int>& n_sequence);

std::string outcome_json(const TradingNetwork& net, const MarketOutcome& out);

}  // namespace lc
