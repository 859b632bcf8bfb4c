#pragma once

// Finite Szpilrajn fragments: encode extension of a strict partial order to
// a strict total order, with combinatorial oracles.

#include <optional>
#include <string>
#include <vector>

#include "lc/logic.hpp"

namespace lc {

struct PartialOrder {
  std::vector<std::string> elems;               // registration order
  std::vector<std::pair<int, int>> pairs;       // (a, b) meaning a > b
};

// Strict partial order: irreflexive, transitive (and hence acyclic).
bool validate_partial_order(const PartialOrder& po, std::string* why = nullptr);

// Adds all pairs implied by transitivity.
PartialOrder transitive_closure(const PartialOrder& po);

struct OrderEncoding {
  VarPool pool;
  std::vector<Formula> formulas;
  std::vector<std::vector<VarId>> gt;  // gt[a][b], a != b
};

// Formula families, in emission order: base facts gt(a,b) per input pair;
// totality (once per unordered pair); asymmetry (once per unordered pair);
// transitivity (every ordered triple of distinct elements).
OrderEncoding encode_extension(const PartialOrder& po);

// Deterministic topological extension: repeatedly takes the maximal element
// with the lowest registration index.  Returns elements from greatest to
// least.
std::vector<int> kahn_extension(const PartialOrder& po);

// All linear extensions (greatest to least), lexicographic by choice index.
std::vector<std::vector<int>> enumerate_linear_extensions(const PartialOrder& po);

// Reads a total order (greatest to least) out of a model; empty optional if
// the gt assignment is not a strict total order.
std::optional<std::vector<int>> decode_total_order(const std::vector<bool>& model,
                                                   const OrderEncoding& enc);

}  // namespace lc
