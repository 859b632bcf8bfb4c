#pragma once

// Matching with couples and near-feasible quotas: hospitals may end up with
// capacity adjusted by at most 2 each.  Encoder over matched(d,h),
// matched(d,null) (couple members), quota(h,q); brute-force stability oracle.

#include <optional>
#include <string>
#include <vector>

#include "lc/logic.hpp"

namespace lc {

struct CouplesMarket {
  std::vector<std::string> doctors;
  std::vector<std::string> hospitals;
  std::vector<int> capacity;                    // target k_h
  std::vector<std::vector<int>> hospital_pref;  // ranked doctor indices, best first

  std::vector<int> singles;                   // doctor indices
  std::vector<std::vector<int>> single_pref;  // parallel to singles

  std::vector<std::pair<int, int>> couples;  // (c1, c2) doctor indices
  // parallel to couples; entries (h1, h2), -1 meaning null; never (-1,-1)
  std::vector<std::vector<std::pair<int, int>>> couple_pref;
};

// Checks indices, disjointness of singles/couples, downward closure of
// couple lists ((h,h') ranked implies (h,-1) and (-1,h') ranked, strictly
// below it).
bool validate_couples_market(const CouplesMarket& mkt, std::string* why = nullptr);

struct CouplesOutcome {
  std::vector<int> assign;  // per doctor: hospital index or -1
  std::vector<int> quota;   // per hospital: realized k*_h

  bool operator==(const CouplesOutcome&) const = default;
  auto operator<=>(const CouplesOutcome&) const = default;
};

// Stability subject to realized quotas (responsive hospital choice).
bool is_stable_couples(const CouplesMarket& mkt, const CouplesOutcome& out,
                       std::string* why = nullptr);

// All stable outcomes with every quota within [max(0,k-2), k+2].
std::vector<CouplesOutcome> enumerate_stable_couples(const CouplesMarket& mkt);

// Stable outcomes minimizing total quota deviation; empty if none exist in
// the +-2 box.
std::vector<CouplesOutcome> near_feasible_stable(const CouplesMarket& mkt);

struct CouplesEncoding {
  VarPool pool;
  std::vector<Formula> formulas;
  std::vector<std::vector<VarId>> matched;  // [doctor][hospital]
  std::vector<VarId> matched_null;          // per doctor; -1 for singles
  std::vector<std::vector<VarId>> quota;    // [hospital][q - qmin]
  std::vector<int> qmin;                    // per hospital
};

CouplesEncoding encode_couples(const CouplesMarket& mkt);

std::optional<CouplesOutcome> decode_couples(const std::vector<bool>& model,
                                             const CouplesEncoding& enc);

// Projection variables defining an outcome (assignment + quota, no null
// shorthand vars).
std::vector<VarId> couples_projection(const CouplesEncoding& enc);

}  // namespace lc
