#pragma once

// Tenure-constrained dynamic matching: chronologies, stability subject to
// tenure, the Pereyra forward algorithm, window encodings, and the two
// canonical generator families.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lc/logic.hpp"

namespace lc {

struct DynMan {
  std::vector<int> pref;  // acceptable women, best first
  int arrival = 0;
  int departure = 0;  // on market at t iff arrival <= t < departure
};

struct DynamicMarket {
  int n_women = 0;
  std::vector<DynMan> men;
  std::vector<std::vector<int>> women_pref;  // acceptable men, best first
};

bool man_present(const DynamicMarket& mkt, int man, int t);
bool validate_dynamic_market(const DynamicMarket& mkt, std::string* why = nullptr);

// assign[t - t_lo][w] = man index or -1
struct Chronology {
  int t_lo = 0, t_hi = -1;
  std::vector<std::vector<int>> assign;

  int at(int w, int t) const { return assign[(size_t)(t - t_lo)][(size_t)w]; }
  bool covers(int t) const { return t >= t_lo && t <= t_hi; }
};

struct TenureViolation {
  std::string what;
  int t = 0;
};

// Tenure (continuing men never demoted) plus no blocking pair whose woman's
// current partner is not her protected t-1 incumbent.  Conditions referencing
// times before the chronology's domain are skipped; a window time whose
// predecessor lies inside the domain uses it as history.
bool is_stable_subject_to_tenure(const DynamicMarket& mkt, const Chronology& ch, int t_lo,
                                 int t_hi, std::vector<TenureViolation>* violations = nullptr);

// Iterated man-optimal matching with incumbent promotion, over [t0, t1].
Chronology pereyra_forward(const DynamicMarket& mkt, int t0, int t1);

struct DynEncoding {
  VarPool pool;
  std::vector<Formula> formulas;
  int t_lo = 0, t_hi = -1;  // window; history vars live at t_lo - 1
  std::map<std::tuple<int, int, int>, VarId> var;  // (man, woman, t)
  std::vector<VarId> all_vars;                     // registration order
};

// Formula types: per-time at-most-one on both sides, unacceptability units,
// tenure implications (including across the window's lower boundary), and the
// three-branch no-blocking implication (better woman, better man, incumbent
// continuation).  Men straddling the boundary get free history variables
// matched(m, w, t_lo - 1).
DynEncoding encode_dynamic_window(const DynamicMarket& mkt, int t_lo, int t_hi);

// Chronology over [t_lo - 1, t_hi]; nullopt if some man or woman is matched
// twice at one time.
std::optional<Chronology> decode_chronology(const std::vector<bool>& model,
                                            const DynamicMarket& mkt, const DynEncoding& enc);

// Generator family: men intersecting a time range, capped enumeration.
struct DynFamily {
  int n_women = 1;
  std::string name;
  // men with presence intersecting [t0, t1], at most cap+1 of them,
  // keyed for identity across calls
  std::function<std::vector<std::pair<long, DynMan>>(int t0, int t1, int cap)> men_between;
  // woman w ranks man keys (lower value = better)
  std::function<long(int, long)> rank;
};

struct PresenceCheck {
  bool ok = true;
  bool unknown = false;
  int offending_time = 0;
};

// Every consecutive pair in the window straddled by at most `budget` men.
PresenceCheck check_finite_presence(const DynFamily& fam, int t_lo, int t_hi, int budget);

struct Materialized {
  DynamicMarket market;
  std::vector<long> keys;  // per man
};

// Finite window market: all men present somewhere in [t_lo, t_hi].
Materialized materialize_window(const DynFamily& fam, int t_lo, int t_hi, int cap);

// One woman; man m_t arrives at t, departs at t+2; she prefers later arrivals.
DynFamily parity_line(bool nonnegative_arrivals = false);

// One woman; men m_t with arrival -t, departure 0, for 1 <= t <= truncation;
// she prefers earlier arrivals.  The untruncated family violates finite
// presence.
DynFamily no_finite_presence(int truncation);

std::string chronology_json(const Chronology& ch);

}  // namespace lc
