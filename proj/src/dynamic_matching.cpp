#include "lc/dynamic_matching.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "lc/matching.hpp"

namespace lc {

bool man_present(const DynamicMarket& mkt, int man, int t) {
  const DynMan& m = mkt.men[(size_t)man];
  return m.arrival <= t && t < m.departure;
}

static int dyn_man_rank(const DynamicMarket& mkt, int man, int w) {
  const auto& pref = mkt.men[(size_t)man].pref;
  for (size_t i = 0; i < pref.size(); ++i)
    if (pref[i] == w) return (int)i;
  return -1;
}

static int dyn_woman_rank(const DynamicMarket& mkt, int w, int man) {
  const auto& pref = mkt.women_pref[(size_t)w];
  for (size_t i = 0; i < pref.size(); ++i)
    if (pref[i] == man) return (int)i;
  return -1;
}

bool validate_dynamic_market(const DynamicMarket& mkt, std::string* why) {
  auto fail = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  if (mkt.n_women < 0) return fail("negative woman count");
  if ((int)mkt.women_pref.size() != mkt.n_women) return fail("women_pref size mismatch");
  for (size_t m = 0; m < mkt.men.size(); ++m) {
    const DynMan& man = mkt.men[m];
    if (man.arrival >= man.departure) return fail("man with empty presence interval");
    std::set<int> seen;
    for (int w : man.pref) {
      if (w < 0 || w >= mkt.n_women) return fail("man lists unknown woman");
      if (!seen.insert(w).second) return fail("duplicate woman in man's list");
    }
  }
  for (int w = 0; w < mkt.n_women; ++w) {
    std::set<int> seen;
    for (int m : mkt.women_pref[(size_t)w]) {
      if (m < 0 || m >= (int)mkt.men.size()) return fail("woman lists unknown man");
      if (!seen.insert(m).second) return fail("duplicate man in woman's list");
    }
  }
  for (size_t m = 0; m < mkt.men.size(); ++m)
    for (int w : mkt.men[m].pref)
      if (dyn_woman_rank(mkt, w, (int)m) < 0) return fail("one-sided acceptability");
  for (int w = 0; w < mkt.n_women; ++w)
    for (int m : mkt.women_pref[(size_t)w])
      if (dyn_man_rank(mkt, m, w) < 0) return fail("one-sided acceptability");
  return true;
}

bool is_stable_subject_to_tenure(const DynamicMarket& mkt, const Chronology& ch, int t_lo,
                                 int t_hi, std::vector<TenureViolation>* violations) {
  auto flag = [&](const std::string& s, int t) {
    if (violations) violations->push_back({s, t});
  };
  bool ok = true;
  if (t_lo < ch.t_lo || t_hi > ch.t_hi) throw std::invalid_argument("window outside chronology");
  for (int t = ch.t_lo; t <= ch.t_hi; ++t) {
    std::set<int> used;
    for (int w = 0; w < mkt.n_women; ++w) {
      int m = ch.at(w, t);
      if (m < 0) continue;
      if (m >= (int)mkt.men.size()) throw std::invalid_argument("unknown man in chronology");
      if (!used.insert(m).second) {
        flag("man matched to two women", t);
        ok = false;
      }
      if (!man_present(mkt, m, t)) {
        flag("matched man off market", t);
        ok = false;
      }
      if (dyn_man_rank(mkt, m, w) < 0) {
        flag("unacceptable pair matched", t);
        ok = false;
      }
    }
  }
  // tenure: a man matched at t and still present at t+1 keeps a weakly
  // better woman
  for (int t = std::max(t_lo - 1, ch.t_lo); t < t_hi; ++t) {
    for (int w = 0; w < mkt.n_women; ++w) {
      int m = ch.at(w, t);
      if (m < 0 || !man_present(mkt, m, t + 1)) continue;
      int next = -1;
      for (int w2 = 0; w2 < mkt.n_women; ++w2)
        if (ch.at(w2, t + 1) == m) next = w2;
      if (next < 0 || dyn_man_rank(mkt, m, next) > dyn_man_rank(mkt, m, w)) {
        flag("tenure violated: man demoted", t + 1);
        ok = false;
      }
    }
  }
  // blocking pairs, with t-1 incumbency protection when t-1 is covered
  for (int t = t_lo; t <= t_hi; ++t) {
    for (size_t m = 0; m < mkt.men.size(); ++m) {
      if (!man_present(mkt, (int)m, t)) continue;
      int his = -1;
      for (int w = 0; w < mkt.n_women; ++w)
        if (ch.at(w, t) == (int)m) his = w;
      for (int w : mkt.men[m].pref) {
        if (his >= 0 && dyn_man_rank(mkt, (int)m, his) <= dyn_man_rank(mkt, (int)m, w)) break;
        int her = ch.at(w, t);
        if (her >= 0 && dyn_woman_rank(mkt, w, her) <= dyn_woman_rank(mkt, w, (int)m)) continue;
        if (her >= 0 && ch.covers(t - 1) && ch.at(w, t - 1) == her) continue;  // incumbent
        flag("blocking pair", t);
        ok = false;
      }
    }
  }
  return ok;
}

Chronology pereyra_forward(const DynamicMarket& mkt, int t0, int t1) {
  for (const DynMan& m : mkt.men)
    if (m.arrival < t0) throw std::invalid_argument("arrival before horizon start");
  Chronology ch;
  ch.t_lo = t0;
  ch.t_hi = t1;
  ch.assign.assign((size_t)(t1 - t0 + 1), std::vector<int>((size_t)mkt.n_women, -1));
  std::vector<int> prev((size_t)mkt.n_women, -1);  // woman -> man matched last period
  for (int t = t0; t <= t1; ++t) {
    std::vector<int> local;  // global indices of men on market
    for (size_t m = 0; m < mkt.men.size(); ++m)
      if (man_present(mkt, (int)m, t)) local.push_back((int)m);
    std::vector<int> to_local((size_t)mkt.men.size(), -1);
    for (size_t i = 0; i < local.size(); ++i) to_local[(size_t)local[i]] = (int)i;
    Market stat;
    for (int g : local) {
      stat.men.push_back("m" + std::to_string(g));
      stat.men_pref.push_back(mkt.men[(size_t)g].pref);
    }
    for (int w = 0; w < mkt.n_women; ++w) {
      stat.women.push_back("w" + std::to_string(w));
      std::vector<int> lst;
      int inc = prev[(size_t)w];
      if (inc >= 0 && man_present(mkt, inc, t)) lst.push_back(to_local[(size_t)inc]);
      for (int g : mkt.women_pref[(size_t)w]) {
        int l = to_local[(size_t)g];
        if (l >= 0 && g != inc) lst.push_back(l);
      }
      stat.women_pref.push_back(lst);
    }
    Matching mu = gale_shapley(stat, true);
    std::fill(prev.begin(), prev.end(), -1);
    for (size_t i = 0; i < mu.size(); ++i)
      if (mu[i] >= 0) {
        ch.assign[(size_t)(t - t0)][(size_t)mu[i]] = local[i];
        prev[(size_t)mu[i]] = local[i];
      }
  }
  return ch;
}

DynEncoding encode_dynamic_window(const DynamicMarket& mkt, int t_lo, int t_hi) {
  if (t_lo > t_hi) throw std::invalid_argument("empty window");
  DynEncoding enc;
  enc.t_lo = t_lo;
  enc.t_hi = t_hi;
  auto has = [&](int m, int w, int t) { return enc.var.count({m, w, t}) > 0; };
  auto at = [&](int m, int w, int t) { return Formula::atom(enc.var.at({m, w, t})); };
  for (int t = t_lo - 1; t <= t_hi; ++t) {
    for (size_t m = 0; m < mkt.men.size(); ++m) {
      if (!man_present(mkt, (int)m, t)) continue;
      if (t == t_lo - 1 && !man_present(mkt, (int)m, t_lo)) continue;  // history: straddlers only
      for (int w = 0; w < mkt.n_women; ++w) {
        std::ostringstream os;
        os << "matched(" << m << "," << w << "," << t << ")";
        VarId v = enc.pool.add(os.str());
        enc.var[{(int)m, w, t}] = v;
        enc.all_vars.push_back(v);
      }
    }
  }
  // unacceptability units
  for (auto const& [key, v] : enc.var) {
    auto [m, w, t] = key;
    if (dyn_man_rank(mkt, m, w) < 0) enc.formulas.push_back(Formula::neg(Formula::atom(v)));
  }
  // at-most-one per side and period (history period included for soundness)
  for (int t = t_lo - 1; t <= t_hi; ++t) {
    if (mkt.n_women == 0) continue;
    std::vector<int> men_t;
    for (size_t m = 0; m < mkt.men.size(); ++m)
      if (has((int)m, 0, t)) men_t.push_back((int)m);
    for (int m : men_t)
      for (int w1 = 0; w1 < mkt.n_women; ++w1)
        for (int w2 = w1 + 1; w2 < mkt.n_women; ++w2)
          enc.formulas.push_back(
              Formula::neg(Formula::conj({at(m, w1, t), at(m, w2, t)})));
    for (int w = 0; w < mkt.n_women; ++w)
      for (size_t i = 0; i < men_t.size(); ++i)
        for (size_t j = i + 1; j < men_t.size(); ++j)
          enc.formulas.push_back(
              Formula::neg(Formula::conj({at(men_t[i], w, t), at(men_t[j], w, t)})));
  }
  // tenure across consecutive periods, including out of the history period
  for (int t = t_lo - 1; t < t_hi; ++t) {
    for (size_t m = 0; m < mkt.men.size(); ++m) {
      if (!has((int)m, 0, t) || !man_present(mkt, (int)m, t + 1)) continue;
      for (int w : mkt.men[m].pref) {
        std::vector<Formula> better;
        for (int w2 : mkt.men[m].pref) {
          better.push_back(at((int)m, w2, t + 1));
          if (w2 == w) break;
        }
        enc.formulas.push_back(Formula::implies(at((int)m, w, t), Formula::disj(better)));
      }
    }
  }
  // no blocking: better woman for him, better man for her, or her partner is
  // a continuing incumbent
  for (int t = t_lo; t <= t_hi; ++t) {
    for (size_t m = 0; m < mkt.men.size(); ++m) {
      if (!man_present(mkt, (int)m, t)) continue;
      for (int w : mkt.men[m].pref) {
        std::vector<Formula> branches;
        for (int w2 : mkt.men[m].pref) {
          branches.push_back(at((int)m, w2, t));
          if (w2 == w) break;
        }
        for (int m2 : mkt.women_pref[(size_t)w]) {
          if (m2 == (int)m) break;
          if (has(m2, w, t)) branches.push_back(at(m2, w, t));
        }
        for (size_t m2 = 0; m2 < mkt.men.size(); ++m2)
          if (has((int)m2, w, t - 1) && has((int)m2, w, t))
            branches.push_back(Formula::conj({at((int)m2, w, t - 1), at((int)m2, w, t)}));
        enc.formulas.push_back(Formula::disj(branches));
      }
    }
  }
  return enc;
}

std::optional<Chronology> decode_chronology(const std::vector<bool>& model,
                                            const DynamicMarket& mkt, const DynEncoding& enc) {
  Chronology ch;
  ch.t_lo = enc.t_lo - 1;
  ch.t_hi = enc.t_hi;
  ch.assign.assign((size_t)(ch.t_hi - ch.t_lo + 1), std::vector<int>((size_t)mkt.n_women, -1));
  for (auto const& [key, v] : enc.var) {
    auto [m, w, t] = key;
    if ((size_t)v >= model.size() || !model[(size_t)v]) continue;
    int& slot = ch.assign[(size_t)(t - ch.t_lo)][(size_t)w];
    if (slot >= 0) return std::nullopt;
    slot = m;
  }
  for (int t = ch.t_lo; t <= ch.t_hi; ++t) {
    std::set<int> used;
    for (int w = 0; w < mkt.n_women; ++w) {
      int m = ch.at(w, t);
      if (m >= 0 && !used.insert(m).second) return std::nullopt;
    }
  }
  return ch;
}

PresenceCheck check_finite_presence(const DynFamily& fam, int t_lo, int t_hi, int budget) {
  PresenceCheck pc;
  for (int t = t_lo; t < t_hi; ++t) {
    auto men = fam.men_between(t, t + 1, budget);
    int straddle = 0;
    for (auto const& [key, m] : men)
      if (m.arrival <= t && t + 1 < m.departure) ++straddle;
    if ((int)men.size() > budget || straddle > budget) {
      pc.ok = false;
      pc.unknown = (int)men.size() > budget;
      pc.offending_time = t;
      return pc;
    }
  }
  return pc;
}

Materialized materialize_window(const DynFamily& fam, int t_lo, int t_hi, int cap) {
  auto men = fam.men_between(t_lo, t_hi, cap);
  if ((int)men.size() > cap) throw std::runtime_error("window population exceeds cap");
  std::sort(men.begin(), men.end(),
            [](auto const& a, auto const& b) { return a.first < b.first; });
  Materialized mat;
  mat.market.n_women = fam.n_women;
  for (auto const& [key, m] : men) {
    mat.keys.push_back(key);
    mat.market.men.push_back(m);
  }
  for (int w = 0; w < fam.n_women; ++w) {
    std::vector<int> order;
    for (size_t i = 0; i < mat.keys.size(); ++i)
      if (!mat.market.men[i].pref.empty() &&
          std::count(mat.market.men[i].pref.begin(), mat.market.men[i].pref.end(), w))
        order.push_back((int)i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return fam.rank(w, mat.keys[(size_t)a]) < fam.rank(w, mat.keys[(size_t)b]);
    });
    mat.market.women_pref.push_back(order);
  }
  return mat;
}

DynFamily parity_line(bool nonnegative_arrivals) {
  DynFamily fam;
  fam.n_women = 1;
  fam.name = nonnegative_arrivals ? "parity_line_nonneg" : "parity_line";
  fam.men_between = [nonnegative_arrivals](int t0, int t1, int cap) {
    std::vector<std::pair<long, DynMan>> out;
    // m_a present on {a, a+1}; intersects [t0, t1] iff a in [t0-1, t1]
    int lo = nonnegative_arrivals ? std::max(0, t0 - 1) : t0 - 1;
    for (int a = lo; a <= t1 && (int)out.size() <= cap; ++a)
      out.push_back({(long)a, DynMan{{0}, a, a + 2}});
    return out;
  };
  fam.rank = [](int, long key) { return -key; };  // later arrivals preferred
  return fam;
}

DynFamily no_finite_presence(int truncation) {
  DynFamily fam;
  fam.n_women = 1;
  fam.name = "no_finite_presence(" + std::to_string(truncation) + ")";
  fam.men_between = [truncation](int t0, int t1, int cap) {
    std::vector<std::pair<long, DynMan>> out;
    if (t0 >= 0) return out;
    (void)t1;
    // m_k present on [-k, 0); intersects any window reaching below 0 iff k >= -t1'
    int from = std::max(1, -std::min(t1, -1));
    for (int k = from; k <= truncation && (int)out.size() <= cap; ++k)
      out.push_back({(long)k, DynMan{{0}, -k, 0}});
    return out;
  };
  fam.rank = [](int, long key) { return -key; };  // earlier arrivals preferred
  return fam;
}

std::string chronology_json(const Chronology& ch) {
  std::ostringstream os;
  os << "{ \"t_lo\": " << ch.t_lo << ", \"t_hi\": " << ch.t_hi << ", \"assign\": {";
  bool first_t = true;
  for (int t = ch.t_lo; t <= ch.t_hi; ++t) {
    if (!first_t) os << ",";
    first_t = false;
    os << " \"" << t << "\": [";
    for (size_t w = 0; w < ch.assign[(size_t)(t - ch.t_lo)].size(); ++w)
      os << (w ? ", " : "") << ch.assign[(size_t)(t - ch.t_lo)][w];
    os << "]";
  }
  os << " } }";
  return os.str();
}

}  // namespace lc
