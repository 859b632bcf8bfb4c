#include "lc/matching.hpp"

#include <algorithm>
#include <set>

namespace lc {

bool validate_market(const Market& mk, std::string* why) {
  int M = static_cast<int>(mk.men.size()), W = static_cast<int>(mk.women.size());
  if (mk.men_pref.size() != mk.men.size() || mk.women_pref.size() != mk.women.size()) {
    if (why) *why = "preference list count mismatch";
    return false;
  }
  for (int m = 0; m < M; ++m) {
    std::set<int> seen;
    for (int w : mk.men_pref[static_cast<size_t>(m)]) {
      if (w < 0 || w >= W || !seen.insert(w).second) {
        if (why) *why = "bad list for man " + mk.men[static_cast<size_t>(m)];
        return false;
      }
    }
  }
  for (int w = 0; w < W; ++w) {
    std::set<int> seen;
    for (int m : mk.women_pref[static_cast<size_t>(w)]) {
      if (m < 0 || m >= M || !seen.insert(m).second) {
        if (why) *why = "bad list for woman " + mk.women[static_cast<size_t>(w)];
        return false;
      }
    }
  }
  return true;
}

int man_rank(const Market& mk, int m, int w) {
  const auto& lst = mk.men_pref[static_cast<size_t>(m)];
  for (size_t i = 0; i < lst.size(); ++i)
    if (lst[i] == w) return static_cast<int>(i);
  return -1;
}

int woman_rank(const Market& mk, int w, int m) {
  const auto& lst = mk.women_pref[static_cast<size_t>(w)];
  for (size_t i = 0; i < lst.size(); ++i)
    if (lst[i] == m) return static_cast<int>(i);
  return -1;
}

static bool mutually_acceptable(const Market& mk, int m, int w) {
  return man_rank(mk, m, w) >= 0 && woman_rank(mk, w, m) >= 0;
}

bool is_stable(const Market& mk, const Matching& mu,
               std::vector<std::pair<int, int>>* blocking) {
  int M = static_cast<int>(mk.men.size()), W = static_cast<int>(mk.women.size());
  std::vector<int> wmatch(static_cast<size_t>(W), -1);
  for (int m = 0; m < M; ++m) {
    int w = mu[static_cast<size_t>(m)];
    if (w < 0) continue;
    if (w >= W || wmatch[static_cast<size_t>(w)] != -1) return false;  // not a matching
    wmatch[static_cast<size_t>(w)] = m;
    if (!mutually_acceptable(mk, m, w)) return false;  // not individually rational
  }
  bool ok = true;
  for (int m = 0; m < M; ++m)
    for (int w = 0; w < W; ++w) {
      if (!mutually_acceptable(mk, m, w)) continue;
      int rm = man_rank(mk, m, w);
      int cur_m = mu[static_cast<size_t>(m)];
      bool m_prefers = cur_m < 0 || rm < man_rank(mk, m, cur_m);
      int cur_w = wmatch[static_cast<size_t>(w)];
      bool w_prefers = cur_w < 0 || woman_rank(mk, w, m) < woman_rank(mk, w, cur_w);
      if (m_prefers && w_prefers) {
        ok = false;
        if (blocking)
          blocking->emplace_back(m, w);
        else
          return false;
      }
    }
  return ok;
}

Matching gale_shapley(const Market& mk, bool men_propose) {
  Market flipped;
  const Market* use = &mk;
  if (!men_propose) {
    flipped.men = mk.women;
    flipped.women = mk.men;
    flipped.men_pref = mk.women_pref;
    flipped.women_pref = mk.men_pref;
    use = &flipped;
  }
  const Market& m = *use;
  int M = static_cast<int>(m.men.size()), W = static_cast<int>(m.women.size());
  std::vector<size_t> next(static_cast<size_t>(M), 0);
  std::vector<int> wmatch(static_cast<size_t>(W), -1);
  std::vector<int> free;  // stack; lowest index proposes first
  for (int i = M - 1; i >= 0; --i) free.push_back(i);
  std::sort(free.begin(), free.end(), std::greater<int>());
  while (!free.empty()) {
    int man = free.back();
    const auto& lst = m.men_pref[static_cast<size_t>(man)];
    if (next[static_cast<size_t>(man)] >= lst.size()) {
      free.pop_back();
      continue;  // exhausted: stays single
    }
    int w = lst[next[static_cast<size_t>(man)]++];
    if (woman_rank(m, w, man) < 0) continue;  // she finds him unacceptable
    int cur = wmatch[static_cast<size_t>(w)];
    if (cur == -1) {
      wmatch[static_cast<size_t>(w)] = man;
      free.pop_back();
    } else if (woman_rank(m, w, man) < woman_rank(m, w, cur)) {
      wmatch[static_cast<size_t>(w)] = man;
      free.pop_back();
      free.push_back(cur);
      std::sort(free.begin(), free.end(), std::greater<int>());
    }
  }
  if (men_propose) {
    Matching mu(static_cast<size_t>(M), -1);
    for (int w = 0; w < W; ++w)
      if (wmatch[static_cast<size_t>(w)] >= 0) mu[static_cast<size_t>(wmatch[static_cast<size_t>(w)])] = w;
    return mu;
  }
  // flipped: wmatch maps original men <- women
  Matching mu(mk.men.size(), -1);
  for (int man_orig = 0; man_orig < static_cast<int>(mk.men.size()); ++man_orig)
    if (wmatch[static_cast<size_t>(man_orig)] >= 0)
      mu[static_cast<size_t>(man_orig)] = wmatch[static_cast<size_t>(man_orig)];
  return mu;
}

static void enum_stable_rec(const Market& mk, int m, Matching& mu, std::vector<bool>& taken,
                            std::vector<Matching>& out) {
  int M = static_cast<int>(mk.men.size());
  if (m == M) {
    if (is_stable(mk, mu)) out.push_back(mu);
    return;
  }
  mu[static_cast<size_t>(m)] = -1;
  enum_stable_rec(mk, m + 1, mu, taken, out);
  for (int w : mk.men_pref[static_cast<size_t>(m)]) {
    if (taken[static_cast<size_t>(w)] || woman_rank(mk, w, m) < 0) continue;
    taken[static_cast<size_t>(w)] = true;
    mu[static_cast<size_t>(m)] = w;
    enum_stable_rec(mk, m + 1, mu, taken, out);
    mu[static_cast<size_t>(m)] = -1;
    taken[static_cast<size_t>(w)] = false;
  }
}

std::vector<Matching> enumerate_stable(const Market& mk) {
  Matching mu(mk.men.size(), -1);
  std::vector<bool> taken(mk.women.size(), false);
  std::vector<Matching> out;
  enum_stable_rec(mk, 0, mu, taken, out);
  return out;
}

static MarketEncoding encode_base(const Market& mk) {
  MarketEncoding enc;
  int M = static_cast<int>(mk.men.size()), W = static_cast<int>(mk.women.size());
  enc.var.assign(static_cast<size_t>(M), std::vector<VarId>(static_cast<size_t>(W), -1));
  for (int m = 0; m < M; ++m)
    for (int w = 0; w < W; ++w)
      enc.var[static_cast<size_t>(m)][static_cast<size_t>(w)] =
          enc.pool.add("matched(" + mk.men[static_cast<size_t>(m)] + "," + mk.women[static_cast<size_t>(w)] + ")");
  auto X = [&](int m, int w) { return Formula::atom(enc.var[static_cast<size_t>(m)][static_cast<size_t>(w)]); };
  // at most one woman per man
  for (int m = 0; m < M; ++m)
    for (int w = 0; w < W; ++w)
      for (int w2 = 0; w2 < W; ++w2)
        if (w != w2) enc.formulas.push_back(Formula::implies(X(m, w), Formula::neg(X(m, w2))));
  // at most one man per woman
  for (int w = 0; w < W; ++w)
    for (int m = 0; m < M; ++m)
      for (int m2 = 0; m2 < M; ++m2)
        if (m != m2) enc.formulas.push_back(Formula::implies(X(m, w), Formula::neg(X(m2, w))));
  // unacceptable pairs are units
  for (int m = 0; m < M; ++m)
    for (int w = 0; w < W; ++w)
      if (!mutually_acceptable(mk, m, w)) enc.formulas.push_back(Formula::neg(X(m, w)));
  return enc;
}

MarketEncoding encode_stable(const Market& mk) {
  MarketEncoding enc = encode_base(mk);
  int M = static_cast<int>(mk.men.size()), W = static_cast<int>(mk.women.size());
  auto X = [&](int m, int w) { return Formula::atom(enc.var[static_cast<size_t>(m)][static_cast<size_t>(w)]); };
  // no blocking: unmatched mutually acceptable pair implies a strictly
  // better partner for m or for w
  for (int m = 0; m < M; ++m)
    for (int w = 0; w < W; ++w) {
      if (!mutually_acceptable(mk, m, w)) continue;
      std::vector<Formula> better;
      int rm = man_rank(mk, m, w);
      for (int i = 0; i < rm; ++i) {
        int w2 = mk.men_pref[static_cast<size_t>(m)][static_cast<size_t>(i)];
        if (mutually_acceptable(mk, m, w2)) better.push_back(X(m, w2));
      }
      int rw = woman_rank(mk, w, m);
      for (int i = 0; i < rw; ++i) {
        int m2 = mk.women_pref[static_cast<size_t>(w)][static_cast<size_t>(i)];
        if (mutually_acceptable(mk, m2, w)) better.push_back(X(m2, w));
      }
      enc.formulas.push_back(Formula::implies(Formula::neg(X(m, w)), Formula::disj(std::move(better))));
    }
  return enc;
}

MarketEncoding encode_stable_flawed(const Market& mk) {
  MarketEncoding enc = encode_base(mk);
  int M = static_cast<int>(mk.men.size()), W = static_cast<int>(mk.women.size());
  auto X = [&](int m, int w) { return Formula::atom(enc.var[static_cast<size_t>(m)][static_cast<size_t>(w)]); };
  // flawed (8'): for every blocking square, forbid the pair of matches that
  // would be destabilized.  Vacuously satisfied by the all-FALSE assignment.
  for (int m = 0; m < M; ++m)
    for (int w = 0; w < W; ++w) {
      if (!mutually_acceptable(mk, m, w)) continue;
      for (int w2 = 0; w2 < W; ++w2) {
        if (w2 == w || man_rank(mk, m, w2) < 0) continue;
        if (man_rank(mk, m, w) >= man_rank(mk, m, w2)) continue;  // need m: w > w2
        for (int m2 = 0; m2 < M; ++m2) {
          if (m2 == m || woman_rank(mk, w, m2) < 0) continue;
          if (woman_rank(mk, w, m) >= woman_rank(mk, w, m2)) continue;  // need w: m > m2
          enc.formulas.push_back(Formula::neg(Formula::conj({X(m, w2), X(m2, w)})));
        }
      }
    }
  return enc;
}

MarketEncoding encode_man_optimal(const Market& mk) {
  MarketEncoding enc = encode_stable(mk);
  auto X = [&](int m, int w) { return Formula::atom(enc.var[static_cast<size_t>(m)][static_cast<size_t>(w)]); };
  auto stable = enumerate_stable(mk);
  int M = static_cast<int>(mk.men.size());
  for (int m = 0; m < M; ++m) {
    int best = -1;  // best stable partner rank for m
    for (const auto& mu : stable) {
      int w = mu[static_cast<size_t>(m)];
      if (w < 0) continue;
      int r = man_rank(mk, m, w);
      if (best == -1 || r < best) best = r;
    }
    if (best == -1) continue;  // unmatched in every stable matching
    std::vector<Formula> weakly_better;
    for (int i = 0; i <= best; ++i)
      weakly_better.push_back(X(m, mk.men_pref[static_cast<size_t>(m)][static_cast<size_t>(i)]));
    enc.formulas.push_back(Formula::disj(std::move(weakly_better)));
  }
  return enc;
}

Matching decode_matching(const std::vector<bool>& model, const MarketEncoding& enc) {
  Matching mu(enc.var.size(), -1);
  for (size_t m = 0; m < enc.var.size(); ++m)
    for (size_t w = 0; w < enc.var[m].size(); ++w) {
      VarId v = enc.var[m][w];
      if (static_cast<size_t>(v) < model.size() && model[static_cast<size_t>(v)]) mu[m] = static_cast<int>(w);
    }
  return mu;
}

ManipulationReport check_manipulation(const Market& mk, int man,
                                      const std::vector<int>& misreport) {
  ManipulationReport rep;
  Matching truthful = gale_shapley(mk, true);
  Market lied = mk;
  lied.men_pref[static_cast<size_t>(man)] = misreport;
  Matching lying = gale_shapley(lied, true);
  rep.truthful_match = truthful[static_cast<size_t>(man)];
  rep.misreport_match = lying[static_cast<size_t>(man)];
  // compare by TRUE preferences
  int rt = rep.truthful_match < 0 ? -1 : man_rank(mk, man, rep.truthful_match);
  int rl = rep.misreport_match < 0 ? -1 : man_rank(mk, man, rep.misreport_match);
  if (rl == -1)
    rep.improves = false;  // unmatched (or matched to someone truly unacceptable)
  else
    rep.improves = (rt == -1) || rl < rt;
  return rep;
}

static void sublists(const std::vector<int>& items, std::vector<int>& cur,
                     std::vector<bool>& used, std::vector<std::vector<int>>& out) {
  out.push_back(cur);
  for (size_t i = 0; i < items.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    cur.push_back(items[i]);
    sublists(items, cur, used, out);
    cur.pop_back();
    used[i] = false;
  }
}

std::optional<std::vector<int>> find_profitable_misreport(const Market& mk, int man) {
  const auto& truth = mk.men_pref[static_cast<size_t>(man)];
  std::vector<std::vector<int>> all;
  std::vector<int> cur;
  std::vector<bool> used(truth.size(), false);
  sublists(truth, cur, used, all);  // every ordered sublist, including empty
  for (const auto& lst : all) {
    if (check_manipulation(mk, man, lst).improves) return lst;
  }
  return std::nullopt;
}

}  // namespace lc
