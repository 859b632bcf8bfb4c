#include "lc/couples.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace lc {

namespace {

struct Ctx {
  const CouplesMarket& mkt;
  std::vector<int> couple_of;   // doctor -> couple index or -1
  std::vector<int> member_of;   // doctor -> 0/1 within couple
  std::vector<int> single_of;   // doctor -> index into singles or -1

  explicit Ctx(const CouplesMarket& m) : mkt(m) {
    size_t D = m.doctors.size();
    couple_of.assign(D, -1);
    member_of.assign(D, -1);
    single_of.assign(D, -1);
    for (size_t c = 0; c < m.couples.size(); ++c) {
      couple_of[static_cast<size_t>(m.couples[c].first)] = static_cast<int>(c);
      member_of[static_cast<size_t>(m.couples[c].first)] = 0;
      couple_of[static_cast<size_t>(m.couples[c].second)] = static_cast<int>(c);
      member_of[static_cast<size_t>(m.couples[c].second)] = 1;
    }
    for (size_t s = 0; s < m.singles.size(); ++s) single_of[static_cast<size_t>(m.singles[s])] = static_cast<int>(s);
  }

  int hosp_rank(int h, int d) const {
    const auto& lst = mkt.hospital_pref[static_cast<size_t>(h)];
    for (size_t i = 0; i < lst.size(); ++i)
      if (lst[i] == d) return static_cast<int>(i);
    return -1;
  }
  int single_rank(int s, int h) const {
    const auto& lst = mkt.single_pref[static_cast<size_t>(s)];
    for (size_t i = 0; i < lst.size(); ++i)
      if (lst[i] == h) return static_cast<int>(i);
    return -1;
  }
  int couple_rank(int c, std::pair<int, int> p) const {
    const auto& lst = mkt.couple_pref[static_cast<size_t>(c)];
    for (size_t i = 0; i < lst.size(); ++i)
      if (lst[i] == p) return static_cast<int>(i);
    return -1;
  }
  // can doctor d ever be assigned to hospital h?
  bool feasible_at(int d, int h) const {
    if (hosp_rank(h, d) < 0) return false;
    if (single_of[static_cast<size_t>(d)] >= 0) return single_rank(single_of[static_cast<size_t>(d)], h) >= 0;
    int c = couple_of[static_cast<size_t>(d)];
    int side = member_of[static_cast<size_t>(d)];
    for (const auto& p : mkt.couple_pref[static_cast<size_t>(c)])
      if ((side == 0 ? p.first : p.second) == h) return true;
    return false;
  }
};

std::vector<std::vector<int>> subsets_of_size(const std::vector<int>& items, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > static_cast<int>(items.size())) return out;
  std::vector<int> idx(static_cast<size_t>(k));
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == k) {
      std::vector<int> s;
      for (int i : idx) s.push_back(items[static_cast<size_t>(i)]);
      out.push_back(std::move(s));
      return;
    }
    for (int i = start; i < static_cast<int>(items.size()); ++i) {
      idx[static_cast<size_t>(depth)] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return out;
}

}  // namespace

bool validate_couples_market(const CouplesMarket& mkt, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  size_t D = mkt.doctors.size(), H = mkt.hospitals.size();
  if (mkt.capacity.size() != H || mkt.hospital_pref.size() != H) return fail("hospital data mismatch");
  if (mkt.single_pref.size() != mkt.singles.size()) return fail("single data mismatch");
  if (mkt.couple_pref.size() != mkt.couples.size()) return fail("couple data mismatch");
  std::vector<int> role(D, 0);
  for (int d : mkt.singles) {
    if (d < 0 || d >= static_cast<int>(D) || role[static_cast<size_t>(d)]++) return fail("bad single");
  }
  for (auto [a, b] : mkt.couples) {
    if (a < 0 || b < 0 || a >= static_cast<int>(D) || b >= static_cast<int>(D) || a == b) return fail("bad couple");
    if (role[static_cast<size_t>(a)]++ || role[static_cast<size_t>(b)]++) return fail("doctor in two roles");
  }
  for (size_t d = 0; d < D; ++d)
    if (!role[d]) return fail("doctor without role: " + mkt.doctors[d]);
  for (size_t h = 0; h < H; ++h) {
    if (mkt.capacity[h] < 0) return fail("negative capacity");
    std::set<int> seen;
    for (int d : mkt.hospital_pref[h])
      if (d < 0 || d >= static_cast<int>(D) || !seen.insert(d).second) return fail("bad hospital list");
  }
  for (const auto& lst : mkt.single_pref) {
    std::set<int> seen;
    for (int h : lst)
      if (h < 0 || h >= static_cast<int>(H) || !seen.insert(h).second) return fail("bad single list");
  }
  for (size_t c = 0; c < mkt.couples.size(); ++c) {
    const auto& lst = mkt.couple_pref[c];
    std::set<std::pair<int, int>> seen;
    std::map<std::pair<int, int>, int> rank;
    for (size_t i = 0; i < lst.size(); ++i) {
      auto p = lst[i];
      if (p.first == -1 && p.second == -1) return fail("couple ranks (null,null)");
      if (p.first < -1 || p.second < -1 || p.first >= static_cast<int>(H) || p.second >= static_cast<int>(H))
        return fail("bad couple pair");
      if (!seen.insert(p).second) return fail("duplicate couple pair");
      rank[p] = static_cast<int>(i);
    }
    // downward closure: projections ranked, strictly below the full pair
    for (const auto& [p, r] : rank) {
      if (p.first >= 0 && p.second >= 0) {
        auto it1 = rank.find({p.first, -1});
        auto it2 = rank.find({-1, p.second});
        if (it1 == rank.end() || it2 == rank.end()) return fail("couple list not downward closed");
        if (it1->second < r || it2->second < r) return fail("projection ranked above full pair");
      }
    }
  }
  return true;
}

bool is_stable_couples(const CouplesMarket& mkt, const CouplesOutcome& out, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  Ctx ctx(mkt);
  size_t D = mkt.doctors.size(), H = mkt.hospitals.size();
  if (out.assign.size() != D || out.quota.size() != H) return fail("shape mismatch");
  for (size_t h = 0; h < H; ++h) {
    int k = mkt.capacity[h], q = out.quota[h];
    if (q < std::max(0, k - 2) || q > k + 2) return fail("quota outside +-2 box");
  }
  std::vector<std::vector<int>> at(H);
  for (size_t d = 0; d < D; ++d) {
    int h = out.assign[d];
    if (h < -1 || h >= static_cast<int>(H)) return fail("bad assignment");
    if (h >= 0) {
      if (ctx.hosp_rank(h, static_cast<int>(d)) < 0) return fail("hospital does not rank assigned doctor");
      at[static_cast<size_t>(h)].push_back(static_cast<int>(d));
    }
  }
  for (size_t h = 0; h < H; ++h)
    if (static_cast<int>(at[h].size()) > out.quota[h]) return fail("capacity exceeded");
  // individual rationality
  for (size_t s = 0; s < mkt.singles.size(); ++s) {
    int d = mkt.singles[s];
    int h = out.assign[static_cast<size_t>(d)];
    if (h >= 0 && ctx.single_rank(static_cast<int>(s), h) < 0) return fail("single at unranked hospital");
  }
  for (size_t c = 0; c < mkt.couples.size(); ++c) {
    auto [c1, c2] = mkt.couples[c];
    std::pair<int, int> cur{out.assign[static_cast<size_t>(c1)], out.assign[static_cast<size_t>(c2)]};
    if (cur != std::pair<int, int>{-1, -1} && ctx.couple_rank(static_cast<int>(c), cur) < 0)
      return fail("couple at unranked pair");
  }
  auto better_at = [&](int h, int d, const std::set<int>& exclude) {
    int r = ctx.hosp_rank(h, d);
    int cnt = 0;
    for (int d2 : at[static_cast<size_t>(h)]) {
      if (d2 == d || exclude.count(d2)) continue;
      int r2 = ctx.hosp_rank(h, d2);
      if (r2 >= 0 && r2 < r) cnt++;
    }
    return cnt;
  };
  // type 1: single + hospital
  for (size_t s = 0; s < mkt.singles.size(); ++s) {
    int d = mkt.singles[s];
    int cur = out.assign[static_cast<size_t>(d)];
    int cur_rank = cur < 0 ? INT32_MAX : ctx.single_rank(static_cast<int>(s), cur);
    const auto& lst = mkt.single_pref[s];
    for (size_t i = 0; i < lst.size() && static_cast<int>(i) < cur_rank; ++i) {
      int h = lst[i];
      if (ctx.hosp_rank(h, d) < 0) continue;
      if (better_at(h, d, {}) < out.quota[static_cast<size_t>(h)])
        return fail("blocking single " + mkt.doctors[static_cast<size_t>(d)]);
    }
  }
  // types 2 and 3: couples
  for (size_t c = 0; c < mkt.couples.size(); ++c) {
    auto [c1, c2] = mkt.couples[c];
    std::pair<int, int> cur{out.assign[static_cast<size_t>(c1)], out.assign[static_cast<size_t>(c2)]};
    int cur_rank = cur == std::pair<int, int>{-1, -1} ? INT32_MAX : ctx.couple_rank(static_cast<int>(c), cur);
    const auto& lst = mkt.couple_pref[c];
    for (size_t i = 0; i < lst.size() && static_cast<int>(i) < cur_rank; ++i) {
      auto [h1, h2] = lst[i];
      if (h1 >= 0 && h1 == h2) {
        // both to the same hospital
        int ra = ctx.hosp_rank(h1, c1), rb = ctx.hosp_rank(h1, c2);
        if (ra < 0 || rb < 0) continue;
        int worse = ra > rb ? c1 : c2;
        if (better_at(h1, worse, {c1, c2}) <= out.quota[static_cast<size_t>(h1)] - 2)
          return fail("blocking couple (same hospital)");
        continue;
      }
      bool ok1 = true, ok2 = true;
      if (h1 >= 0) {
        if (ctx.hosp_rank(h1, c1) < 0)
          ok1 = false;
        else
          ok1 = better_at(h1, c1, {c1}) < out.quota[static_cast<size_t>(h1)];
      }
      if (h2 >= 0) {
        if (ctx.hosp_rank(h2, c2) < 0)
          ok2 = false;
        else
          ok2 = better_at(h2, c2, {c2}) < out.quota[static_cast<size_t>(h2)];
      }
      if (ok1 && ok2) return fail("blocking couple (split)");
    }
  }
  return true;
}

std::vector<CouplesOutcome> enumerate_stable_couples(const CouplesMarket& mkt) {
  Ctx ctx(mkt);
  size_t H = mkt.hospitals.size();
  std::vector<CouplesOutcome> out;
  // options per single / couple
  std::vector<std::vector<int>> sopts(mkt.singles.size());
  for (size_t s = 0; s < mkt.singles.size(); ++s) {
    sopts[s].push_back(-1);
    for (int h : mkt.single_pref[s])
      if (ctx.hosp_rank(h, mkt.singles[s]) >= 0) sopts[s].push_back(h);
  }
  std::vector<std::vector<std::pair<int, int>>> copts(mkt.couples.size());
  for (size_t c = 0; c < mkt.couples.size(); ++c) {
    copts[c].push_back({-1, -1});
    for (auto [h1, h2] : mkt.couple_pref[c]) {
      if (h1 >= 0 && ctx.hosp_rank(h1, mkt.couples[c].first) < 0) continue;
      if (h2 >= 0 && ctx.hosp_rank(h2, mkt.couples[c].second) < 0) continue;
      copts[c].push_back({h1, h2});
    }
  }
  std::vector<int> quota(H);
  std::function<void(size_t)> quotas = [&](size_t h) {
    if (h == H) {
      CouplesOutcome o;
      o.quota = quota;
      o.assign.assign(mkt.doctors.size(), -1);
      std::function<void(size_t)> singles = [&](size_t s) {
        if (s == mkt.singles.size()) {
          std::function<void(size_t)> couples = [&](size_t c) {
            if (c == mkt.couples.size()) {
              if (is_stable_couples(mkt, o)) out.push_back(o);
              return;
            }
            for (auto [h1, h2] : copts[c]) {
              o.assign[static_cast<size_t>(mkt.couples[c].first)] = h1;
              o.assign[static_cast<size_t>(mkt.couples[c].second)] = h2;
              couples(c + 1);
            }
            o.assign[static_cast<size_t>(mkt.couples[c].first)] = -1;
            o.assign[static_cast<size_t>(mkt.couples[c].second)] = -1;
          };
          couples(0);
          return;
        }
        for (int hh : sopts[s]) {
          o.assign[static_cast<size_t>(mkt.singles[s])] = hh;
          singles(s + 1);
        }
        o.assign[static_cast<size_t>(mkt.singles[s])] = -1;
      };
      singles(0);
      return;
    }
    int k = mkt.capacity[h];
    for (int q = std::max(0, k - 2); q <= k + 2; ++q) {
      quota[h] = q;
      quotas(h + 1);
    }
  };
  quotas(0);
  return out;
}

std::vector<CouplesOutcome> near_feasible_stable(const CouplesMarket& mkt) {
  auto all = enumerate_stable_couples(mkt);
  long best = -1;
  std::vector<CouplesOutcome> out;
  for (const auto& o : all) {
    long dev = 0;
    for (size_t h = 0; h < mkt.hospitals.size(); ++h) dev += std::abs(o.quota[h] - mkt.capacity[h]);
    if (best == -1 || dev < best) {
      best = dev;
      out.clear();
    }
    if (dev == best) out.push_back(o);
  }
  return out;
}

CouplesEncoding encode_couples(const CouplesMarket& mkt) {
  Ctx ctx(mkt);
  CouplesEncoding enc;
  size_t D = mkt.doctors.size(), H = mkt.hospitals.size();
  enc.matched.assign(D, std::vector<VarId>(H, -1));
  enc.matched_null.assign(D, -1);
  for (size_t d = 0; d < D; ++d)
    for (size_t h = 0; h < H; ++h)
      enc.matched[d][h] = enc.pool.add("matched(" + mkt.doctors[d] + "," + mkt.hospitals[h] + ")");
  for (size_t d = 0; d < D; ++d)
    if (ctx.couple_of[d] >= 0)
      enc.matched_null[d] = enc.pool.add("matched(" + mkt.doctors[d] + ",null)");
  enc.quota.assign(H, {});
  enc.qmin.assign(H, 0);
  for (size_t h = 0; h < H; ++h) {
    int k = mkt.capacity[h];
    enc.qmin[h] = std::max(0, k - 2);
    for (int q = enc.qmin[h]; q <= k + 2; ++q)
      enc.quota[h].push_back(enc.pool.add("quota(" + mkt.hospitals[h] + "," + std::to_string(q) + ")"));
  }
  auto M = [&](int d, int h) { return Formula::atom(enc.matched[static_cast<size_t>(d)][static_cast<size_t>(h)]); };
  auto MN = [&](int d) { return Formula::atom(enc.matched_null[static_cast<size_t>(d)]); };
  auto Q = [&](int h, int q) {
    return Formula::atom(enc.quota[static_cast<size_t>(h)][static_cast<size_t>(q - enc.qmin[static_cast<size_t>(h)])]);
  };
  auto& F = enc.formulas;

  // 1. quota existence
  for (size_t h = 0; h < H; ++h) {
    std::vector<Formula> alts;
    for (int q = enc.qmin[h]; q <= mkt.capacity[h] + 2; ++q) alts.push_back(Q(static_cast<int>(h), q));
    F.push_back(Formula::disj(std::move(alts)));
  }
  // 2. quota uniqueness
  for (size_t h = 0; h < H; ++h)
    for (int q = enc.qmin[h]; q <= mkt.capacity[h] + 2; ++q)
      for (int q2 = q + 1; q2 <= mkt.capacity[h] + 2; ++q2)
        F.push_back(Formula::neg(Formula::conj({Q(static_cast<int>(h), q), Q(static_cast<int>(h), q2)})));
  // 3. at most one hospital per doctor
  for (size_t d = 0; d < D; ++d)
    for (size_t h = 0; h < H; ++h)
      for (size_t h2 = 0; h2 < H; ++h2)
        if (h != h2)
          F.push_back(Formula::implies(M(static_cast<int>(d), static_cast<int>(h)),
                                       Formula::neg(M(static_cast<int>(d), static_cast<int>(h2)))));
  // 4. capacity under realized quota
  for (size_t h = 0; h < H; ++h) {
    for (int q = enc.qmin[h]; q <= mkt.capacity[h] + 2; ++q) {
      for (const auto& sub : subsets_of_size(mkt.hospital_pref[h], q + 1)) {
        std::vector<Formula> conj{Q(static_cast<int>(h), q)};
        for (int d : sub) conj.push_back(M(d, static_cast<int>(h)));
        F.push_back(Formula::neg(Formula::conj(std::move(conj))));
      }
    }
  }
  // 5. individual-rationality units
  for (size_t d = 0; d < D; ++d)
    for (size_t h = 0; h < H; ++h)
      if (!ctx.feasible_at(static_cast<int>(d), static_cast<int>(h)))
        F.push_back(Formula::neg(M(static_cast<int>(d), static_cast<int>(h))));
  // 6. couple joint individual rationality over actual hospital pairs
  for (size_t c = 0; c < mkt.couples.size(); ++c) {
    auto [c1, c2] = mkt.couples[c];
    for (size_t h1 = 0; h1 < H; ++h1)
      for (size_t h2 = 0; h2 < H; ++h2)
        if (ctx.couple_rank(static_cast<int>(c), {static_cast<int>(h1), static_cast<int>(h2)}) < 0)
          F.push_back(Formula::neg(Formula::conj({M(c1, static_cast<int>(h1)), M(c2, static_cast<int>(h2))})));
  }
  // 7a / 7b. null shorthand pinned when the partner is placed
  for (size_t c = 0; c < mkt.couples.size(); ++c) {
    auto [c1, c2] = mkt.couples[c];
    const auto& lst = mkt.couple_pref[c];
    std::set<int> firsts, seconds;
    for (auto [h1, h2] : lst) {
      if (h1 >= 0) firsts.insert(h1);
      if (h2 >= 0) seconds.insert(h2);
    }
    for (int h : firsts) {
      std::vector<Formula> partner_spots;
      for (auto [h1, h2] : lst)
        if (h1 == h && h2 >= 0) partner_spots.push_back(M(c2, h2));
      F.push_back(Formula::implies(
          M(c1, h), Formula::iff(MN(c2), Formula::neg(Formula::disj(std::move(partner_spots))))));
    }
    for (int h : seconds) {
      std::vector<Formula> partner_spots;
      for (auto [h1, h2] : lst)
        if (h2 == h && h1 >= 0) partner_spots.push_back(M(c1, h1));
      F.push_back(Formula::implies(
          M(c2, h), Formula::iff(MN(c1), Formula::neg(Formula::disj(std::move(partner_spots))))));
    }
  }
  // 8. no blocking by a single doctor
  for (size_t s = 0; s < mkt.singles.size(); ++s) {
    int d = mkt.singles[s];
    const auto& lst = mkt.single_pref[s];
    for (size_t i = 0; i < lst.size(); ++i) {
      int h = lst[i];
      int rh = ctx.hosp_rank(h, d);
      if (rh < 0) continue;
      std::vector<int> better_docs(mkt.hospital_pref[static_cast<size_t>(h)].begin(),
                                   mkt.hospital_pref[static_cast<size_t>(h)].begin() + rh);
      for (int q = enc.qmin[static_cast<size_t>(h)]; q <= mkt.capacity[static_cast<size_t>(h)] + 2; ++q) {
        std::vector<Formula> escapes;
        for (size_t j = 0; j < i; ++j) escapes.push_back(M(d, lst[j]));  // strictly better hospital
        for (const auto& tup : subsets_of_size(better_docs, q)) {
          std::vector<Formula> conj;
          for (int d2 : tup) conj.push_back(M(d2, h));
          escapes.push_back(Formula::conj(std::move(conj)));
        }
        F.push_back(Formula::implies(Formula::conj({Q(h, q), Formula::neg(M(d, h))}),
                                     Formula::disj(std::move(escapes))));
      }
    }
  }
  // couples: better-assignment escape disjuncts for list position i
  auto couple_better = [&](size_t c, size_t i) {
    auto [c1, c2] = mkt.couples[c];
    std::vector<Formula> out;
    for (size_t j = 0; j < i; ++j) {
      auto [b1, b2] = mkt.couple_pref[c][j];
      std::vector<Formula> conj;
      conj.push_back(b1 >= 0 ? M(c1, b1) : MN(c1));
      conj.push_back(b2 >= 0 ? M(c2, b2) : MN(c2));
      out.push_back(Formula::conj(std::move(conj)));
    }
    return out;
  };
  auto tuple_escapes = [&](int h, const std::vector<int>& docs, int size, std::vector<Formula>& into) {
    for (const auto& tup : subsets_of_size(docs, size)) {
      std::vector<Formula> conj;
      for (int d2 : tup) conj.push_back(M(d2, h));
      into.push_back(Formula::conj(std::move(conj)));
    }
  };
  for (size_t c = 0; c < mkt.couples.size(); ++c) {
    auto [c1, c2] = mkt.couples[c];
    const auto& lst = mkt.couple_pref[c];
    for (size_t i = 0; i < lst.size(); ++i) {
      auto [h1, h2] = lst[i];
      if (h1 >= 0 && h1 == h2) {
        // 10. both members at the same hospital
        int ra = ctx.hosp_rank(h1, c1), rb = ctx.hosp_rank(h1, c2);
        if (ra < 0 || rb < 0) continue;
        int worse_rank = std::max(ra, rb);
        std::vector<int> better_docs;
        for (int j = 0; j < worse_rank; ++j) {
          int d2 = mkt.hospital_pref[static_cast<size_t>(h1)][static_cast<size_t>(j)];
          if (d2 != c1 && d2 != c2) better_docs.push_back(d2);
        }
        for (int q = enc.qmin[static_cast<size_t>(h1)]; q <= mkt.capacity[static_cast<size_t>(h1)] + 2; ++q) {
          if (q == 0) continue;  // a blocked pair cannot fit anyway
          std::vector<Formula> escapes = couple_better(c, i);
          tuple_escapes(h1, better_docs, q - 1, escapes);
          F.push_back(Formula::implies(
              Formula::conj({Q(h1, q), Formula::neg(Formula::conj({M(c1, h1), M(c2, h1)}))}),
              Formula::disj(std::move(escapes))));
        }
        continue;
      }
      // 9 / 9a / 9b. distinct (possibly null) hospitals
      if (h1 >= 0 && ctx.hosp_rank(h1, c1) < 0) continue;  // c1 never admitted: no block
      if (h2 >= 0 && ctx.hosp_rank(h2, c2) < 0) continue;
      std::vector<int> better1, better2;
      if (h1 >= 0) {
        int r = ctx.hosp_rank(h1, c1);
        for (int j = 0; j < r; ++j) {
          int d2 = mkt.hospital_pref[static_cast<size_t>(h1)][static_cast<size_t>(j)];
          if (d2 != c1) better1.push_back(d2);
        }
      }
      if (h2 >= 0) {
        int r = ctx.hosp_rank(h2, c2);
        for (int j = 0; j < r; ++j) {
          int d2 = mkt.hospital_pref[static_cast<size_t>(h2)][static_cast<size_t>(j)];
          if (d2 != c2) better2.push_back(d2);
        }
      }
      auto target_pair = Formula::conj({h1 >= 0 ? M(c1, h1) : MN(c1), h2 >= 0 ? M(c2, h2) : MN(c2)});
      auto emit = [&](std::optional<int> q1, std::optional<int> q2) {
        std::vector<Formula> ante{Formula::neg(target_pair)};
        if (q1) ante.insert(ante.begin(), Q(h1, *q1));
        if (q2) ante.insert(ante.begin() + (q1 ? 1 : 0), Q(h2, *q2));
        std::vector<Formula> escapes = couple_better(c, i);
        if (q1) tuple_escapes(h1, better1, *q1, escapes);
        if (q2) tuple_escapes(h2, better2, *q2, escapes);
        F.push_back(Formula::implies(Formula::conj(std::move(ante)), Formula::disj(std::move(escapes))));
      };
      if (h1 >= 0 && h2 >= 0) {
        for (int q1 = enc.qmin[static_cast<size_t>(h1)]; q1 <= mkt.capacity[static_cast<size_t>(h1)] + 2; ++q1)
          for (int q2 = enc.qmin[static_cast<size_t>(h2)]; q2 <= mkt.capacity[static_cast<size_t>(h2)] + 2; ++q2)
            emit(q1, q2);
      } else if (h1 >= 0) {
        for (int q1 = enc.qmin[static_cast<size_t>(h1)]; q1 <= mkt.capacity[static_cast<size_t>(h1)] + 2; ++q1)
          emit(q1, std::nullopt);
      } else {
        for (int q2 = enc.qmin[static_cast<size_t>(h2)]; q2 <= mkt.capacity[static_cast<size_t>(h2)] + 2; ++q2)
          emit(std::nullopt, q2);
      }
    }
  }
  return enc;
}

std::optional<CouplesOutcome> decode_couples(const std::vector<bool>& model,
                                             const CouplesEncoding& enc) {
  CouplesOutcome out;
  size_t D = enc.matched.size(), H = enc.quota.size();
  out.assign.assign(D, -1);
  out.quota.assign(H, -1);
  auto val = [&](VarId v) { return static_cast<size_t>(v) < model.size() && model[static_cast<size_t>(v)]; };
  for (size_t d = 0; d < D; ++d)
    for (size_t h = 0; h < H; ++h)
      if (val(enc.matched[d][h])) {
        if (out.assign[d] != -1) return std::nullopt;
        out.assign[d] = static_cast<int>(h);
      }
  for (size_t h = 0; h < H; ++h) {
    for (size_t qi = 0; qi < enc.quota[h].size(); ++qi)
      if (val(enc.quota[h][qi])) {
        if (out.quota[h] != -1) return std::nullopt;
        out.quota[h] = enc.qmin[h] + static_cast<int>(qi);
      }
    if (out.quota[h] == -1) return std::nullopt;
  }
  return out;
}

std::vector<VarId> couples_projection(const CouplesEncoding& enc) {
  std::vector<VarId> out;
  for (const auto& row : enc.matched)
    for (VarId v : row) out.push_back(v);
  for (const auto& row : enc.quota)
    for (VarId v : row) out.push_back(v);
  return out;
}

}  // namespace lc
