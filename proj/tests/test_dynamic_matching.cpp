#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "lc/dynamic_matching.hpp"
#include "lc/matching.hpp"
#include "lc/solver.hpp"

using namespace lc;

namespace {

// two women, three men; m0 present [0,2), m1 [0,3), m2 [1,3)
DynamicMarket small_market() {
  DynamicMarket mkt;
  mkt.n_women = 2;
  mkt.men = {
      DynMan{{0, 1}, 0, 2},
      DynMan{{1, 0}, 0, 3},
      DynMan{{0}, 1, 3},
  };
  mkt.women_pref = {{2, 0, 1}, {1, 0}};
  return mkt;
}

std::vector<Chronology> window_models(const DynamicMarket& mkt, int t_lo, int t_hi,
                                      size_t cap = 64) {
  DynEncoding enc = encode_dynamic_window(mkt, t_lo, t_hi);
  ClauseSet cs = to_cnf(enc.formulas, enc.pool);
  auto rows = enumerate_models(cs, enc.all_vars, cap);
  std::vector<Chronology> out;
  for (auto const& row : rows) {
    std::vector<bool> full(enc.pool.size(), false);
    for (size_t i = 0; i < enc.all_vars.size(); ++i) full[(size_t)enc.all_vars[i]] = row[i];
    auto ch = decode_chronology(full, mkt, enc);
    REQUIRE(ch.has_value());
    out.push_back(*ch);
  }
  return out;
}

}  // namespace

TEST_CASE("validation") {
  DynamicMarket mkt = small_market();
  CHECK(validate_dynamic_market(mkt));
  std::string why;
  DynamicMarket bad = mkt;
  bad.men[0].departure = 0;
  CHECK_FALSE(validate_dynamic_market(bad, &why));
  CHECK(why == "man with empty presence interval");
  bad = mkt;
  bad.women_pref[0] = {0, 1};  // drops m2, who still lists w0
  CHECK_FALSE(validate_dynamic_market(bad, &why));
  CHECK(why == "one-sided acceptability");
  CHECK(man_present(mkt, 0, 1));
  CHECK_FALSE(man_present(mkt, 0, 2));
}

TEST_CASE("tenure checker on hand chronologies") {
  DynamicMarket mkt = small_market();
  Chronology ch;
  ch.t_lo = 0;
  ch.t_hi = 2;
  // t=0: w0-m0, w1-m1; t=1: same (m2 arrives, blocked by incumbency at w0);
  // t=2: m0 gone, w0-m2, w1-m1
  ch.assign = {{0, 1}, {0, 1}, {2, 1}};
  CHECK(is_stable_subject_to_tenure(mkt, ch, 0, 2));

  // demoting m1 from w1 to w0 at t=1 violates tenure
  Chronology bad = ch;
  bad.assign[1] = {1, -1};
  std::vector<TenureViolation> v;
  CHECK_FALSE(is_stable_subject_to_tenure(mkt, bad, 0, 2, &v));
  bool tenure_hit = false;
  for (auto const& x : v) tenure_hit |= (x.what == "tenure violated: man demoted" && x.t == 1);
  CHECK(tenure_hit);

  // w0 idle at t=1 while m2 (her favourite) is free: blocking pair
  Chronology blocked = ch;
  blocked.assign[1] = {-1, 1};
  v.clear();
  CHECK_FALSE(is_stable_subject_to_tenure(mkt, blocked, 0, 2, &v));
  bool saw_block = false, saw_tenure = false;
  for (auto const& x : v) {
    saw_block |= x.what == "blocking pair";
    saw_tenure |= x.what == "tenure violated: man demoted";
  }
  CHECK(saw_block);
  CHECK(saw_tenure);  // m0 was dropped while still present

  // incumbency: at t=1 w0 keeps m0 although she prefers the newcomer m2;
  // without the t=0 history this is a blocking pair
  Chronology tail = ch;
  tail.t_lo = 1;
  tail.assign = {{0, 1}, {2, 1}};
  v.clear();
  CHECK_FALSE(is_stable_subject_to_tenure(mkt, tail, 1, 2, &v));
  bool pair_at_1 = false;
  for (auto const& x : v) pair_at_1 |= (x.what == "blocking pair" && x.t == 1);
  CHECK(pair_at_1);
}

TEST_CASE("pereyra forward") {
  DynamicMarket mkt = small_market();
  Chronology ch = pereyra_forward(mkt, 0, 2);
  CHECK(ch.at(0, 0) == 0);
  CHECK(ch.at(1, 0) == 1);
  CHECK(ch.at(0, 1) == 0);  // incumbent kept despite w0 preferring m2
  CHECK(ch.at(1, 1) == 1);
  CHECK(ch.at(0, 2) == 2);
  CHECK(ch.at(1, 2) == 1);
  CHECK(is_stable_subject_to_tenure(mkt, ch, 0, 2));
  CHECK_THROWS(pereyra_forward(mkt, 1, 2));  // arrivals precede horizon

  // parity line with nonnegative arrivals: even-arrival men hold the woman
  Materialized mat = materialize_window(parity_line(true), 0, 7, 64);
  Chronology par = pereyra_forward(mat.market, 0, 7);
  CHECK(is_stable_subject_to_tenure(mat.market, par, 0, 7));
  for (int t = 0; t <= 7; ++t) {
    int m = par.at(0, t);
    REQUIRE(m >= 0);
    CHECK(mat.keys[(size_t)m] % 2 == 0);
    CHECK((mat.market.men[(size_t)m].arrival == t ||
           mat.market.men[(size_t)m].arrival == t - 1));
  }
}

TEST_CASE("single-period window matches static stability") {
  // no straddlers: everyone arrives at t=1, so there are no history variables
  // and the model set must coincide with the static stable matchings
  DynamicMarket mkt = small_market();
  for (auto& m : mkt.men) {
    m.arrival = 1;
    m.departure = 2;
  }
  auto models = window_models(mkt, 1, 1);
  Market stat;
  for (size_t m = 0; m < mkt.men.size(); ++m) {
    stat.men.push_back("m" + std::to_string(m));
    stat.men_pref.push_back(mkt.men[m].pref);
  }
  for (int w = 0; w < mkt.n_women; ++w) {
    stat.women.push_back("w" + std::to_string(w));
    stat.women_pref.push_back(mkt.women_pref[(size_t)w]);
  }
  std::set<Matching> oracle;
  for (auto const& mu : enumerate_stable(stat)) oracle.insert(mu);
  std::set<Matching> got;
  for (auto const& ch : models) {
    CHECK(is_stable_subject_to_tenure(mkt, ch, 1, 1));
    Matching mu(mkt.men.size(), -1);
    for (int w = 0; w < mkt.n_women; ++w)
      if (ch.at(w, 1) >= 0) mu[(size_t)ch.at(w, 1)] = w;
    got.insert(mu);
  }
  CHECK(got == oracle);
  CHECK(got.size() == models.size());
}

TEST_CASE("single-period window with straddlers admits incumbent histories") {
  DynamicMarket mkt = small_market();
  // m0 and m1 straddle t=0/t=1, so histories can protect either at w0;
  // every model must still verify against its own decoded history
  auto models = window_models(mkt, 1, 1);
  std::set<std::pair<int, int>> outcomes;
  for (auto const& ch : models) {
    CHECK(is_stable_subject_to_tenure(mkt, ch, 1, 1));
    outcomes.insert({ch.at(0, 1), ch.at(1, 1)});
  }
  CHECK(outcomes.count({2, 1}) == 1);  // the history-free static outcome
  CHECK(outcomes.count({0, 1}) == 1);  // m0 protected as w0's incumbent
}

TEST_CASE("window models are all stable and include pereyra restriction") {
  DynamicMarket mkt = small_market();
  auto models = window_models(mkt, 0, 2);
  CHECK(models.size() >= 1);
  Chronology fwd = pereyra_forward(mkt, 0, 2);
  bool found = false;
  for (auto const& ch : models) {
    CHECK(is_stable_subject_to_tenure(mkt, ch, 0, 2));
    bool same = true;
    for (int t = 0; t <= 2; ++t)
      for (int w = 0; w < 2; ++w) same &= ch.at(w, t) == fwd.at(w, t);
    found |= same;
  }
  CHECK(found);
}

TEST_CASE("parity line window [-3,3] has exactly two models") {
  Materialized mat = materialize_window(parity_line(), -3, 3, 64);
  CHECK(mat.market.men.size() == 8);  // arrivals -4..3
  auto models = window_models(mat.market, -3, 3);
  REQUIRE(models.size() == 2);
  std::set<long> parities;
  for (auto const& ch : models) {
    REQUIRE(is_stable_subject_to_tenure(mat.market, ch, -3, 3));
    std::set<long> par_here;
    for (int t = -3; t <= 3; ++t) {
      int m = ch.at(0, t);
      REQUIRE(m >= 0);  // the woman is never idle
      long a = mat.keys[(size_t)m];
      par_here.insert(((a % 2) + 2) % 2);
      CHECK((a == t || a == t - 1));  // matched man arrived now or last period
    }
    REQUIRE(par_here.size() == 1);  // chronology sticks to one parity class
    parities.insert(*par_here.begin());
  }
  CHECK(parities == std::set<long>{0, 1});  // complementary parities
}

TEST_CASE("parity line window model counts stay two as the window grows") {
  for (int hw : {2, 3, 4}) {
    Materialized mat = materialize_window(parity_line(), -hw, hw, 64);
    auto models = window_models(mat.market, -hw, hw);
    CHECK(models.size() == 2);
  }
}

TEST_CASE("finite presence check") {
  CHECK(check_finite_presence(parity_line(), -10, 10, 3).ok);
  auto pc = check_finite_presence(no_finite_presence(40), -6, -1, 10);
  CHECK_FALSE(pc.ok);
  // small truncations fit the same budget
  CHECK(check_finite_presence(no_finite_presence(5), -6, -1, 10).ok);
}

TEST_CASE("no finite presence: window models never stabilize at time -1") {
  std::vector<long> man_at_minus1;
  for (int T = 2; T <= 8; ++T) {
    Materialized mat = materialize_window(no_finite_presence(T), -T, -1, 64);
    CHECK((int)mat.market.men.size() == T);
    auto models = window_models(mat.market, -T, -1);
    REQUIRE(models.size() == 1);  // the earliest-arriving man is forced
    const Chronology& ch = models[0];
    for (int t = -T; t <= -1; ++t) CHECK(mat.keys[(size_t)ch.at(0, t)] == T);
    man_at_minus1.push_back(mat.keys[(size_t)ch.at(0, -1)]);
  }
  // every truncation pins a different man at time -1
  std::set<long> distinct(man_at_minus1.begin(), man_at_minus1.end());
  CHECK(distinct.size() == man_at_minus1.size());
}

TEST_CASE("chronology json") {
  Chronology ch;
  ch.t_lo = -1;
  ch.t_hi = 0;
  ch.assign = {{1}, {0}};
  CHECK(chronology_json(ch) ==
        "{ \"t_lo\": -1, \"t_hi\": 0, \"assign\": { \"-1\": [1], \"0\": [0] } }");
}
