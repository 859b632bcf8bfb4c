#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "lc/networks.hpp"
#include "lc/solver.hpp"

using namespace lc;

namespace {

// one trade: agent 0 sells o0 to agent 1; seller keep-value vs buyer value
TradingNetwork single_trade(const Rat& keep, const Rat& buy) {
    TradingNetwork net;
    net.n_agents = 2;
    net.trades = {{0, 0, 1}};
    net.utility.resize(2);
    net.utility[0][{0}] = 0;           // endowment
    net.utility[0][{}] = -keep;        // selling forfeits the keep value
    net.utility[1][{}] = 0;            // endowment
    net.utility[1][{0}] = buy;
    return net;
}

// chain: 0 sells o0 to 1, 1 sells o1 to 2, 2 sells o2 to 3; unit values with
// substitutable (additive) utilities
TradingNetwork chain3() {
    TradingNetwork net;
    net.n_agents = 4;
    net.trades = {{0, 0, 1}, {1, 1, 2}, {2, 2, 3}};
    net.utility.resize(4);
    net.utility[0][{0}] = 0;
    net.utility[0][{}] = -1;  // keep value 1
    // agent 1: endowment {1}; additive: value 4 for holding o0, keep 2 for o1
    for (int m0 = 0; m0 < 2; ++m0)
        for (int m1 = 0; m1 < 2; ++m1) {
            std::vector<int> b;
            if (m0) b.push_back(0);
            if (m1) b.push_back(1);
            net.utility[1][b] = Rat(4 * m0 + 2 * m1 - 2);
        }
    for (int m1 = 0; m1 < 2; ++m1)
        for (int m2 = 0; m2 < 2; ++m2) {
            std::vector<int> b;
            if (m1) b.push_back(1);
            if (m2) b.push_back(2);
            net.utility[2][b] = Rat(5 * m1 + 1 * m2 - 1);
        }
    net.utility[3][{}] = 0;
    net.utility[3][{2}] = 3;
    return net;
}

TradingNetwork complements_pair() {
    // agent 1 buys o0 from 0 and o1 from 2; values only the pair
    TradingNetwork net;
    net.n_agents = 3;
    net.trades = {{0, 0, 1}, {1, 2, 1}};
    net.utility.resize(3);
    net.utility[0][{0}] = 0;
    net.utility[0][{}] = 0;
    net.utility[2][{1}] = 0;
    net.utility[2][{}] = 0;
    net.utility[1][{}] = 0;
    net.utility[1][{0}] = 0;
    net.utility[1][{1}] = 0;
    net.utility[1][{0, 1}] = 10;
    return net;
}

}  // namespace

TEST_CASE("validation and price bounds") {
    auto net = single_trade(0, 10);
    std::string why;
    CHECK(validate_network(net, &why));
    CHECK(compute_price_bound(net, 0) == 11);

    auto zero = single_trade(0, 0);
    CHECK(compute_price_bound(zero, 0) == 1);

    net.utility[0].erase(std::vector<int>{});  // -inf selling is fine, span ignores it
    CHECK(validate_network(net, &why));
    CHECK(compute_price_bound(net, 0) == 11);

    net.utility[1][{0}] = 10;
    net.utility[1].erase(std::vector<int>{});  // endowment must be present
    CHECK_FALSE(validate_network(net, &why));
}

TEST_CASE("demand enumeration") {
    auto net = single_trade(0, 10);
    std::map<int, Rat> p{{0, Rat(5)}};
    auto d1 = demand(net, 1, p, 0);
    REQUIRE(d1.size() == 1);
    CHECK(d1[0] == std::vector<int>{0});  // 10 - 5 beats 0
    auto d0 = demand(net, 0, p, 0);
    REQUIRE(d0.size() == 1);
    CHECK(d0[0].empty());  // selling nets 5

    p[0] = 10;
    CHECK(demand(net, 1, p, 0).size() == 2);  // tie between buying and not
}

TEST_CASE("substitutability spot checks") {
    auto chain = chain3();
    for (int i = 0; i < 4; ++i) {
        auto sample = integer_price_sample(chain, i, 6);
        CHECK(check_substitutable(chain, i, sample).ok);
    }
    auto comp = complements_pair();
    auto bad = check_substitutable(comp, 1, integer_price_sample(comp, 1, 11));
    CHECK_FALSE(bad.ok);
    CHECK(!bad.counterexample.empty());
}

TEST_CASE("encoding: single trade, decoded outcomes verify with |O_i|/n slack") {
    auto net = single_trade(0, 10);
    for (int n : {1, 2, 4}) {
        auto enc = encode_eps_walrasian(net, build_grid(net, n));
        auto cnf = to_cnf(enc.formulas, enc.pool);
        // enumerate over price + consumption variables
        std::vector<VarId> proj;
        for (VarId v : enc.price_var[0]) proj.push_back(v);
        proj.push_back(enc.consumes_buyer[0]);
        auto models = enumerate_models(cnf, proj, 4000);
        REQUIRE(!models.empty());
        for (const auto& row : models) {
            std::vector<bool> m(enc.pool.size(), false);
            for (size_t i = 0; i < proj.size(); ++i) m[(size_t)proj[i]] = row[i];
            auto out = decode_outcome(m, enc);
            REQUIRE(out.has_value());
            std::vector<Rat> eps{rat(1, n), rat(1, n)};
            std::string why;
            CHECK_MESSAGE(verify_eps_walrasian(net, *out, eps, &why), why);
            // interior prices must execute the trade
            if (out->price[0] > rat(1, n) && out->price[0] < 10 - rat(1, n))
                CHECK(out->bought[0]);
        }
    }
}

TEST_CASE("no-gain instance clears at price 0") {
    auto net = single_trade(0, 0);
    auto res = refine_to_exact(net, {1, 2, 4});
    REQUIRE_MESSAGE(res.converged, res.report);
    CHECK(res.outcome.price[0] == 0);
    // with zero gains both allocations are exact equilibria at price 0
    bool in_oracle = false;
    for (const auto& eq : exact_equilibria(net))
        in_oracle |= eq.bought == res.outcome.bought && eq.price == res.outcome.price;
    CHECK(in_oracle);
}

TEST_CASE("refinement reaches an exact equilibrium on the single trade") {
    auto net = single_trade(0, 10);
    auto res = refine_to_exact(net, {1, 2, 4});
    REQUIRE_MESSAGE(res.converged, res.report);
    CHECK(res.outcome.bought[0]);
    CHECK(res.outcome.price[0] >= 0);
    CHECK(res.outcome.price[0] <= 10);
    std::vector<Rat> zeros(2, Rat(0));
    CHECK(verify_eps_walrasian(net, res.outcome, zeros));
    auto js = outcome_json(net, res.outcome);
    CHECK(js.find("prices") != std::string::npos);
}

TEST_CASE("chain refinement matches the exhaustive oracle") {
    auto net = chain3();
    std::string why;
    REQUIRE(validate_network(net, &why));
    auto eqs = exact_equilibria(net);
    REQUIRE(!eqs.empty());
    std::vector<Rat> zeros(net.n_agents, Rat(0));
    for (const auto& eq : eqs) CHECK(verify_eps_walrasian(net, eq, zeros, &why));

    auto res = refine_to_exact(net, {1, 2, 4});
    REQUIRE_MESSAGE(res.converged, res.report);
    bool found = false;
    for (const auto& eq : eqs) found |= eq.bought == res.outcome.bought;
    CHECK(found);
}

TEST_CASE("rounding an exact equilibrium keeps bundles eps-demanded") {
    auto net = chain3();
    for (const auto& eq : exact_equilibria(net)) {
        for (int n : {1, 2, 4, 8}) {
            MarketOutcome rounded = eq;
            for (auto& p : rounded.price) {
                // round to the nearest 1/n grid point, ties down
                Rat scaled = p * n;
                mpz_class fl;
                mpz_fdiv_q(fl.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
                Rat lo = rat(fl.get_si(), n);
                p = (scaled - fl * 1 > rat(1, 2)) ? lo + rat(1, n) : lo;
            }
            std::vector<Rat> eps;
            for (int i = 0; i < net.n_agents; ++i)
                eps.push_back(rat((long)incident_objects(net, i).size(), n));
            std::string why;
            CHECK_MESSAGE(verify_eps_walrasian(net, rounded, eps, &why), why);
        }
    }
}

TEST_CASE("complements fed to the encoder can break clearing-compatible demand") {
    // not substitutable; the encoder may be UNSAT at fine resolutions, and
    // any SAT outcome still satisfies the slackened demand property
    auto net = complements_pair();
    auto enc = encode_eps_walrasian(net, build_grid(net, 1));
    auto cnf = to_cnf(enc.formulas, enc.pool);
    Solver s(cnf);
    if (s.solve({}) == SolveResult::Sat) {
        auto out = decode_outcome(s.model(), enc);
        REQUIRE(out.has_value());
        std::vector<Rat> eps;
        for (int i = 0; i < net.n_agents; ++i)
            eps.push_back(rat((long)incident_objects(net, i).size(), 1));
        CHECK(verify_eps_walrasian(net, *out, eps));
    }
}
