#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "lc/graphical_games.hpp"
#include "lc/solver.hpp"

using namespace lc;

namespace {

GraphicalGame matching_pennies() {
    GraphicalGame g;
    g.n_players = 2;
    g.neighbors = {{0, 1}, {0, 1}};
    g.strategies = {{"H", "T"}, {"H", "T"}};
    g.payoff.resize(2);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            g.payoff[0][{a, b}] = a == b ? 1 : -1;  // matcher
            g.payoff[1][{a, b}] = a == b ? -1 : 1;  // mismatcher
        }
    return g;
}

GraphicalGame dominant_game() {
    GraphicalGame g;
    g.n_players = 2;
    g.neighbors = {{0, 1}, {0, 1}};
    g.strategies = {{"C", "D"}, {"C", "D"}};
    g.payoff.resize(2);
    g.payoff[0] = {{{0, 0}, 3}, {{0, 1}, 0}, {{1, 0}, 5}, {{1, 1}, 1}};
    g.payoff[1] = {{{0, 0}, 3}, {{0, 1}, 5}, {{1, 0}, 0}, {{1, 1}, 1}};
    return g;
}

MixedStrategy random_mixed(int parts, std::mt19937& rng) {
    std::uniform_int_distribution<int> u(0, 20);
    std::vector<long> raw(parts);
    long total = 0;
    for (auto& r : raw) total += (r = u(rng));
    if (total == 0) raw[0] = total = 1;
    MixedStrategy s;
    for (long r : raw) s.push_back(rat(r, total));
    return s;
}

}  // namespace

TEST_CASE("discretization plan on the one-player example") {
    GraphicalGame g;
    g.n_players = 1;
    g.neighbors = {{0}};
    g.strategies = {{"x", "y"}};
    g.payoff = {{{{0}, 1}, {{1}, 0}}};
    REQUIRE(validate_game(g));
    auto plan = plan_discretization(g, rat(1, 2));
    CHECK(plan.lipschitz[0] == 2);
    CHECK(plan.delta_hat[0] == rat(1, 8));
    CHECK(plan.denom[0] == 8);
    CHECK(plan.grid[0].size() == 9);  // mesh 1/8 grid including both pures
    MixedStrategy pure{1, 0};
    CHECK(std::find(plan.grid[0].begin(), plan.grid[0].end(), pure) != plan.grid[0].end());
}

TEST_CASE("constant payoffs degenerate to pure strategies") {
    GraphicalGame g;
    g.n_players = 1;
    g.neighbors = {{0}};
    g.strategies = {{"x", "y", "z"}};
    g.payoff = {{{{0}, 7}, {{1}, 7}, {{2}, 7}}};
    auto plan = plan_discretization(g, rat(1, 10));
    CHECK(plan.grid[0].size() == 3);
    for (const auto& s : plan.grid[0]) CHECK(*std::max_element(s.begin(), s.end()) == 1);
}

TEST_CASE("pennies plan keeps the uniform coin on the grid") {
    auto g = matching_pennies();
    auto plan = plan_discretization(g, rat(1, 10));
    MixedStrategy coin{rat(1, 2), rat(1, 2)};
    for (int i = 0; i < 2; ++i)
        CHECK(std::find(plan.grid[i].begin(), plan.grid[i].end(), coin) != plan.grid[i].end());
}

TEST_CASE("eps best responses") {
    auto g = matching_pennies();
    auto plan = plan_discretization(g, rat(1, 2));
    MixedProfile prof(2);
    prof[1] = {rat(1, 2), rat(1, 2)};
    // indifference: every grid strategy responds
    CHECK(eps_best_responses(g, 0, prof, rat(1, 2), plan).size() == plan.grid[0].size());
    // vs pure Heads with eps=1/2 the matcher needs >= 3/4 weight on Heads
    prof[1] = {1, 0};
    for (const auto& s : eps_best_responses(g, 0, prof, rat(1, 2), plan))
        CHECK(s[0] >= rat(3, 4));

    auto dom = dominant_game();
    auto dplan = plan_discretization(dom, rat(1, 4));
    MixedProfile dprof(2);
    dprof[1] = {0, 1};
    auto br = eps_best_responses(dom, 0, dprof, rat(1, 4), dplan);
    MixedStrategy pureD{0, 1};
    CHECK(std::find(br.begin(), br.end(), pureD) != br.end());
    for (const auto& s : br) CHECK(s[1] >= rat(3, 4));  // gap 1 per unit of C weight
}

TEST_CASE("verification on hand-worked pennies profiles") {
    auto g = matching_pennies();
    MixedProfile coin{{rat(1, 2), rat(1, 2)}, {rat(1, 2), rat(1, 2)}};
    auto chk = verify_eps_nash(g, coin, 0);
    CHECK(chk.ok);
    CHECK(chk.worst_gain == 0);

    MixedProfile hh{{1, 0}, {1, 0}};
    auto bad = verify_eps_nash(g, hh, 1);
    CHECK_FALSE(bad.ok);
    CHECK(bad.worst_gain == 2);
    CHECK(bad.worst_player == 1);
}

TEST_CASE("dominant game: SAT, dominant pair among models, all models verify") {
    auto g = dominant_game();
    Rat eps = rat(1, 4);
    auto plan = plan_discretization(g, eps);
    auto enc = encode_eps_nash(g, eps, plan);
    auto cnf = to_cnf(enc.formulas, enc.pool);
    Solver s(cnf);
    REQUIRE(s.solve({}) == SolveResult::Sat);
    auto prof = decode_profile(s.model(), enc);
    REQUIRE(prof.has_value());
    CHECK(verify_eps_nash(g, *prof, eps).ok);
    // the pure dominant pair is a model
    MixedStrategy pureD{0, 1};
    size_t k0 = std::find(plan.grid[0].begin(), plan.grid[0].end(), pureD) - plan.grid[0].begin();
    size_t k1 = std::find(plan.grid[1].begin(), plan.grid[1].end(), pureD) - plan.grid[1].begin();
    Solver s2(cnf);
    CHECK(s2.solve({enc.plays[0][k0] + 1, enc.plays[1][k1] + 1}) == SolveResult::Sat);
}

TEST_CASE("pennies at eps 1/4: (1/2,1/2) pair is a model, decoded models verify") {
    auto g = matching_pennies();
    Rat eps = rat(1, 4);
    auto plan = plan_discretization(g, eps);
    auto enc = encode_eps_nash(g, eps, plan);
    auto cnf = to_cnf(enc.formulas, enc.pool);
    MixedStrategy coin{rat(1, 2), rat(1, 2)};
    size_t k0 = std::find(plan.grid[0].begin(), plan.grid[0].end(), coin) - plan.grid[0].begin();
    size_t k1 = std::find(plan.grid[1].begin(), plan.grid[1].end(), coin) - plan.grid[1].begin();
    Solver s(cnf);
    REQUIRE(s.solve({enc.plays[0][k0] + 1, enc.plays[1][k1] + 1}) == SolveResult::Sat);
    auto prof = decode_profile(s.model(), enc);
    REQUIRE(prof.has_value());
    CHECK((*prof)[0] == coin);
    CHECK((*prof)[1] == coin);

    std::vector<VarId> proj;
    for (int i = 0; i < 2; ++i)
        for (VarId v : enc.plays[i]) proj.push_back(v);
    auto models = enumerate_models(cnf, proj, 300);
    REQUIRE(!models.empty());
    for (const auto& row : models) {
        std::vector<bool> full(enc.pool.size(), false);
        for (size_t i = 0; i < proj.size(); ++i) full[(size_t)proj[i]] = row[i];
        auto p = decode_profile(full, enc);
        REQUIRE(p.has_value());
        CHECK(verify_eps_nash(g, *p, eps).ok);
    }
}

TEST_CASE("indifferent player: every grid point is a model") {
    GraphicalGame g;
    g.n_players = 1;
    g.neighbors = {{0}};
    g.strategies = {{"x", "y"}};
    g.payoff = {{{{0}, 2}, {{1}, 2}}};
    auto plan = plan_discretization(g, rat(1, 8));
    auto enc = encode_eps_nash(g, rat(1, 8), plan);
    auto cnf = to_cnf(enc.formulas, enc.pool);
    std::vector<VarId> proj(enc.plays[0].begin(), enc.plays[0].end());
    CHECK(enumerate_models(cnf, proj, 1000).size() == plan.grid[0].size());
}

TEST_CASE("cover and perturbation contracts on random profiles") {
    auto g = matching_pennies();
    Rat eps = rat(1, 4);
    auto plan = plan_discretization(g, eps);
    std::mt19937 rng(606);
    for (int it = 0; it < 60; ++it) {
        MixedProfile prof, rounded;
        for (int i = 0; i < 2; ++i) {
            prof.push_back(random_mixed(2, rng));
            rounded.push_back(grid_round(plan, i, prof[i]));
            Rat total = 0;
            for (size_t s = 0; s < 2; ++s) {
                Rat d = prof[i][s] - rounded[i][s];
                if (d < 0) d = -d;
                CHECK(d <= plan.delta[i]);  // cover in max-coordinate distance
                total += rounded[i][s];
            }
            CHECK(total == 1);
        }
        for (int i = 0; i < 2; ++i) {
            Rat d = expected_payoff(g, i, prof) - expected_payoff(g, i, rounded);
            if (d < 0) d = -d;
            CHECK(d <= eps);  // both own and neighbor rounding, eps/2 each
        }
    }
}

TEST_CASE("eps ladder: deviation gains shrink to 0") {
    auto g = matching_pennies();
    Rat prev = 10;
    for (long den : {2, 4, 8}) {
        Rat eps = rat(1, den);
        auto plan = plan_discretization(g, eps);
        auto enc = encode_eps_nash(g, eps, plan);
        auto cnf = to_cnf(enc.formulas, enc.pool);
        Solver s(cnf);
        REQUIRE(s.solve({}) == SolveResult::Sat);
        auto prof = decode_profile(s.model(), enc);
        REQUIRE(prof.has_value());
        auto chk = verify_eps_nash(g, *prof, eps);
        CHECK(chk.ok);
        CHECK(chk.worst_gain <= eps);
        CHECK(chk.worst_gain <= prev);
        prev = chk.worst_gain;
    }
}
