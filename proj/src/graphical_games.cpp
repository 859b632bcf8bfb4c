#include "lc/graphical_games.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "json.hpp"

namespace lc {

namespace {

std::string strat_label(const MixedStrategy& s) {
    std::string out = "(";
    for (size_t i = 0; i < s.size(); ++i) {
        if (i) out += " ";
        out += rat_str(s[i]);
    }
    return out + ")";
}

// all length-`parts` compositions of d, lexicographic
void compositions(int d, int parts, std::vector<int>& cur,
                  const std::function<void(const std::vector<int>&)>& emit) {
    if (parts == 1) {
        cur.push_back(d);
        emit(cur);
        cur.pop_back();
        return;
    }
    for (int v = 0; v <= d; ++v) {
        cur.push_back(v);
        compositions(d - v, parts - 1, cur, emit);
        cur.pop_back();
    }
}

// payoff of i when i plays pure strategy s and others follow `profile`
Rat pure_payoff(const GraphicalGame& g, int player, int s, const MixedProfile& profile) {
    const auto& nb = g.neighbors[player];
    Rat total = 0;
    std::vector<int> combo(nb.size(), 0);
    std::function<void(size_t, Rat)> rec = [&](size_t k, Rat w) {
        if (w == 0) return;
        if (k == nb.size()) {
            total += w * g.payoff[player].at(combo);
            return;
        }
        int j = nb[k];
        if (j == player) {
            combo[k] = s;
            rec(k + 1, w);
            return;
        }
        for (size_t t = 0; t < g.strategies[j].size(); ++t) {
            combo[k] = (int)t;
            rec(k + 1, w * profile[j][t]);
        }
    };
    rec(0, Rat(1));
    return total;
}

}  // namespace

bool validate_game(const GraphicalGame& g, std::string* why) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    if ((int)g.neighbors.size() != g.n_players || (int)g.strategies.size() != g.n_players ||
        (int)g.payoff.size() != g.n_players)
        return fail("table sizes do not match player count");
    for (int i = 0; i < g.n_players; ++i) {
        std::string at = "player " + std::to_string(i) + ": ";
        if (g.strategies[i].empty()) return fail(at + "no strategies");
        if (!std::is_sorted(g.neighbors[i].begin(), g.neighbors[i].end()))
            return fail(at + "neighbors not sorted");
        if (!std::binary_search(g.neighbors[i].begin(), g.neighbors[i].end(), i))
            return fail(at + "not in own neighborhood");
        for (int j : g.neighbors[i])
            if (j < 0 || j >= g.n_players) return fail(at + "neighbor out of range");
        size_t combos = 1;
        for (int j : g.neighbors[i]) combos *= g.strategies[j].size();
        if (g.payoff[i].size() != combos) return fail(at + "payoff table incomplete");
        for (const auto& [key, v] : g.payoff[i]) {
            if (key.size() != g.neighbors[i].size()) return fail(at + "bad payoff key");
            for (size_t k = 0; k < key.size(); ++k)
                if (key[k] < 0 || key[k] >= (int)g.strategies[g.neighbors[i][k]].size())
                    return fail(at + "payoff key index out of range");
        }
    }
    return true;
}

Rat expected_payoff(const GraphicalGame& g, int player, const MixedProfile& profile) {
    Rat total = 0;
    for (size_t s = 0; s < g.strategies[player].size(); ++s)
        total += profile[player][s] * pure_payoff(g, player, (int)s, profile);
    return total;
}

DiscretizationPlan plan_discretization(const GraphicalGame& g, const Rat& eps) {
    if (eps <= 0) throw std::invalid_argument("plan_discretization: eps must be positive");
    DiscretizationPlan plan;
    plan.eps = eps;
    for (int i = 0; i < g.n_players; ++i) {
        Rat lo = g.payoff[i].begin()->second, hi = lo;
        for (const auto& [k, v] : g.payoff[i]) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        long strat_total = 0;
        for (int j : g.neighbors[i]) strat_total += (long)g.strategies[j].size();
        plan.lipschitz.push_back((hi - lo) * strat_total);
        plan.delta_hat.push_back(plan.lipschitz[i] == 0 ? Rat(0)
                                                        : eps / (2 * plan.lipschitz[i]));
    }
    for (int i = 0; i < g.n_players; ++i) {
        Rat d = 0;  // 0 means unbounded
        for (int j : g.neighbors[i]) {
            Rat dj = plan.delta_hat[j];
            if (dj == 0) continue;
            if (d == 0 || dj < d) d = dj;
        }
        plan.delta.push_back(d);
        int parts = (int)g.strategies[i].size();
        std::vector<MixedStrategy> grid;
        if (d == 0) {
            // constant payoffs everywhere nearby: pure strategies suffice
            plan.denom.push_back(1);
            for (int s = 0; s < parts; ++s) {
                MixedStrategy pure(parts, Rat(0));
                pure[s] = 1;
                grid.push_back(pure);
            }
        } else {
            // even denominator >= 1/delta: mesh <= delta, pures and the
            // half-half point are lattice points
            Rat inv = 1 / (2 * d);
            mpz_class c;
            mpz_cdiv_q(c.get_mpz_t(), inv.get_num_mpz_t(), inv.get_den_mpz_t());
            long denom = 2 * std::max(1L, c.get_si());
            plan.denom.push_back(denom);
            std::vector<int> cur;
            compositions((int)denom, parts, cur, [&](const std::vector<int>& comp) {
                MixedStrategy s;
                for (int v : comp) s.push_back(rat(v, denom));
                grid.push_back(s);
            });
        }
        plan.grid.push_back(grid);
    }
    return plan;
}

MixedStrategy grid_round(const DiscretizationPlan& plan, int player,
                         const MixedStrategy& sigma) {
    long d = plan.denom[player];
    std::vector<long> units(sigma.size());
    std::vector<Rat> rem(sigma.size());
    long used = 0;
    for (size_t s = 0; s < sigma.size(); ++s) {
        Rat scaled = sigma[s] * d;
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
        units[s] = fl.get_si();
        rem[s] = scaled - Rat(fl);
        used += units[s];
    }
    long left = d - used;
    // distribute leftovers to largest remainders, lower index first on ties
    std::vector<size_t> order(sigma.size());
    for (size_t s = 0; s < order.size(); ++s) order[s] = s;
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return rem[a] > rem[b]; });
    for (long k = 0; k < left; ++k) ++units[order[(size_t)k % order.size()]];
    MixedStrategy out;
    for (long u : units) out.push_back(rat(u, d));
    return out;
}

std::vector<MixedStrategy> eps_best_responses(const GraphicalGame& g, int player,
                                              const MixedProfile& profile, const Rat& eps,
                                              const DiscretizationPlan& plan) {
    std::vector<Rat> pure_vals;
    for (size_t s = 0; s < g.strategies[player].size(); ++s)
        pure_vals.push_back(pure_payoff(g, player, (int)s, profile));
    Rat best = *std::max_element(pure_vals.begin(), pure_vals.end());
    std::vector<MixedStrategy> out;
    for (const auto& cand : plan.grid[player]) {
        Rat val = 0;
        for (size_t s = 0; s < cand.size(); ++s) val += cand[s] * pure_vals[s];
        if (val >= best - eps) out.push_back(cand);
    }
    return out;
}

NashEncoding encode_eps_nash(const GraphicalGame& g, const Rat& eps,
                             const DiscretizationPlan& plan) {
    NashEncoding enc;
    enc.plan = plan;
    enc.plays.resize(g.n_players);
    for (int i = 0; i < g.n_players; ++i)
        for (const auto& s : plan.grid[i])
            enc.plays[i].push_back(
                enc.pool.add("plays(" + std::to_string(i) + "," + strat_label(s) + ")"));
    auto& F = enc.formulas;
    for (int i = 0; i < g.n_players; ++i) {
        std::vector<Formula> opts;
        for (VarId v : enc.plays[i]) opts.push_back(Formula::atom(v));
        F.push_back(Formula::disj(opts));
        for (size_t a = 0; a < opts.size(); ++a)
            for (size_t b = a + 1; b < opts.size(); ++b)
                F.push_back(Formula::neg(Formula::conj({opts[a], opts[b]})));
    }
    for (int i = 0; i < g.n_players; ++i) {
        std::vector<int> others;
        for (int j : g.neighbors[i])
            if (j != i) others.push_back(j);
        size_t combos = 1;
        for (int j : others) combos *= plan.grid[j].size();
        if (combos > 200000) throw std::runtime_error("encode_eps_nash: combinatorial cap");
        std::vector<size_t> idx(others.size(), 0);
        while (true) {
            MixedProfile prof(g.n_players);
            std::vector<Formula> guard;
            for (size_t k = 0; k < others.size(); ++k) {
                prof[others[k]] = plan.grid[others[k]][idx[k]];
                guard.push_back(Formula::atom(enc.plays[others[k]][idx[k]]));
            }
            std::vector<Formula> br;
            for (const auto& s : eps_best_responses(g, i, prof, eps, plan)) {
                size_t pos = std::find(plan.grid[i].begin(), plan.grid[i].end(), s) -
                             plan.grid[i].begin();
                br.push_back(Formula::atom(enc.plays[i][pos]));
            }
            F.push_back(Formula::implies(Formula::conj(guard), Formula::disj(br)));
            size_t k = 0;
            while (k < others.size() && ++idx[k] == plan.grid[others[k]].size()) idx[k++] = 0;
            if (others.empty() || k == others.size()) break;
        }
    }
    return enc;
}

std::optional<MixedProfile> decode_profile(const std::vector<bool>& model,
                                           const NashEncoding& enc) {
    MixedProfile out;
    for (size_t i = 0; i < enc.plays.size(); ++i) {
        int found = -1;
        for (size_t k = 0; k < enc.plays[i].size(); ++k)
            if ((size_t)enc.plays[i][k] < model.size() && model[enc.plays[i][k]]) {
                if (found >= 0) return std::nullopt;
                found = (int)k;
            }
        if (found < 0) return std::nullopt;
        out.push_back(enc.plan.grid[i][found]);
    }
    return out;
}

NashCheck verify_eps_nash(const GraphicalGame& g, const MixedProfile& profile, const Rat& eps) {
    NashCheck out;
    out.worst_gain = 0;
    for (int i = 0; i < g.n_players; ++i) {
        Rat cur = expected_payoff(g, i, profile);
        for (size_t s = 0; s < g.strategies[i].size(); ++s) {
            Rat gain = pure_payoff(g, i, (int)s, profile) - cur;
            if (gain > out.worst_gain) {
                out.worst_gain = gain;
                out.worst_player = i;
            }
        }
    }
    out.ok = out.worst_gain <= eps;
    return out;
}

std::string profile_json(const GraphicalGame& g, const MixedProfile& profile) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (int i = 0; i < g.n_players; ++i) {
        nlohmann::ordered_json p;
        for (size_t s = 0; s < g.strategies[i].size(); ++s)
            p[g.strategies[i][s]] = rat_str(profile[i][s]);
        j.push_back(p);
    }
    return j.dump(2);
}

}  // namespace lc
