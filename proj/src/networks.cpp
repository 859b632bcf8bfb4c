#include "lc/networks.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "lc/lp.hpp"
#include "lc/solver.hpp"
#include "json.hpp"

namespace lc {

namespace {

// subsets of a sorted object list, by ascending bitmask
std::vector<std::vector<int>> subsets_of(const std::vector<int>& objs) {
    std::vector<std::vector<int>> out;
    for (int mask = 0; mask < (1 << objs.size()); ++mask) {
        std::vector<int> b;
        for (size_t k = 0; k < objs.size(); ++k)
            if (mask >> k & 1) b.push_back(objs[k]);
        out.push_back(b);
    }
    return out;
}

std::optional<Rat> value_of(const TradingNetwork& net, int agent, const std::vector<int>& bundle) {
    auto it = net.utility[agent].find(bundle);
    if (it == net.utility[agent].end()) return std::nullopt;
    return it->second;
}

// +1 if i receives price(o) when holding `bundle`, -1 if i pays it
Rat transfer_coeff(const TradingNetwork& net, int agent, const std::vector<int>& bundle, int o) {
    bool holds = std::find(bundle.begin(), bundle.end(), o) != bundle.end();
    if (net.trades[o].seller == agent && !holds) return 1;
    if (net.trades[o].buyer == agent && holds) return -1;
    return 0;
}

std::string price_set_str(const std::map<int, Rat>& p) {
    std::string s = "{";
    for (const auto& [o, v] : p) s += " " + std::to_string(o) + ":" + rat_str(v);
    return s + " }";
}

}  // namespace

std::vector<int> incident_objects(const TradingNetwork& net, int agent) {
    std::vector<int> out;
    for (const auto& t : net.trades)
        if (t.seller == agent || t.buyer == agent) out.push_back(t.object);
    return out;
}

std::vector<int> endowment(const TradingNetwork& net, int agent) {
    std::vector<int> out;
    for (const auto& t : net.trades)
        if (t.seller == agent) out.push_back(t.object);
    return out;
}

bool validate_network(const TradingNetwork& net, std::string* why) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    for (size_t o = 0; o < net.trades.size(); ++o) {
        const auto& t = net.trades[o];
        if (t.object != (int)o) return fail("trade objects must equal their indices");
        if (t.seller == t.buyer) return fail("trade " + std::to_string(o) + ": seller == buyer");
        if (t.seller < 0 || t.seller >= net.n_agents || t.buyer < 0 || t.buyer >= net.n_agents)
            return fail("trade " + std::to_string(o) + ": agent out of range");
    }
    if ((int)net.utility.size() != net.n_agents) return fail("utility table size mismatch");
    for (int i = 0; i < net.n_agents; ++i) {
        auto objs = incident_objects(net, i);
        if (objs.size() > 3)
            return fail("agent " + std::to_string(i) + " is party to more than 3 trades");
        for (const auto& [bundle, v] : net.utility[i]) {
            if (!std::is_sorted(bundle.begin(), bundle.end()))
                return fail("bundle keys must be sorted");
            for (int o : bundle)
                if (std::find(objs.begin(), objs.end(), o) == objs.end())
                    return fail("agent " + std::to_string(i) + ": bundle with non-incident object");
        }
        auto own = endowment(net, i);
        auto v = value_of(net, i, own);
        if (!v || *v != 0)
            return fail("agent " + std::to_string(i) + ": endowment value missing or not 0");
    }
    return true;
}

std::optional<Rat> payoff(const TradingNetwork& net, int agent, const std::vector<int>& bundle,
                          const std::map<int, Rat>& prices) {
    auto v = value_of(net, agent, bundle);
    if (!v) return std::nullopt;
    Rat total = *v;
    for (int o : incident_objects(net, agent))
        total += transfer_coeff(net, agent, bundle, o) * prices.at(o);
    return total;
}

std::vector<std::vector<int>> demand(const TradingNetwork& net, int agent,
                                     const std::map<int, Rat>& prices, const Rat& eps) {
    std::optional<Rat> best;
    auto subs = subsets_of(incident_objects(net, agent));
    std::vector<std::pair<std::vector<int>, Rat>> payoffs;
    for (const auto& b : subs) {
        auto p = payoff(net, agent, b, prices);
        if (!p) continue;
        payoffs.emplace_back(b, *p);
        if (!best || *p > *best) best = *p;
    }
    std::vector<std::vector<int>> out;
    for (const auto& [b, p] : payoffs)
        if (p >= *best - eps) out.push_back(b);
    return out;
}

int compute_price_bound(const TradingNetwork& net, int object) {
    Rat span = 0;
    for (int agent : {net.trades[object].seller, net.trades[object].buyer}) {
        for (const auto& b : subsets_of(incident_objects(net, agent))) {
            if (std::find(b.begin(), b.end(), object) != b.end()) continue;
            auto without = value_of(net, agent, b);
            auto with_o = b;
            with_o.insert(std::lower_bound(with_o.begin(), with_o.end(), object), object);
            auto v = value_of(net, agent, with_o);
            if (!without || !v) continue;
            Rat d = *v - *without;
            if (d < 0) d = -d;
            span = std::max(span, d);
        }
    }
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), span.get_num_mpz_t(), span.get_den_mpz_t());
    return (int)fl.get_si() + 1;
}

SubstCheck check_substitutable(const TradingNetwork& net, int agent,
                               const std::vector<std::map<int, Rat>>& sample) {
    SubstCheck out;
    std::vector<std::vector<std::vector<int>>> dem;
    for (const auto& p : sample) dem.push_back(demand(net, agent, p, 0));
    for (size_t a = 0; a < sample.size(); ++a) {
        if (dem[a].size() != 1) continue;
        for (size_t b = 0; b < sample.size(); ++b) {
            if (a == b || dem[b].size() != 1) continue;
            bool le = true;
            for (const auto& [o, v] : sample[a])
                if (v > sample[b].at(o)) le = false;
            if (!le) continue;
            for (int o : dem[a][0]) {
                if (sample[a].at(o) != sample[b].at(o)) continue;
                if (std::find(dem[b][0].begin(), dem[b][0].end(), o) == dem[b][0].end()) {
                    out.ok = false;
                    out.counterexample = "object " + std::to_string(o) + " demanded at " +
                                         price_set_str(sample[a]) + " but not at " +
                                         price_set_str(sample[b]);
                    return out;
                }
            }
        }
    }
    return out;
}

std::vector<std::map<int, Rat>> integer_price_sample(const TradingNetwork& net, int agent,
                                                     int H) {
    auto objs = incident_objects(net, agent);
    std::vector<std::map<int, Rat>> out{{}};
    for (int o : objs) {
        std::vector<std::map<int, Rat>> next;
        for (const auto& base : out)
            for (int v = -H; v <= H; ++v) {
                auto p = base;
                p[o] = v;
                next.push_back(p);
            }
        out = next;
    }
    return out;
}

PriceGrid build_grid(const TradingNetwork& net, int n) {
    PriceGrid g;
    g.n = n;
    for (size_t o = 0; o < net.trades.size(); ++o) {
        int H = compute_price_bound(net, (int)o);
        if (H > 16) throw std::runtime_error("price bound exceeds cap of 16");
        g.bound.push_back(H);
    }
    return g;
}

std::vector<int> outcome_bundle(const TradingNetwork& net, const MarketOutcome& out, int agent) {
    std::vector<int> b;
    for (int o : incident_objects(net, agent)) {
        bool buyer = net.trades[o].buyer == agent;
        if (buyer == out.bought[o]) b.push_back(o);
    }
    return b;
}

NetworkEncoding encode_eps_walrasian(const TradingNetwork& net, const PriceGrid& grid) {
    NetworkEncoding enc;
    enc.grid = grid;
    int O = (int)net.trades.size();
    enc.price_var.resize(O);
    for (int o = 0; o < O; ++o) {
        int H = grid.bound[o];
        for (int k = 0; k <= 2 * H * grid.n; ++k) {
            Rat p = rat(k - H * grid.n, grid.n);
            enc.price_var[o].push_back(
                enc.pool.add("price(" + std::to_string(o) + "," + rat_str(p) + ")"));
        }
    }
    std::vector<VarId> consumes_seller(O);
    for (int o = 0; o < O; ++o) {
        consumes_seller[o] = enc.pool.add("consumes(" + std::to_string(net.trades[o].seller) +
                                          "," + std::to_string(o) + ")");
        enc.consumes_buyer.push_back(enc.pool.add(
            "consumes(" + std::to_string(net.trades[o].buyer) + "," + std::to_string(o) + ")"));
    }
    auto& F = enc.formulas;
    for (int o = 0; o < O; ++o) {
        std::vector<Formula> opts;
        for (VarId v : enc.price_var[o]) opts.push_back(Formula::atom(v));
        F.push_back(Formula::disj(opts));
        for (size_t a = 0; a < opts.size(); ++a)
            for (size_t b = a + 1; b < opts.size(); ++b)
                F.push_back(Formula::neg(Formula::conj({opts[a], opts[b]})));
        // clearing: exactly one endpoint consumes o
        F.push_back(Formula::iff(Formula::atom(enc.consumes_buyer[o]),
                                 Formula::neg(Formula::atom(consumes_seller[o]))));
    }
    // demand implications per agent per full price combination over O_i
    for (int i = 0; i < net.n_agents; ++i) {
        auto objs = incident_objects(net, i);
        if (objs.empty()) continue;
        Rat eps = rat((long)objs.size(), grid.n);
        std::vector<size_t> idx(objs.size(), 0);
        while (true) {
            std::map<int, Rat> prices;
            std::vector<Formula> guard;
            for (size_t k = 0; k < objs.size(); ++k) {
                int o = objs[k];
                prices[o] = rat((long)idx[k] - (long)grid.bound[o] * grid.n, grid.n);
                guard.push_back(Formula::atom(enc.price_var[o][idx[k]]));
            }
            std::vector<Formula> options;
            for (const auto& b : demand(net, i, prices, eps)) {
                std::vector<Formula> lits;
                for (int o : objs) {
                    bool holds = std::find(b.begin(), b.end(), o) != b.end();
                    bool buyer_side = net.trades[o].buyer == i;
                    Formula bought = Formula::atom(enc.consumes_buyer[o]);
                    // i holds o iff (buyer and bought) or (seller and kept)
                    lits.push_back(holds == buyer_side ? bought : Formula::neg(bought));
                }
                options.push_back(Formula::conj(lits));
            }
            F.push_back(Formula::implies(Formula::conj(guard), Formula::disj(options)));
            size_t k = 0;
            while (k < objs.size() && ++idx[k] == enc.price_var[objs[k]].size()) idx[k++] = 0;
            if (k == objs.size()) break;
        }
    }
    return enc;
}

std::optional<MarketOutcome> decode_outcome(const std::vector<bool>& model,
                                            const NetworkEncoding& enc) {
    MarketOutcome out;
    for (size_t o = 0; o < enc.price_var.size(); ++o) {
        int found = -1;
        for (size_t k = 0; k < enc.price_var[o].size(); ++k)
            if (model[enc.price_var[o][k]]) {
                if (found >= 0) return std::nullopt;
                found = (int)k;
            }
        if (found < 0) return std::nullopt;
        out.price.push_back(rat(found - enc.grid.bound[o] * enc.grid.n, enc.grid.n));
        out.bought.push_back(model[enc.consumes_buyer[o]]);
    }
    return out;
}

bool verify_eps_walrasian(const TradingNetwork& net, const MarketOutcome& out,
                          const std::vector<Rat>& eps, std::string* why) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    if (out.price.size() != net.trades.size() || out.bought.size() != net.trades.size())
        return fail("malformed outcome");
    std::map<int, Rat> prices;
    for (size_t o = 0; o < out.price.size(); ++o) prices[(int)o] = out.price[o];
    for (int i = 0; i < net.n_agents; ++i) {
        auto bundle = outcome_bundle(net, out, i);
        auto own = payoff(net, i, bundle, prices);
        if (!own) return fail("agent " + std::to_string(i) + " allocated a -inf bundle");
        for (const auto& b : subsets_of(incident_objects(net, i))) {
            auto alt = payoff(net, i, b, prices);
            if (alt && *alt > *own + eps[i])
                return fail("agent " + std::to_string(i) + " prefers another bundle by more than eps");
        }
    }
    return true;
}

namespace {

// exact-demand inequalities for a fixed allocation, over price variables,
// with the [-H_o, H_o] box; returns constraints or nullopt on a -inf bundle
std::optional<std::vector<LinCon>> allocation_constraints(const TradingNetwork& net,
                                                          const std::vector<bool>& bought) {
    int O = (int)net.trades.size();
    std::vector<LinCon> cons;
    for (int o = 0; o < O; ++o) {
        int H = compute_price_bound(net, o);
        LinCon lo, hi;
        lo.a.assign(O, Rat(0));
        lo.a[o] = 1;
        lo.rel = Rel::GE;
        lo.b = -H;
        hi.a.assign(O, Rat(0));
        hi.a[o] = 1;
        hi.rel = Rel::LE;
        hi.b = H;
        cons.push_back(lo);
        cons.push_back(hi);
    }
    MarketOutcome tmp;
    tmp.bought = bought;
    for (int i = 0; i < net.n_agents; ++i) {
        auto mine = outcome_bundle(net, tmp, i);
        auto v = value_of(net, i, mine);
        if (!v) return std::nullopt;
        for (const auto& alt : subsets_of(incident_objects(net, i))) {
            auto va = value_of(net, i, alt);
            if (!va || alt == mine) continue;
            // v + sum c_mine p >= va + sum c_alt p
            LinCon c;
            c.a.assign(O, Rat(0));
            for (int o : incident_objects(net, i))
                c.a[o] = transfer_coeff(net, i, mine, o) - transfer_coeff(net, i, alt, o);
            c.rel = Rel::GE;
            c.b = *va - *v;
            cons.push_back(c);
        }
    }
    return cons;
}

// midpoint prices for a feasible allocation system, object by object
std::optional<std::vector<Rat>> midpoint_prices(const TradingNetwork& net,
                                                std::vector<LinCon> cons) {
    int O = (int)net.trades.size();
    std::vector<bool> nonneg(O, false);
    std::vector<Rat> out(O);
    for (int o = 0; o < O; ++o) {
        std::vector<Rat> up(O, Rat(0)), down(O, Rat(0));
        up[o] = 1;
        down[o] = -1;
        auto hi = lp_solve(O, cons, up, nonneg);
        auto lo = lp_solve(O, cons, down, nonneg);
        if (!hi.feasible || !lo.feasible || hi.unbounded || lo.unbounded) return std::nullopt;
        out[o] = (hi.objective - lo.objective) / 2;  // lo.objective = -min
        LinCon pin;
        pin.a.assign(O, Rat(0));
        pin.a[o] = 1;
        pin.rel = Rel::EQ;
        pin.b = out[o];
        cons.push_back(pin);
    }
    return out;
}

}  // namespace

std::vector<MarketOutcome> exact_equilibria(const TradingNetwork& net) {
    int O = (int)net.trades.size();
    if (O > 3) throw std::runtime_error("exact_equilibria: more than 3 trades");
    std::vector<MarketOutcome> out;
    for (int mask = 0; mask < (1 << O); ++mask) {
        std::vector<bool> bought(O);
        for (int o = 0; o < O; ++o) bought[o] = mask >> o & 1;
        auto cons = allocation_constraints(net, bought);
        if (!cons) continue;
        auto prices = midpoint_prices(net, *cons);
        if (!prices) continue;
        MarketOutcome eq;
        eq.bought = bought;
        eq.price = *prices;
        out.push_back(eq);
    }
    return out;
}

RefineResult refine_to_exact(const TradingNetwork& net, const std::vector<int>& n_sequence) {
    RefineResult res;
    std::vector<std::vector<bool>> allocations;
    for (int n : n_sequence) {
        auto enc = encode_eps_walrasian(net, build_grid(net, n));
        auto cnf = to_cnf(enc.formulas, enc.pool);
        Solver s(cnf);
        if (s.solve({}) != SolveResult::Sat) {
            res.report = "UNSAT at resolution " + std::to_string(n);
            return res;
        }
        auto dec = decode_outcome(s.model(), enc);
        if (!dec) {
            res.report = "undecodable model at resolution " + std::to_string(n);
            return res;
        }
        allocations.push_back(dec->bought);
    }
    if (allocations.size() >= 2 &&
        allocations.back() != allocations[allocations.size() - 2]) {
        res.report = "allocation did not stabilize across the resolution ladder";
        return res;
    }
    auto cons = allocation_constraints(net, allocations.back());
    if (!cons) {
        res.report = "stabilized allocation has a -inf bundle";
        return res;
    }
    auto prices = midpoint_prices(net, *cons);
    if (!prices) {
        res.report = "no exact prices support the stabilized allocation";
        return res;
    }
    res.outcome.bought = allocations.back();
    res.outcome.price = *prices;
    std::vector<Rat> zeros(net.n_agents, Rat(0));
    std::string why;
    if (!verify_eps_walrasian(net, res.outcome, zeros, &why)) {
        res.report = "limit candidate failed exact verification: " + why;
        return res;
    }
    res.converged = true;
    res.report = "exact equilibrium verified";
    return res;
}

std::string outcome_json(const TradingNetwork& net, const MarketOutcome& out) {
    nlohmann::ordered_json j;
    j["prices"] = nlohmann::ordered_json::array();
    for (const auto& p : out.price) j["prices"].push_back(rat_str(p));
    j["bought"] = nlohmann::ordered_json::array();
    for (bool b : out.bought) j["bought"].push_back(b);
    j["bundles"] = nlohmann::ordered_json::array();
    for (int i = 0; i < net.n_agents; ++i) j["bundles"].push_back(outcome_bundle(net, out, i));
    return j.dump(2);
}

}  // namespace lc
