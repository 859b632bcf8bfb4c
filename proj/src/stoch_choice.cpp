#include "lc/stoch_choice.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

#include "lc/lp.hpp"

namespace lc {

namespace {

std::string tuple_label(const std::vector<int>& t) {
    std::string s = "(";
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) s += " ";
        s += std::to_string(t[i]);
    }
    return s + ")";
}

// All tuples of distinct items, lengths 1..L, lexicographic within a length.
std::vector<std::vector<int>> all_tuples(int n_items, int L) {
    std::vector<std::vector<int>> out, cur{{}};
    for (int len = 1; len <= L; ++len) {
        std::vector<std::vector<int>> next;
        for (const auto& t : cur)
            for (int a = 0; a < n_items; ++a)
                if (std::find(t.begin(), t.end(), a) == t.end()) {
                    auto u = t;
                    u.push_back(a);
                    next.push_back(u);
                }
        for (const auto& t : next) out.push_back(t);
        cur = next;
    }
    return out;
}

// x is the maximum of `menu` under the order (best first)?
bool is_top(const std::vector<int>& order, const std::vector<int>& menu, int x) {
    for (int a : order) {
        if (a == x) return true;
        if (std::find(menu.begin(), menu.end(), a) != menu.end()) return false;
    }
    return false;
}

// --- small binary circuits over Formula bit vectors (LSB first) ---

struct Circuit {
    VarPool& pool;
    std::vector<Formula>& out;

    Formula defined(const std::string& tag, Formula def) {
        VarId v = pool.fresh_aux(tag);
        out.push_back(Formula::iff(Formula::atom(v), std::move(def)));
        return Formula::atom(v);
    }

    static Formula f_xor(Formula a, Formula b) { return Formula::neg(Formula::iff(a, b)); }

    std::vector<Formula> add(const std::vector<Formula>& a, const std::vector<Formula>& b) {
        size_t w = std::max(a.size(), b.size()) + 1;
        std::vector<Formula> sum;
        Formula carry = Formula::falsity();
        for (size_t t = 0; t < w; ++t) {
            Formula x = t < a.size() ? a[t] : Formula::falsity();
            Formula y = t < b.size() ? b[t] : Formula::falsity();
            sum.push_back(defined("sum", f_xor(f_xor(x, y), carry)));
            carry = defined("carry", Formula::disj({Formula::conj({x, y}),
                                                    Formula::conj({x, carry}),
                                                    Formula::conj({y, carry})}));
        }
        return sum;
    }

    std::vector<Formula> add_const(const std::vector<Formula>& a, long c) {
        std::vector<Formula> b;
        for (long v = c; v > 0; v >>= 1)
            b.push_back((v & 1) ? Formula::truth() : Formula::falsity());
        return add(a, b);
    }

    // a <= c for a nonnegative constant
    static Formula leq_const(const std::vector<Formula>& a, const mpz_class& c) {
        if (c < 0) return Formula::falsity();
        Formula acc = Formula::truth();
        for (size_t t = 0; t < a.size(); ++t) {
            bool bit = mpz_tstbit(c.get_mpz_t(), t) != 0;
            acc = bit ? Formula::disj({Formula::neg(a[t]), Formula::conj({a[t], acc})})
                      : Formula::conj({Formula::neg(a[t]), acc});
        }
        if (c >> a.size() > 0) return Formula::truth();
        return acc;
    }

    // a >= c for a nonnegative constant
    static Formula geq_const(const std::vector<Formula>& a, const mpz_class& c) {
        if (c <= 0) return Formula::truth();
        if (c >> a.size() > 0) return Formula::falsity();
        Formula acc = Formula::truth();
        for (size_t t = 0; t < a.size(); ++t) {
            bool bit = mpz_tstbit(c.get_mpz_t(), t) != 0;
            acc = bit ? Formula::conj({a[t], acc})
                      : Formula::disj({a[t], Formula::conj({Formula::neg(a[t]), acc})});
        }
        return acc;
    }

    // a <= b
    static Formula leq(const std::vector<Formula>& a, const std::vector<Formula>& b) {
        size_t w = std::max(a.size(), b.size());
        Formula acc = Formula::truth();
        for (size_t t = 0; t < w; ++t) {
            Formula x = t < a.size() ? a[t] : Formula::falsity();
            Formula y = t < b.size() ? b[t] : Formula::falsity();
            acc = Formula::disj({Formula::conj({Formula::neg(x), y}),
                                 Formula::conj({Formula::iff(x, y), acc})});
        }
        return acc;
    }
};

mpz_class floor_rat(const Rat& r) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

mpz_class ceil_rat(const Rat& r) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

long factorial(int k) {
    long f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

bool validate_stoch(const StochDataset& ds, std::string* why) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    int n = (int)ds.items.size();
    std::set<std::pair<std::vector<int>, int>> seen;
    std::map<std::vector<int>, Rat> menu_sum;
    for (size_t e = 0; e < ds.entries.size(); ++e) {
        const auto& en = ds.entries[e];
        std::string at = "entry " + std::to_string(e) + ": ";
        if (en.menu.empty()) return fail(at + "empty menu");
        std::set<int> m(en.menu.begin(), en.menu.end());
        if (m.size() != en.menu.size()) return fail(at + "duplicate items in menu");
        for (int a : en.menu)
            if (a < 0 || a >= n) return fail(at + "item index out of range");
        if (!m.count(en.choice)) return fail(at + "choice not in menu");
        if (en.prob < 0 || en.prob > 1) return fail(at + "probability outside [0,1]");
        std::vector<int> key(m.begin(), m.end());
        if (!seen.insert({key, en.choice}).second) return fail(at + "duplicate (menu, choice)");
        menu_sum[key] += en.prob;
    }
    for (const auto& [menu, total] : menu_sum) {
        int recorded = 0;
        for (const auto& en : ds.entries) {
            std::set<int> m(en.menu.begin(), en.menu.end());
            if (std::vector<int>(m.begin(), m.end()) == menu) ++recorded;
        }
        if (total > 1) return fail("menu probabilities exceed 1");
        if (recorded == (int)menu.size() && total != 1)
            return fail("fully recorded menu does not sum to 1");
    }
    return true;
}

ArspReport check_arsp(const StochDataset& ds, int max_len) {
    ArspReport rep;
    int E = (int)ds.entries.size();
    std::vector<int> seq;
    // multiset sequences as non-decreasing entry-index tuples
    std::function<bool(int)> rec = [&](int from) {
        if (!seq.empty()) {
            std::set<int> uni;
            Rat sum = 0;
            for (int e : seq) {
                sum += ds.entries[e].prob;
                uni.insert(ds.entries[e].menu.begin(), ds.entries[e].menu.end());
            }
            std::vector<int> items(uni.begin(), uni.end());
            if (items.size() > 7) throw std::runtime_error("check_arsp: union exceeds 7 items");
            long best = 0;
            std::vector<int> perm = items;
            do {
                long hit = 0;
                for (int e : seq)
                    if (is_top(perm, ds.entries[e].menu, ds.entries[e].choice)) ++hit;
                best = std::max(best, hit);
            } while (std::next_permutation(perm.begin(), perm.end()));
            if (sum > best) {
                rep.holds = false;
                rep.witness = seq;
                rep.sum = sum;
                rep.best = best;
                return true;
            }
        }
        if ((int)seq.size() == max_len) return false;
        for (int e = from; e < E; ++e) {
            seq.push_back(e);
            if (rec(e)) return true;
            seq.pop_back();
        }
        return false;
    };
    rec(0);
    return rep;
}

std::optional<OrderDistribution> rationalize_finite(const StochDataset& ds) {
    int n = (int)ds.items.size();
    if (n > 6) throw std::runtime_error("rationalize_finite: more than 6 items");
    std::vector<int> base(n);
    for (int i = 0; i < n; ++i) base[i] = i;
    std::vector<std::vector<int>> orders;
    do orders.push_back(base);
    while (std::next_permutation(base.begin(), base.end()));

    int nv = (int)orders.size();
    std::vector<LinCon> cons;
    for (const auto& en : ds.entries) {
        LinCon c;
        c.a.assign(nv, Rat(0));
        for (int k = 0; k < nv; ++k)
            if (is_top(orders[k], en.menu, en.choice)) c.a[k] = 1;
        c.rel = Rel::EQ;
        c.b = en.prob;
        cons.push_back(c);
    }
    LinCon one;
    one.a.assign(nv, Rat(1));
    one.rel = Rel::EQ;
    one.b = 1;
    cons.push_back(one);
    auto sol = lp_feasible(nv, cons, std::vector<bool>(nv, true));
    if (!sol.feasible) return std::nullopt;
    OrderDistribution od;
    od.orders = orders;
    od.weight = sol.x;
    return od;
}

Rat choice_prob_of(const OrderDistribution& od, const std::vector<int>& menu, int choice) {
    Rat p = 0;
    for (size_t k = 0; k < od.orders.size(); ++k)
        if (is_top(od.orders[k], menu, choice)) p += od.weight[k];
    return p;
}

MarginalFamily marginals_of(const OrderDistribution& od, int n_items, int L) {
    MarginalFamily mf;
    for (const auto& t : all_tuples(n_items, L)) {
        Rat p = 0;
        for (size_t k = 0; k < od.orders.size(); ++k) {
            // tuple respected iff its items appear in this relative order
            const auto& ord = od.orders[k];
            std::vector<int> pos;
            for (int a : t)
                pos.push_back((int)(std::find(ord.begin(), ord.end(), a) - ord.begin()));
            if (std::is_sorted(pos.begin(), pos.end())) p += od.weight[k];
        }
        mf[t] = p;
    }
    return mf;
}

MarginalCheck check_marginal_consistency(const MarginalFamily& mf, int n_items) {
    MarginalCheck out;
    auto fail = [&](const std::string& m) {
        out.ok = false;
        out.violation = m;
        return out;
    };
    for (const auto& [t, p] : mf)
        if (t.size() == 1 && p != 1)
            return fail("singleton " + tuple_label(t) + " is not 1");
    for (const auto& [t, p] : mf) {
        for (int a = 0; a < n_items; ++a) {
            if (std::find(t.begin(), t.end(), a) != t.end()) continue;
            Rat sum = 0;
            bool all_stored = true;
            for (size_t i = 0; i <= t.size(); ++i) {
                auto u = t;
                u.insert(u.begin() + i, a);
                auto it = mf.find(u);
                if (it == mf.end()) {
                    all_stored = false;
                    break;
                }
                sum += it->second;
            }
            if (all_stored && sum != p)
                return fail("insertion of " + std::to_string(a) + " into " + tuple_label(t) +
                            " sums to " + rat_str(sum) + ", expected " + rat_str(p));
        }
    }
    return out;
}

StochEncoding encode_stoch_fragment(const StochDataset& ds, int n_max, int L) {
    StochEncoding enc;
    enc.n_items = (int)ds.items.size();
    enc.n_max = n_max;
    enc.L = L;
    if (enc.n_items > 6) throw std::runtime_error("encode_stoch_fragment: more than 6 items");
    enc.tuples = all_tuples(enc.n_items, L);
    for (size_t t = 0; t < enc.tuples.size(); ++t) enc.tuple_index[enc.tuples[t]] = (int)t;
    int T = (int)enc.tuples.size();
    enc.onehot.assign(T, std::vector<std::vector<VarId>>(n_max));

    // value bits per (tuple, level); finest level first so the solver's
    // lowest-index branching explores it before coarser ones
    std::vector<std::vector<std::vector<Formula>>> bits(
        T, std::vector<std::vector<Formula>>(n_max));
    for (int n = n_max; n >= 1; --n)
        for (int t = 0; t < T; ++t) {
            for (int k = 0; k <= n; ++k)
                bits[t][n - 1].push_back(Formula::atom(enc.pool.fresh_aux("pbit")));
            for (int j = 0; j <= (1 << n); ++j) {
                Rat v = rat(j, 1 << n);
                enc.onehot[t][n - 1].push_back(enc.pool.add(
                    "p(" + std::to_string(n) + "," + tuple_label(enc.tuples[t]) + "," +
                    rat_str(v) + ")"));
            }
        }

    auto& F = enc.formulas;
    Circuit circ{enc.pool, F};
    auto at = [&](int t, int n, int j) { return Formula::atom(enc.onehot[t][n - 1][j]); };

    for (int n = n_max; n >= 1; --n) {
        int top = 1 << n;
        for (int t = 0; t < T; ++t) {
            // existence
            std::vector<Formula> opts;
            for (int j = 0; j <= top; ++j) opts.push_back(at(t, n, j));
            F.push_back(Formula::disj(opts));
            // uniqueness via binary channeling: prob var iff its bit pattern
            for (int j = 0; j <= top; ++j) {
                std::vector<Formula> pat;
                for (int k = 0; k <= n; ++k)
                    pat.push_back((j >> k) & 1 ? bits[t][n - 1][k]
                                               : Formula::neg(bits[t][n - 1][k]));
                F.push_back(Formula::iff(at(t, n, j), Formula::conj(pat)));
            }
            // refinement coherence
            if (n < n_max)
                for (int j = 0; j <= top; ++j) {
                    std::vector<Formula> next{at(t, n + 1, 2 * j)};
                    if (2 * j + 1 <= 2 * top) next.push_back(at(t, n + 1, 2 * j + 1));
                    F.push_back(Formula::implies(at(t, n, j), Formula::disj(next)));
                }
            // singleton-one
            if (enc.tuples[t].size() == 1) F.push_back(at(t, n, top));
        }
        // insertion identities, slack (m+1) grid steps for an m-tuple
        for (int t = 0; t < T; ++t) {
            const auto& tup = enc.tuples[t];
            int m = (int)tup.size();
            if (m + 1 > L) continue;
            for (int a = 0; a < enc.n_items; ++a) {
                if (std::find(tup.begin(), tup.end(), a) != tup.end()) continue;
                std::vector<Formula> sum;
                for (int i = 0; i <= m; ++i) {
                    auto u = tup;
                    u.insert(u.begin() + i, a);
                    const auto& term = bits[enc.tuple_index[u]][n - 1];
                    sum = sum.empty() ? term : circ.add(sum, term);
                }
                long slack = m + 1;
                F.push_back(Circuit::leq(sum, circ.add_const(bits[t][n - 1], slack)));
                F.push_back(Circuit::leq(bits[t][n - 1], circ.add_const(sum, slack)));
            }
        }
        // rationalization of recorded probabilities, slack (|A|-1)! steps
        for (size_t e = 0; e < ds.entries.size(); ++e) {
            const auto& en = ds.entries[e];
            int sz = (int)en.menu.size();
            if (sz > L) continue;
            std::vector<int> rest;
            for (int a : en.menu)
                if (a != en.choice) rest.push_back(a);
            std::sort(rest.begin(), rest.end());
            std::vector<Formula> sum;
            do {
                std::vector<int> tup{en.choice};
                tup.insert(tup.end(), rest.begin(), rest.end());
                const auto& term = bits[enc.tuple_index[tup]][n - 1];
                sum = sum.empty() ? term : circ.add(sum, term);
            } while (std::next_permutation(rest.begin(), rest.end()));
            long slack = factorial(sz - 1);
            Rat target = en.prob * (1 << n);
            F.push_back(Circuit::leq_const(sum, floor_rat(target + slack)));
            F.push_back(Circuit::geq_const(sum, ceil_rat(target - slack)));
        }
    }
    for (const auto& en : ds.entries)
        enc.entry_slack.push_back(rat(factorial((int)en.menu.size() - 1), 1 << n_max));
    return enc;
}

MarginalFamily decode_marginals_at(const std::vector<bool>& model, const StochEncoding& enc,
                                   int level) {
    MarginalFamily mf;
    for (size_t t = 0; t < enc.tuples.size(); ++t) {
        int found = -1;
        for (size_t j = 0; j < enc.onehot[t][level - 1].size(); ++j) {
            VarId v = enc.onehot[t][level - 1][j];
            if ((size_t)v < model.size() && model[v]) {
                found = (int)j;
                break;
            }
        }
        if (found >= 0) mf[enc.tuples[t]] = rat(found, 1 << level);
    }
    return mf;
}

MarginalFamily decode_marginals(const std::vector<bool>& model, const StochEncoding& enc) {
    return decode_marginals_at(model, enc, enc.n_max);
}

}  // namespace lc
