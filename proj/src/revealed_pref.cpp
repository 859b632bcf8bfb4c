#include "lc/revealed_pref.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

#include "lc/lp.hpp"
#include "json.hpp"

namespace lc {

namespace {

Rat dot(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::string point_label(const std::vector<Rat>& p) {
    std::string s = "(";
    for (size_t i = 0; i < p.size(); ++i) {
        if (i) s += ",";
        s += rat_str(p[i]);
    }
    return s + ")";
}

bool leq_pointwise(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

// Nonnegative rationals in a fixed diagonal order: 0, 1, 1/2, 2, 1/3, 3,
// 2/3, 3/2, ... (by numerator+denominator, then numerator).
std::vector<Rat> rational_stream(int count) {
    std::vector<Rat> out;
    out.push_back(Rat(0));
    for (long w = 2; (int)out.size() < count; ++w)
        for (long p = 1; p < w && (int)out.size() < count; ++p) {
            Rat r = rat(p, w - p);
            if (r.get_num() == p && r.get_den() == w - p) out.push_back(r);
        }
    out.resize(count);
    return out;
}

// First K pairs (q1, q2) with q1 strictly below q2 in every coordinate,
// enumerated by total rational-stream index, then lexicographically.
std::vector<std::pair<std::vector<Rat>, std::vector<Rat>>> rational_pair_stream(int m, int K) {
    std::vector<std::pair<std::vector<Rat>, std::vector<Rat>>> out;
    if (K <= 0) return out;
    std::vector<Rat> rs = rational_stream(64);
    for (int total = 0; (int)out.size() < K && total <= 40; ++total) {
        std::vector<int> idx(2 * m, 0);
        // enumerate compositions of `total` into 2m parts, lexicographically
        std::function<void(int, int)> rec = [&](int pos, int left) {
            if ((int)out.size() >= K) return;
            if (pos == 2 * m - 1) {
                idx[pos] = left;
                std::vector<Rat> q1(m), q2(m);
                bool strict = true;
                for (int i = 0; i < m; ++i) {
                    q1[i] = rs[idx[i]];
                    q2[i] = rs[idx[m + i]];
                    if (!(q1[i] < q2[i])) strict = false;
                }
                if (strict) out.emplace_back(q1, q2);
                return;
            }
            for (int v = 0; v <= left; ++v) {
                idx[pos] = v;
                rec(pos + 1, left - v);
            }
        };
        rec(0, total);
    }
    return out;
}

}  // namespace

bool validate_dataset(const Dataset& ds, std::string* why) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    if (ds.empty()) return fail("dataset is empty");
    size_t m = ds[0].price.size();
    if (m == 0) return fail("no goods");
    for (size_t i = 0; i < ds.size(); ++i) {
        const auto& o = ds[i];
        if (o.price.size() != m || o.bundle.size() != m)
            return fail("observation " + std::to_string(i) + ": dimension mismatch");
        for (size_t g = 0; g < m; ++g) {
            if (o.price[g] <= 0)
                return fail("observation " + std::to_string(i) + ": price must be positive");
            if (o.bundle[g] < 0)
                return fail("observation " + std::to_string(i) + ": bundle must be nonnegative");
        }
    }
    return true;
}

GarpReport check_garp(const Dataset& ds) {
    int N = (int)ds.size();
    // weak[i][j]: x_j affordable at (p_i, x_i); strict if strictly cheaper
    std::vector<std::vector<bool>> weak(N, std::vector<bool>(N, false));
    std::vector<std::vector<bool>> strict = weak;
    for (int i = 0; i < N; ++i) {
        Rat budget = dot(ds[i].price, ds[i].bundle);
        for (int j = 0; j < N; ++j) {
            if (i == j) continue;
            Rat cost = dot(ds[i].price, ds[j].bundle);
            if (cost <= budget) weak[i][j] = true;
            if (cost < budget) strict[i][j] = true;
        }
    }
    GarpReport rep;
    for (int u = 0; u < N; ++u)
        for (int v = 0; v < N; ++v) {
            if (!strict[u][v]) continue;
            // need a weak path v -> u to close the cycle
            std::vector<int> prev(N, -1);
            std::deque<int> bfs{v};
            std::vector<bool> seen(N, false);
            seen[v] = true;
            while (!bfs.empty()) {
                int cur = bfs.front();
                bfs.pop_front();
                if (cur == u) break;
                for (int w = 0; w < N; ++w)
                    if (weak[cur][w] && !seen[w]) {
                        seen[w] = true;
                        prev[w] = cur;
                        bfs.push_back(w);
                    }
            }
            if (!seen[u]) continue;
            rep.consistent = false;
            std::vector<int> path;
            for (int cur = u; cur != -1; cur = prev[cur]) path.push_back(cur);
            std::reverse(path.begin(), path.end());  // v .. u
            rep.cycle.assign(1, u);
            rep.cycle.insert(rep.cycle.end(), path.begin(), path.end());
            return rep;
        }
    return rep;
}

AfriatResult afriat_rationalize(const Dataset& ds) {
    int N = (int)ds.size();
    size_t m = ds[0].price.size();
    // variables: u_0..u_{N-1} free, lambda_0..lambda_{N-1} >= 1
    int nv = 2 * N;
    std::vector<LinCon> cons;
    for (int i = 0; i < N; ++i) {
        LinCon lb;
        lb.a.assign(nv, Rat(0));
        lb.a[N + i] = 1;
        lb.rel = Rel::GE;
        lb.b = 1;
        cons.push_back(lb);
    }
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            if (i == j) continue;
            Rat gap = 0;  // p_i . (x_j - x_i)
            for (size_t g = 0; g < m; ++g)
                gap += ds[i].price[g] * (ds[j].bundle[g] - ds[i].bundle[g]);
            LinCon c;
            c.a.assign(nv, Rat(0));
            c.a[j] = 1;
            c.a[i] = -1;
            c.a[N + i] = -gap;
            c.rel = Rel::LE;
            c.b = 0;
            cons.push_back(c);
        }
    std::vector<bool> nonneg(nv, false);
    for (int i = 0; i < N; ++i) nonneg[N + i] = true;
    AfriatResult res;
    auto sol = lp_feasible(nv, cons, nonneg);
    res.feasible = sol.feasible;
    if (sol.feasible) {
        res.u.assign(sol.x.begin(), sol.x.begin() + N);
        res.lambda.assign(sol.x.begin() + N, sol.x.end());
    }
    return res;
}

GridEncoding encode_rationalization_fragment(const Dataset& ds, const GridConfig& cfg) {
    GridEncoding enc;
    enc.n_max = cfg.n_max;
    size_t m = ds[0].price.size();

    // point set: data bundles, queries, rational-pair endpoints, then all
    // pairwise midpoints of that base collection; deduplicated, in order
    std::vector<std::vector<Rat>> base;
    auto push_unique = [](std::vector<std::vector<Rat>>& v, const std::vector<Rat>& p) {
        if (std::find(v.begin(), v.end(), p) == v.end()) v.push_back(p);
        return (int)(std::find(v.begin(), v.end(), p) - v.begin());
    };
    for (const auto& o : ds) push_unique(base, o.bundle);
    for (const auto& q : cfg.queries) push_unique(base, q);
    auto rps = rational_pair_stream((int)m, cfg.rational_pairs);
    for (const auto& [q1, q2] : rps) {
        push_unique(base, q1);
        push_unique(base, q2);
    }
    enc.points = base;
    if (cfg.midpoints) {
        for (size_t i = 0; i < base.size(); ++i)
            for (size_t j = i + 1; j < base.size(); ++j) {
                std::vector<Rat> mid(m);
                for (size_t g = 0; g < m; ++g) mid[g] = (base[i][g] + base[j][g]) / 2;
                int k = push_unique(enc.points, mid);
                enc.qc_triples.push_back({(int)i, (int)j, k});
            }
    }
    for (const auto& [q1, q2] : rps) {
        int a = (int)(std::find(enc.points.begin(), enc.points.end(), q1) - enc.points.begin());
        int b = (int)(std::find(enc.points.begin(), enc.points.end(), q2) - enc.points.begin());
        enc.rational_pair.emplace_back(a, b);
    }

    int P = (int)enc.points.size();
    enc.n_strict = 1;
    while ((1 << enc.n_strict) < P) ++enc.n_strict;

    enc.vars.resize(cfg.n_max);
    for (int n = 1; n <= cfg.n_max; ++n) {
        int levels = (1 << n) + 1;
        enc.vars[n - 1].resize(P);
        for (int p = 0; p < P; ++p) {
            enc.vars[n - 1][p].resize(levels);
            for (int j = 0; j < levels; ++j) {
                Rat v = rat(j, 1 << n);
                enc.vars[n - 1][p][j] = enc.pool.add(
                    "u(" + std::to_string(n) + "," + point_label(enc.points[p]) + "," +
                    rat_str(v) + ")");
            }
        }
    }

    auto& F = enc.formulas;
    auto at = [&](int n, int p, int j) { return Formula::atom(enc.vars[n - 1][p][j]); };

    for (int n = 1; n <= cfg.n_max; ++n) {
        int levels = (1 << n) + 1;
        for (int p = 0; p < P; ++p) {
            // existence
            std::vector<Formula> opts;
            for (int j = 0; j < levels; ++j) opts.push_back(at(n, p, j));
            F.push_back(Formula::disj(opts));
            // uniqueness
            for (int j = 0; j < levels; ++j)
                for (int k = j + 1; k < levels; ++k)
                    F.push_back(Formula::neg(Formula::conj({at(n, p, j), at(n, p, k)})));
            // refinement coherence: value j/2^n becomes 2j or 2j+1 at level n+1
            if (n < cfg.n_max)
                for (int j = 0; j < levels; ++j) {
                    std::vector<Formula> next{at(n + 1, p, 2 * j)};
                    if (2 * j + 1 <= (1 << (n + 1)))
                        next.push_back(at(n + 1, p, 2 * j + 1));
                    F.push_back(Formula::implies(at(n, p, j), Formula::disj(next)));
                }
        }
        // quasiconcavity at stored midpoints
        for (const auto& t : enc.qc_triples)
            for (int v = 0; v < levels; ++v)
                for (int w = 0; w < levels; ++w) {
                    int lo = std::min(v, w);
                    std::vector<Formula> hi;
                    for (int z = lo; z < levels; ++z) hi.push_back(at(n, t[2], z));
                    F.push_back(Formula::implies(Formula::conj({at(n, t[0], v), at(n, t[1], w)}),
                                                 Formula::disj(hi)));
                }
        // monotonicity over comparable pairs
        for (int p = 0; p < P; ++p)
            for (int q = 0; q < P; ++q) {
                if (p == q || !leq_pointwise(enc.points[p], enc.points[q])) continue;
                if (enc.points[p] == enc.points[q]) continue;
                for (int v = 1; v < levels; ++v) {
                    std::vector<Formula> hi;
                    for (int w = v; w < levels; ++w) hi.push_back(at(n, q, w));
                    F.push_back(Formula::implies(at(n, p, v), Formula::disj(hi)));
                }
            }
        // strict gaps for enumerated rational pairs: u(q2) >= u(q1) + 2^-(k+1),
        // emitted at levels fine enough to express the gap
        for (size_t kk = 0; kk < enc.rational_pair.size(); ++kk) {
            int k = (int)kk + 1;
            if (n <= k) continue;
            int gap = 1 << (n - k - 1);  // 2^-(k+1) in units of 2^-n
            auto [a, b] = enc.rational_pair[kk];
            for (int v = 0; v < levels; ++v) {
                std::vector<Formula> hi;
                for (int w = v + gap; w < levels; ++w) hi.push_back(at(n, b, w));
                F.push_back(Formula::implies(at(n, a, v), Formula::disj(hi)));
            }
        }
        // rationalization: bundles affordable at observation i sit weakly
        // below x_i; strictly cheaper ones sit strictly below once the grid
        // can order the whole point set
        for (size_t i = 0; i < ds.size(); ++i) {
            int xi = (int)(std::find(enc.points.begin(), enc.points.end(), ds[i].bundle) -
                           enc.points.begin());
            Rat budget = dot(ds[i].price, ds[i].bundle);
            for (int q = 0; q < P; ++q) {
                if (q == xi) continue;
                Rat cost = dot(ds[i].price, enc.points[q]);
                if (cost > budget) continue;
                bool strict = cost < budget && n >= enc.n_strict;
                for (int v = 0; v < levels; ++v) {
                    std::vector<Formula> lo;
                    int top = strict ? v - 1 : v;
                    for (int w = 0; w <= top; ++w) lo.push_back(at(n, q, w));
                    F.push_back(Formula::implies(at(n, xi, v), Formula::disj(lo)));
                }
            }
        }
    }
    return enc;
}

std::optional<std::vector<Rat>> decode_grid_utility(const std::vector<bool>& model,
                                                    const GridEncoding& enc, int level) {
    std::vector<Rat> vals;
    for (size_t p = 0; p < enc.points.size(); ++p) {
        int found = -1;
        for (size_t j = 0; j < enc.vars[level - 1][p].size(); ++j) {
            VarId v = enc.vars[level - 1][p][j];
            if ((size_t)v < model.size() && model[v]) {
                if (found >= 0) return std::nullopt;
                found = (int)j;
            }
        }
        if (found < 0) return std::nullopt;
        vals.push_back(rat(found, 1 << level));
    }
    return vals;
}

bool verify_rationalization(const Dataset& ds, const GridEncoding& enc,
                            const std::vector<Rat>& vals, std::string* why) {
    auto fail = [&](const std::string& m) {
        if (why) *why = m;
        return false;
    };
    int P = (int)enc.points.size();
    for (size_t i = 0; i < ds.size(); ++i) {
        int xi = (int)(std::find(enc.points.begin(), enc.points.end(), ds[i].bundle) -
                       enc.points.begin());
        Rat budget = dot(ds[i].price, ds[i].bundle);
        for (int q = 0; q < P; ++q) {
            if (q == xi) continue;
            Rat cost = dot(ds[i].price, enc.points[q]);
            if (cost <= budget && vals[q] > vals[xi])
                return fail("affordable bundle valued above chosen bundle at observation " +
                            std::to_string(i));
            if (cost < budget && enc.n_max >= enc.n_strict && vals[q] >= vals[xi])
                return fail("strictly cheaper bundle not valued strictly below at observation " +
                            std::to_string(i));
        }
    }
    for (int p = 0; p < P; ++p)
        for (int q = 0; q < P; ++q) {
            if (p == q || enc.points[p] == enc.points[q]) continue;
            if (leq_pointwise(enc.points[p], enc.points[q]) && vals[p] > vals[q])
                return fail("monotonicity violated");
        }
    for (const auto& t : enc.qc_triples)
        if (vals[t[2]] < std::min(vals[t[0]], vals[t[1]]))
            return fail("quasiconcavity violated at a midpoint witness");
    for (size_t kk = 0; kk < enc.rational_pair.size(); ++kk) {
        if (enc.n_max <= (int)kk + 1) continue;
        auto [a, b] = enc.rational_pair[kk];
        if (vals[b] < vals[a] + rat(1, 1 << ((int)kk + 2)))
            return fail("rational-pair gap violated");
    }
    return true;
}

std::string grid_utility_json(const GridEncoding& enc, const std::vector<Rat>& vals) {
    nlohmann::ordered_json j;
    j["level"] = enc.n_max;
    j["utility"] = nlohmann::ordered_json::array();
    for (size_t p = 0; p < enc.points.size(); ++p) {
        nlohmann::ordered_json e;
        e["point"] = nlohmann::ordered_json::array();
        for (const auto& c : enc.points[p]) e["point"].push_back(rat_str(c));
        e["value"] = rat_str(vals[p]);
        j["utility"].push_back(e);
    }
    return j.dump(2);
}

}  // namespace lc
