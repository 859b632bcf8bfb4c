#include "lc/harness.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "lc/dynamic_matching.hpp"
#include "lc/solver.hpp"

namespace lc {

namespace {

// Lazily extended formula cache.  Formulas live over the internal pool and
// are replayed into caller pools by label, so generators stay restartable.
struct Stream {
  VarPool pool;
  std::vector<Formula> formulas;
  bool done = false;
  std::function<void(Stream&)> extend;  // appends >= 1 formula or sets done

  void ensure(size_t n) {
    while (formulas.size() < n && !done) {
      size_t before = formulas.size();
      extend(*this);
      if (!done && formulas.size() == before)
        throw std::logic_error("stream generator stalled");
    }
  }
};

Formula rename(const Formula& f, const std::vector<VarId>& map) {
  switch (f.op()) {
    case Op::Atom:
      return Formula::atom(map[(size_t)f.var()]);
    default: {
      std::vector<Formula> kids;
      kids.reserve(f.kids().size());
      for (auto const& k : f.kids()) kids.push_back(rename(k, map));
      switch (f.op()) {
        case Op::Not: return Formula::neg(kids[0]);
        case Op::And: return Formula::conj(std::move(kids));
        case Op::Or: return Formula::disj(std::move(kids));
        case Op::Implies: return Formula::implies(kids[0], kids[1]);
        case Op::Iff: return Formula::iff(kids[0], kids[1]);
        default: throw std::logic_error("bad op");
      }
    }
  }
}

// Replays an encoding into the stream pool under per-variable labels.
void append_renamed(Stream& s, const VarPool& epool, const std::vector<Formula>& efs,
                    const std::function<std::string(VarId)>& lbl) {
  std::vector<VarId> map(epool.size());
  for (VarId v = 0; v < (VarId)epool.size(); ++v) map[(size_t)v] = s.pool.add(lbl(v));
  for (auto const& f : efs) s.formulas.push_back(rename(f, map));
}

InfiniteInstance wrap(std::string domain, std::shared_ptr<Stream> st) {
  InfiniteInstance inst;
  inst.domain = std::move(domain);
  inst.var_label = [st](size_t i) {
    while (st->pool.size() <= i && !st->done) st->extend(*st);
    if (st->pool.size() <= i) throw std::out_of_range("variable enumeration exhausted");
    return st->pool.label((VarId)i);
  };
  inst.formula_at = [st](size_t i, VarPool& pool) {
    st->ensure(i + 1);
    if (i >= st->formulas.size()) return Formula();
    std::vector<VarId> map(st->pool.size(), -1);
    // map lazily: only variables mentioned get added to the caller pool, in
    // first-mention order of this formula replay
    std::function<Formula(const Formula&)> go = [&](const Formula& f) -> Formula {
      if (f.op() == Op::Atom) {
        VarId v = f.var();
        if (map[(size_t)v] < 0) map[(size_t)v] = pool.add(st->pool.label(v));
        return Formula::atom(map[(size_t)v]);
      }
      std::vector<Formula> kids;
      for (auto const& k : f.kids()) kids.push_back(go(k));
      switch (f.op()) {
        case Op::Not: return Formula::neg(kids[0]);
        case Op::And: return Formula::conj(std::move(kids));
        case Op::Or: return Formula::disj(std::move(kids));
        case Op::Implies: return Formula::implies(kids[0], kids[1]);
        case Op::Iff: return Formula::iff(kids[0], kids[1]);
        default: throw std::logic_error("bad op");
      }
    };
    return go(st->formulas[i]);
  };
  return inst;
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

bool is_real(const VarPool& pool, VarId v) {
  return !pool.is_aux(v) && !pool.label(v).empty() && pool.label(v)[0] != '@';
}

std::string lbl_dyn(const Materialized& mat, const DynEncoding& enc, VarId v) {
  for (auto const& [key, id] : enc.var)
    if (id == v) {
      auto [m, w, t] = key;
      (void)w;
      std::ostringstream os;
      os << "matched(" << mat.keys[(size_t)m] << "," << t << ")";
      return os.str();
    }
  throw std::logic_error("unlabelled dynamic variable");
}

}  // namespace

std::vector<Formula> fragment(const InfiniteInstance& inst, size_t k, VarPool& pool) {
  std::vector<Formula> out;
  for (size_t i = 0; i < k; ++i) {
    Formula f = inst.formula_at(i, pool);
    if (!f.valid()) break;
    out.push_back(f);
  }
  return out;
}

LadderReport ladder_solve(const InfiniteInstance& inst, size_t k_max, size_t step) {
  if (step == 0) throw std::invalid_argument("step must be positive");
  LadderReport rep;
  std::vector<size_t> ks;
  for (size_t k = step; k < k_max; k += step) ks.push_back(k);
  ks.push_back(k_max);
  size_t prev_len = (size_t)-1;
  for (size_t k : ks) {
    VarPool pool;
    auto fs = fragment(inst, k, pool);
    if (fs.size() == prev_len && !rep.rungs.empty()) break;  // stream ended
    prev_len = fs.size();
    ClauseSet cs = to_cnf(fs, pool);
    Solver solver(cs);
    RungRecord rr;
    rr.k = k;
    rr.sat = solver.solve() == SolveResult::Sat;
    rr.conflicts = solver.conflicts();
    if (rr.sat) {
      const auto& model = solver.model();
      std::vector<std::pair<std::string, bool>> vals;
      for (VarId v = 0; v < (VarId)pool.size(); ++v)
        if (is_real(pool, v))
          vals.push_back({pool.label(v), (size_t)v < model.size() && model[(size_t)v]});
      std::sort(vals.begin(), vals.end());
      std::ostringstream os;
      for (auto const& [l, b] : vals) {
        os << l << "=" << (b ? 1 : 0) << "\n";
        rep.history[l].push_back({k, b});
      }
      std::ostringstream hex;
      hex << std::hex << fnv1a(os.str());
      rr.digest = hex.str();
      rep.rungs.push_back(rr);
    } else {
      rep.rungs.push_back(rr);
      rep.unsat = true;
      rep.first_unsat_k = k;
      break;
    }
  }
  for (auto const& [label, hist] : rep.history) {
    Stabilization st;
    size_t j = hist.size() - 1;
    size_t i = j;
    while (i > 0 && hist[i - 1].second == hist[j].second) --i;
    st.value = hist[j].second;
    st.first_stable_k = hist[i].first;
    st.stable = (i == 0) || (j - i + 1 >= 2);
    rep.stabilization[label] = st;
  }
  return rep;
}

namespace {

struct PrefixSearch {
  std::vector<std::unique_ptr<Solver>> rungs;
  int m = 0;
  std::vector<int> assume;
  std::vector<std::vector<bool>> found;
  size_t cap = 1;

  bool all_sat() {
    for (auto& s : rungs)
      if (s->solve(assume) != SolveResult::Sat) return false;
    return true;
  }

  bool dfs(int d) {
    if (!all_sat()) return false;
    if (d == m) {
      std::vector<bool> pre;
      for (int lit : assume) pre.push_back(lit > 0);
      found.push_back(pre);
      return found.size() >= cap;
    }
    for (int val = 0; val < 2; ++val) {
      assume.push_back(val ? d + 1 : -(d + 1));
      bool stop = dfs(d + 1);
      assume.pop_back();
      if (stop) return true;
    }
    return false;
  }
};

PrefixSearch build_search(const InfiniteInstance& inst, int m, size_t k_max, size_t step) {
  if (m < 0 || m > 24) throw std::invalid_argument("prefix width out of range");
  PrefixSearch ps;
  ps.m = m;
  std::vector<std::string> labels;
  for (int i = 0; i < m; ++i) labels.push_back(inst.var_label((size_t)i));
  std::vector<size_t> ks;
  for (size_t k = step; k < k_max; k += step) ks.push_back(k);
  ks.push_back(k_max);
  size_t prev_len = (size_t)-1;
  for (size_t k : ks) {
    VarPool pool;
    for (auto const& l : labels) pool.add(l);  // pin ids 0..m-1
    auto fs = fragment(inst, k, pool);
    if (fs.size() == prev_len) break;
    prev_len = fs.size();
    ClauseSet cs = to_cnf(fs, pool);
    cs.num_vars = std::max(cs.num_vars, m);
    ps.rungs.push_back(std::make_unique<Solver>(cs));
  }
  return ps;
}

}  // namespace

PrefixResult prefix_limit(const InfiniteInstance& inst, int m, size_t k_max, size_t step) {
  PrefixSearch ps = build_search(inst, m, k_max, step);
  ps.cap = 1;
  ps.dfs(0);
  PrefixResult pr;
  if (ps.found.empty()) return pr;
  pr.exhausted = false;
  for (int i = 0; i < m; ++i)
    pr.prefix.push_back({inst.var_label((size_t)i), ps.found[0][(size_t)i]});
  return pr;
}

std::vector<std::vector<bool>> surviving_prefixes(const InfiniteInstance& inst, int m,
                                                  size_t k_max, size_t step,
                                                  size_t max_results) {
  PrefixSearch ps = build_search(inst, m, k_max, step);
  ps.cap = max_results;
  ps.dfs(0);
  return ps.found;
}

std::string ladder_report_json(const LadderReport& rep) {
  std::ostringstream os;
  os << "{ \"rungs\": [";
  for (size_t i = 0; i < rep.rungs.size(); ++i) {
    auto const& r = rep.rungs[i];
    os << (i ? ", " : " ") << "{ \"k\": " << r.k << ", \"sat\": " << (r.sat ? "true" : "false")
       << ", \"conflicts\": " << r.conflicts << ", \"digest\": \"" << r.digest << "\" }";
  }
  os << " ], \"unsat\": " << (rep.unsat ? "true" : "false");
  if (rep.unsat) os << ", \"first_unsat_k\": " << rep.first_unsat_k;
  os << ", \"stabilization\": {";
  bool first = true;
  for (auto const& [l, st] : rep.stabilization) {
    os << (first ? " " : ", ") << "\"" << l << "\": ";
    first = false;
    if (st.stable)
      os << "{ \"value\": " << (st.value ? "true" : "false")
         << ", \"first_stable_k\": " << st.first_stable_k << " }";
    else
      os << "\"unstable\"";
  }
  os << " } }";
  return os.str();
}

std::string prefix_result_json(const PrefixResult& pr) {
  std::ostringstream os;
  if (pr.exhausted) return "{ \"exhausted\": true }";
  os << "{ \"exhausted\": false, \"prefix\": {";
  for (size_t i = 0; i < pr.prefix.size(); ++i)
    os << (i ? ", " : " ") << "\"" << pr.prefix[i].first
       << "\": " << (pr.prefix[i].second ? "true" : "false");
  os << " } }";
  return os.str();
}

// ---- built-in families ----

InfiniteInstance szpilrajn_nat() {
  auto st = std::make_shared<Stream>();
  auto n = std::make_shared<int>(1);
  st->extend = [n](Stream& s) {
    int v = (*n)++;  // new element v joins {0..v-1}
    auto gt = [&s](int a, int b) {
      std::ostringstream os;
      os << "gt(" << a << "," << b << ")";
      return Formula::atom(s.pool.add(os.str()));
    };
    for (int i = 0; i < v; ++i) s.formulas.push_back(gt(v, i));  // natural facts
    for (int i = 0; i < v; ++i)
      s.formulas.push_back(Formula::iff(gt(i, v), Formula::neg(gt(v, i))));
    for (int a = 0; a <= v; ++a)
      for (int b = 0; b <= v; ++b)
        for (int c = 0; c <= v; ++c) {
          if (a == b || b == c || a == c) continue;
          if (std::max({a, b, c}) != v) continue;
          s.formulas.push_back(
              Formula::implies(Formula::conj({gt(a, b), gt(b, c)}), gt(a, c)));
        }
  };
  return wrap("orders", st);
}

InfiniteInstance matching_disjoint_pairs() {
  auto st = std::make_shared<Stream>();
  auto i = std::make_shared<long>(0);
  st->extend = [i](Stream& s) {
    std::ostringstream os;
    os << "matched(" << (*i)++ << ")";
    s.formulas.push_back(Formula::atom(s.pool.add(os.str())));
  };
  return wrap("matching", st);
}

InfiniteInstance parity_line_stream() {
  auto st = std::make_shared<Stream>();
  auto T = std::make_shared<int>(0);
  st->extend = [T](Stream& s) {
    int t = ++(*T);
    Materialized mat = materialize_window(parity_line(), -t, t, 4 * t + 8);
    DynEncoding enc = encode_dynamic_window(mat.market, -t, t);
    append_renamed(s, enc.pool, enc.formulas,
                   [&](VarId v) { return lbl_dyn(mat, enc, v); });
  };
  return wrap("dynamic", st);
}

InfiniteInstance no_finite_presence_stream(int t_lo, int t_hi) {
  if (t_lo < 1 || t_hi < t_lo) throw std::invalid_argument("bad truncation range");
  auto st = std::make_shared<Stream>();
  auto T = std::make_shared<int>(t_lo);
  st->extend = [T, t_hi](Stream& s) {
    if (*T > t_hi) {
      s.done = true;
      return;
    }
    int t = (*T)++;
    Materialized mat = materialize_window(no_finite_presence(t), -t, -1, t + 2);
    DynEncoding enc = encode_dynamic_window(mat.market, -t, -1);
    append_renamed(s, enc.pool, enc.formulas,
                   [&](VarId v) { return lbl_dyn(mat, enc, v); });
  };
  return wrap("dynamic", st);
}

InfiniteInstance rationalization_stream(Dataset ds, GridConfig base) {
  auto st = std::make_shared<Stream>();
  auto n = std::make_shared<int>(0);
  st->extend = [n, ds = std::move(ds), base](Stream& s) {
    int level = ++(*n);
    if (level > 12) {
      s.done = true;
      return;
    }
    GridConfig cfg = base;
    cfg.n_max = level;
    GridEncoding enc = encode_rationalization_fragment(ds, cfg);
    append_renamed(s, enc.pool, enc.formulas, [&](VarId v) {
      if (enc.pool.is_aux(v)) return "@r" + std::to_string(level) + ":" + enc.pool.label(v);
      return enc.pool.label(v);
    });
  };
  return wrap("revealed_pref", st);
}

InfiniteInstance stochastic_stream(StochDataset ds, int L, int n_cap) {
  auto st = std::make_shared<Stream>();
  auto n = std::make_shared<int>(0);
  st->extend = [n, ds = std::move(ds), L, n_cap](Stream& s) {
    int level = ++(*n);
    if (level > n_cap) {
      s.done = true;
      return;
    }
    StochEncoding enc = encode_stoch_fragment(ds, level, L);
    append_renamed(s, enc.pool, enc.formulas, [&](VarId v) {
      if (enc.pool.is_aux(v)) return "@r" + std::to_string(level) + ":" + enc.pool.label(v);
      return enc.pool.label(v);
    });
  };
  return wrap("stoch_choice", st);
}

InfiniteInstance contradiction_stream(size_t flip) {
  auto st = std::make_shared<Stream>();
  auto i = std::make_shared<size_t>(0);
  st->extend = [i, flip](Stream& s) {
    size_t k = (*i)++;
    Formula p = Formula::atom(s.pool.add("P"));
    if (k == 0)
      s.formulas.push_back(p);
    else if (k == flip)
      s.formulas.push_back(Formula::neg(p));
    else
      s.formulas.push_back(Formula::atom(s.pool.add("q" + std::to_string(k))));
  };
  return wrap("logic", st);
}

InfiniteInstance builtin_family(const std::string& name, bool* found) {
  if (found) *found = true;
  if (name == "szpilrajn_nat") return szpilrajn_nat();
  if (name == "matching_disjoint_pairs") return matching_disjoint_pairs();
  if (name == "parity_line") return parity_line_stream();
  if (name == "no_finite_presence") return no_finite_presence_stream(2, 8);
  if (found) {
    *found = false;
    return InfiniteInstance{};
  }
  throw std::invalid_argument("unknown family: " + name);
}

}  // namespace lc
