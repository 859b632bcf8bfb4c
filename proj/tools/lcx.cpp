// lcx: command-line front end. Exit codes: 0 solved/verified, 1 UNSAT or
// infeasible (a valid answer), 2 usage or validation error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "lc/couples.hpp"
#include "lc/dynamic_matching.hpp"
#include "lc/graphical_games.hpp"
#include "lc/harness.hpp"
#include "lc/matching.hpp"
#include "lc/networks.hpp"
#include "lc/orders.hpp"
#include "lc/revealed_pref.hpp"
#include "lc/solver.hpp"
#include "lc/stoch_choice.hpp"

using json = nlohmann::ordered_json;
using namespace lc;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool g_allow_decimal = false;

Rat parse_rat(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Rat((long)v.get<long>());
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find('.') != std::string::npos) {
      if (!g_allow_decimal)
        throw UsageError(where + ": decimal literal '" + s +
                         "' rejected; use num/den or pass --allow-decimal");
      std::string digits;
      long scale = 1;
      bool frac = false;
      for (char c : s) {
        if (c == '.') {
          frac = true;
          continue;
        }
        digits += c;
        if (frac) scale *= 10;
      }
      Rat r(Rat(digits) / Rat(scale));
      r.canonicalize();
      return r;
    }
    Rat r(s);
    r.canonicalize();
    return r;
  }
  if (v.is_number_float())
    throw UsageError(where + ": floating-point literal rejected; use num/den strings");
  throw UsageError(where + ": expected rational");
}

std::string rat_str(const Rat& r) { return r.get_str(); }

json load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open instance file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw UsageError(std::string("parse error in ") + path + ": " + e.what());
  }
  return j;
}

std::vector<Rat> rat_vec(const json& a, const std::string& where) {
  std::vector<Rat> out;
  for (auto const& v : a) out.push_back(parse_rat(v, where));
  return out;
}

// ---- instance parsers ----

Market parse_marriage(const json& j) {
  Market mk;
  mk.men = j.at("men").get<std::vector<std::string>>();
  mk.women = j.at("women").get<std::vector<std::string>>();
  mk.men_pref = j.at("men_pref").get<std::vector<std::vector<int>>>();
  mk.women_pref = j.at("women_pref").get<std::vector<std::vector<int>>>();
  std::string why;
  if (!validate_market(mk, &why)) throw UsageError("invalid marriage market: " + why);
  return mk;
}

PartialOrder parse_order(const json& j) {
  PartialOrder po;
  po.elems = j.at("elems").get<std::vector<std::string>>();
  for (auto const& p : j.at("pairs")) po.pairs.push_back({p.at(0), p.at(1)});
  std::string why;
  PartialOrder closed = transitive_closure(po);
  if (!validate_partial_order(closed, &why)) throw UsageError("invalid partial order: " + why);
  return closed;
}

CouplesMarket parse_couples(const json& j) {
  CouplesMarket mkt;
  mkt.doctors = j.at("doctors").get<std::vector<std::string>>();
  mkt.hospitals = j.at("hospitals").get<std::vector<std::string>>();
  mkt.capacity = j.at("capacity").get<std::vector<int>>();
  mkt.hospital_pref = j.at("hospital_pref").get<std::vector<std::vector<int>>>();
  mkt.singles = j.at("singles").get<std::vector<int>>();
  mkt.single_pref = j.at("single_pref").get<std::vector<std::vector<int>>>();
  for (auto const& c : j.at("couples")) mkt.couples.push_back({c.at(0), c.at(1)});
  for (auto const& lst : j.at("couple_pref")) {
    std::vector<std::pair<int, int>> pl;
    for (auto const& p : lst) pl.push_back({p.at(0), p.at(1)});
    mkt.couple_pref.push_back(pl);
  }
  std::string why;
  if (!validate_couples_market(mkt, &why)) throw UsageError("invalid couples market: " + why);
  return mkt;
}

Dataset parse_dataset(const json& j) {
  Dataset ds;
  for (auto const& o : j.at("observations"))
    ds.push_back({rat_vec(o.at("price"), "price"), rat_vec(o.at("bundle"), "bundle")});
  std::string why;
  if (!validate_dataset(ds, &why)) throw UsageError("invalid dataset: " + why);
  return ds;
}

StochDataset parse_stoch(const json& j) {
  StochDataset ds;
  ds.items = j.at("items").get<std::vector<std::string>>();
  for (auto const& e : j.at("entries"))
    ds.entries.push_back({e.at("menu").get<std::vector<int>>(), e.at("choice").get<int>(),
                          parse_rat(e.at("prob"), "prob")});
  std::string why;
  if (!validate_stoch(ds, &why)) throw UsageError("invalid stochastic dataset: " + why);
  return ds;
}

TradingNetwork parse_network(const json& j) {
  TradingNetwork net;
  net.n_agents = j.at("n_agents").get<int>();
  int idx = 0;
  for (auto const& t : j.at("trades"))
    net.trades.push_back({idx++, t.at("seller").get<int>(), t.at("buyer").get<int>()});
  for (auto const& agent : j.at("utility")) {
    std::map<std::vector<int>, Rat> u;
    for (auto const& entry : agent)
      u[entry.at("bundle").get<std::vector<int>>()] = parse_rat(entry.at("value"), "value");
    net.utility.push_back(u);
  }
  std::string why;
  if (!validate_network(net, &why)) throw UsageError("invalid network: " + why);
  return net;
}

GraphicalGame parse_game(const json& j) {
  GraphicalGame g;
  g.neighbors = j.at("neighbors").get<std::vector<std::vector<int>>>();
  g.strategies = j.at("strategies").get<std::vector<std::vector<std::string>>>();
  g.n_players = (int)g.neighbors.size();
  for (auto const& pl : j.at("payoff")) {
    std::map<std::vector<int>, Rat> u;
    for (auto const& entry : pl)
      u[entry.at("profile").get<std::vector<int>>()] = parse_rat(entry.at("value"), "value");
    g.payoff.push_back(u);
  }
  std::string why;
  if (!validate_game(g, &why)) throw UsageError("invalid game: " + why);
  return g;
}

DynamicMarket parse_dynamic(const json& j) {
  DynamicMarket mkt;
  mkt.n_women = j.at("n_women").get<int>();
  for (auto const& m : j.at("men"))
    mkt.men.push_back({m.at("pref").get<std::vector<int>>(), m.at("arrival").get<int>(),
                       m.at("departure").get<int>()});
  mkt.women_pref = j.at("women_pref").get<std::vector<std::vector<int>>>();
  std::string why;
  if (!validate_dynamic_market(mkt, &why)) throw UsageError("invalid dynamic market: " + why);
  return mkt;
}

// ---- plumbing ----

void emit(const json& out, const std::string& out_path) {
  std::string text = out.dump(2) + "\n";
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    f << text;
  }
  std::cout << text;
}

std::vector<bool> expand_row(const std::vector<bool>& row, const std::vector<VarId>& proj,
                             size_t pool_size) {
  std::vector<bool> full(pool_size, false);
  for (size_t i = 0; i < proj.size(); ++i) full[(size_t)proj[i]] = row[i];
  return full;
}

json matching_json(const Market& mk, const Matching& mu) {
  json out = json::object();
  for (size_t m = 0; m < mu.size(); ++m)
    out[mk.men[m]] = mu[m] >= 0 ? json(mk.women[(size_t)mu[m]]) : json(nullptr);
  return out;
}

// ---- subcommand handlers (return process exit code) ----

int run_match(const std::string& path, bool enumerate, bool man_optimal,
              const std::string& out_path) {
  Market mk = parse_marriage(load(path));
  MarketEncoding enc = man_optimal ? encode_man_optimal(mk) : encode_stable(mk);
  ClauseSet cs = to_cnf(enc.formulas, enc.pool);
  json out;
  out["command"] = man_optimal ? "match-optimal" : "match";
  if (enumerate) {
    std::vector<VarId> proj;
    for (auto const& row : enc.var)
      for (VarId v : row) proj.push_back(v);
    auto rows = enumerate_models(cs, proj, 4096);
    out["models"] = json::array();
    for (auto const& row : rows)
      out["models"].push_back(
          matching_json(mk, decode_matching(expand_row(row, proj, enc.pool.size()), enc)));
    out["count"] = rows.size();
    emit(out, out_path);
    return rows.empty() ? 1 : 0;
  }
  Solver solver(cs);
  if (solver.solve() != SolveResult::Sat) {
    out["status"] = "unsat";
    emit(out, out_path);
    return 1;
  }
  Matching mu = decode_matching(solver.model(), enc);
  out["status"] = "sat";
  out["matching"] = matching_json(mk, mu);
  out["stable"] = is_stable(mk, mu);
  emit(out, out_path);
  return 0;
}

int run_manipulate(const std::string& path, int man, const std::string& out_path) {
  Market mk = parse_marriage(load(path));
  if (man < 0 || man >= (int)mk.men.size()) throw UsageError("--man out of range");
  auto mis = find_profitable_misreport(mk, man);
  json out;
  out["command"] = "manipulate";
  out["man"] = mk.men[(size_t)man];
  out["profitable_misreport_exists"] = mis.has_value();
  if (mis) {
    json lst = json::array();
    for (int w : *mis) lst.push_back(mk.women[(size_t)w]);
    out["misreport"] = lst;
  }
  emit(out, out_path);
  return 0;
}

int run_couples(const std::string& path, const std::string& out_path) {
  CouplesMarket mkt = parse_couples(load(path));
  CouplesEncoding enc = encode_couples(mkt);
  ClauseSet cs = to_cnf(enc.formulas, enc.pool);
  Solver solver(cs);
  json out;
  out["command"] = "couples";
  // prefer exact target quotas; fall back to the near-feasible box
  std::vector<int> pin;
  for (size_t h = 0; h < mkt.hospitals.size(); ++h)
    pin.push_back(enc.quota[h][(size_t)(mkt.capacity[h] - enc.qmin[h])] + 1);
  bool sat = solver.solve(pin) == SolveResult::Sat;
  out["quota_adjusted"] = !sat;
  if (!sat) sat = solver.solve() == SolveResult::Sat;
  if (!sat) {
    out["status"] = "unsat";
    emit(out, out_path);
    return 1;
  }
  auto dec = decode_couples(solver.model(), enc);
  if (!dec) throw std::logic_error("undecodable couples model");
  out["status"] = "sat";
  json assign = json::object();
  for (size_t d = 0; d < dec->assign.size(); ++d)
    assign[mkt.doctors[d]] =
        dec->assign[d] >= 0 ? json(mkt.hospitals[(size_t)dec->assign[d]]) : json(nullptr);
  out["assignment"] = assign;
  json quota = json::object();
  for (size_t h = 0; h < dec->quota.size(); ++h) quota[mkt.hospitals[h]] = dec->quota[h];
  out["quota"] = quota;
  out["stable"] = is_stable_couples(mkt, *dec);
  emit(out, out_path);
  return 0;
}

int run_garp(const std::string& path, const std::string& out_path) {
  Dataset ds = parse_dataset(load(path));
  GarpReport rep = check_garp(ds);
  AfriatResult af = afriat_rationalize(ds);
  json out;
  out["command"] = "garp";
  out["consistent"] = rep.consistent;
  out["afriat_feasible"] = af.feasible;
  if (!rep.consistent) out["cycle"] = rep.cycle;
  if (af.feasible) {
    json u = json::array(), lam = json::array();
    for (auto const& x : af.u) u.push_back(rat_str(x));
    for (auto const& x : af.lambda) lam.push_back(rat_str(x));
    out["u"] = u;
    out["lambda"] = lam;
  }
  emit(out, out_path);
  return rep.consistent ? 0 : 1;
}

int run_rationalize(const std::string& path, int n_max, int pairs, bool midpoints,
                    const std::string& out_path) {
  Dataset ds = parse_dataset(load(path));
  GridConfig cfg;
  cfg.n_max = n_max;
  cfg.rational_pairs = pairs;
  cfg.midpoints = midpoints;
  GridEncoding enc = encode_rationalization_fragment(ds, cfg);
  ClauseSet cs = to_cnf(enc.formulas, enc.pool);
  Solver solver(cs);
  json out;
  out["command"] = "rationalize";
  out["n_max"] = n_max;
  if (solver.solve() != SolveResult::Sat) {
    out["status"] = "unsat";
    emit(out, out_path);
    return 1;
  }
  auto vals = decode_grid_utility(solver.model(), enc, enc.n_max);
  if (!vals) throw std::logic_error("undecodable utility model");
  out["status"] = "sat";
  out["verified"] = verify_rationalization(ds, enc, *vals);
  out["utility"] = json::parse(grid_utility_json(enc, *vals));
  emit(out, out_path);
  return 0;
}

int run_arsp(const std::string& path, int max_len, const std::string& out_path) {
  StochDataset ds = parse_stoch(load(path));
  ArspReport rep = check_arsp(ds, max_len);
  json out;
  out["command"] = "arsp";
  out["holds"] = rep.holds;
  if (!rep.holds) {
    out["witness"] = rep.witness;
    out["sum"] = rat_str(rep.sum);
    out["best"] = rat_str(rep.best);
  }
  emit(out, out_path);
  return rep.holds ? 0 : 1;
}

int run_stoch_rationalize(const std::string& path, int n_max, int L,
                          const std::string& out_path) {
  StochDataset ds = parse_stoch(load(path));
  auto od = rationalize_finite(ds);
  json out;
  out["command"] = "stoch-rationalize";
  out["lp_feasible"] = od.has_value();
  if (od) {
    json orders = json::array();
    for (size_t i = 0; i < od->orders.size(); ++i) {
      if (od->weight[i] == 0) continue;
      json entry;
      entry["order"] = od->orders[i];
      entry["weight"] = rat_str(od->weight[i]);
      orders.push_back(entry);
    }
    out["distribution"] = orders;
  }
  if (n_max > 0) {
    StochEncoding enc = encode_stoch_fragment(ds, n_max, L);
    ClauseSet cs = to_cnf(enc.formulas, enc.pool);
    Solver solver(cs);
    bool sat = solver.solve() == SolveResult::Sat;
    out["fragment_n_max"] = n_max;
    out["fragment_sat"] = sat;
    if (sat) {
      json marg = json::object();
      for (auto const& [tuple, p] : decode_marginals(solver.model(), enc)) {
        std::ostringstream key;
        for (size_t i = 0; i < tuple.size(); ++i)
          key << (i ? " " : "") << ds.items[(size_t)tuple[i]];
        marg[key.str()] = rat_str(p);
      }
      out["marginals"] = marg;
    }
  }
  emit(out, out_path);
  return od ? 0 : 1;
}

int run_walrasian(const std::string& path, int n, const std::vector<int>& refine,
                  const std::string& out_path) {
  TradingNetwork net = parse_network(load(path));
  json out;
  out["command"] = "walrasian";
  if (!refine.empty()) {
    RefineResult rr = refine_to_exact(net, refine);
    out["refined"] = rr.converged;
    if (rr.converged) {
      out["outcome"] = json::parse(outcome_json(net, rr.outcome));
      std::vector<Rat> zeros((size_t)net.n_agents, Rat(0));
      out["exact_verified"] = verify_eps_walrasian(net, rr.outcome, zeros);
    }
    emit(out, out_path);
    return rr.converged ? 0 : 1;
  }
  PriceGrid grid = build_grid(net, n);
  NetworkEncoding enc = encode_eps_walrasian(net, grid);
  ClauseSet cs = to_cnf(enc.formulas, enc.pool);
  Solver solver(cs);
  out["n"] = n;
  if (solver.solve() != SolveResult::Sat) {
    out["status"] = "unsat";
    emit(out, out_path);
    return 1;
  }
  auto dec = decode_outcome(solver.model(), enc);
  if (!dec) throw std::logic_error("undecodable outcome");
  std::vector<Rat> eps;
  for (int i = 0; i < net.n_agents; ++i)
    eps.push_back(Rat((long)incident_objects(net, i).size(), n));
  out["status"] = "sat";
  out["outcome"] = json::parse(outcome_json(net, *dec));
  out["verified"] = verify_eps_walrasian(net, *dec, eps);
  emit(out, out_path);
  return 0;
}

int run_nash(const std::string& path, const std::string& eps_s, const std::string& out_path) {
  GraphicalGame g = parse_game(load(path));
  Rat eps = parse_rat(json(eps_s), "--eps");
  DiscretizationPlan plan = plan_discretization(g, eps);
  NashEncoding enc = encode_eps_nash(g, eps, plan);
  ClauseSet cs = to_cnf(enc.formulas, enc.pool);
  Solver solver(cs);
  json out;
  out["command"] = "nash";
  out["eps"] = rat_str(eps);
  if (solver.solve() != SolveResult::Sat) {
    out["status"] = "unsat";
    emit(out, out_path);
    return 1;
  }
  auto prof = decode_profile(solver.model(), enc);
  if (!prof) throw std::logic_error("undecodable profile");
  NashCheck chk = verify_eps_nash(g, *prof, eps);
  out["status"] = "sat";
  out["profile"] = json::parse(profile_json(g, *prof));
  out["verified"] = chk.ok;
  out["worst_gain"] = rat_str(chk.worst_gain);
  emit(out, out_path);
  return 0;
}

int run_dynamic(const std::string& path, int t_lo, int t_hi, bool forward, size_t cap,
                const std::string& out_path) {
  DynamicMarket mkt = parse_dynamic(load(path));
  json out;
  out["command"] = "dynamic";
  out["window"] = {t_lo, t_hi};
  if (forward) {
    Chronology ch = pereyra_forward(mkt, t_lo, t_hi);
    out["chronology"] = json::parse(chronology_json(ch));
    out["stable_subject_to_tenure"] = is_stable_subject_to_tenure(mkt, ch, t_lo, t_hi);
    emit(out, out_path);
    return 0;
  }
  DynEncoding enc = encode_dynamic_window(mkt, t_lo, t_hi);
  ClauseSet cs = to_cnf(enc.formulas, enc.pool);
  auto rows = enumerate_models(cs, enc.all_vars, cap);
  out["models"] = json::array();
  for (auto const& row : rows) {
    auto ch = decode_chronology(expand_row(row, enc.all_vars, enc.pool.size()), mkt, enc);
    if (!ch) throw std::logic_error("undecodable chronology");
    out["models"].push_back(json::parse(chronology_json(*ch)));
  }
  out["count"] = rows.size();
  emit(out, out_path);
  return rows.empty() ? 1 : 0;
}

int run_szpilrajn(const std::string& path, bool enumerate, const std::string& out_path) {
  PartialOrder po = parse_order(load(path));
  OrderEncoding enc = encode_extension(po);
  ClauseSet cs = to_cnf(enc.formulas, enc.pool);
  json out;
  out["command"] = "szpilrajn";
  auto order_names = [&](const std::vector<int>& order) {
    json lst = json::array();
    for (int e : order) lst.push_back(po.elems[(size_t)e]);
    return lst;
  };
  if (enumerate) {
    std::vector<VarId> proj;
    for (size_t a = 0; a < po.elems.size(); ++a)
      for (size_t b = 0; b < po.elems.size(); ++b)
        if (a != b) proj.push_back(enc.gt[a][b]);
    auto rows = enumerate_models(cs, proj, 4096);
    out["models"] = json::array();
    for (auto const& row : rows) {
      auto order = decode_total_order(expand_row(row, proj, enc.pool.size()), enc);
      if (!order) throw std::logic_error("undecodable order");
      out["models"].push_back(order_names(*order));
    }
    out["count"] = rows.size();
    emit(out, out_path);
    return rows.empty() ? 1 : 0;
  }
  Solver solver(cs);
  if (solver.solve() != SolveResult::Sat) {
    out["status"] = "unsat";
    emit(out, out_path);
    return 1;
  }
  auto order = decode_total_order(solver.model(), enc);
  if (!order) throw std::logic_error("undecodable order");
  out["status"] = "sat";
  out["extension"] = order_names(*order);
  emit(out, out_path);
  return 0;
}

int run_ladder(const std::string& family, size_t k_max, size_t step,
               const std::string& out_path) {
  bool found = false;
  InfiniteInstance inst = builtin_family(family, &found);
  if (!found) throw UsageError("unknown family: " + family);
  LadderReport rep = ladder_solve(inst, k_max, step);
  json out;
  out["command"] = "ladder";
  out["family"] = family;
  out["report"] = json::parse(ladder_report_json(rep));
  emit(out, out_path);
  return rep.unsat ? 1 : 0;
}

int run_prefix_limit(const std::string& family, int m, size_t k_max, size_t step,
                     const std::string& out_path) {
  bool found = false;
  InfiniteInstance inst = builtin_family(family, &found);
  if (!found) throw UsageError("unknown family: " + family);
  PrefixResult pr = prefix_limit(inst, m, k_max, step);
  json out;
  out["command"] = "prefix-limit";
  out["family"] = family;
  out["result"] = json::parse(prefix_result_json(pr));
  emit(out, out_path);
  return pr.exhausted ? 1 : 0;
}

int run_export_cnf(const std::string& domain, const std::string& path, int n, int L,
                   const std::string& eps_s, int t_lo, int t_hi, const std::string& out_path) {
  VarPool pool;
  std::vector<Formula> formulas;
  if (domain == "match") {
    MarketEncoding enc = encode_stable(parse_marriage(load(path)));
    pool = enc.pool;
    formulas = enc.formulas;
  } else if (domain == "szpilrajn") {
    OrderEncoding enc = encode_extension(parse_order(load(path)));
    pool = enc.pool;
    formulas = enc.formulas;
  } else if (domain == "couples") {
    CouplesEncoding enc = encode_couples(parse_couples(load(path)));
    pool = enc.pool;
    formulas = enc.formulas;
  } else if (domain == "rationalize") {
    GridConfig cfg;
    cfg.n_max = n;
    GridEncoding enc = encode_rationalization_fragment(parse_dataset(load(path)), cfg);
    pool = enc.pool;
    formulas = enc.formulas;
  } else if (domain == "stoch") {
    StochEncoding enc = encode_stoch_fragment(parse_stoch(load(path)), n, L);
    pool = enc.pool;
    formulas = enc.formulas;
  } else if (domain == "walrasian") {
    TradingNetwork net = parse_network(load(path));
    NetworkEncoding enc = encode_eps_walrasian(net, build_grid(net, n));
    pool = enc.pool;
    formulas = enc.formulas;
  } else if (domain == "nash") {
    GraphicalGame g = parse_game(load(path));
    Rat eps = parse_rat(json(eps_s), "--eps");
    NashEncoding enc = encode_eps_nash(g, eps, plan_discretization(g, eps));
    pool = enc.pool;
    formulas = enc.formulas;
  } else if (domain == "dynamic") {
    DynEncoding enc = encode_dynamic_window(parse_dynamic(load(path)), t_lo, t_hi);
    pool = enc.pool;
    formulas = enc.formulas;
  } else {
    throw UsageError("unknown export domain: " + domain);
  }
  ClauseSet cs = to_cnf(formulas, pool);
  std::string text = to_dimacs(cs, pool);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    f << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"logical-compactness toolkit"};
  app.require_subcommand(1);
  std::string path, out_path, family, eps_s = "1/4", domain;
  int n = 4, L = 2, man = 0, m = 6, t_lo = 0, t_hi = 0, max_len = 4, pairs = 0;
  size_t k_max = 100, step = 25, cap = 256;
  bool enumerate = false, forward = false, no_midpoints = false;
  std::vector<int> refine;

  app.add_flag("--allow-decimal", g_allow_decimal, "accept decimal literals (converted exactly)");

  auto add_common = [&](CLI::App* sub, bool with_file = true) {
    if (with_file) sub->add_option("file", path, "instance file (JSON)")->required();
    sub->add_option("--out", out_path, "also write the JSON result here");
  };

  auto* c_match = app.add_subcommand("match", "stable matchings of a marriage market");
  add_common(c_match);
  c_match->add_flag("--enumerate", enumerate);
  auto* c_opt = app.add_subcommand("match-optimal", "man-optimal stable matching");
  add_common(c_opt);
  auto* c_man = app.add_subcommand("manipulate", "misreport sweep for one man");
  add_common(c_man);
  c_man->add_option("--man", man)->required();
  auto* c_cpl = app.add_subcommand("couples", "near-feasible stable outcome with couples");
  add_common(c_cpl);
  auto* c_garp = app.add_subcommand("garp", "GARP check plus Afriat inequalities");
  add_common(c_garp);
  auto* c_rat = app.add_subcommand("rationalize", "grid-utility rationalization fragment");
  add_common(c_rat);
  c_rat->add_option("--n", n);
  c_rat->add_option("--pairs", pairs);
  c_rat->add_flag("--no-midpoints", no_midpoints);
  auto* c_arsp = app.add_subcommand("arsp", "axiom of revealed stochastic preference");
  add_common(c_arsp);
  c_arsp->add_option("--len", max_len);
  auto* c_sr = app.add_subcommand("stoch-rationalize", "random-utility rationalization");
  add_common(c_sr);
  c_sr->add_option("--n", n)->default_val(0);
  c_sr->add_option("--L", L);
  auto* c_wal = app.add_subcommand("walrasian", "eps-Walrasian equilibrium on a price grid");
  add_common(c_wal);
  c_wal->add_option("--n", n);
  c_wal->add_option("--refine", refine, "resolution ladder; overrides --n");
  auto* c_nash = app.add_subcommand("nash", "eps-Nash equilibrium of a graphical game");
  add_common(c_nash);
  c_nash->add_option("--eps", eps_s);
  auto* c_dyn = app.add_subcommand("dynamic", "dynamic matching window models");
  add_common(c_dyn);
  c_dyn->add_option("--window", [&t_lo, &t_hi](const std::vector<std::string>& vals) {
          t_lo = std::stoi(vals.at(0));
          t_hi = std::stoi(vals.at(1));
          return true;
        })->expected(2)->required();
  c_dyn->add_flag("--forward", forward, "run the Pereyra forward algorithm instead");
  c_dyn->add_option("--cap", cap);
  auto* c_szp = app.add_subcommand("szpilrajn", "linear extension of a partial order");
  add_common(c_szp);
  c_szp->add_flag("--enumerate", enumerate);
  auto* c_lad = app.add_subcommand("ladder", "fragment ladder over a built-in family");
  c_lad->add_option("--family", family)->required();
  c_lad->add_option("--kmax", k_max);
  c_lad->add_option("--step", step);
  c_lad->add_option("--out", out_path);
  auto* c_pre = app.add_subcommand("prefix-limit", "prefix extraction over a built-in family");
  c_pre->add_option("--family", family)->required();
  c_pre->add_option("--prefix", m);
  c_pre->add_option("--kmax", k_max);
  c_pre->add_option("--step", step);
  c_pre->add_option("--out", out_path);
  auto* c_cnf = app.add_subcommand("export-cnf", "DIMACS export of an instance encoding");
  c_cnf->add_option("--domain", domain)->required();
  c_cnf->add_option("file", path)->required();
  c_cnf->add_option("--n", n);
  c_cnf->add_option("--L", L);
  c_cnf->add_option("--eps", eps_s);
  c_cnf->add_option("--window", [&t_lo, &t_hi](const std::vector<std::string>& vals) {
          t_lo = std::stoi(vals.at(0));
          t_hi = std::stoi(vals.at(1));
          return true;
        })->expected(2);
  c_cnf->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (c_match->parsed()) return run_match(path, enumerate, false, out_path);
    if (c_opt->parsed()) return run_match(path, false, true, out_path);
    if (c_man->parsed()) return run_manipulate(path, man, out_path);
    if (c_cpl->parsed()) return run_couples(path, out_path);
    if (c_garp->parsed()) return run_garp(path, out_path);
    if (c_rat->parsed()) return run_rationalize(path, n, pairs, !no_midpoints, out_path);
    if (c_arsp->parsed()) return run_arsp(path, max_len, out_path);
    if (c_sr->parsed()) return run_stoch_rationalize(path, n, L, out_path);
    if (c_wal->parsed()) return run_walrasian(path, n, refine, out_path);
    if (c_nash->parsed()) return run_nash(path, eps_s, out_path);
    if (c_dyn->parsed()) return run_dynamic(path, t_lo, t_hi, forward, cap, out_path);
    if (c_szp->parsed()) return run_szpilrajn(path, enumerate, out_path);
    if (c_lad->parsed()) return run_ladder(family, k_max, step, out_path);
    if (c_pre->parsed()) return run_prefix_limit(family, m, k_max, step, out_path);
    if (c_cnf->parsed())
      return run_export_cnf(domain, path, n, L, eps_s, t_lo, t_hi, out_path);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
