#include "lc/logic.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lc {

Formula Formula::atom(VarId v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Atom;
  n->var = v;
  return Formula(std::move(n));
}

Formula Formula::neg(Formula f) {
  auto n = std::make_shared<Node>();
  n->op = Op::Not;
  n->kids.push_back(std::move(f));
  return Formula(std::move(n));
}

Formula Formula::conj(std::vector<Formula> kids) {
  if (kids.size() == 1) return kids[0];
  auto n = std::make_shared<Node>();
  n->op = Op::And;
  n->kids = std::move(kids);
  return Formula(std::move(n));
}

Formula Formula::disj(std::vector<Formula> kids) {
  if (kids.size() == 1) return kids[0];
  auto n = std::make_shared<Node>();
  n->op = Op::Or;
  n->kids = std::move(kids);
  return Formula(std::move(n));
}

Formula Formula::implies(Formula a, Formula b) {
  auto n = std::make_shared<Node>();
  n->op = Op::Implies;
  n->kids.push_back(std::move(a));
  n->kids.push_back(std::move(b));
  return Formula(std::move(n));
}

Formula Formula::iff(Formula a, Formula b) {
  auto n = std::make_shared<Node>();
  n->op = Op::Iff;
  n->kids.push_back(std::move(a));
  n->kids.push_back(std::move(b));
  return Formula(std::move(n));
}

Formula Formula::truth() { return conj({}); }
Formula Formula::falsity() { return disj({}); }

VarId Formula::max_var() const {
  VarId m = -1;
  if (op() == Op::Atom) return var();
  for (const auto& k : kids()) m = std::max(m, k.max_var());
  return m;
}

VarId VarPool::add(const std::string& label) {
  auto it = index_.find(label);
  if (it != index_.end()) return it->second;
  VarId v = static_cast<VarId>(labels_.size());
  labels_.push_back(label);
  aux_.push_back(false);
  index_.emplace(label, v);
  return v;
}

std::optional<VarId> VarPool::find(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VarId VarPool::fresh_aux(const std::string& tag) {
  std::string label = "@aux:" + tag + ":" + std::to_string(aux_count_++);
  while (index_.count(label)) label = "@aux:" + tag + ":" + std::to_string(aux_count_++);
  VarId v = add(label);
  aux_[static_cast<size_t>(v)] = true;
  return v;
}

bool eval(const Formula& f, const std::vector<bool>& model) {
  switch (f.op()) {
    case Op::Atom: {
      auto v = static_cast<size_t>(f.var());
      if (v >= model.size()) throw std::out_of_range("eval: unassigned variable");
      return model[v];
    }
    case Op::Not:
      return !eval(f.kids()[0], model);
    case Op::And:
      for (const auto& k : f.kids())
        if (!eval(k, model)) return false;
      return true;
    case Op::Or:
      for (const auto& k : f.kids())
        if (eval(k, model)) return true;
      return false;
    case Op::Implies:
      // FALSE only when the antecedent holds and the consequent fails.
      return !eval(f.kids()[0], model) || eval(f.kids()[1], model);
    case Op::Iff:
      return eval(f.kids()[0], model) == eval(f.kids()[1], model);
  }
  throw std::logic_error("eval: bad op");
}

void ClauseSet::add(std::vector<int> lits) {
  std::sort(lits.begin(), lits.end(), [](int a, int b) {
    int va = std::abs(a), vb = std::abs(b);
    return va != vb ? va < vb : a < b;
  });
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (size_t i = 0; i + 1 < lits.size(); ++i)
    if (lits[i] == -lits[i + 1]) return;  // tautology
  for (int l : lits) num_vars = std::max(num_vars, std::abs(l));
  clauses.push_back(std::move(lits));
}

namespace {

// Plaisted-Greenbaum style conversion.  enc(f, pos/neg) returns a literal
// equivalent to f in the required direction(s).
struct Cnf {
  ClauseSet cs;
  VarPool& pool;
  // cache: node id -> (aux var, emitted-positive, emitted-negative)
  struct Entry {
    int lit = 0;
    bool pos = false;
    bool neg = false;
  };
  std::unordered_map<const void*, Entry> cache;

  explicit Cnf(VarPool& p) : pool(p) {}

  static int lit_of(VarId v) { return v + 1; }

  // Returns a DIMACS literal L such that (pol pos) L -> f and/or
  // (pol neg) f -> L hold via emitted clauses.
  int enc(const Formula& f, bool pos, bool neg) {
    switch (f.op()) {
      case Op::Atom:
        return lit_of(f.var());
      case Op::Not:
        return -enc(f.kids()[0], neg, pos);
      default:
        break;
    }
    auto& e = cache[f.id()];
    if (e.lit == 0) e.lit = lit_of(pool.fresh_aux());
    bool need_pos = pos && !e.pos;
    bool need_neg = neg && !e.neg;
    if (need_pos) e.pos = true;
    if (need_neg) e.neg = true;
    if (!need_pos && !need_neg) return e.lit;
    int x = e.lit;
    switch (f.op()) {
      case Op::And: {
        if (need_pos)  // x -> each kid
          for (const auto& k : f.kids()) cs.add({-x, enc(k, true, false)});
        if (need_neg) {  // kids -> x
          std::vector<int> cl;
          for (const auto& k : f.kids()) cl.push_back(-enc(k, false, true));
          cl.push_back(x);
          cs.add(std::move(cl));
        }
        break;
      }
      case Op::Or: {
        if (need_pos) {  // x -> some kid
          std::vector<int> cl{-x};
          for (const auto& k : f.kids()) cl.push_back(enc(k, true, false));
          cs.add(std::move(cl));
        }
        if (need_neg)  // each kid -> x
          for (const auto& k : f.kids()) cs.add({-enc(k, false, true), x});
        break;
      }
      case Op::Implies: {
        if (need_pos) {
          int a = enc(f.kids()[0], false, true);
          int b = enc(f.kids()[1], true, false);
          cs.add({-x, -a, b});
        }
        if (need_neg) {
          int a = enc(f.kids()[0], true, false);
          int b = enc(f.kids()[1], false, true);
          cs.add({a, x});
          cs.add({-b, x});
        }
        break;
      }
      case Op::Iff: {
        int a = enc(f.kids()[0], true, true);
        int b = enc(f.kids()[1], true, true);
        if (need_pos) {
          cs.add({-x, -a, b});
          cs.add({-x, a, -b});
        }
        if (need_neg) {
          cs.add({-a, -b, x});
          cs.add({a, b, x});
        }
        break;
      }
      default:
        break;
    }
    return x;
  }

  // Assert f at top level without an auxiliary when the shape allows.
  void assert_top(const Formula& f) {
    switch (f.op()) {
      case Op::And:
        for (const auto& k : f.kids()) assert_top(k);
        return;
      case Op::Or: {
        if (f.kids().empty()) {
          cs.clauses.push_back({});  // FALSE
          return;
        }
        std::vector<int> cl;
        for (const auto& k : f.kids()) cl.push_back(enc(k, true, false));
        cs.add(std::move(cl));
        return;
      }
      case Op::Implies: {
        int a = enc(f.kids()[0], false, true);
        int b = enc(f.kids()[1], true, false);
        cs.add({-a, b});
        return;
      }
      case Op::Iff: {
        int a = enc(f.kids()[0], true, true);
        int b = enc(f.kids()[1], true, true);
        cs.add({-a, b});
        cs.add({a, -b});
        return;
      }
      default:
        cs.add({enc(f, true, false)});
        return;
    }
  }
};

}  // namespace

ClauseSet to_cnf(const std::vector<Formula>& formulas, VarPool& pool) {
  Cnf c(pool);
  for (const auto& f : formulas) c.assert_top(f);
  c.cs.num_vars = std::max<int>(c.cs.num_vars, static_cast<int>(pool.size()));
  return c.cs;
}

std::string to_dimacs(const ClauseSet& cs, const VarPool& pool) {
  std::ostringstream os;
  for (size_t v = 0; v < pool.size(); ++v)
    os << "c var " << (v + 1) << " " << pool.label(static_cast<VarId>(v)) << "\n";
  os << "p cnf " << cs.num_vars << " " << cs.clauses.size() << "\n";
  for (const auto& cl : cs.clauses) {
    for (int l : cl) os << l << " ";
    os << "0\n";
  }
  return os.str();
}

std::string model_to_json(const std::vector<bool>& model, const VarPool& pool) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (size_t v = 0; v < pool.size() && v < model.size(); ++v)
    if (!pool.is_aux(static_cast<VarId>(v))) j[pool.label(static_cast<VarId>(v))] = (bool)model[v];
  return j.dump(2);
}

}  // namespace lc
