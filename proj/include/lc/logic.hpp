#pragma once

// Propositional substrate: formulas, variable pools, CNF conversion,
// DIMACS / JSON export.

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

namespace lc {

using VarId = int;

enum class Op : uint8_t { Atom, Not, And, Or, Implies, Iff };

// Immutable formula DAG.  Cheap to copy (shared_ptr).  Empty conjunction is
// TRUE, empty disjunction is FALSE.
class Formula {
 public:
  Formula() = default;

  static Formula atom(VarId v);
  static Formula neg(Formula f);
  static Formula conj(std::vector<Formula> kids);
  static Formula disj(std::vector<Formula> kids);
  static Formula implies(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);
  static Formula truth();
  static Formula falsity();

  bool valid() const { return n_ != nullptr; }
  Op op() const { return n_->op; }
  VarId var() const { return n_->var; }
  const std::vector<Formula>& kids() const { return n_->kids; }
  const void* id() const { return n_.get(); }

  // Highest variable id mentioned, or -1.
  VarId max_var() const;

 private:
  struct Node {
    Op op;
    VarId var = -1;
    std::vector<Formula> kids;
  };
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

// Registry mapping labels to variable ids.  Auxiliary (Tseitin etc.)
// variables carry generated labels and are flagged.
class VarPool {
 public:
  VarId add(const std::string& label);  // idempotent per label
  std::optional<VarId> find(const std::string& label) const;
  VarId fresh_aux(const std::string& tag = "t");
  bool is_aux(VarId v) const { return aux_[static_cast<size_t>(v)]; }
  size_t size() const { return labels_.size(); }
  const std::string& label(VarId v) const { return labels_[static_cast<size_t>(v)]; }

 private:
  std::vector<std::string> labels_;
  std::vector<bool> aux_;
  std::unordered_map<std::string, VarId> index_;
  long aux_count_ = 0;
};

// Total assignment evaluation.  model[v] must be defined for every atom.
bool eval(const Formula& f, const std::vector<bool>& model);

// Clauses hold DIMACS-style literals: +(v+1) / -(v+1).
struct ClauseSet {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;

  void add(std::vector<int> lits);  // drops tautologies, dedups literals
};

// Polarity-aware Tseitin conversion.  Auxiliary variables are drawn from the
// pool; definition clauses are emitted only in the direction required by the
// polarity of each occurrence.  Satisfying assignments project exactly onto
// the models of the input set.
ClauseSet to_cnf(const std::vector<Formula>& formulas, VarPool& pool);

// DIMACS text with a leading comment block mapping indices to labels.
std::string to_dimacs(const ClauseSet& cs, const VarPool& pool);

// JSON object label -> bool over non-auxiliary variables.
std::string model_to_json(const std::vector<bool>& model, const VarPool& pool);

}  // namespace lc
