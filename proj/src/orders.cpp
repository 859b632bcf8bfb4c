#include "lc/orders.hpp"

#include <algorithm>
#include <set>

namespace lc {

bool validate_partial_order(const PartialOrder& po, std::string* why) {
  int n = static_cast<int>(po.elems.size());
  std::set<std::pair<int, int>> rel(po.pairs.begin(), po.pairs.end());
  for (auto [a, b] : rel) {
    if (a < 0 || b < 0 || a >= n || b >= n) {
      if (why) *why = "pair index out of range";
      return false;
    }
    if (a == b) {
      if (why) *why = "irreflexivity violated at " + po.elems[static_cast<size_t>(a)];
      return false;
    }
    if (rel.count({b, a})) {
      if (why) *why = "asymmetry violated";
      return false;
    }
  }
  for (auto [a, b] : rel)
    for (auto [c, d] : rel)
      if (b == c && !rel.count({a, d})) {
        if (why)
          *why = "transitivity violated: " + po.elems[static_cast<size_t>(a)] + " > " +
                 po.elems[static_cast<size_t>(b)] + " > " + po.elems[static_cast<size_t>(d)];
        return false;
      }
  return true;
}

PartialOrder transitive_closure(const PartialOrder& po) {
  int n = static_cast<int>(po.elems.size());
  std::vector<std::vector<bool>> r(static_cast<size_t>(n), std::vector<bool>(static_cast<size_t>(n), false));
  for (auto [a, b] : po.pairs) r[static_cast<size_t>(a)][static_cast<size_t>(b)] = true;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (r[static_cast<size_t>(i)][static_cast<size_t>(k)])
        for (int j = 0; j < n; ++j)
          if (r[static_cast<size_t>(k)][static_cast<size_t>(j)]) r[static_cast<size_t>(i)][static_cast<size_t>(j)] = true;
  PartialOrder out;
  out.elems = po.elems;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (r[static_cast<size_t>(i)][static_cast<size_t>(j)]) out.pairs.emplace_back(i, j);
  return out;
}

OrderEncoding encode_extension(const PartialOrder& po) {
  OrderEncoding enc;
  int n = static_cast<int>(po.elems.size());
  enc.gt.assign(static_cast<size_t>(n), std::vector<VarId>(static_cast<size_t>(n), -1));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b)
        enc.gt[static_cast<size_t>(a)][static_cast<size_t>(b)] =
            enc.pool.add("gt(" + po.elems[static_cast<size_t>(a)] + "," + po.elems[static_cast<size_t>(b)] + ")");
  auto G = [&](int a, int b) { return Formula::atom(enc.gt[static_cast<size_t>(a)][static_cast<size_t>(b)]); };
  // base facts
  for (auto [a, b] : po.pairs) enc.formulas.push_back(G(a, b));
  // totality, once per unordered pair
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) enc.formulas.push_back(Formula::disj({G(a, b), G(b, a)}));
  // asymmetry, once per unordered pair
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      enc.formulas.push_back(Formula::neg(Formula::conj({G(a, b), G(b, a)})));
  // transitivity, every ordered triple
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        if (a == b || b == c || a == c) continue;
        enc.formulas.push_back(Formula::implies(Formula::conj({G(a, b), G(b, c)}), G(a, c)));
      }
  return enc;
}

std::vector<int> kahn_extension(const PartialOrder& po) {
  PartialOrder cl = transitive_closure(po);
  int n = static_cast<int>(po.elems.size());
  std::vector<int> above(static_cast<size_t>(n), 0);  // count of elements above
  std::set<std::pair<int, int>> rel(cl.pairs.begin(), cl.pairs.end());
  for (auto [a, b] : rel) above[static_cast<size_t>(b)]++;
  std::vector<bool> placed(static_cast<size_t>(n), false);
  std::vector<int> out;
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int v = 0; v < n; ++v)
      if (!placed[static_cast<size_t>(v)] && above[static_cast<size_t>(v)] == 0) {
        pick = v;  // lowest registration index among maximal elements
        break;
      }
    placed[static_cast<size_t>(pick)] = true;
    out.push_back(pick);
    for (auto [a, b] : rel)
      if (a == pick) above[static_cast<size_t>(b)]--;
  }
  return out;
}

static void enum_ext(const std::set<std::pair<int, int>>& rel, std::vector<bool>& placed,
                     std::vector<int>& above, std::vector<int>& cur,
                     std::vector<std::vector<int>>& out) {
  int n = static_cast<int>(placed.size());
  if (static_cast<int>(cur.size()) == n) {
    out.push_back(cur);
    return;
  }
  for (int v = 0; v < n; ++v) {
    if (placed[static_cast<size_t>(v)] || above[static_cast<size_t>(v)] != 0) continue;
    placed[static_cast<size_t>(v)] = true;
    cur.push_back(v);
    for (auto [a, b] : rel)
      if (a == v) above[static_cast<size_t>(b)]--;
    enum_ext(rel, placed, above, cur, out);
    for (auto [a, b] : rel)
      if (a == v) above[static_cast<size_t>(b)]++;
    cur.pop_back();
    placed[static_cast<size_t>(v)] = false;
  }
}

std::vector<std::vector<int>> enumerate_linear_extensions(const PartialOrder& po) {
  PartialOrder cl = transitive_closure(po);
  int n = static_cast<int>(po.elems.size());
  std::set<std::pair<int, int>> rel(cl.pairs.begin(), cl.pairs.end());
  std::vector<int> above(static_cast<size_t>(n), 0);
  for (auto [a, b] : rel) above[static_cast<size_t>(b)]++;
  std::vector<bool> placed(static_cast<size_t>(n), false);
  std::vector<int> cur;
  std::vector<std::vector<int>> out;
  enum_ext(rel, placed, above, cur, out);
  return out;
}

std::optional<std::vector<int>> decode_total_order(const std::vector<bool>& model,
                                                   const OrderEncoding& enc) {
  int n = static_cast<int>(enc.gt.size());
  auto val = [&](int a, int b) {
    VarId v = enc.gt[static_cast<size_t>(a)][static_cast<size_t>(b)];
    return static_cast<size_t>(v) < model.size() && model[static_cast<size_t>(v)];
  };
  // strict total order checks
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (val(a, b) == val(b, a)) return std::nullopt;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        if (a == b || b == c || a == c) continue;
        if (val(a, b) && val(b, c) && !val(a, c)) return std::nullopt;
      }
  std::vector<int> idx(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) idx[static_cast<size_t>(v)] = v;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return val(a, b); });
  return idx;
}

}  // namespace lc
