#include "lc/lp.hpp"

#include <stdexcept>

namespace lc {

namespace {

// Standard-form tableau: rows are equalities over nonnegative variables,
// rhs >= 0.  Phase I minimizes the sum of artificials, phase II maximizes c.
struct Tableau {
  int m, n;                           // rows, structural columns
  std::vector<std::vector<Rat>> a;    // m x n
  std::vector<Rat> b;                 // m
  std::vector<int> basis;             // m, column index basic in each row

  void pivot(int r, int c) {
    Rat p = a[r][c];
    for (int j = 0; j < n; ++j) a[r][j] /= p;
    b[r] /= p;
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      if (a[i][c] == 0) continue;
      Rat f = a[i][c];
      for (int j = 0; j < n; ++j) a[i][j] -= f * a[r][j];
      b[i] -= f * b[r];
    }
    basis[r] = c;
  }

  // Bland's rule simplex maximizing obj (length n).  Returns false if
  // unbounded.  cost_allowed: columns eligible to enter.
  bool run(const std::vector<Rat>& obj, const std::vector<bool>& allowed, Rat& value,
           std::vector<Rat>& reduced) {
    for (;;) {
      // reduced costs: obj_j - obj_B . col_j
      std::vector<Rat> y(m);
      for (int i = 0; i < m; ++i) y[i] = obj[static_cast<size_t>(basis[i])];
      int enter = -1;
      for (int j = 0; j < n; ++j) {
        if (!allowed[static_cast<size_t>(j)]) continue;
        Rat rc = obj[static_cast<size_t>(j)];
        for (int i = 0; i < m; ++i)
          if (a[i][j] != 0) rc -= y[static_cast<size_t>(i)] * a[i][j];
        if (rc > 0) {
          enter = j;
          break;  // Bland: first improving column
        }
      }
      if (enter == -1) {
        value = 0;
        for (int i = 0; i < m; ++i) value += y[static_cast<size_t>(i)] * b[i];
        reduced.assign(static_cast<size_t>(n), Rat(0));
        for (int j = 0; j < n; ++j) {
          Rat rc = obj[static_cast<size_t>(j)];
          for (int i = 0; i < m; ++i)
            if (a[i][j] != 0) rc -= y[static_cast<size_t>(i)] * a[i][j];
          reduced[static_cast<size_t>(j)] = rc;
        }
        return true;
      }
      int leave = -1;
      Rat best;
      for (int i = 0; i < m; ++i) {
        if (a[i][enter] > 0) {
          Rat ratio = b[i] / a[i][enter];
          if (leave == -1 || ratio < best ||
              (ratio == best && basis[i] < basis[leave])) {  // Bland tie-break
            leave = i;
            best = ratio;
          }
        }
      }
      if (leave == -1) return false;  // unbounded
      pivot(leave, enter);
    }
  }
};

}  // namespace

LPResult lp_solve(int nvars, const std::vector<LinCon>& cons, const std::vector<Rat>& c,
                  const std::vector<bool>& nonneg) {
  int m = static_cast<int>(cons.size());
  // column layout: for each original var: one col if nonneg, two (+/-) if free;
  // then one slack per LE/GE row; then one artificial per row.
  std::vector<int> col_pos(static_cast<size_t>(nvars)), col_neg(static_cast<size_t>(nvars), -1);
  int n = 0;
  for (int v = 0; v < nvars; ++v) {
    col_pos[static_cast<size_t>(v)] = n++;
    if (!nonneg[static_cast<size_t>(v)]) col_neg[static_cast<size_t>(v)] = n++;
  }
  std::vector<int> slack_col(static_cast<size_t>(m), -1);
  for (int i = 0; i < m; ++i)
    if (cons[static_cast<size_t>(i)].rel != Rel::EQ) slack_col[static_cast<size_t>(i)] = n++;
  int art0 = n;
  n += m;

  Tableau t;
  t.m = m;
  t.n = n;
  t.a.assign(static_cast<size_t>(m), std::vector<Rat>(static_cast<size_t>(n), Rat(0)));
  t.b.assign(static_cast<size_t>(m), Rat(0));
  t.basis.assign(static_cast<size_t>(m), -1);

  for (int i = 0; i < m; ++i) {
    const auto& con = cons[static_cast<size_t>(i)];
    Rat sign = 1;
    // normalize to  a.x (+ slack) = b  with b >= 0
    Rat b = con.b;
    Rat slack_sign = con.rel == Rel::LE ? Rat(1) : (con.rel == Rel::GE ? Rat(-1) : Rat(0));
    if (b < 0) {
      sign = -1;
      b = -b;
      slack_sign = -slack_sign;
    }
    for (int v = 0; v < nvars; ++v) {
      Rat av = sign * con.a[static_cast<size_t>(v)];
      if (av == 0) continue;
      t.a[static_cast<size_t>(i)][static_cast<size_t>(col_pos[static_cast<size_t>(v)])] = av;
      if (col_neg[static_cast<size_t>(v)] >= 0)
        t.a[static_cast<size_t>(i)][static_cast<size_t>(col_neg[static_cast<size_t>(v)])] = -av;
    }
    if (slack_col[static_cast<size_t>(i)] >= 0)
      t.a[static_cast<size_t>(i)][static_cast<size_t>(slack_col[static_cast<size_t>(i)])] = slack_sign;
    t.b[static_cast<size_t>(i)] = b;
    t.a[static_cast<size_t>(i)][static_cast<size_t>(art0 + i)] = 1;
    t.basis[static_cast<size_t>(i)] = art0 + i;
  }

  LPResult res;
  // Phase I: maximize -(sum of artificials)
  {
    std::vector<Rat> obj(static_cast<size_t>(n), Rat(0));
    for (int i = 0; i < m; ++i) obj[static_cast<size_t>(art0 + i)] = -1;
    std::vector<bool> allowed(static_cast<size_t>(n), true);
    Rat value;
    std::vector<Rat> reduced;
    if (!t.run(obj, allowed, value, reduced)) throw std::logic_error("phase I unbounded");
    if (value != 0) return res;  // infeasible
    // drive artificials out of the basis where possible
    for (int i = 0; i < m; ++i) {
      if (t.basis[static_cast<size_t>(i)] >= art0) {
        int enter = -1;
        for (int j = 0; j < art0; ++j)
          if (t.a[static_cast<size_t>(i)][static_cast<size_t>(j)] != 0) {
            enter = j;
            break;
          }
        if (enter >= 0) t.pivot(i, enter);
        // else: redundant row, harmless (artificial stays basic at 0)
      }
    }
  }
  res.feasible = true;
  // Phase II
  {
    std::vector<Rat> obj(static_cast<size_t>(n), Rat(0));
    for (int v = 0; v < nvars; ++v) {
      obj[static_cast<size_t>(col_pos[static_cast<size_t>(v)])] = c[static_cast<size_t>(v)];
      if (col_neg[static_cast<size_t>(v)] >= 0)
        obj[static_cast<size_t>(col_neg[static_cast<size_t>(v)])] = -c[static_cast<size_t>(v)];
    }
    std::vector<bool> allowed(static_cast<size_t>(n), true);
    for (int i = 0; i < m; ++i) allowed[static_cast<size_t>(art0 + i)] = false;
    Rat value;
    std::vector<Rat> reduced;
    if (!t.run(obj, allowed, value, reduced)) {
      res.unbounded = true;
      return res;
    }
    res.objective = value;
  }
  res.x.assign(static_cast<size_t>(nvars), Rat(0));
  std::vector<Rat> colval(static_cast<size_t>(n), Rat(0));
  for (int i = 0; i < m; ++i) colval[static_cast<size_t>(t.basis[static_cast<size_t>(i)])] = t.b[static_cast<size_t>(i)];
  for (int v = 0; v < nvars; ++v) {
    res.x[static_cast<size_t>(v)] = colval[static_cast<size_t>(col_pos[static_cast<size_t>(v)])];
    if (col_neg[static_cast<size_t>(v)] >= 0)
      res.x[static_cast<size_t>(v)] -= colval[static_cast<size_t>(col_neg[static_cast<size_t>(v)])];
  }
  return res;
}

LPResult lp_feasible(int nvars, const std::vector<LinCon>& cons, const std::vector<bool>& nonneg) {
  std::vector<Rat> c(static_cast<size_t>(nvars), Rat(0));
  return lp_solve(nvars, cons, c, nonneg);
}

}  // namespace lc
