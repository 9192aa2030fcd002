#include "oq/lp.hpp"

#include <algorithm>
#include <cstdlib>

#include "oq/error.hpp"

namespace oq {

namespace {

template <class T>
struct Num;

template <>
struct Num<Rat> {
  static bool pos(const Rat& v) { return v > 0; }
  static bool neg(const Rat& v) { return v < 0; }
  static bool zero(const Rat& v) { return v == 0; }
  static Rat from(const Rat& v) { return v; }
};

template <>
struct Num<double> {
  static constexpr double eps = 1e-9;
  static bool pos(double v) { return v > eps; }
  static bool neg(double v) { return v < -eps; }
  static bool zero(double v) { return v >= -eps && v <= eps; }
  static double from(const Rat& v) { return to_double(v); }
};

// Equality-form tableau. Columns: structural vars, then one slack per Le/Ge
// row, then one artificial per row that needs one. Rows can be dropped when
// phase 1 proves them redundant.
template <class T>
struct Simplex {
  std::size_t n_struct = 0;
  std::size_t n_cols = 0;
  std::vector<std::vector<T>> row;  // each n_cols + 1, rhs last
  std::vector<T> obj;               // reduced costs + (-z) in the last cell
  std::vector<int> basis;           // per row
  std::vector<char> allowed;        // per column
  std::vector<int> row_id;          // original row index per tableau row
  std::vector<int> slack_col;       // per original row, -1 if none
  long iterations = 0;
  long iteration_cap = 2000000;

  void pivot(std::size_t pr, std::size_t pc) {
    T inv = row[pr][pc];
    for (auto& v : row[pr]) v = v / inv;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i == pr || Num<T>::zero(row[i][pc])) continue;
      T f = row[i][pc];
      for (std::size_t j = 0; j <= n_cols; ++j) row[i][j] = row[i][j] - f * row[pr][j];
      row[i][pc] = T(0);
    }
    if (!Num<T>::zero(obj[pc])) {
      T f = obj[pc];
      for (std::size_t j = 0; j <= n_cols; ++j) obj[j] = obj[j] - f * row[pr][j];
      obj[pc] = T(0);
    }
    basis[pr] = static_cast<int>(pc);
  }

  // Bland's rule; returns Optimal or Unbounded.
  LpStatus run() {
    for (;;) {
      if (++iterations > iteration_cap)
        throw ResourceCapError("simplex iteration cap exceeded");
      std::size_t enter = n_cols;
      for (std::size_t j = 0; j < n_cols; ++j) {
        if (allowed[j] && Num<T>::neg(obj[j])) { enter = j; break; }
      }
      if (enter == n_cols) return LpStatus::Optimal;
      std::size_t leave = row.size();
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (!Num<T>::pos(row[i][enter])) continue;
        if (leave == row.size()) { leave = i; continue; }
        T lhs = row[i][n_cols] * row[leave][enter];
        T rhs = row[leave][n_cols] * row[i][enter];
        if (lhs < rhs || (lhs == rhs && basis[i] < basis[leave])) leave = i;
      }
      if (leave == row.size()) return LpStatus::Unbounded;
      pivot(leave, enter);
    }
  }

  void load_costs(const std::vector<T>& cost) {
    obj.assign(n_cols + 1, T(0));
    for (std::size_t j = 0; j < cost.size(); ++j) obj[j] = cost[j];
    for (std::size_t i = 0; i < row.size(); ++i) {
      const T& cb = cost[static_cast<std::size_t>(basis[i])];
      if (Num<T>::zero(cb)) continue;
      for (std::size_t j = 0; j <= n_cols; ++j) obj[j] = obj[j] - cb * row[i][j];
    }
  }
};

struct BasisResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<int> basis;    // entries are columns in [0, n_struct + n_slack)
  std::vector<int> row_id;   // original row per basis entry
  std::vector<int> slack_col;
};

template <class T>
BasisResult simplex_basis(const LinearProgram& lp) {
  const std::size_t m = lp.rows();
  const std::size_t n = lp.cols();

  std::vector<Rel> rel = lp.rel;
  std::vector<std::vector<T>> a(m, std::vector<T>(n));
  std::vector<T> b(m);
  for (std::size_t i = 0; i < m; ++i) {
    bool flip = lp.b[i] < 0;
    for (std::size_t j = 0; j < n; ++j) {
      a[i][j] = Num<T>::from(flip ? Rat(-lp.A[i][j]) : lp.A[i][j]);
    }
    b[i] = Num<T>::from(flip ? Rat(-lp.b[i]) : lp.b[i]);
    if (flip) rel[i] = rel[i] == Rel::Le ? Rel::Ge : (rel[i] == Rel::Ge ? Rel::Le : Rel::Eq);
  }

  std::size_t n_slack = 0;
  for (auto r : rel)
    if (r != Rel::Eq) ++n_slack;

  Simplex<T> s;
  s.n_struct = n;
  s.slack_col.assign(m, -1);
  std::size_t col = n;
  for (std::size_t i = 0; i < m; ++i)
    if (rel[i] != Rel::Eq) s.slack_col[i] = static_cast<int>(col++);
  const std::size_t first_art = col;
  std::vector<int> art_col(m, -1);
  for (std::size_t i = 0; i < m; ++i)
    if (rel[i] == Rel::Eq || rel[i] == Rel::Ge) art_col[i] = static_cast<int>(col++);
  s.n_cols = col;

  s.row.assign(m, std::vector<T>(s.n_cols + 1, T(0)));
  s.basis.assign(m, 0);
  s.row_id.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    s.row_id[i] = static_cast<int>(i);
    for (std::size_t j = 0; j < n; ++j) s.row[i][j] = a[i][j];
    if (s.slack_col[i] >= 0)
      s.row[i][static_cast<std::size_t>(s.slack_col[i])] = rel[i] == Rel::Le ? T(1) : T(-1);
    if (art_col[i] >= 0) s.row[i][static_cast<std::size_t>(art_col[i])] = T(1);
    s.row[i][s.n_cols] = b[i];
    s.basis[i] = art_col[i] >= 0 ? art_col[i] : s.slack_col[i];
  }
  s.allowed.assign(s.n_cols, 1);

  // Phase 1: minimize the artificial mass.
  if (first_art < s.n_cols) {
    std::vector<T> cost1(s.n_cols, T(0));
    for (std::size_t j = first_art; j < s.n_cols; ++j) cost1[j] = T(1);
    s.load_costs(cost1);
    if (s.run() != LpStatus::Optimal)
      throw InternalError("phase-1 simplex cannot be unbounded");
    T z1 = T(0) - s.obj[s.n_cols];
    if (Num<T>::pos(z1)) return {LpStatus::Infeasible, {}, {}, s.slack_col};

    // Repair rows that still carry a basic artificial (value 0): pivot in a
    // real column when possible, drop the row as redundant otherwise.
    for (std::size_t i = 0; i < s.row.size();) {
      if (s.basis[i] < static_cast<int>(first_art)) { ++i; continue; }
      std::size_t pc = s.n_cols;
      for (std::size_t j = 0; j < first_art; ++j)
        if (!Num<T>::zero(s.row[i][j])) { pc = j; break; }
      if (pc < s.n_cols) {
        s.pivot(i, pc);
        ++i;
      } else {
        s.row.erase(s.row.begin() + static_cast<long>(i));
        s.basis.erase(s.basis.begin() + static_cast<long>(i));
        s.row_id.erase(s.row_id.begin() + static_cast<long>(i));
      }
    }
    for (std::size_t j = first_art; j < s.n_cols; ++j) s.allowed[j] = 0;
  }

  // Phase 2.
  std::vector<T> cost2(s.n_cols, T(0));
  for (std::size_t j = 0; j < n; ++j) cost2[j] = Num<T>::from(lp.c[j]);
  s.load_costs(cost2);
  LpStatus st = s.run();
  if (st == LpStatus::Unbounded) return {LpStatus::Unbounded, {}, {}, s.slack_col};

  BasisResult out;
  out.status = LpStatus::Optimal;
  out.basis = s.basis;
  out.row_id = s.row_id;
  out.slack_col = s.slack_col;
  return out;
}

// Builds the exact solution determined by a basis: x_B solves B x_B = b over
// the surviving rows, duals solve y^T B = c_B, and every optimality and
// feasibility condition is re-checked exactly. Returns false if the basis is
// not exactly optimal/feasible.
bool extract_exact(const LinearProgram& lp, const BasisResult& br, LpSolution& sol) {
  const std::size_t n = lp.cols();
  const std::size_t m = lp.rows();
  const std::size_t k = br.basis.size();

  auto column_entry = [&](std::size_t orig_row, int col) -> Rat {
    if (col < static_cast<int>(n)) return lp.A[orig_row][static_cast<std::size_t>(col)];
    if (br.slack_col[orig_row] == col)
      return lp.rel[orig_row] == Rel::Le ? Rat(1) : Rat(-1);
    return 0;
  };

  // Solve [B | b] and [B^T | c_B] by Gaussian elimination.
  std::vector<std::vector<Rat>> bmat(k, std::vector<Rat>(k + 1));
  std::vector<std::vector<Rat>> btr(k, std::vector<Rat>(k + 1));
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t orig = static_cast<std::size_t>(br.row_id[i]);
    for (std::size_t j = 0; j < k; ++j) {
      bmat[i][j] = column_entry(orig, br.basis[j]);
      btr[j][i] = bmat[i][j];
    }
    bmat[i][k] = lp.b[orig];
  }
  for (std::size_t j = 0; j < k; ++j)
    btr[j][k] = br.basis[j] < static_cast<int>(n)
                    ? lp.c[static_cast<std::size_t>(br.basis[j])]
                    : Rat(0);

  auto gauss = [&](std::vector<std::vector<Rat>>& mrows) -> std::optional<std::vector<Rat>> {
    const std::size_t sz = mrows.size();
    for (std::size_t cidx = 0; cidx < sz; ++cidx) {
      std::size_t piv = sz;
      for (std::size_t r = cidx; r < sz; ++r)
        if (mrows[r][cidx] != 0) { piv = r; break; }
      if (piv == sz) return std::nullopt;  // singular
      std::swap(mrows[cidx], mrows[piv]);
      Rat inv = mrows[cidx][cidx];
      for (auto& v : mrows[cidx]) v /= inv;
      for (std::size_t r = 0; r < sz; ++r) {
        if (r == cidx || mrows[r][cidx] == 0) continue;
        Rat f = mrows[r][cidx];
        for (std::size_t j2 = 0; j2 <= sz; ++j2) mrows[r][j2] -= f * mrows[cidx][j2];
      }
    }
    std::vector<Rat> out(sz);
    for (std::size_t r = 0; r < sz; ++r) out[r] = mrows[r][sz];
    return out;
  };

  auto xb = gauss(bmat);
  auto yb = gauss(btr);
  if (!xb || !yb) return false;

  sol.x.assign(n, Rat(0));
  for (std::size_t j = 0; j < k; ++j) {
    if ((*xb)[j] < 0) return false;  // infeasible basis
    if (br.basis[j] < static_cast<int>(n))
      sol.x[static_cast<std::size_t>(br.basis[j])] = (*xb)[j];
  }

  sol.dual.assign(m, Rat(0));
  for (std::size_t i = 0; i < k; ++i)
    sol.dual[static_cast<std::size_t>(br.row_id[i])] = (*yb)[i];

  // Exact feasibility of the original rows.
  for (std::size_t i = 0; i < m; ++i) {
    Rat lhs = 0;
    for (std::size_t j = 0; j < n; ++j) lhs += lp.A[i][j] * sol.x[j];
    if (lp.rel[i] == Rel::Le && !(lhs <= lp.b[i])) return false;
    if (lp.rel[i] == Rel::Ge && !(lhs >= lp.b[i])) return false;
    if (lp.rel[i] == Rel::Eq && lhs != lp.b[i]) return false;
  }

  // Dual sign conditions and reduced costs certify optimality.
  for (std::size_t i = 0; i < m; ++i) {
    if (lp.rel[i] == Rel::Le && sol.dual[i] > 0) return false;
    if (lp.rel[i] == Rel::Ge && sol.dual[i] < 0) return false;
  }
  for (std::size_t j = 0; j < n; ++j) {
    Rat red = lp.c[j];
    for (std::size_t i = 0; i < m; ++i) red -= sol.dual[i] * lp.A[i][j];
    if (red < 0) return false;
  }
  // Slack columns: reduced cost of a Le slack is -y_i >= 0, of a Ge surplus
  // is +y_i >= 0; both follow from the sign conditions above.

  sol.objective = 0;
  for (std::size_t j = 0; j < n; ++j) sol.objective += lp.c[j] * sol.x[j];
  Rat dual_obj = 0;
  for (std::size_t i = 0; i < m; ++i) dual_obj += sol.dual[i] * lp.b[i];
  if (dual_obj != sol.objective) return false;

  sol.status = LpStatus::Optimal;
  return true;
}

void validate_lp(const LinearProgram& lp) {
  if (lp.A.size() != lp.b.size() || lp.A.size() != lp.rel.size())
    throw PreconditionError("LP row dimensions mismatch");
  for (const auto& r : lp.A)
    if (r.size() != lp.cols()) throw PreconditionError("LP column dimensions mismatch");
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, LpMode mode) {
  validate_lp(lp);
  LpSolution sol;
  if (mode == LpMode::Float) {
    try {
      BasisResult br = simplex_basis<double>(lp);
      if (br.status == LpStatus::Optimal && extract_exact(lp, br, sol)) return sol;
    } catch (const ResourceCapError&) {
      // fall through to the exact path
    }
  }
  BasisResult br = simplex_basis<Rat>(lp);
  if (br.status != LpStatus::Optimal) {
    sol.status = br.status;
    return sol;
  }
  if (!extract_exact(lp, br, sol))
    throw InternalError("exact simplex produced an uncertifiable basis");
  return sol;
}

}  // namespace oq
