#pragma once

// Dense linear programming over exact rationals: two-phase primal simplex
// with Bland's rule, plus a float fast path whose final basis is re-verified
// and re-evaluated exactly. Solutions always carry exact numbers.

#include <vector>

#include "oq/rational.hpp"

namespace oq {

enum class Rel { Le, Eq, Ge };

// min c.x  subject to  A x (rel) b,  x >= 0.
struct LinearProgram {
  std::vector<Rat> c;
  std::vector<std::vector<Rat>> A;
  std::vector<Rel> rel;
  std::vector<Rat> b;

  std::size_t rows() const { return A.size(); }
  std::size_t cols() const { return c.size(); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rat> x;
  Rat objective = 0;
  // Row multipliers y with y.b = objective and c - A^T y >= 0; y >= 0 on Ge
  // rows, y <= 0 on Le rows, free on Eq rows. Zero on redundant rows.
  std::vector<Rat> dual;
};

enum class LpMode { Exact, Float };

// Solves the program; the solution is exact in both modes and optimality is
// certified internally (reduced costs and duality are re-checked before
// returning). Float mode falls back to the exact path whenever the float
// basis fails exact verification.
LpSolution solve_lp(const LinearProgram& lp, LpMode mode = LpMode::Exact);

}  // namespace oq
