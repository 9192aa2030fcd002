#pragma once

// Claim harness: each check recomputes both sides of a finite identity or
// inequality exactly and reports the witnessing numbers. Hypothesis failures
// are recorded as skips, never as failures.

#include <string>
#include <vector>

#include "oq/constructions.hpp"
#include "oq/problem.hpp"
#include "oq/solver.hpp"
#include "oq/strategy.hpp"

namespace oq {

struct CheckLine {
  std::string claim;  // human-readable statement with the exact numbers
  bool pass = false;
  bool skipped = false;
  std::string note;
};

struct CheckReport {
  std::string check;     // additivity, continuity, minimax, direct-sum, ...
  std::string instance;  // problem name and parameters
  std::vector<CheckLine> lines;

  bool pass() const;     // every non-skipped line passes
  bool all_skipped() const;
};

// Expected-cost additivity of the n-fold per-coordinate product against n
// times the single-instance value, distributional and randomized, as exact
// equalities at matched depth budgets (single instance at T and n*T, product
// at n*T), with both constructive reductions (repeat / embed) re-evaluated
// as independent witnesses.
CheckReport check_additivity(const Problem& p, const Rat& eps, int n, int T,
                             const SolveOptions& opt = {});

// Frontier continuity: structural piecewise-linear convexity, the posterior
// filter inequality value(0) <= value(eps) + sqrt(eps) * value(0) at grid
// points with rational sqrt(eps) < mu_min (with the constructed filter
// strategy as a witness on deterministic oracles), and the two-point mixture
// bound at rho = 2 eps.
CheckReport check_continuity(const Problem& p, const std::vector<Rat>& grid, int T,
                             const SolveOptions& opt = {});

// Zero duality gap of the randomized value and agreement of the dual prior's
// independently computed inner optimum with the primal value.
CheckReport check_minimax(const Problem& p, const Rat& eps, int T,
                          const SolveOptions& opt = {});

// The finite-n direct-sum inequality chains, each side exact:
//   (a) n*C(eps) <= C_pc(eps) <= C_joint(eps)
//   (b) small-error lower bound via the posterior-filter inequality
//   (c) C_joint(eps) <= n*C(eps/n) with the repeated strategy as witness
//   (d) (1-sqrt(eps))*n*C(0) <= C_joint(eps) <= n*C(0)
//   (e) worst-case bracket: n*C(eps) <= WC_pc(eps) <= Chebyshev budget
// run distributionally (when a nontrivial prior is present and
// eps < min{99/100, mu_min^2}) and for the randomized value (when
// eps < 1/(128 |Theta|^2)).
CheckReport check_direct_sum(const Problem& p, const Rat& eps, int n, int T,
                             const SolveOptions& opt = {});

// Repeats s n-fold, truncates at the Chebyshev budget for k = 1/sqrt(alpha),
// and asserts the exact tail mass, per-coordinate error inflation <= alpha,
// and the depth bound.
CheckReport check_truncation(const Problem& p, const RandomizedStrategy& s, int n,
                             const Rat& alpha, const SolveOptions& opt = {});

// Worst-case randomized depth at error eps < 1/|Theta| equals the zero-error
// depth on deterministic-oracle problems, and a zero-error atom is extracted
// from the witnessing mixture.
CheckReport check_derandomization(const Problem& p, const Rat& eps,
                                  const SolveOptions& opt = {});

}  // namespace oq
