#pragma once

// Exact complexity computations at a declared depth bound T: deduplicated
// tree catalogs, error/cost frontiers, randomized game values with dual
// certificates, worst-case depths, and finite zero-sum matrix games.
//
// Small instances run over an explicit catalog. Product instances whose
// catalogs would explode run the same optimizations by exact dynamic
// programming over answer histories (frontiers) and by column generation
// whose pricing step is that DP (linear programs); both routes agree with
// the catalog route wherever both are feasible.

#include <optional>
#include <vector>

#include "oq/lp.hpp"
#include "oq/problem.hpp"
#include "oq/strategy.hpp"

namespace oq {

struct SolveOptions {
  std::size_t catalog_cap = 2000000;   // raw combination guard for enumerate
  std::size_t history_cap = 4000000;   // visited-history guard for the DP
  long colgen_iteration_cap = 10000;
  LpMode lp_mode = LpMode::Exact;
};

struct CatalogEntry {
  DeterministicTree tree;
  Evaluation eval;
};

// All canonicalized deterministic strategies of depth <= depth_bound, one
// representative per Evaluation fingerprint, in deterministic generation
// order (leaves first, then by (input, child combination) per level).
struct TreeCatalog {
  int depth_bound = 0;
  std::vector<CatalogEntry> entries;
};

TreeCatalog enumerate_trees(const Problem& p, int depth_bound,
                            const SolveOptions& opt = {});

struct FrontierVertex {
  Rat error;
  Rat cost;
  DeterministicTree witness;
};

// Lower convex hull of achievable (error, expected cost) pairs at a fixed
// depth bound: the expected-cost complexity as a function of the error
// budget. Vertex errors strictly increase, costs strictly decrease; between
// vertices the optimum is a two-atom mixture, beyond the last vertex the
// curve is flat.
struct FrontierCurve {
  std::vector<FrontierVertex> vertices;

  bool feasible(const Rat& eps) const;
  std::optional<Rat> value_at(const Rat& eps) const;
  std::optional<RandomizedStrategy> witness_at(const Rat& eps) const;
  const Rat& min_error() const;
  const Rat& max_vertex_error() const;
};

// Catalog route (Single/Joint error semantics; needs a prior).
FrontierCurve dist_frontier(const Problem& p, const TreeCatalog& cat);

// History-DP route; same curve, no catalog materialization.
FrontierCurve frontier_dp(const Problem& p, int depth_bound,
                          const SolveOptions& opt = {});

struct ValueResult {
  bool feasible = false;
  Rat value = 0;
  RandomizedStrategy witness;
};

// min expected cost under the prior over depth <= T mixtures subject to the
// problem's error semantics at budget eps (per-coordinate semantics bound
// every coordinate by eps). Chooses catalog or DP/column-generation route by
// size.
ValueResult dist_value(const Problem& p, int depth_bound, const Rat& eps,
                       const SolveOptions& opt = {});

struct GameValue {
  bool feasible = false;
  Rat primal_value = 0;
  Rat dual_value = 0;
  Rat gap = 0;  // primal - dual, >= 0, 0 certifies minimax equality
  RandomizedStrategy primal_mixture;
  Prior dual_prior;
};

// inf over depth <= T mixtures with per-theta (and per-coordinate) error
// <= eps of the worst-case expected cost, i.e. the primal randomized value;
// the dual prior comes from the cost-row multipliers and the dual value is
// recomputed independently as the best fixed-prior cost against the same
// strategy class.
GameValue randomized_value(const Problem& p, int depth_bound, const Rat& eps,
                           const SolveOptions& opt = {});

struct MatrixGameValue {
  Rat value = 0;
  Rat dual_value = 0;
  Rat gap = 0;
  std::vector<Rat> row_mixture;
  std::vector<Rat> col_mixture;
};

// Finite zero-sum game, row player minimizing: min over row mixtures of the
// max over columns, solved exactly; equals the max-min by LP duality.
MatrixGameValue matrix_game(const std::vector<std::vector<Rat>>& payoff);

enum class DepthMode { Distributional, Randomized };

// Smallest T <= t_cap at which a depth <= T mixture meets the error
// requirement (distributional error under the prior, or per-theta error);
// nullopt when infeasible at every T <= t_cap.
std::optional<int> worst_case_depth(const Problem& p, DepthMode mode, const Rat& eps,
                                    int t_cap, const SolveOptions& opt = {});

// Smallest achievable error at depth <= T (distributional: under the prior;
// randomized: minimax per-theta error over mixtures).
Rat min_error(const Problem& p, DepthMode mode, int depth_bound,
              const SolveOptions& opt = {});

struct ErrValue {
  Rat value;
  RandomizedStrategy witness;
};

// min_error together with an achieving mixture.
ErrValue min_error_strategy(const Problem& p, DepthMode mode, int depth_bound,
                            const SolveOptions& opt = {});

// max over product priors mu_1 x ... x mu_n of the cheapest feasible mixture
// cost under that prior, computed by exact coordinate ascent from the given
// initial coordinate priors (each coordinate step is one LP with row
// generation); a certified lower bound on the randomized value, reported in
// the additivity checks. Requires a product problem.
Rat product_restricted_dual(const Problem& p, int depth_bound, const Rat& eps,
                            const std::vector<Prior>& init,
                            const SolveOptions& opt = {});

}  // namespace oq
