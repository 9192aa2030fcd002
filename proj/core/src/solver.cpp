#include "oq/solver.hpp"

#include <algorithm>
#include <map>

#include "internal.hpp"
#include "oq/error.hpp"

namespace oq {

namespace {

using internal::HullPt;

struct DpGuard {
  std::size_t visited = 0;
  std::size_t cap = 0;
  void tick() {
    if (++visited > cap) throw ResourceCapError("history cap exceeded in solver DP");
  }
};

bool wrong_joint(const Problem& p, int theta, int outcome) {
  return !p.accepts(theta, outcome);
}

// ---------------------------------------------------------------------------
// Frontier DP over answer histories (scalar error semantics).

std::vector<HullPt> hull_dp(const Problem& p, const std::vector<Rat>& reach,
                            int depth_left, DpGuard& guard) {
  guard.tick();
  std::vector<HullPt> pts;
  for (std::size_t o = 0; o < p.outcome_count(); ++o) {
    Rat e = 0;
    for (std::size_t t = 0; t < reach.size(); ++t)
      if (reach[t] != 0 && wrong_joint(p, static_cast<int>(t), static_cast<int>(o)))
        e += reach[t];
    pts.push_back({std::move(e), Rat(0), -1});
  }
  if (depth_left > 0) {
    Rat mass = 0;
    for (const auto& w : reach) mass += w;
    if (mass != 0) {
      for (std::size_t x = 0; x < p.input_count(); ++x) {
        std::vector<std::vector<HullPt>> child_hulls;
        child_hulls.reserve(p.answer_count());
        for (std::size_t y = 0; y < p.answer_count(); ++y) {
          std::vector<Rat> next(reach.size(), Rat(0));
          bool any = false;
          for (std::size_t t = 0; t < reach.size(); ++t) {
            if (reach[t] == 0) continue;
            next[t] = reach[t] * p.oracle.kernel[t][x][y];
            if (next[t] != 0) any = true;
          }
          if (any)
            child_hulls.push_back(hull_dp(p, next, depth_left - 1, guard));
          else
            child_hulls.push_back({{Rat(0), Rat(0), -1}});
        }
        for (auto& v : internal::minkowski_sum(child_hulls))
          pts.push_back({std::move(v.e), v.c + mass, -1});
      }
    }
  }
  return internal::lower_frontier(std::move(pts));
}

// ---------------------------------------------------------------------------
// Scalarized DP: minimizes sum_theta cost_w[theta] * E_theta[calls]
//              + sum_{theta,i} err_w[theta][i] * err_i(theta)
// lexicographically tie-broken by the same functional with sec_err_w weights.
// Exact minimum over all deterministic trees of the given depth.

struct PricingWeights {
  std::vector<Rat> cost_w;                  // per theta
  std::vector<std::vector<Rat>> err_w;      // [theta][error column]
  std::vector<std::vector<Rat>> sec_err_w;  // same shape, optional
};

struct ScalVal {
  Rat primary;
  Rat secondary;

  bool operator<(const ScalVal& o) const {
    if (primary != o.primary) return primary < o.primary;
    return secondary < o.secondary;
  }
};

struct ScalarDp {
  const Problem& p;
  DpGuard& guard;
  std::vector<Rat> cost_w;
  std::vector<std::vector<Rat>> pen;      // [theta][outcome]
  std::vector<std::vector<Rat>> sec_pen;  // [theta][outcome]

  ScalarDp(const Problem& prob, const PricingWeights& w, DpGuard& g)
      : p(prob), guard(g), cost_w(w.cost_w) {
    const std::size_t nt = p.theta_count(), no = p.outcome_count();
    const bool per_coord = !w.err_w.empty() && w.err_w.front().size() > 1;
    auto build = [&](const std::vector<std::vector<Rat>>& ew) {
      std::vector<std::vector<Rat>> table(nt, std::vector<Rat>(no, Rat(0)));
      if (ew.empty()) return table;
      for (std::size_t t = 0; t < nt; ++t)
        for (std::size_t o = 0; o < no; ++o) {
          if (per_coord) {
            for (std::size_t i = 0; i < ew[t].size(); ++i)
              if (!p.accepts_coord(static_cast<int>(t), static_cast<int>(o),
                                   static_cast<int>(i)))
                table[t][o] += ew[t][i];
          } else if (wrong_joint(p, static_cast<int>(t), static_cast<int>(o))) {
            table[t][o] += ew[t][0];
          }
        }
      return table;
    };
    pen = build(w.err_w);
    sec_pen = build(w.sec_err_w);
  }

  std::pair<ScalVal, TreePtr> run(const std::vector<Rat>& reach, int depth_left) {
    guard.tick();
    ScalVal best;
    TreePtr best_tree;
    for (std::size_t o = 0; o < p.outcome_count(); ++o) {
      ScalVal v{Rat(0), Rat(0)};
      for (std::size_t t = 0; t < reach.size(); ++t) {
        if (reach[t] == 0) continue;
        v.primary += reach[t] * pen[t][o];
        v.secondary += reach[t] * sec_pen[t][o];
      }
      if (!best_tree || v < best) {
        best = std::move(v);
        best_tree = make_leaf(static_cast<int>(o));
      }
    }
    if (depth_left > 0) {
      Rat query_cost = 0;
      bool alive = false;
      for (std::size_t t = 0; t < reach.size(); ++t) {
        if (reach[t] == 0) continue;
        alive = true;
        query_cost += reach[t] * cost_w[t];
      }
      if (alive) {
        for (std::size_t x = 0; x < p.input_count(); ++x) {
          ScalVal v{query_cost, Rat(0)};
          std::vector<TreePtr> ch(p.answer_count());
          for (std::size_t y = 0; y < p.answer_count(); ++y) {
            std::vector<Rat> next(reach.size(), Rat(0));
            bool any = false;
            for (std::size_t t = 0; t < reach.size(); ++t) {
              if (reach[t] == 0) continue;
              next[t] = reach[t] * p.oracle.kernel[t][x][y];
              if (next[t] != 0) any = true;
            }
            if (any) {
              auto [cv, ct] = run(next, depth_left - 1);
              v.primary += cv.primary;
              v.secondary += cv.secondary;
              ch[y] = std::move(ct);
            } else {
              ch[y] = make_leaf(0);
            }
          }
          if (v < best) {
            best = std::move(v);
            best_tree = make_query(static_cast<int>(x), std::move(ch));
          }
        }
      }
    }
    return {std::move(best), std::move(best_tree)};
  }
};

std::pair<ScalVal, DeterministicTree> best_tree_weighted(const Problem& p, int depth,
                                                         const PricingWeights& w,
                                                         const SolveOptions& opt) {
  DpGuard guard{0, opt.history_cap};
  ScalarDp dp(p, w, guard);
  std::vector<Rat> reach(p.theta_count(), Rat(1));
  auto [v, tree] = dp.run(reach, depth);
  return {std::move(v), DeterministicTree{std::move(tree)}};
}

// ---------------------------------------------------------------------------
// Column management and generic column generation.

struct Columns {
  std::size_t pad;
  std::vector<DeterministicTree> trees;
  std::vector<Evaluation> evals;
  std::map<std::vector<Rat>, std::size_t> seen;
  bool complete = false;  // true when backed by a full catalog

  explicit Columns(int depth_bound)
      : pad(static_cast<std::size_t>(depth_bound) + 1) {}

  bool add(const Problem& p, DeterministicTree t) {
    Evaluation ev = evaluate(p, RandomizedStrategy::pure(t));
    auto key = internal::fingerprint(ev, pad);
    if (seen.count(key)) return false;
    seen.emplace(std::move(key), trees.size());
    trees.push_back(std::move(t));
    evals.push_back(std::move(ev));
    return true;
  }
};

// Number of error columns the evaluations carry (1, or n per-coordinate).
std::size_t error_cols(const Problem& p) {
  return p.semantics == ErrorSemantics::PerCoordinate
             ? static_cast<std::size_t>(p.coordinates())
             : 1;
}

Columns seed_columns(const Problem& p, int depth_bound, const SolveOptions& opt) {
  Columns cols(depth_bound);
  // Full catalog when affordable; otherwise leaves plus the minimum
  // total-error tree as a feasibility anchor.
  try {
    TreeCatalog cat = enumerate_trees(p, depth_bound, opt);
    for (auto& e : cat.entries) cols.add(p, e.tree);
    cols.complete = true;
    return cols;
  } catch (const ResourceCapError&) {
  }
  for (std::size_t o = 0; o < p.outcome_count(); ++o)
    cols.add(p, DeterministicTree{make_leaf(static_cast<int>(o))});
  PricingWeights w;
  w.cost_w.assign(p.theta_count(), Rat(0));
  w.err_w.assign(p.theta_count(), std::vector<Rat>(error_cols(p), Rat(1)));
  cols.add(p, best_tree_weighted(p, depth_bound, w, opt).second);
  return cols;
}

struct Master {
  // Builds the LP over the current columns.
  std::function<LinearProgram(const Columns&)> build;
  // Maps duals to pricing weights plus the reduced-cost threshold.
  std::function<std::pair<PricingWeights, Rat>(const LpSolution&)> pricing;
};

LpSolution colgen_solve(const Problem& p, int depth_bound, const SolveOptions& opt,
                        Columns& cols, const Master& master) {
  for (long iter = 0; iter < opt.colgen_iteration_cap; ++iter) {
    LinearProgram lp = master.build(cols);
    LpSolution sol = solve_lp(lp, opt.lp_mode);
    if (sol.status != LpStatus::Optimal)
      throw InternalError("restricted master must stay feasible and bounded");
    if (cols.complete) return sol;
    auto [weights, threshold] = master.pricing(sol);
    auto [value, tree] = best_tree_weighted(p, depth_bound, weights, opt);
    if (!(value.primary < threshold)) return sol;
    if (!cols.add(p, std::move(tree)))
      throw InternalError("pricing produced an already-known column");
  }
  throw ResourceCapError("column generation iteration cap exceeded");
}

// Rows: one equality sum(w) = 1 plus one error row per (theta, column)
// pair. Shared by the feasibility, randomized and fixed-prior masters.
struct ErrRows {
  std::size_t ec;
  std::size_t nt;
  std::size_t count() const { return ec * nt; }
  Rat entry(const Evaluation& ev, std::size_t r) const {
    return ev.err[r / ec][r % ec];
  }
};

// min t subject to sum w = 1, err_r(w) <= eps + t. Value <= 0 iff a
// depth-bounded mixture meets the per-row budget.
LpSolution solve_feasibility(const Problem& p, int depth_bound, const Rat& eps,
                             const SolveOptions& opt, Columns& cols) {
  ErrRows rows{error_cols(p), p.theta_count()};
  Master m;
  m.build = [&, rows](const Columns& c) {
    LinearProgram lp;
    const std::size_t k = c.trees.size();
    lp.c.assign(k + 1, Rat(0));
    lp.c[k] = 1;  // t
    lp.A.assign(1 + rows.count(), std::vector<Rat>(k + 1, Rat(0)));
    lp.rel.assign(1 + rows.count(), Rel::Le);
    lp.b.assign(1 + rows.count(), Rat(0));
    for (std::size_t j = 0; j < k; ++j) lp.A[0][j] = 1;
    lp.rel[0] = Rel::Eq;
    lp.b[0] = 1;
    for (std::size_t r = 0; r < rows.count(); ++r) {
      for (std::size_t j = 0; j < k; ++j) lp.A[1 + r][j] = rows.entry(c.evals[j], r);
      lp.A[1 + r][k] = -1;
      lp.b[1 + r] = eps;
    }
    return lp;
  };
  m.pricing = [&, rows](const LpSolution& sol) {
    PricingWeights w;
    w.cost_w.assign(p.theta_count(), Rat(0));
    w.err_w.assign(p.theta_count(), std::vector<Rat>(rows.ec, Rat(0)));
    for (std::size_t r = 0; r < rows.count(); ++r)
      w.err_w[r / rows.ec][r % rows.ec] = -sol.dual[1 + r];
    return std::make_pair(std::move(w), sol.dual[0]);
  };
  return colgen_solve(p, depth_bound, opt, cols, m);
}

RandomizedStrategy mixture_from(const Columns& cols, const std::vector<Rat>& x) {
  RandomizedStrategy s;
  for (std::size_t j = 0; j < cols.trees.size(); ++j)
    if (x[j] > 0) s.atoms.push_back({x[j], cols.trees[j]});
  return s;
}

}  // namespace

FrontierCurve frontier_dp(const Problem& p, int depth_bound, const SolveOptions& opt) {
  const Prior& mu = p.require_prior();
  if (p.semantics == ErrorSemantics::PerCoordinate)
    throw PreconditionError("frontier needs a scalar error semantics");
  require_valid(p);
  if (depth_bound < 0) throw PreconditionError("depth bound must be nonnegative");

  DpGuard guard{0, opt.history_cap};
  std::vector<Rat> reach = mu.weights;
  std::vector<HullPt> hull = hull_dp(p, reach, depth_bound, guard);

  // Witnesses: one scalarized DP per vertex, with a slope multiplier strictly
  // inside the vertex's supporting interval and error as the tie-break.
  FrontierCurve curve;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    Rat lambda;
    if (hull.size() == 1) {
      lambda = 0;
    } else {
      auto neg_slope = [&](std::size_t a, std::size_t b) {
        return (hull[a].c - hull[b].c) / (hull[b].e - hull[a].e);
      };
      if (i == 0) {
        lambda = neg_slope(0, 1) + 1;
      } else if (i + 1 == hull.size()) {
        lambda = neg_slope(i - 1, i) / 2;
      } else {
        lambda = (neg_slope(i - 1, i) + neg_slope(i, i + 1)) / 2;
      }
    }
    PricingWeights w;
    w.cost_w = mu.weights;
    w.err_w.resize(p.theta_count());
    w.sec_err_w.resize(p.theta_count());
    for (std::size_t t = 0; t < p.theta_count(); ++t) {
      w.err_w[t] = {lambda * mu.weights[t]};
      w.sec_err_w[t] = {mu.weights[t]};
    }
    auto [val, tree] = best_tree_weighted(p, depth_bound, w, opt);
    Evaluation ev = evaluate(p, RandomizedStrategy::pure(tree));
    MuAggregates agg = mu_aggregates(p, ev, mu);
    if (agg.error[0] != hull[i].e || agg.expectation != hull[i].c)
      throw InternalError("frontier witness does not reproduce its vertex");
    curve.vertices.push_back({hull[i].e, hull[i].c, std::move(tree)});
  }
  return curve;
}

ValueResult dist_value(const Problem& p, int depth_bound, const Rat& eps,
                       const SolveOptions& opt) {
  const Prior& mu = p.require_prior();
  ValueResult res;
  if (p.semantics != ErrorSemantics::PerCoordinate) {
    FrontierCurve curve = frontier_dp(p, depth_bound, opt);
    if (!curve.feasible(eps)) return res;
    res.feasible = true;
    res.value = *curve.value_at(eps);
    res.witness = *curve.witness_at(eps);
    return res;
  }

  require_valid(p);
  Columns cols = seed_columns(p, depth_bound, opt);
  LpSolution feas = solve_feasibility(p, depth_bound, eps, opt, cols);
  if (feas.objective > 0) return res;

  const std::size_t coords = error_cols(p);
  auto mu_err = [&](const Evaluation& ev, std::size_t i) {
    Rat v = 0;
    for (std::size_t t = 0; t < p.theta_count(); ++t)
      v += mu.weights[t] * ev.err[t][i];
    return v;
  };
  auto mu_cost = [&](const Evaluation& ev) {
    Rat v = 0;
    for (std::size_t t = 0; t < p.theta_count(); ++t)
      v += mu.weights[t] * ev.cost_mean[t];
    return v;
  };

  Master m;
  m.build = [&](const Columns& c) {
    LinearProgram lp;
    const std::size_t k = c.trees.size();
    lp.c.resize(k);
    for (std::size_t j = 0; j < k; ++j) lp.c[j] = mu_cost(c.evals[j]);
    lp.A.assign(1 + coords, std::vector<Rat>(k, Rat(0)));
    lp.rel.assign(1 + coords, Rel::Le);
    lp.b.assign(1 + coords, eps);
    for (std::size_t j = 0; j < k; ++j) lp.A[0][j] = 1;
    lp.rel[0] = Rel::Eq;
    lp.b[0] = 1;
    for (std::size_t i = 0; i < coords; ++i)
      for (std::size_t j = 0; j < k; ++j) lp.A[1 + i][j] = mu_err(c.evals[j], i);
    return lp;
  };
  m.pricing = [&](const LpSolution& sol) {
    PricingWeights w;
    w.cost_w = mu.weights;
    w.err_w.assign(p.theta_count(), std::vector<Rat>(coords, Rat(0)));
    for (std::size_t t = 0; t < p.theta_count(); ++t)
      for (std::size_t i = 0; i < coords; ++i)
        w.err_w[t][i] = -sol.dual[1 + i] * mu.weights[t];
    return std::make_pair(std::move(w), sol.dual[0]);
  };
  LpSolution sol = colgen_solve(p, depth_bound, opt, cols, m);
  res.feasible = true;
  res.value = sol.objective;
  res.witness = mixture_from(cols, sol.x);
  return res;
}

GameValue randomized_value(const Problem& p, int depth_bound, const Rat& eps,
                           const SolveOptions& opt) {
  require_valid(p);
  if (depth_bound < 0) throw PreconditionError("depth bound must be nonnegative");
  GameValue gv;
  Columns cols = seed_columns(p, depth_bound, opt);
  LpSolution feas = solve_feasibility(p, depth_bound, eps, opt, cols);
  if (feas.objective > 0) return gv;

  ErrRows rows{error_cols(p), p.theta_count()};
  const std::size_t nt = p.theta_count();

  Master m2;
  m2.build = [&, rows](const Columns& c) {
    LinearProgram lp;
    const std::size_t k = c.trees.size();
    lp.c.assign(k + 1, Rat(0));
    lp.c[k] = 1;  // the cost bound variable
    const std::size_t nrows = 1 + rows.count() + nt;
    lp.A.assign(nrows, std::vector<Rat>(k + 1, Rat(0)));
    lp.rel.assign(nrows, Rel::Le);
    lp.b.assign(nrows, Rat(0));
    for (std::size_t j = 0; j < k; ++j) lp.A[0][j] = 1;
    lp.rel[0] = Rel::Eq;
    lp.b[0] = 1;
    for (std::size_t r = 0; r < rows.count(); ++r) {
      for (std::size_t j = 0; j < k; ++j) lp.A[1 + r][j] = rows.entry(c.evals[j], r);
      lp.b[1 + r] = eps;
    }
    for (std::size_t t = 0; t < nt; ++t) {
      for (std::size_t j = 0; j < k; ++j)
        lp.A[1 + rows.count() + t][j] = c.evals[j].cost_mean[t];
      lp.A[1 + rows.count() + t][k] = -1;
    }
    return lp;
  };
  m2.pricing = [&, rows](const LpSolution& sol) {
    PricingWeights w;
    w.cost_w.assign(nt, Rat(0));
    w.err_w.assign(nt, std::vector<Rat>(rows.ec, Rat(0)));
    for (std::size_t r = 0; r < rows.count(); ++r)
      w.err_w[r / rows.ec][r % rows.ec] = -sol.dual[1 + r];
    for (std::size_t t = 0; t < nt; ++t) w.cost_w[t] = -sol.dual[1 + rows.count() + t];
    return std::make_pair(std::move(w), sol.dual[0]);
  };
  LpSolution primal = colgen_solve(p, depth_bound, opt, cols, m2);

  gv.feasible = true;
  gv.primal_value = primal.objective;
  gv.primal_mixture = mixture_from(cols, primal.x);

  // Least-favorable prior from the cost-row multipliers.
  Prior nu;
  nu.weights.assign(nt, Rat(0));
  Rat total = 0;
  for (std::size_t t = 0; t < nt; ++t) {
    nu.weights[t] = -primal.dual[1 + rows.count() + t];
    total += nu.weights[t];
  }
  if (total == 0) {
    nu = Prior::uniform(nt);
  } else if (total != 1) {
    for (auto& w : nu.weights) w /= total;
  }
  gv.dual_prior = nu;

  // Independent dual route: cheapest feasible mixture against that prior.
  Master m4;
  auto nu_cost = [&](const Evaluation& ev) {
    Rat v = 0;
    for (std::size_t t = 0; t < nt; ++t) v += nu.weights[t] * ev.cost_mean[t];
    return v;
  };
  m4.build = [&, rows](const Columns& c) {
    LinearProgram lp;
    const std::size_t k = c.trees.size();
    lp.c.resize(k);
    for (std::size_t j = 0; j < k; ++j) lp.c[j] = nu_cost(c.evals[j]);
    lp.A.assign(1 + rows.count(), std::vector<Rat>(k, Rat(0)));
    lp.rel.assign(1 + rows.count(), Rel::Le);
    lp.b.assign(1 + rows.count(), eps);
    for (std::size_t j = 0; j < k; ++j) lp.A[0][j] = 1;
    lp.rel[0] = Rel::Eq;
    lp.b[0] = 1;
    for (std::size_t r = 0; r < rows.count(); ++r)
      for (std::size_t j = 0; j < k; ++j) lp.A[1 + r][j] = rows.entry(c.evals[j], r);
    return lp;
  };
  m4.pricing = [&, rows](const LpSolution& sol) {
    PricingWeights w;
    w.cost_w = nu.weights;
    w.err_w.assign(nt, std::vector<Rat>(rows.ec, Rat(0)));
    for (std::size_t r = 0; r < rows.count(); ++r)
      w.err_w[r / rows.ec][r % rows.ec] = -sol.dual[1 + r];
    return std::make_pair(std::move(w), sol.dual[0]);
  };
  LpSolution dual = colgen_solve(p, depth_bound, opt, cols, m4);
  gv.dual_value = dual.objective;
  gv.gap = gv.primal_value - gv.dual_value;
  if (gv.gap < 0) throw InternalError("negative duality gap");
  return gv;
}

MatrixGameValue matrix_game(const std::vector<std::vector<Rat>>& payoff) {
  if (payoff.empty() || payoff.front().empty())
    throw PreconditionError("matrix game needs a nonempty matrix");
  const std::size_t nr = payoff.size();
  const std::size_t nc = payoff.front().size();
  for (const auto& row : payoff)
    if (row.size() != nc) throw PreconditionError("ragged payoff matrix");

  Rat shift = 0;
  for (const auto& row : payoff)
    for (const auto& v : row) shift = std::min(shift, v);
  shift = 1 - shift;  // entries + shift >= 1 > 0

  LinearProgram lp;
  lp.c.assign(nr + 1, Rat(0));
  lp.c[nr] = 1;  // v
  lp.A.assign(1 + nc, std::vector<Rat>(nr + 1, Rat(0)));
  lp.rel.assign(1 + nc, Rel::Le);
  lp.b.assign(1 + nc, Rat(0));
  for (std::size_t i = 0; i < nr; ++i) lp.A[0][i] = 1;
  lp.rel[0] = Rel::Eq;
  lp.b[0] = 1;
  for (std::size_t j = 0; j < nc; ++j) {
    for (std::size_t i = 0; i < nr; ++i) lp.A[1 + j][i] = payoff[i][j] + shift;
    lp.A[1 + j][nr] = -1;
  }
  LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal)
    throw InternalError("matrix game LP must be solvable");

  MatrixGameValue g;
  g.value = sol.objective - shift;
  g.row_mixture.assign(sol.x.begin(), sol.x.begin() + static_cast<long>(nr));
  g.col_mixture.assign(nc, Rat(0));
  Rat total = 0;
  for (std::size_t j = 0; j < nc; ++j) {
    g.col_mixture[j] = -sol.dual[1 + j];
    total += g.col_mixture[j];
  }
  if (total == 0) {
    g.col_mixture.assign(nc, Rat(1, static_cast<unsigned long>(nc)));
  } else if (total != 1) {
    for (auto& w : g.col_mixture) w /= total;
  }
  // Column player's guaranteed payoff under that mixture.
  bool first = true;
  for (std::size_t i = 0; i < nr; ++i) {
    Rat v = 0;
    for (std::size_t j = 0; j < nc; ++j) v += payoff[i][j] * g.col_mixture[j];
    if (first || v < g.dual_value) g.dual_value = v;
    first = false;
  }
  g.gap = g.value - g.dual_value;
  if (g.gap < 0) throw InternalError("negative matrix game gap");
  return g;
}

ErrValue min_error_strategy(const Problem& p, DepthMode mode, int depth_bound,
                            const SolveOptions& opt) {
  require_valid(p);
  if (mode == DepthMode::Distributional &&
      p.semantics != ErrorSemantics::PerCoordinate) {
    const Prior& mu = p.require_prior();
    PricingWeights w;
    w.cost_w.assign(p.theta_count(), Rat(0));
    w.err_w.resize(p.theta_count());
    for (std::size_t t = 0; t < p.theta_count(); ++t) w.err_w[t] = {mu.weights[t]};
    auto [v, tree] = best_tree_weighted(p, depth_bound, w, opt);
    return {v.primary, RandomizedStrategy::pure(std::move(tree))};
  }
  if (mode == DepthMode::Distributional) {
    // per-coordinate distributional: minimize the worst coordinate's
    // mu-average error
    const Prior& mu = p.require_prior();
    Columns cols = seed_columns(p, depth_bound, opt);
    const std::size_t coords = error_cols(p);
    Master m;
    m.build = [&](const Columns& c) {
      LinearProgram lp;
      const std::size_t k = c.trees.size();
      lp.c.assign(k + 1, Rat(0));
      lp.c[k] = 1;
      lp.A.assign(1 + coords, std::vector<Rat>(k + 1, Rat(0)));
      lp.rel.assign(1 + coords, Rel::Le);
      lp.b.assign(1 + coords, Rat(0));
      for (std::size_t j = 0; j < k; ++j) lp.A[0][j] = 1;
      lp.rel[0] = Rel::Eq;
      lp.b[0] = 1;
      for (std::size_t i = 0; i < coords; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
          Rat v = 0;
          for (std::size_t t = 0; t < p.theta_count(); ++t)
            v += mu.weights[t] * c.evals[j].err[t][i];
          lp.A[1 + i][j] = v;
        }
        lp.A[1 + i][k] = -1;
      }
      return lp;
    };
    m.pricing = [&](const LpSolution& sol) {
      PricingWeights w;
      w.cost_w.assign(p.theta_count(), Rat(0));
      w.err_w.assign(p.theta_count(), std::vector<Rat>(coords, Rat(0)));
      for (std::size_t t = 0; t < p.theta_count(); ++t)
        for (std::size_t i = 0; i < coords; ++i)
          w.err_w[t][i] = -sol.dual[1 + i] * mu.weights[t];
      return std::make_pair(std::move(w), sol.dual[0]);
    };
    LpSolution sol = colgen_solve(p, depth_bound, opt, cols, m);
    return {sol.objective, mixture_from(cols, sol.x)};
  }
  // randomized: minimax error over mixtures
  Columns cols = seed_columns(p, depth_bound, opt);
  LpSolution sol = solve_feasibility(p, depth_bound, Rat(0), opt, cols);
  return {sol.objective, mixture_from(cols, sol.x)};
}

Rat min_error(const Problem& p, DepthMode mode, int depth_bound,
              const SolveOptions& opt) {
  return min_error_strategy(p, mode, depth_bound, opt).value;
}

std::optional<int> worst_case_depth(const Problem& p, DepthMode mode, const Rat& eps,
                                    int t_cap, const SolveOptions& opt) {
  for (int T = 0; T <= t_cap; ++T) {
    if (min_error(p, mode, T, opt) <= eps) return T;
  }
  return std::nullopt;
}

Rat product_restricted_dual(const Problem& p, int depth_bound, const Rat& eps,
                            const std::vector<Prior>& init, const SolveOptions& opt) {
  if (!p.product) throw PreconditionError("product-restricted dual needs a product");
  require_valid(p);
  const Problem& base = *p.product->base;
  const int n = p.coordinates();
  if (init.size() != static_cast<std::size_t>(n))
    throw PreconditionError("expected one initial prior per coordinate");
  for (const auto& f : init)
    if (f.weights.size() != base.theta_count())
      throw PreconditionError("initial prior support mismatch");

  Columns cols = seed_columns(p, depth_bound, opt);
  ErrRows rows{error_cols(p), p.theta_count()};
  std::vector<Prior> fillers = init;
  const std::size_t bt = base.theta_count();

  auto product_weight = [&](std::size_t theta, int coord_i,
                            const std::vector<Rat>& mu_i) {
    Rat w = 1;
    for (int c = 0; c < n; ++c) {
      int d = p.theta_digit(static_cast<int>(theta), c);
      w *= (c == coord_i) ? mu_i[static_cast<std::size_t>(d)]
                          : fillers[static_cast<std::size_t>(c)]
                                .weights[static_cast<std::size_t>(d)];
    }
    return w;
  };

  // Value of the fixed product prior: cheapest feasible mixture against it.
  auto value_at_prior = [&]() {
    std::vector<Rat> mu(p.theta_count());
    for (std::size_t t = 0; t < p.theta_count(); ++t)
      mu[t] = product_weight(t, -1, {});
    Master m;
    m.build = [&, rows](const Columns& c) {
      LinearProgram lp;
      const std::size_t k = c.trees.size();
      lp.c.resize(k);
      for (std::size_t j = 0; j < k; ++j) {
        Rat v = 0;
        for (std::size_t t = 0; t < p.theta_count(); ++t)
          v += mu[t] * c.evals[j].cost_mean[t];
        lp.c[j] = v;
      }
      lp.A.assign(1 + rows.count(), std::vector<Rat>(k, Rat(0)));
      lp.rel.assign(1 + rows.count(), Rel::Le);
      lp.b.assign(1 + rows.count(), eps);
      for (std::size_t j = 0; j < k; ++j) lp.A[0][j] = 1;
      lp.rel[0] = Rel::Eq;
      lp.b[0] = 1;
      for (std::size_t r = 0; r < rows.count(); ++r)
        for (std::size_t j = 0; j < k; ++j) lp.A[1 + r][j] = rows.entry(c.evals[j], r);
      return lp;
    };
    m.pricing = [&, rows](const LpSolution& sol) {
      PricingWeights w;
      w.cost_w = mu;
      w.err_w.assign(p.theta_count(), std::vector<Rat>(rows.ec, Rat(0)));
      for (std::size_t r = 0; r < rows.count(); ++r)
        w.err_w[r / rows.ec][r % rows.ec] = -sol.dual[1 + r];
      return std::make_pair(std::move(w), sol.dual[0]);
    };
    return colgen_solve(p, depth_bound, opt, cols, m).objective;
  };

  // One coordinate step: maximize over mu_i the cheapest feasible cost, as a
  // single LP over (mu_i, lambda, sigma) with tree rows generated on demand.
  auto coordinate_step = [&](int ci) {
    for (long iter = 0; iter < opt.colgen_iteration_cap; ++iter) {
      const std::size_t k = cols.trees.size();
      // vars: mu_i (bt), lambda_r (rows), sigma
      LinearProgram lp;
      const std::size_t nl = rows.count();
      lp.c.assign(bt + nl + 1, Rat(0));
      for (std::size_t r = 0; r < nl; ++r) lp.c[bt + r] = eps;
      lp.c[bt + nl] = -1;  // maximize sigma - lambda.eps
      lp.A.assign(1 + k, std::vector<Rat>(bt + nl + 1, Rat(0)));
      lp.rel.assign(1 + k, Rel::Ge);
      lp.b.assign(1 + k, Rat(0));
      for (std::size_t d = 0; d < bt; ++d) lp.A[0][d] = 1;
      lp.rel[0] = Rel::Eq;
      lp.b[0] = 1;
      for (std::size_t j = 0; j < k; ++j) {
        auto& row = lp.A[1 + j];
        for (std::size_t d = 0; d < bt; ++d) {
          Rat kappa = 0;
          for (std::size_t t = 0; t < p.theta_count(); ++t) {
            if (p.theta_digit(static_cast<int>(t), ci) != static_cast<int>(d)) continue;
            Rat w = 1;
            for (int c = 0; c < n; ++c) {
              if (c == ci) continue;
              w *= fillers[static_cast<std::size_t>(c)].weights[static_cast<std::size_t>(
                  p.theta_digit(static_cast<int>(t), c))];
            }
            kappa += w * cols.evals[j].cost_mean[t];
          }
          row[d] = kappa;
        }
        for (std::size_t r = 0; r < nl; ++r) row[bt + r] = rows.entry(cols.evals[j], r);
        row[bt + nl] = -1;
      }
      LpSolution sol = solve_lp(lp, opt.lp_mode);
      if (sol.status != LpStatus::Optimal)
        throw InternalError("coordinate-step LP must be solvable");
      std::vector<Rat> mu_i(sol.x.begin(), sol.x.begin() + static_cast<long>(bt));
      Rat sigma = sol.x[bt + nl];
      // Price a violated tree under the candidate prior.
      PricingWeights w;
      w.cost_w.resize(p.theta_count());
      for (std::size_t t = 0; t < p.theta_count(); ++t)
        w.cost_w[t] = product_weight(t, ci, mu_i);
      w.err_w.assign(p.theta_count(), std::vector<Rat>(rows.ec, Rat(0)));
      for (std::size_t r = 0; r < nl; ++r)
        w.err_w[r / rows.ec][r % rows.ec] = sol.x[bt + r];
      auto [value, tree] = best_tree_weighted(p, depth_bound, w, opt);
      if (!(value.primary < sigma)) {
        fillers[static_cast<std::size_t>(ci)].weights = std::move(mu_i);
        return;
      }
      if (!cols.add(p, std::move(tree)))
        throw InternalError("coordinate-step pricing produced a known column");
    }
    throw ResourceCapError("coordinate-step row generation cap exceeded");
  };

  Rat best = value_at_prior();
  for (int sweep = 0; sweep < 8; ++sweep) {
    for (int i = 0; i < n; ++i) coordinate_step(i);
    Rat v = value_at_prior();
    if (v <= best) { best = std::max(best, v); break; }
    best = v;
  }
  return best;
}

}  // namespace oq
