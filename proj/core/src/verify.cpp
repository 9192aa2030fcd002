#include "oq/verify.hpp"

#include <algorithm>

#include "oq/error.hpp"

namespace oq {

namespace {

std::string R(const Rat& q) { return rat_str(q); }

CheckLine ok_line(std::string claim, bool pass, std::string note = "") {
  return CheckLine{std::move(claim), pass, false, std::move(note)};
}

CheckLine skip_line(std::string claim, std::string note) {
  return CheckLine{std::move(claim), false, true, std::move(note)};
}

Rat max_coord_error(const MuAggregates& agg) {
  Rat m = 0;
  for (const auto& e : agg.error) m = std::max(m, e);
  return m;
}

Rat per_theta_max_mean(const Evaluation& ev) {
  Rat m = 0;
  for (const auto& c : ev.cost_mean) m = std::max(m, c);
  return m;
}

Rat per_theta_max_variance(const Evaluation& ev) {
  Rat m = 0;
  for (std::size_t t = 0; t < ev.cost_mean.size(); ++t) {
    Rat second = 0;
    for (std::size_t k = 0; k < ev.cost_dist[t].size(); ++k)
      second += Rat(static_cast<long>(k * k)) * ev.cost_dist[t][k];
    m = std::max(m, Rat(second - ev.cost_mean[t] * ev.cost_mean[t]));
  }
  return m;
}

Rat tail_mass(const std::vector<Rat>& dist, long budget) {
  Rat m = 0;
  for (std::size_t k = 0; k < dist.size(); ++k)
    if (static_cast<long>(k) > budget) m += dist[k];
  return m;
}

}  // namespace

bool CheckReport::pass() const {
  for (const auto& l : lines)
    if (!l.skipped && !l.pass) return false;
  return true;
}

bool CheckReport::all_skipped() const {
  for (const auto& l : lines)
    if (!l.skipped) return false;
  return !lines.empty();
}

CheckReport check_additivity(const Problem& p, const Rat& eps, int n, int T,
                             const SolveOptions& opt) {
  if (p.semantics != ErrorSemantics::Single)
    throw PreconditionError("additivity check expects a single-instance problem");
  if (n < 1 || T < 0) throw PreconditionError("need n >= 1 and T >= 0");
  CheckReport rep;
  rep.check = "additivity";
  rep.instance = p.name + " eps=" + R(eps) + " n=" + std::to_string(n) +
                 " T=" + std::to_string(T);
  Problem ppc = product_problem(p, n, ErrorSemantics::PerCoordinate);

  if (p.prior) {
    ValueResult vT = dist_value(p, T, eps, opt);
    ValueResult vnT = dist_value(p, n * T, eps, opt);
    ValueResult vp = dist_value(ppc, n * T, eps, opt);
    if (!vT.feasible || !vnT.feasible || !vp.feasible) {
      rep.lines.push_back(
          skip_line("distributional additivity", "error budget infeasible at the depth bound"));
    } else {
      rep.lines.push_back(ok_line("n*Dbar_T(eps) == Dbar_pc(eps)  [" + R(n * vT.value) +
                                      " == " + R(vp.value) + "]",
                                  n * vT.value == vp.value));
      rep.lines.push_back(ok_line("n*Dbar_nT(eps) == Dbar_pc(eps)  [" + R(n * vnT.value) +
                                      " == " + R(vp.value) + "]",
                                  n * vnT.value == vp.value));

      RandomizedStrategy rs = repeat_n(p, vT.witness, n);
      MuAggregates ra = mu_aggregates(ppc, evaluate(ppc, rs), ppc.require_prior());
      rep.lines.push_back(ok_line("repeated strategy: per-coordinate error <= eps  [" +
                                      R(max_coord_error(ra)) + " <= " + R(eps) + "]",
                                  max_coord_error(ra) <= eps));
      rep.lines.push_back(ok_line("repeated strategy: cost == n*Dbar_T  [" +
                                      R(ra.expectation) + " == " + R(n * vT.value) + "]",
                                  ra.expectation == n * vT.value));

      std::vector<Prior> fillers(static_cast<std::size_t>(n), *p.prior);
      RandomizedStrategy es = embed_coordinate(ppc, vp.witness, std::nullopt, fillers);
      MuAggregates ea = mu_aggregates(p, evaluate(p, es), *p.prior);
      rep.lines.push_back(ok_line("embedded product optimum: error <= eps  [" +
                                      R(ea.error[0]) + " <= " + R(eps) + "]",
                                  ea.error[0] <= eps));
      rep.lines.push_back(ok_line("embedded product optimum: cost == Dbar_pc / n  [" +
                                      R(ea.expectation) + " == " + R(vp.value / n) + "]",
                                  ea.expectation == vp.value / n));
    }
  }

  GameValue rT = randomized_value(p, T, eps, opt);
  GameValue rnT = randomized_value(p, n * T, eps, opt);
  GameValue rp = randomized_value(ppc, n * T, eps, opt);
  if (!rT.feasible || !rnT.feasible || !rp.feasible) {
    rep.lines.push_back(
        skip_line("randomized additivity", "error budget infeasible at the depth bound"));
  } else {
    rep.lines.push_back(ok_line("n*Rbar_T(eps) == Rbar_pc(eps)  [" +
                                    R(n * rT.primal_value) + " == " + R(rp.primal_value) +
                                    "]",
                                n * rT.primal_value == rp.primal_value));
    rep.lines.push_back(ok_line("n*Rbar_nT(eps) == Rbar_pc(eps)  [" +
                                    R(n * rnT.primal_value) + " == " +
                                    R(rp.primal_value) + "]",
                                n * rnT.primal_value == rp.primal_value));

    std::vector<Prior> init(static_cast<std::size_t>(n), rT.dual_prior);
    Rat prd = product_restricted_dual(ppc, n * T, eps, init, opt);
    rep.lines.push_back(ok_line("n*Rbar_T <= product-restricted dual  [" +
                                    R(n * rT.primal_value) + " <= " + R(prd) + "]",
                                n * rT.primal_value <= prd));
    rep.lines.push_back(ok_line("product-restricted dual <= Rbar_pc  [" + R(prd) +
                                    " <= " + R(rp.primal_value) + "]",
                                prd <= rp.primal_value));

    RandomizedStrategy rs = repeat_n(p, rT.primal_mixture, n);
    Evaluation rev = evaluate(ppc, rs);
    WorstCase wc = worst_case(rev);
    rep.lines.push_back(ok_line("repeated mixture: per-theta error <= eps  [" +
                                    R(wc.max_error) + " <= " + R(eps) + "]",
                                wc.max_error <= eps));
    rep.lines.push_back(ok_line("repeated mixture: worst expected cost == n*Rbar_T  [" +
                                    R(wc.max_expected_cost) + " == " +
                                    R(n * rT.primal_value) + "]",
                                wc.max_expected_cost == n * rT.primal_value));
  }
  return rep;
}

CheckReport check_minimax(const Problem& p, const Rat& eps, int T,
                          const SolveOptions& opt) {
  CheckReport rep;
  rep.check = "minimax";
  rep.instance = p.name + " eps=" + R(eps) + " T=" + std::to_string(T);
  GameValue gv = randomized_value(p, T, eps, opt);
  if (!gv.feasible) {
    rep.lines.push_back(skip_line("minimax gap",
                                  "error budget infeasible at depth " + std::to_string(T)));
    return rep;
  }
  rep.lines.push_back(ok_line("duality gap == 0  [primal " + R(gv.primal_value) +
                                  ", dual " + R(gv.dual_value) + "]",
                              gv.gap == 0));
  rep.lines.push_back(
      ok_line("least-favorable prior's inner optimum equals the primal value",
              gv.dual_value == gv.primal_value));
  return rep;
}

CheckReport check_continuity(const Problem& p, const std::vector<Rat>& grid, int T,
                             const SolveOptions& opt) {
  CheckReport rep;
  rep.check = "continuity";
  rep.instance = p.name + " T=" + std::to_string(T);
  const Prior& mu = p.require_prior();
  FrontierCurve curve = frontier_dp(p, T, opt);

  bool structural = true;
  for (std::size_t i = 0; i + 1 < curve.vertices.size(); ++i) {
    const auto& a = curve.vertices[i];
    const auto& b = curve.vertices[i + 1];
    if (!(a.error < b.error) || !(a.cost > b.cost)) structural = false;
    if (i + 2 < curve.vertices.size()) {
      const auto& c = curve.vertices[i + 2];
      // slopes must strictly increase
      if (!((b.cost - a.cost) * (c.error - b.error) <
            (c.cost - b.cost) * (b.error - a.error)))
        structural = false;
    }
  }
  rep.lines.push_back(ok_line(
      "frontier is convex piecewise-linear with strictly decreasing vertices (" +
          std::to_string(curve.vertices.size()) + " vertices)",
      structural));

  const Rat mu_min = mu.min_weight();
  const bool zero_ok = curve.feasible(0);

  for (const auto& eps : grid) {
    const std::string tag = "eps=" + R(eps) + ": ";
    auto r = exact_sqrt(eps);
    if (!r) {
      rep.lines.push_back(skip_line(tag + "posterior-filter inequality",
                                    "sqrt(eps) is not rational; pick a square grid point"));
      continue;
    }
    if (!(*r < mu_min)) {
      rep.lines.push_back(skip_line(tag + "posterior-filter inequality",
                                    "hypothesis sqrt(eps) < mu_min fails (mu_min " +
                                        R(mu_min) + ")"));
      continue;
    }
    auto de = curve.value_at(eps);
    if (!de) {
      rep.lines.push_back(skip_line(tag + "posterior-filter inequality",
                                    "eps below the feasible error range"));
      continue;
    }
    if (zero_ok) {
      Rat d0 = *curve.value_at(0);
      rep.lines.push_back(
          ok_line(tag + "value(0) <= value(eps) + sqrt(eps)*value(0)  [" + R(d0) +
                      " <= " + R(*de + *r * d0) + "]",
                  d0 <= *de + *r * d0));
      if (p.oracle.deterministic()) {
        RandomizedStrategy s_eps = *curve.witness_at(eps);
        RandomizedStrategy fb = *curve.witness_at(0);
        RandomizedStrategy filtered = filter_posterior(p, s_eps, *r, fb);
        MuAggregates fa = mu_aggregates(p, evaluate(p, filtered), mu);
        rep.lines.push_back(ok_line(tag + "filtered strategy has zero error  [" +
                                        R(fa.error[0]) + "]",
                                    fa.error[0] == 0));
        rep.lines.push_back(ok_line(
            tag + "filtered cost <= value(eps) + sqrt(eps)*value(0)  [" +
                R(fa.expectation) + " <= " + R(*de + *r * d0) + "]",
            fa.expectation <= *de + *r * d0));
        bool dichotomy = true;
        for (const auto& recd : posterior_table(p, s_eps)) {
          if (recd.perr <= *r && recd.perr != 0) dichotomy = false;
        }
        rep.lines.push_back(ok_line(
            tag + "kept leaves are exact (perr <= sqrt(eps) implies perr == 0)",
            dichotomy));
      } else {
        rep.lines.push_back(skip_line(tag + "filter witness",
                                      "constructive witness exercised on deterministic "
                                      "oracles only"));
      }
    } else {
      rep.lines.push_back(
          skip_line(tag + "posterior-filter inequality", "zero error infeasible at depth " +
                                                             std::to_string(T)));
    }

    // two-point mixture at rho = 2 eps
    Rat rho = 2 * eps;
    auto drho = curve.value_at(rho);
    auto dhalf = curve.value_at(eps / 2);
    if (eps == 0 || !drho || !dhalf) {
      rep.lines.push_back(
          skip_line(tag + "mixture bound", "rho or eps/2 outside the feasible range"));
    } else {
      Rat epsp = eps / (2 * rho - eps);  // = 1/3 at rho = 2 eps
      RandomizedStrategy mixd = mix(*curve.witness_at(rho), *curve.witness_at(eps / 2), epsp);
      MuAggregates ma = mu_aggregates(p, evaluate(p, mixd), mu);
      Rat bound = epsp * *drho + (1 - epsp) * *dhalf;
      rep.lines.push_back(ok_line(tag + "mixture error <= eps  [" + R(ma.error[0]) +
                                      " <= " + R(eps) + "]",
                                  ma.error[0] <= eps));
      rep.lines.push_back(ok_line(tag + "mixture cost == eps'*value(rho) + (1-eps')*value(eps/2)  [" +
                                      R(ma.expectation) + " == " + R(bound) + "]",
                                  ma.expectation == bound));
      rep.lines.push_back(ok_line(tag + "value(eps) <= mixture cost  [" + R(*de) +
                                      " <= " + R(bound) + "]",
                                  *de <= bound));
    }
  }
  return rep;
}

CheckReport check_direct_sum(const Problem& p, const Rat& eps, int n, int T,
                             const SolveOptions& opt) {
  if (p.semantics != ErrorSemantics::Single)
    throw PreconditionError("direct-sum check expects a single-instance problem");
  if (n < 1 || T < 0) throw PreconditionError("need n >= 1 and T >= 0");
  CheckReport rep;
  rep.check = "direct-sum";
  rep.instance = p.name + " eps=" + R(eps) + " n=" + std::to_string(n) +
                 " T=" + std::to_string(T);
  Problem ppc = product_problem(p, n, ErrorSemantics::PerCoordinate);
  Problem pj = product_problem(p, n, ErrorSemantics::Joint);
  const long nt = static_cast<long>(p.theta_count());

  // ----- distributional -----
  if (!p.prior) {
    rep.lines.push_back(skip_line("distributional chains", "no prior on the problem"));
  } else if (!p.prior->nontrivial()) {
    rep.lines.push_back(skip_line("distributional chains", "prior is a point mass"));
  } else {
    const Rat mm = p.prior->min_weight();
    if (!(eps < Rat(99, 100) && eps < mm * mm)) {
      rep.lines.push_back(skip_line(
          "distributional chains",
          "hypothesis eps < min{99/100, mu_min^2} fails (mu_min " + R(mm) + ")"));
    } else {
      ValueResult dT_eps = dist_value(p, T, eps, opt);
      ValueResult dnT_eps = dist_value(p, n * T, eps, opt);
      ValueResult dnT_over = dist_value(p, n * T, eps / n, opt);
      ValueResult dT_over = dist_value(p, T, eps / n, opt);
      ValueResult pc = dist_value(ppc, n * T, eps, opt);
      ValueResult jv = dist_value(pj, n * T, eps, opt);
      if (!dT_eps.feasible || !dnT_eps.feasible || !pc.feasible || !jv.feasible ||
          !dnT_over.feasible || !dT_over.feasible) {
        rep.lines.push_back(
            skip_line("distributional chains", "a value is infeasible at its depth bound"));
      } else {
        rep.lines.push_back(ok_line("(aD) n*Dbar(eps) <= Dbar_pc(eps)  [" +
                                        R(n * dnT_eps.value) + " <= " + R(pc.value) + "]",
                                    n * dnT_eps.value <= pc.value));
        rep.lines.push_back(ok_line("(aD) Dbar_pc(eps) <= Dbar_joint(eps)  [" +
                                        R(pc.value) + " <= " + R(jv.value) + "]",
                                    pc.value <= jv.value));
        rep.lines.push_back(
            ok_line("(bD) (1-sqrt(eps))*Dbar(eps/n) <= Dbar(eps)  [(1-sqrt(" + R(eps) +
                        "))*" + R(dnT_over.value) + " <= " + R(dnT_eps.value) + "]",
                    one_minus_sqrt_factor_leq(eps, dnT_over.value, dnT_eps.value)));
        rep.lines.push_back(ok_line("(cD) Dbar_joint(eps) <= n*Dbar(eps/n)  [" +
                                        R(jv.value) + " <= " + R(n * dT_over.value) + "]",
                                    jv.value <= n * dT_over.value));
        RandomizedStrategy rs = repeat_n(p, dT_over.witness, n);
        MuAggregates ja = mu_aggregates(pj, evaluate(pj, rs), pj.require_prior());
        rep.lines.push_back(ok_line("(cD) repeated (eps/n)-strategy: joint error <= eps  [" +
                                        R(ja.error[0]) + " <= " + R(eps) + "]",
                                    ja.error[0] <= eps));

        ValueResult d0_T = dist_value(p, T, Rat(0), opt);
        ValueResult d0_nT = dist_value(p, n * T, Rat(0), opt);
        if (d0_T.feasible && d0_nT.feasible) {
          rep.lines.push_back(
              ok_line("(dD) (1-sqrt(eps))*n*Dbar(0) <= Dbar_joint(eps)  [(1-sqrt(" +
                          R(eps) + "))*" + R(n * d0_nT.value) + " <= " + R(jv.value) + "]",
                      one_minus_sqrt_factor_leq(eps, n * d0_nT.value, jv.value)));
          rep.lines.push_back(ok_line("(dD) Dbar_joint(eps) <= n*Dbar(0)  [" + R(jv.value) +
                                          " <= " + R(n * d0_T.value) + "]",
                                      jv.value <= n * d0_T.value));
        } else {
          rep.lines.push_back(skip_line("(dD) zero-error sandwich",
                                        "zero error infeasible at the depth bound"));
        }

        // (eD) worst-case bracket via the Chebyshev construction
        Rat alpha = eps / 2;
        ValueResult sa = dist_value(p, T, eps - alpha, opt);
        if (!sa.feasible) {
          rep.lines.push_back(
              skip_line("(eD) worst-case bracket", "eps - alpha infeasible at depth T"));
        } else {
          MuAggregates agg = mu_aggregates(p, evaluate(p, sa.witness), *p.prior);
          Budget budget =
              chebyshev_budget(Rat(n) * agg.expectation, Rat(n) * agg.variance,
                               Rat(1) / alpha);
          auto wc = worst_case_depth(ppc, DepthMode::Distributional, eps,
                                     static_cast<int>(budget.max_calls), opt);
          if (!wc) {
            rep.lines.push_back(ok_line(
                "(eD) worst-case per-coordinate depth <= Chebyshev budget " +
                    std::to_string(budget.max_calls),
                false, "no feasible depth at or below the budget"));
          } else {
            rep.lines.push_back(ok_line("(eD) n*Dbar(eps) <= D_pc(eps)  [" +
                                            R(n * dnT_eps.value) + " <= " +
                                            std::to_string(*wc) + "]",
                                        n * dnT_eps.value <= Rat(*wc)));
            rep.lines.push_back(ok_line(
                "(eD) D_pc(eps) <= ceil(n*Dbar(eps-alpha) + k*sigma_n)  [" +
                    std::to_string(*wc) + " <= " + std::to_string(budget.max_calls) + "]",
                *wc <= static_cast<int>(budget.max_calls)));
          }
          RandomizedStrategy tr = truncate(repeat_n(p, sa.witness, n), budget, 0);
          MuAggregates ta = mu_aggregates(ppc, evaluate(ppc, tr), ppc.require_prior());
          rep.lines.push_back(
              ok_line("(eD) truncated repeat: per-coordinate error <= eps  [" +
                          R(max_coord_error(ta)) + " <= " + R(eps) + "]",
                      max_coord_error(ta) <= eps));
          rep.lines.push_back(ok_line("(eD) truncated repeat: depth <= budget  [" +
                                          std::to_string(tr.depth()) + " <= " +
                                          std::to_string(budget.max_calls) + "]",
                                      tr.depth() <= budget.max_calls));
        }
      }
    }
  }

  // ----- randomized -----
  Rat rand_bound = Rat(1, 128) / Rat(nt * nt);
  if (!(eps < rand_bound && eps > 0)) {
    rep.lines.push_back(skip_line(
        "randomized chains", "hypothesis 0 < eps < 1/(128|Theta|^2) fails (bound " +
                                 R(rand_bound) + ")"));
  } else {
    GameValue rT_eps = randomized_value(p, T, eps, opt);
    GameValue rnT_eps = randomized_value(p, n * T, eps, opt);
    GameValue rT_over = randomized_value(p, T, eps / n, opt);
    GameValue rnT_over = randomized_value(p, n * T, eps / n, opt);
    Rat mid_eps = Rat(1, 64) / Rat(nt * nt);
    GameValue r_mid = randomized_value(p, n * T, mid_eps, opt);
    GameValue rpc = randomized_value(ppc, n * T, eps, opt);
    GameValue rj = randomized_value(pj, n * T, eps, opt);
    if (!rT_eps.feasible || !rnT_eps.feasible || !rT_over.feasible ||
        !rnT_over.feasible || !r_mid.feasible || !rpc.feasible || !rj.feasible) {
      rep.lines.push_back(
          skip_line("randomized chains", "a value is infeasible at its depth bound"));
    } else {
      rep.lines.push_back(ok_line("(aR) n*Rbar(eps) <= Rbar_pc(eps)  [" +
                                      R(n * rnT_eps.primal_value) + " <= " +
                                      R(rpc.primal_value) + "]",
                                  n * rnT_eps.primal_value <= rpc.primal_value));
      rep.lines.push_back(ok_line("(aR) Rbar_pc(eps) <= Rbar_joint(eps)  [" +
                                      R(rpc.primal_value) + " <= " + R(rj.primal_value) +
                                      "]",
                                  rpc.primal_value <= rj.primal_value));
      rep.lines.push_back(ok_line(
          "(bR) (1/2)*Rbar(eps/n) <= Rbar(1/(64|Theta|^2))  [" +
              R(rnT_over.primal_value / 2) + " <= " + R(r_mid.primal_value) + "]",
          rnT_over.primal_value / 2 <= r_mid.primal_value));
      rep.lines.push_back(ok_line("(bR) Rbar(1/(64|Theta|^2)) <= Rbar(eps)  [" +
                                      R(r_mid.primal_value) + " <= " +
                                      R(rnT_eps.primal_value) + "]",
                                  r_mid.primal_value <= rnT_eps.primal_value));
      rep.lines.push_back(ok_line("(cR) Rbar_joint(eps) <= n*Rbar(eps/n)  [" +
                                      R(rj.primal_value) + " <= " +
                                      R(n * rT_over.primal_value) + "]",
                                  rj.primal_value <= n * rT_over.primal_value));
      RandomizedStrategy rs = repeat_n(p, rT_over.primal_mixture, n);
      WorstCase jwc = worst_case(evaluate(pj, rs));
      rep.lines.push_back(ok_line("(cR) repeated (eps/n)-mixture: joint error <= eps  [" +
                                      R(jwc.max_error) + " <= " + R(eps) + "]",
                                  jwc.max_error <= eps));

      GameValue r0_T = randomized_value(p, T, Rat(0), opt);
      GameValue r0_nT = randomized_value(p, n * T, Rat(0), opt);
      if (r0_T.feasible && r0_nT.feasible) {
        rep.lines.push_back(ok_line("(dR) (1/2)*n*Rbar(0) <= Rbar_joint(eps)  [" +
                                        R(Rat(n) * r0_nT.primal_value / 2) + " <= " +
                                        R(rj.primal_value) + "]",
                                    Rat(n) * r0_nT.primal_value / 2 <= rj.primal_value));
        rep.lines.push_back(ok_line("(dR) Rbar_joint(eps) <= n*Rbar(0)  [" +
                                        R(rj.primal_value) + " <= " +
                                        R(n * r0_T.primal_value) + "]",
                                    rj.primal_value <= n * r0_T.primal_value));
      } else {
        rep.lines.push_back(skip_line("(dR) zero-error sandwich",
                                      "zero error infeasible at the depth bound"));
      }

      // (eR) worst-case bracket
      Rat alpha = eps / 2;
      GameValue sa = randomized_value(p, T, eps - alpha, opt);
      if (!sa.feasible) {
        rep.lines.push_back(
            skip_line("(eR) worst-case bracket", "eps - alpha infeasible at depth T"));
      } else {
        Evaluation sev = evaluate(p, sa.primal_mixture);
        Budget budget = chebyshev_budget(Rat(n) * per_theta_max_mean(sev),
                                         Rat(n) * per_theta_max_variance(sev),
                                         Rat(1) / alpha);
        auto wc = worst_case_depth(ppc, DepthMode::Randomized, eps,
                                   static_cast<int>(budget.max_calls), opt);
        if (!wc) {
          rep.lines.push_back(ok_line(
              "(eR) worst-case per-coordinate depth <= Chebyshev budget " +
                  std::to_string(budget.max_calls),
              false, "no feasible depth at or below the budget"));
        } else {
          rep.lines.push_back(ok_line("(eR) n*Rbar(eps) <= R_pc(eps)  [" +
                                          R(n * rnT_eps.primal_value) + " <= " +
                                          std::to_string(*wc) + "]",
                                      n * rnT_eps.primal_value <= Rat(*wc)));
          rep.lines.push_back(ok_line(
              "(eR) R_pc(eps) <= ceil(n*E_max + k*sqrt(n)*sigma_max)  [" +
                  std::to_string(*wc) + " <= " + std::to_string(budget.max_calls) + "]",
              *wc <= static_cast<int>(budget.max_calls)));
        }
        RandomizedStrategy tr = truncate(repeat_n(p, sa.primal_mixture, n), budget, 0);
        WorstCase twc = worst_case(evaluate(ppc, tr));
        rep.lines.push_back(ok_line("(eR) truncated repeat: per-theta error <= eps  [" +
                                        R(twc.max_error) + " <= " + R(eps) + "]",
                                    twc.max_error <= eps));
        rep.lines.push_back(ok_line("(eR) truncated repeat: depth <= budget  [" +
                                        std::to_string(tr.depth()) + " <= " +
                                        std::to_string(budget.max_calls) + "]",
                                    tr.depth() <= budget.max_calls));
      }
    }
  }
  return rep;
}

CheckReport check_truncation(const Problem& p, const RandomizedStrategy& s, int n,
                             const Rat& alpha, const SolveOptions& opt) {
  (void)opt;
  if (n < 1) throw PreconditionError("need n >= 1");
  if (alpha <= 0) throw PreconditionError("alpha must be positive");
  CheckReport rep;
  rep.check = "truncation";
  rep.instance = p.name + " n=" + std::to_string(n) + " alpha=" + R(alpha);

  Evaluation sev = evaluate(p, s);
  Problem ppc = product_problem(p, n, ErrorSemantics::PerCoordinate);
  RandomizedStrategy rs = repeat_n(p, s, n);
  Evaluation rev = evaluate(ppc, rs);
  const Rat ksq = Rat(1) / alpha;

  auto run_block = [&](const std::string& tag, const Budget& budget) {
    RandomizedStrategy tr = truncate(rs, budget, 0);
    Evaluation tev = evaluate(ppc, tr);
    rep.lines.push_back(ok_line(tag + "certificate == alpha  [" + R(budget.certificate) +
                                    " == " + R(alpha) + "]",
                                budget.certificate == alpha));
    rep.lines.push_back(ok_line(tag + "depth <= budget  [" + std::to_string(tr.depth()) +
                                    " <= " + std::to_string(budget.max_calls) + "]",
                                tr.depth() <= budget.max_calls));
    Rat worst_tail = 0;
    for (std::size_t t = 0; t < ppc.theta_count(); ++t)
      worst_tail = std::max(worst_tail, tail_mass(rev.cost_dist[t], budget.max_calls));
    Rat worst_inflation = 0;
    for (std::size_t t = 0; t < ppc.theta_count(); ++t)
      for (std::size_t i = 0; i < tev.err[t].size(); ++i)
        worst_inflation = std::max(worst_inflation, Rat(tev.err[t][i] - rev.err[t][i]));
    rep.lines.push_back(ok_line(tag + "exact per-theta tail mass <= alpha  [" +
                                    R(worst_tail) + " <= " + R(alpha) + "]",
                                worst_tail <= alpha));
    rep.lines.push_back(ok_line(tag + "per-coordinate error inflation <= alpha  [" +
                                    R(worst_inflation) + " <= " + R(alpha) + "]",
                                worst_inflation <= alpha));
    rep.lines.push_back(ok_line(tag + "error inflation <= tail mass (pathwise)",
                                worst_inflation <= worst_tail));
  };

  Budget per_theta = chebyshev_budget(Rat(n) * per_theta_max_mean(sev),
                                      Rat(n) * per_theta_max_variance(sev), ksq);
  run_block("[per-theta budget " + std::to_string(per_theta.max_calls) + "] ", per_theta);

  if (p.prior) {
    MuAggregates agg = mu_aggregates(p, sev, *p.prior);
    Budget dist = chebyshev_budget(Rat(n) * agg.expectation, Rat(n) * agg.variance, ksq);
    RandomizedStrategy tr = truncate(rs, dist, 0);
    Evaluation tev = evaluate(ppc, tr);
    MuAggregates rag = mu_aggregates(ppc, rev, ppc.require_prior());
    MuAggregates tag2 = mu_aggregates(ppc, tev, ppc.require_prior());
    Rat mu_tail = 0;
    for (std::size_t t = 0; t < ppc.theta_count(); ++t)
      mu_tail += ppc.require_prior().weights[t] * tail_mass(rev.cost_dist[t], dist.max_calls);
    rep.lines.push_back(ok_line("[mu budget " + std::to_string(dist.max_calls) +
                                    "] exact tail mass <= alpha  [" + R(mu_tail) +
                                    " <= " + R(alpha) + "]",
                                mu_tail <= alpha));
    rep.lines.push_back(ok_line("[mu budget] depth <= budget  [" +
                                    std::to_string(tr.depth()) + " <= " +
                                    std::to_string(dist.max_calls) + "]",
                                tr.depth() <= dist.max_calls));
    Rat infl = 0;
    for (std::size_t i = 0; i < tag2.error.size(); ++i)
      infl = std::max(infl, Rat(tag2.error[i] - rag.error[i]));
    rep.lines.push_back(ok_line("[mu budget] per-coordinate mu-error inflation <= alpha  [" +
                                    R(infl) + " <= " + R(alpha) + "]",
                                infl <= alpha));
  }
  return rep;
}

CheckReport check_derandomization(const Problem& p, const Rat& eps,
                                  const SolveOptions& opt) {
  if (!p.oracle.deterministic())
    throw PreconditionError("derandomization check needs a deterministic oracle");
  const Rat bound(1, static_cast<unsigned long>(p.theta_count()));
  if (!(eps < bound))
    throw PreconditionError("derandomization check needs eps < 1/|Theta| = " +
                            rat_str(bound));
  CheckReport rep;
  rep.check = "derandomization";
  rep.instance = p.name + " eps=" + R(eps);

  const int cap = static_cast<int>(p.input_count());
  auto r_eps = worst_case_depth(p, DepthMode::Randomized, eps, cap, opt);
  auto r_zero = worst_case_depth(p, DepthMode::Randomized, Rat(0), cap, opt);
  if (!r_eps || !r_zero) {
    rep.lines.push_back(ok_line("worst-case depth exists within the input count", false,
                                "no feasible depth found"));
    return rep;
  }
  rep.lines.push_back(ok_line("R(eps) == R(0)  [" + std::to_string(*r_eps) + " == " +
                                  std::to_string(*r_zero) + "]",
                              *r_eps == *r_zero));

  ErrValue wit = min_error_strategy(p, DepthMode::Randomized, *r_eps, opt);
  rep.lines.push_back(ok_line("witness mixture worst-case error <= eps  [" +
                                  R(wit.value) + " <= " + R(eps) + "]",
                              wit.value <= eps));
  DeterministicTree t = derandomize(p, wit.witness);
  WorstCase wc = worst_case(evaluate(p, t));
  rep.lines.push_back(ok_line("extracted atom has zero error  [" + R(wc.max_error) + "]",
                              wc.max_error == 0));
  rep.lines.push_back(ok_line("extracted atom depth <= R(eps)  [" +
                                  std::to_string(t.depth()) + " <= " +
                                  std::to_string(*r_eps) + "]",
                              t.depth() <= *r_eps));
  return rep;
}

}  // namespace oq
