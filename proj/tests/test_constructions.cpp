#include <doctest.h>

#include "oq/constructions.hpp"
#include "oq/error.hpp"
#include "oq/examples.hpp"

using namespace oq;

namespace {

DeterministicTree identify_tree() {
  return DeterministicTree{make_query(0, {make_leaf(0), make_leaf(1)})};
}

DeterministicTree and2_optimal() {
  return DeterministicTree{
      make_query(0, {make_leaf(0), make_query(1, {make_leaf(0), make_leaf(1)})})};
}

}  // namespace

TEST_CASE("chebyshev budgets") {
  Budget b = chebyshev_budget(Rat(6), Rat(1), Rat(4));  // mean 6, var 1, k = 2
  CHECK(b.max_calls == 8);
  CHECK(b.certificate == Rat(1, 4));

  Budget b2 = chebyshev_budget(Rat(6), Rat(1), Rat(16));  // k = 1/sqrt(1/16) = 4
  CHECK(b2.max_calls == 10);
  CHECK(b2.certificate == Rat(1, 16));

  Budget b3 = chebyshev_budget(Rat(13, 2), Rat(0), Rat(4));
  CHECK(b3.max_calls == 7);
  CHECK(b3.certificate == Rat(1, 4));

  CHECK_THROWS_AS(chebyshev_budget(Rat(1), Rat(-1), Rat(1)), PreconditionError);
  CHECK_THROWS_AS(chebyshev_budget(Rat(1), Rat(1), Rat(0)), PreconditionError);
}

TEST_CASE("repetition composes costs additively") {
  Problem p = example_bit();
  Problem p2 = product_problem(p, 2, ErrorSemantics::PerCoordinate);
  RandomizedStrategy s = RandomizedStrategy::pure(identify_tree());

  RandomizedStrategy r1 = repeat_n(p, s, 1);
  Evaluation e1 = evaluate(p, s);
  // n = 1 round-trips the strategy
  CHECK(evaluate(p, r1) == e1);

  RandomizedStrategy r2 = repeat_n(p, s, 2);
  Evaluation e2 = evaluate(p2, r2);
  CHECK(e2.depth == 2);
  MuAggregates agg = mu_aggregates(p2, e2, p2.require_prior());
  CHECK(agg.error[0] == Rat(0));
  CHECK(agg.error[1] == Rat(0));
  CHECK(agg.expectation == Rat(2));
}

TEST_CASE("repeating the adaptive AND strategy doubles the cost") {
  Problem p = example_and2();
  Problem p2 = product_problem(p, 2, ErrorSemantics::PerCoordinate);
  RandomizedStrategy r2 = repeat_n(p, RandomizedStrategy::pure(and2_optimal()), 2);
  MuAggregates agg = mu_aggregates(p2, evaluate(p2, r2), p2.require_prior());
  CHECK(agg.expectation == Rat(3));
  CHECK(agg.error[0] == Rat(0));
  CHECK(agg.error[1] == Rat(0));
}

TEST_CASE("embedding inverts repetition exactly") {
  Problem p = example_and2();
  Problem p2 = product_problem(p, 2, ErrorSemantics::PerCoordinate);
  RandomizedStrategy s = RandomizedStrategy::pure(and2_optimal());
  RandomizedStrategy r2 = repeat_n(p, s, 2);
  std::vector<Prior> fillers(2, *p.prior);

  Evaluation base = evaluate(p, s);
  for (auto mode : {std::optional<int>{}, std::optional<int>{0}, std::optional<int>{1}}) {
    RandomizedStrategy back = embed_coordinate(p2, r2, mode, fillers);
    CHECK(evaluate(p, back) == base);
  }
}

TEST_CASE("embedding averages the product cost over coordinates") {
  Problem p = example_bit();
  Problem p2 = product_problem(p, 2, ErrorSemantics::Joint);
  // read both coordinates, output the pair
  auto pair_leaf = [](int a, int b) { return make_leaf(2 * a + b); };
  auto second = [&](int a) {
    return make_query(1, {pair_leaf(a, 0), pair_leaf(a, 1)});
  };
  DeterministicTree full{make_query(0, {second(0), second(1)})};
  std::vector<Prior> fillers(2, *p.prior);
  RandomizedStrategy e =
      embed_coordinate(p2, RandomizedStrategy::pure(full), std::nullopt, fillers);
  MuAggregates agg = mu_aggregates(p, evaluate(p, e), *p.prior);
  CHECK(agg.expectation == Rat(1));  // half of the product cost 2
  CHECK(agg.error[0] == Rat(0));
}

TEST_CASE("fixed-coordinate embedding folds simulated answers into weights") {
  Problem p = example_noisy_bit(Rat(1, 4));
  Problem p2 = product_problem(p, 2, ErrorSemantics::PerCoordinate);
  // query coordinate 1 first, then coordinate 2, output what was heard
  auto pair_leaf = [](int a, int b) { return make_leaf(2 * a + b); };
  auto second = [&](int a) {
    return make_query(1, {pair_leaf(a, 0), pair_leaf(a, 1)});
  };
  DeterministicTree full{make_query(0, {second(0), second(1)})};
  std::vector<Prior> fillers(2, *p.prior);
  RandomizedStrategy e =
      embed_coordinate(p2, RandomizedStrategy::pure(full), std::optional<int>{1}, fillers);
  // the coordinate-1 query became zero-cost probabilistic branching
  Evaluation ev = evaluate(p, e);
  CHECK(ev.depth == 1);
  CHECK(ev.cost_mean[0] == Rat(1));
  // the real coordinate's error is untouched: answer the channel output
  CHECK(ev.err[0][0] == Rat(1, 4));
  CHECK(ev.err[1][0] == Rat(1, 4));
}

TEST_CASE("truncation cuts deep paths onto the fallback outcome") {
  Problem p = example_and2();
  RandomizedStrategy s = RandomizedStrategy::pure(and2_optimal());

  RandomizedStrategy same = truncate(s, Budget{2, Rat(1)}, 0);
  CHECK(evaluate(p, same) == evaluate(p, s));

  RandomizedStrategy leaf = truncate(s, Budget{0, Rat(1)}, 0);
  CHECK(leaf.atoms.size() == 1);
  CHECK(leaf.atoms[0].tree.root->is_leaf());

  RandomizedStrategy one = truncate(s, Budget{1, Rat(1)}, 0);
  Evaluation ev = evaluate(p, one);
  CHECK(ev.depth == 1);
  // cutting at depth 1 answers 0 after reading bit 1; only theta = 11 errs
  CHECK(ev.err[3][0] == Rat(1));
  CHECK(ev.err[0][0] == Rat(0));
}

TEST_CASE("truncation error inflation is bounded by the exact tail mass") {
  Problem p = example_and2();
  Problem p4 = product_problem(p, 4, ErrorSemantics::PerCoordinate);
  RandomizedStrategy rs = repeat_n(p, RandomizedStrategy::pure(and2_optimal()), 4);
  Evaluation full = evaluate(p4, rs);
  MuAggregates agg = mu_aggregates(p4, full, p4.require_prior());
  CHECK(agg.expectation == Rat(6));
  CHECK(agg.variance == Rat(1));

  Budget b = chebyshev_budget(agg.expectation, agg.variance, Rat(4));
  CHECK(b.max_calls == 8);
  RandomizedStrategy tr = truncate(rs, b, 0);
  Evaluation cut = evaluate(p4, tr);
  // depth-8 budget equals the worst case: nothing changes
  CHECK(cut.err == full.err);
  CHECK(cut.depth <= 8);

  // budget 6: inflation on each coordinate <= tail mass Pr(calls > 6)
  RandomizedStrategy tr6 = truncate(rs, Budget{6, Rat(1)}, 0);
  Evaluation cut6 = evaluate(p4, tr6);
  for (std::size_t t = 0; t < p4.theta_count(); ++t) {
    Rat tail = 0;
    for (std::size_t k = 7; k < full.cost_dist[t].size(); ++k)
      tail += full.cost_dist[t][k];
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(cut6.err[t][i] - full.err[t][i] <= tail);
  }
}

TEST_CASE("mixing strategies") {
  Problem p = example_bit();
  RandomizedStrategy a = RandomizedStrategy::pure(DeterministicTree{make_leaf(0)});
  RandomizedStrategy b = RandomizedStrategy::pure(DeterministicTree{make_leaf(1)});
  RandomizedStrategy m = mix(a, b, Rat(1, 2));
  Evaluation ev = evaluate(p, m);
  CHECK(ev.err[0][0] == Rat(1, 2));
  CHECK(ev.err[1][0] == Rat(1, 2));

  RandomizedStrategy all_a = mix(a, b, Rat(1));
  CHECK(evaluate(p, all_a) == evaluate(p, a));

  // the continuity mixture weight: eps' = eps / (2 rho - eps) at
  // eps = 1/5, rho = 3/10 gives exactly 1/2
  Rat eps(1, 5), rho(3, 10);
  Rat epsp = eps / (2 * rho - eps);
  CHECK(epsp == Rat(1, 2));
}

TEST_CASE("posterior tables are exact Bayes tables") {
  Problem p = example_noisy_bit(Rat(1, 4));
  RandomizedStrategy s = RandomizedStrategy::pure(identify_tree());
  auto table = posterior_table(p, s);
  REQUIRE(table.size() == 2);
  for (const auto& rec : table) {
    CHECK(rec.reach == Rat(1, 2));
    CHECK(rec.perr == Rat(1, 4));
    CHECK(rec.posterior[static_cast<std::size_t>(rec.out)] == Rat(3, 4));
  }

  // total error identity
  MuAggregates agg = mu_aggregates(p, evaluate(p, s), *p.prior);
  Rat total = 0;
  for (const auto& rec : table) total += rec.reach * rec.perr;
  CHECK(total == agg.error[0]);
}

TEST_CASE("posterior table of a constant answer is the prior") {
  Problem p = example_bit();
  auto table = posterior_table(p, RandomizedStrategy::pure(DeterministicTree{make_leaf(0)}));
  REQUIRE(table.size() == 1);
  CHECK(table[0].posterior[0] == Rat(1, 2));
  CHECK(table[0].perr == Rat(1, 2));
  // zero-error strategies have all-zero posterior error
  Problem a = example_and2();
  for (const auto& rec : posterior_table(a, RandomizedStrategy::pure(and2_optimal())))
    CHECK(rec.perr == Rat(0));
}

TEST_CASE("posterior filter keeps good leaves and grafts the fallback") {
  Problem p = example_and2();  // mu_min = 1/4
  RandomizedStrategy opt = RandomizedStrategy::pure(and2_optimal());
  RandomizedStrategy bad = RandomizedStrategy::pure(DeterministicTree{make_leaf(0)});
  // error budget 1/25: mix weight 21/25 on the zero-error strategy
  RandomizedStrategy s = mix(opt, bad, Rat(21, 25));
  MuAggregates sa = mu_aggregates(p, evaluate(p, s), *p.prior);
  CHECK(sa.error[0] == Rat(1, 25));

  RandomizedStrategy out = filter_posterior(p, s, Rat(1, 5), opt);
  MuAggregates oa = mu_aggregates(p, evaluate(p, out), *p.prior);
  CHECK(oa.error[0] == Rat(0));
  // cost <= E[s] + sqrt(eps) * E[fallback] = 63/50 + (1/5)(3/2)
  CHECK(oa.expectation <= sa.expectation + Rat(1, 5) * Rat(3, 2));
  CHECK(oa.expectation == Rat(3, 2));

  // threshold >= mu_min is a hypothesis violation
  CHECK_THROWS_AS(filter_posterior(p, s, Rat(1, 4), opt), PreconditionError);

  // zero-error strategies pass through untouched
  RandomizedStrategy same = filter_posterior(p, opt, Rat(1, 5), bad);
  CHECK(evaluate(p, same) == evaluate(p, opt));
}
