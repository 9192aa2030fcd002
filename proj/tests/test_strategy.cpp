#include <doctest.h>

#include "oq/error.hpp"
#include "oq/examples.hpp"
#include "oq/strategy.hpp"

using namespace oq;

namespace {

// query the single estimation input, then answer what was heard
DeterministicTree identify_tree() {
  return DeterministicTree{make_query(0, {make_leaf(0), make_leaf(1)})};
}

DeterministicTree majority3_tree() {
  // three queries, output the majority answer
  auto leaf_for = [](int ones) { return make_leaf(ones >= 2 ? 1 : 0); };
  auto level3 = [&](int ones) {
    return make_query(0, {leaf_for(ones), leaf_for(ones + 1)});
  };
  auto level2 = [&](int ones) {
    return make_query(0, {level3(ones), level3(ones + 1)});
  };
  return DeterministicTree{make_query(0, {level2(0), level2(1)})};
}

// read bit 1; if 0 answer 0, else read bit 2 and answer it
DeterministicTree and2_optimal() {
  return DeterministicTree{
      make_query(0, {make_leaf(0), make_query(1, {make_leaf(0), make_leaf(1)})})};
}

}  // namespace

TEST_CASE("noiseless identification evaluates exactly") {
  Problem p = example_bit();
  Evaluation ev = evaluate(p, identify_tree());
  CHECK(ev.err[0][0] == Rat(0));
  CHECK(ev.err[1][0] == Rat(0));
  CHECK(ev.cost_mean[0] == Rat(1));
  CHECK(ev.cost_mean[1] == Rat(1));
  CHECK(ev.depth == 1);
}

TEST_CASE("constant answers err on half of the hypotheses") {
  Problem p = example_bit();
  Evaluation ev = evaluate(p, DeterministicTree{make_leaf(0)});
  CHECK(ev.err[0][0] == Rat(0));
  CHECK(ev.err[1][0] == Rat(1));
  CHECK(ev.cost_mean[0] == Rat(0));
  CHECK(ev.depth == 0);
  MuAggregates agg = mu_aggregates(p, ev, *p.prior);
  CHECK(agg.error[0] == Rat(1, 2));
  CHECK(agg.expectation == Rat(0));
  CHECK(agg.variance == Rat(0));
}

TEST_CASE("majority of three against the noisy channel") {
  Problem p = example_noisy_bit(Rat(1, 4));
  Evaluation ev = evaluate(p, majority3_tree());
  // p^3 + 3 p^2 (1-p) at p = 1/4
  CHECK(ev.err[0][0] == Rat(5, 32));
  CHECK(ev.err[1][0] == Rat(5, 32));
  CHECK(ev.cost_mean[0] == Rat(3));
  CHECK(ev.depth == 3);
  WorstCase wc = worst_case(ev);
  CHECK(wc.max_error == Rat(5, 32));
  CHECK(wc.depth == 3);
}

TEST_CASE("adaptive AND evaluation and aggregates") {
  Problem p = example_and2();
  Evaluation ev = evaluate(p, and2_optimal());
  for (std::size_t t = 0; t < 4; ++t) CHECK(ev.err[t][0] == Rat(0));
  MuAggregates agg = mu_aggregates(p, ev, *p.prior);
  CHECK(agg.error[0] == Rat(0));
  CHECK(agg.expectation == Rat(3, 2));
  CHECK(agg.variance == Rat(1, 4));  // stopping time 1 or 2, half-half
}

TEST_CASE("point-mass aggregates reproduce the per-theta entries") {
  Problem p = example_noisy_bit(Rat(1, 4));
  Evaluation ev = evaluate(p, majority3_tree());
  MuAggregates agg = mu_aggregates(p, ev, Prior::point(2, 1));
  CHECK(agg.error[0] == ev.err[1][0]);
  CHECK(agg.expectation == ev.cost_mean[1]);
}

TEST_CASE("mixtures convex-combine evaluations") {
  Problem p = example_bit();
  RandomizedStrategy s;
  s.atoms.push_back({Rat(1, 2), DeterministicTree{make_leaf(0)}});
  s.atoms.push_back({Rat(1, 2), DeterministicTree{make_leaf(1)}});
  Evaluation ev = evaluate(p, s);
  CHECK(ev.err[0][0] == Rat(1, 2));
  CHECK(ev.err[1][0] == Rat(1, 2));
  CHECK(ev.depth == 0);
  WorstCase wc = worst_case(ev);
  CHECK(wc.max_error == Rat(1, 2));
  CHECK(wc.depth == 0);
}

TEST_CASE("stopping time law sums to one") {
  Problem p = example_and2();
  Evaluation ev = evaluate(p, and2_optimal());
  for (std::size_t t = 0; t < p.theta_count(); ++t) {
    Rat total = 0;
    for (const auto& m : ev.cost_dist[t]) total += m;
    CHECK(total == Rat(1));
  }
}

TEST_CASE("strategies are validated against the problem") {
  Problem p = example_bit();
  // unknown input index
  DeterministicTree bad{make_query(3, {make_leaf(0), make_leaf(1)})};
  CHECK_THROWS_AS(evaluate(p, bad), PreconditionError);
  // wrong child count
  DeterministicTree arity{make_query(0, {make_leaf(0)})};
  CHECK_THROWS_AS(evaluate(p, arity), PreconditionError);
  // weights must sum to one
  RandomizedStrategy s;
  s.atoms.push_back({Rat(1, 2), DeterministicTree{make_leaf(0)}});
  CHECK_THROWS_AS(evaluate(p, s), PreconditionError);
}

TEST_CASE("derandomize extracts the zero-error atom") {
  Problem p = example_and2();
  RandomizedStrategy s;
  s.atoms.push_back({Rat(9, 10), and2_optimal()});
  s.atoms.push_back({Rat(1, 10), DeterministicTree{make_leaf(0)}});
  // worst-case error 1/10 < 1/4 = 1/|Theta|
  DeterministicTree t = derandomize(p, s);
  WorstCase wc = worst_case(evaluate(p, t));
  CHECK(wc.max_error == Rat(0));
  CHECK(t.depth() <= s.depth());
}

TEST_CASE("derandomize rejects too-large error") {
  Problem p = example_and2();
  RandomizedStrategy s;
  s.atoms.push_back({Rat(1, 2), DeterministicTree{make_leaf(0)}});
  s.atoms.push_back({Rat(1, 2), DeterministicTree{make_leaf(1)}});
  CHECK_THROWS_AS(derandomize(p, s), PreconditionError);
  // stochastic oracles are rejected outright
  Problem noisy = example_noisy_bit(Rat(1, 4));
  CHECK_THROWS_AS(derandomize(noisy, RandomizedStrategy::pure(identify_tree())),
                  PreconditionError);
}

TEST_CASE("derandomize with a single zero-error atom returns it") {
  Problem p = example_and2();
  RandomizedStrategy s = RandomizedStrategy::pure(and2_optimal());
  DeterministicTree t = derandomize(p, s);
  CHECK(t == and2_optimal());
}

TEST_CASE("canonicalize collapses redundant queries") {
  DeterministicTree t{make_query(0, {make_leaf(0), make_leaf(0)})};
  DeterministicTree c = canonicalize(t);
  REQUIRE(c.root->is_leaf());
  CHECK(c.root->outcome == 0);

  // nested collapse: both children reduce to the same leaf
  DeterministicTree nested{make_query(
      0, {make_query(0, {make_leaf(1), make_leaf(1)}), make_leaf(1)})};
  DeterministicTree cn = canonicalize(nested);
  REQUIRE(cn.root->is_leaf());
  CHECK(cn.root->outcome == 1);

  // canonical trees are fixed points
  Problem p = example_and2();
  DeterministicTree opt = and2_optimal();
  CHECK(canonicalize(opt) == opt);

  // error behavior is preserved exactly, cost never increases
  Problem bitp = example_bit();
  Evaluation before = evaluate(bitp, t);
  Evaluation after = evaluate(bitp, c);
  CHECK(after.err == before.err);
  CHECK(after.cost_mean[0] <= before.cost_mean[0]);
  CHECK(after.depth <= before.depth);
}
