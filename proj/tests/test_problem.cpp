#include <doctest.h>

#include "oq/error.hpp"
#include "oq/examples.hpp"
#include "oq/problem.hpp"

using namespace oq;

TEST_CASE("well-formed problems validate cleanly") {
  for (const auto& [name, p] : builtin_examples()) {
    CAPTURE(name);
    CHECK(validate_problem(p).ok());
  }
}

TEST_CASE("validation reports the violated invariants") {
  Problem p = example_bit();
  p.oracle.kernel[0][0] = {Rat(1, 2), Rat(2, 5)};  // row sum 9/10
  auto rep = validate_problem(p);
  REQUIRE(!rep.ok());
  bool found = false;
  for (const auto& v : rep.violations)
    if (v.find("row sum != 1") != std::string::npos) found = true;
  CHECK(found);

  Problem q = example_bit();
  q.target.accept[1] = {2};  // unknown outcome index
  rep = validate_problem(q);
  REQUIRE(!rep.ok());
  found = false;
  for (const auto& v : rep.violations)
    if (v.find("unknown outcome label") != std::string::npos) found = true;
  CHECK(found);

  Problem r = example_bit();
  r.prior->weights = {Rat(1, 2), Rat(1, 3)};
  CHECK(!validate_problem(r).ok());
}

TEST_CASE("n = 1 products are isomorphic to the base") {
  Problem p = product_problem(example_bit(), 1, ErrorSemantics::Joint);
  CHECK(validate_problem(p).ok());
  CHECK(p.theta_count() == 2);
  CHECK(p.input_count() == 1);
  CHECK(p.outcome_count() == 2);
  CHECK(p.accepts(0, 0));
  CHECK(!p.accepts(0, 1));
}

TEST_CASE("two-fold product of the two-hypothesis problem") {
  Problem p = product_problem(example_bit(), 2, ErrorSemantics::PerCoordinate);
  CHECK(validate_problem(p).ok());
  CHECK(p.theta_count() == 4);
  REQUIRE(p.prior.has_value());
  for (const auto& w : p.prior->weights) CHECK(w == Rat(1, 4));
  // mixed-radix digits: theta index 2 = (1,0)
  CHECK(p.theta_digit(2, 0) == 1);
  CHECK(p.theta_digit(2, 1) == 0);
  CHECK(p.theta[2] == "(1,0)");
}

TEST_CASE("product of the AND query problem") {
  Problem p = product_problem(example_and2(), 2, ErrorSemantics::Joint);
  CHECK(validate_problem(p).ok());
  CHECK(p.theta_count() == 16);
  CHECK(p.input_count() == 4);
  CHECK(p.oracle.inputs[0] == "1:1");
  CHECK(p.oracle.inputs[3] == "2:2");
  // joint target: outcome tuple must be correct in both coordinates
  // theta (11,11) accepts only (1,1)
  int t_both = 15;
  CHECK(p.theta[static_cast<std::size_t>(t_both)] == "(11,11)");
  int correct = -1;
  for (std::size_t o = 0; o < p.outcome_count(); ++o)
    if (p.accepts(t_both, static_cast<int>(o))) {
      CHECK(correct == -1);
      correct = static_cast<int>(o);
    }
  CHECK(p.outcomes.labels[static_cast<std::size_t>(correct)] == "(1,1)");
}

TEST_CASE("products of products are rejected") {
  Problem p = product_problem(example_bit(), 2, ErrorSemantics::Joint);
  CHECK_THROWS_AS(product_problem(p, 2, ErrorSemantics::Joint), PreconditionError);
  CHECK_THROWS_AS(product_problem(example_bit(), 0, ErrorSemantics::Joint),
                  PreconditionError);
}

TEST_CASE("prior smoothing mixes toward uniform") {
  Prior point;
  point.weights = {Rat(1), Rat(0)};
  Prior s = smooth_prior(point, Rat(1, 2));
  CHECK(s.weights[0] == Rat(7, 8));
  CHECK(s.weights[1] == Rat(1, 8));

  Prior u = Prior::uniform(3);
  Prior su = smooth_prior(u, Rat(1, 3));
  for (const auto& w : su.weights) CHECK(w == Rat(1, 3));

  Prior skew;
  skew.weights = {Rat(3, 4), Rat(1, 4)};
  Prior ss = smooth_prior(skew, Rat(1, 4));
  CHECK(ss.weights[0] == Rat(23, 32));
  CHECK(ss.weights[1] == Rat(9, 32));
  // floor delta/(2 |Theta|) = 1/16
  CHECK(ss.min_weight() >= Rat(1, 16));

  CHECK_THROWS_AS(smooth_prior(u, Rat(0)), PreconditionError);
  CHECK_THROWS_AS(smooth_prior(u, Rat(1)), PreconditionError);
}

TEST_CASE("query problems encode deterministic oracles") {
  Problem p = example_and2();
  CHECK(p.theta_count() == 4);
  CHECK(p.oracle.deterministic());
  for (const auto& rows : p.oracle.kernel)
    for (const auto& row : rows) {
      Rat sum = 0;
      int ones = 0;
      for (const auto& v : row) {
        sum += v;
        if (v == 1) ++ones;
      }
      CHECK(sum == 1);
      CHECK(ones == 1);
    }
  // truth table: only word 11 maps to outcome 1
  CHECK(p.accepts(3, 1));
  CHECK(p.accepts(0, 0));
  CHECK(!p.accepts(3, 0));
}

TEST_CASE("promise restricted query problem") {
  std::vector<std::string> promise = {"00", "11"};
  Problem p = make_query_problem(2, {0, 1, 1, 0}, &promise, "xor-promise");
  CHECK(p.theta_count() == 2);
  CHECK(validate_problem(p).ok());
  CHECK(p.accepts(0, 0));  // xor(00) = 0
  CHECK(p.accepts(1, 0));  // xor(11) = 0
  std::vector<std::string> empty;
  CHECK_THROWS_AS(make_query_problem(2, {0, 1, 1, 0}, &empty), PreconditionError);
}

TEST_CASE("or3 has eight hypotheses and three inputs") {
  Problem p = example_or3();
  CHECK(p.theta_count() == 8);
  CHECK(p.input_count() == 3);
}

TEST_CASE("estimation problems have a single dummy input") {
  Problem p = example_coin3();
  CHECK(p.theta_count() == 3);
  CHECK(p.answer_count() == 2);
  CHECK(p.input_count() == 1);
  CHECK(validate_problem(p).ok());
}

TEST_CASE("exact-learning targets from disagreement masses") {
  Problem p = example_pac_dictators();
  CHECK(p.theta_count() == 2);
  // delta = 0: only the true concept is acceptable
  for (std::size_t t = 0; t < p.theta_count(); ++t)
    CHECK(p.target.accept[t].size() == 1);

  // delta = 1: everything is acceptable
  std::vector<PacConcept> concepts = {{"dict_a", {1, 0}}, {"dict_b", {0, 1}}};
  std::vector<PacDistribution> dists = {{"uniform", {Rat(1, 2), Rat(1, 2)}}};
  Problem q = make_pac_problem({"a", "b"}, concepts, dists, Rat(1));
  for (std::size_t t = 0; t < q.theta_count(); ++t)
    CHECK(q.target.accept[t].size() == concepts.size());

  // three singleton indicators, uniform distribution, delta = 1/3: the
  // pairwise disagreement mass is 2/3, so every target stays a singleton
  std::vector<PacConcept> c3 = {
      {"ind_a", {1, 0, 0}}, {"ind_b", {0, 1, 0}}, {"ind_c", {0, 0, 1}}};
  std::vector<PacDistribution> d3 = {{"uniform", {Rat(1, 3), Rat(1, 3), Rat(1, 3)}}};
  Problem r = make_pac_problem({"a", "b", "c"}, c3, d3, Rat(1, 3));
  CHECK(r.theta_count() == 3);
  for (std::size_t t = 0; t < r.theta_count(); ++t)
    CHECK(r.target.accept[t].size() == 1);
}
