#include "oq/examples.hpp"

namespace oq {

Problem example_bit() {
  Problem p = make_estimation_problem(
      {"0", "1"}, {"0", "1"},
      {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}},
      {"0", "1"}, {{0}, {1}}, "bit");
  return with_uniform_prior(std::move(p));
}

Problem example_noisy_bit(const Rat& flip) {
  Problem p = make_estimation_problem(
      {"0", "1"}, {"0", "1"},
      {{1 - flip, flip}, {flip, 1 - flip}},
      {"0", "1"}, {{0}, {1}}, "noisy" + rat_str(flip));
  return with_uniform_prior(std::move(p));
}

Problem example_and2() {
  return with_uniform_prior(make_query_problem(2, {0, 0, 0, 1}, nullptr, "and2"));
}

Problem example_xor2() {
  return with_uniform_prior(make_query_problem(2, {0, 1, 1, 0}, nullptr, "xor2"));
}

Problem example_or3() {
  return with_uniform_prior(
      make_query_problem(3, {0, 1, 1, 1, 1, 1, 1, 1}, nullptr, "or3"));
}

Problem example_pac_dictators() {
  std::vector<PacConcept> concepts = {{"dict_a", {1, 0}}, {"dict_b", {0, 1}}};
  std::vector<PacDistribution> dists = {{"uniform", {Rat(1, 2), Rat(1, 2)}}};
  Problem p = make_pac_problem({"a", "b"}, concepts, dists, Rat(0), "pac2");
  return with_uniform_prior(std::move(p));
}

Problem example_coin3() {
  Problem p = make_estimation_problem(
      {"p=1/4", "p=1/2", "p=3/4"}, {"0", "1"},
      {{Rat(3, 4), Rat(1, 4)}, {Rat(1, 2), Rat(1, 2)}, {Rat(1, 4), Rat(3, 4)}},
      {"p=1/4", "p=1/2", "p=3/4"}, {{0}, {1}, {2}}, "coin3");
  return with_uniform_prior(std::move(p));
}

std::vector<std::pair<std::string, Problem>> builtin_examples() {
  return {
      {"bit", example_bit()},
      {"noisy14", example_noisy_bit()},
      {"and2", example_and2()},
      {"xor2", example_xor2()},
      {"or3", example_or3()},
      {"pac2", example_pac_dictators()},
      {"coin3", example_coin3()},
  };
}

}  // namespace oq
