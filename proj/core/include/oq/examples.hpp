#pragma once

// Small built-in problems used by the CLI, the tests and the docs.

#include <utility>
#include <vector>

#include "oq/problem.hpp"

namespace oq {

// Two hypotheses, one noiseless identifying query, uniform prior.
Problem example_bit();

// Two hypotheses observed through a binary symmetric channel that flips the
// answer with the given probability. Uniform prior.
Problem example_noisy_bit(const Rat& flip = Rat(1, 4));

// AND of two bits as a query problem, uniform prior.
Problem example_and2();

// XOR of two bits, uniform prior.
Problem example_xor2();

// OR of three bits, uniform prior.
Problem example_or3();

// Two dictator concepts on a two-point instance space, exact learning.
Problem example_pac_dictators();

// Three-hypothesis coin bias test with singleton targets.
Problem example_coin3();

std::vector<std::pair<std::string, Problem>> builtin_examples();

}  // namespace oq
