#pragma once

// Strategy transformations: n-fold repetition, coordinate embedding with
// simulated filler instances, budget truncation, mixtures, posterior tables
// and posterior filtering.

#include <optional>
#include <vector>

#include "oq/problem.hpp"
#include "oq/strategy.hpp"

namespace oq {

struct Budget {
  long max_calls = 0;
  // Chebyshev error-inflation certificate 1/k^2 (1 when not applicable).
  Rat certificate = 1;
};

// max_calls = ceil(mean + sqrt(k_squared * variance)); certificate 1/k^2.
// Both scale parameters are passed squared so the computation stays exact.
Budget chebyshev_budget(const Rat& mean, const Rat& variance, const Rat& k_squared);

// Runs s once per coordinate, sequentially, with fresh randomness per
// coordinate. The result fits any n-fold product of `base`; its
// per-coordinate error equals err(s) and its expected product-prior cost is
// n * E_mu[s].
RandomizedStrategy repeat_n(const Problem& base, const RandomizedStrategy& s, int n);

// Plays one coordinate of a product strategy against the real oracle while
// the other coordinates are simulated: their parameters are drawn from the
// filler priors and their oracle answers are resolved by exact probability
// folding into mixture weights, at zero query cost. fixed_i selects the real
// coordinate; nullopt averages uniformly over all coordinates.
RandomizedStrategy embed_coordinate(const Problem& prod, const RandomizedStrategy& s_n,
                                    std::optional<int> fixed_i,
                                    const std::vector<Prior>& fillers);

// Cuts every path longer than the budget and emits `fallback_outcome` there.
RandomizedStrategy truncate(const RandomizedStrategy& s, const Budget& b,
                            int fallback_outcome);

// w * s1 + (1-w) * s2.
RandomizedStrategy mix(const RandomizedStrategy& s1, const RandomizedStrategy& s2,
                       const Rat& w);

struct PosteriorRecord {
  int leaf_id = 0;
  int atom = 0;
  std::vector<int> path;  // answer indices from the root
  Rat reach = 0;          // Pr(M = m)
  std::vector<Rat> posterior;  // Pr(theta | M = m), full length, zeros off-support
  int out = -1;           // leaf outcome
  Rat perr = 0;           // Pr(output wrong | M = m)
};

// One record per reachable (atom, leaf) pair, in canonical order. The total
// error identity sum_m Pr(m) perr(m) = error_mu(s) holds exactly.
std::vector<PosteriorRecord> posterior_table(const Problem& p,
                                             const RandomizedStrategy& s);

// Runs s; keeps the answer at leaves whose posterior error is at most
// `threshold` and otherwise continues with `fallback` grafted in place.
// Requires mu_min > threshold.
RandomizedStrategy filter_posterior(const Problem& p, const RandomizedStrategy& s,
                                    const Rat& threshold,
                                    const RandomizedStrategy& fallback);

}  // namespace oq
