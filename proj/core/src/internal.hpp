#pragma once

// Shared internals: hull arithmetic over exact rationals, evaluation
// fingerprints and composition. Not installed.

#include <map>
#include <vector>

#include "oq/problem.hpp"
#include "oq/solver.hpp"
#include "oq/strategy.hpp"

namespace oq::internal {

struct HullPt {
  Rat e;
  Rat c;
  long tag = -1;  // caller payload (catalog index etc.), -1 if none
};

// Pareto lower convex hull: vertices with strictly increasing e and strictly
// decreasing c, convex. Ties and dominated points are dropped; among equal
// (e, c) the smallest tag survives.
std::vector<HullPt> lower_frontier(std::vector<HullPt> pts);

// Minkowski sum of Pareto hulls (merges edge slopes); inputs must be
// non-empty hulls in lower_frontier form. Tags are dropped.
std::vector<HullPt> minkowski_sum(const std::vector<std::vector<HullPt>>& hulls);

// Flattened (err, cost_dist) key; cost rows padded to pad_len entries.
std::vector<Rat> fingerprint(const Evaluation& ev, std::size_t pad_len);

// Evaluation of Query(input, children) from child evaluations.
Evaluation compose_eval(const Problem& p, int input,
                        const std::vector<const Evaluation*>& children);

}  // namespace oq::internal
