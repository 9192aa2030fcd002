#pragma once

// Adaptive query strategies: finite decision trees, probability mixtures of
// trees, and their exact evaluation (per-theta error, stopping-time law,
// expected cost) against a Problem.

#include <memory>
#include <vector>

#include "oq/problem.hpp"
#include "oq/rational.hpp"

namespace oq {

struct TreeNode;
using TreePtr = std::shared_ptr<const TreeNode>;

struct TreeNode {
  int outcome = -1;  // leaf when >= 0
  int input = -1;    // query when >= 0
  std::vector<TreePtr> children;  // one per answer, in answer order

  bool is_leaf() const { return outcome >= 0; }
};

TreePtr make_leaf(int outcome);
TreePtr make_query(int input, std::vector<TreePtr> children);

struct DeterministicTree {
  TreePtr root;

  int depth() const;  // structural height
  bool operator==(const DeterministicTree& other) const;
};

struct Atom {
  Rat weight;
  DeterministicTree tree;
};

struct RandomizedStrategy {
  std::vector<Atom> atoms;

  static RandomizedStrategy pure(DeterministicTree t);
  int depth() const;  // max atom depth
};

// Structural well-formedness of a tree/strategy against a problem's inputs,
// answers and outcomes. Throws PreconditionError on the first violation.
void check_tree(const Problem& p, const DeterministicTree& t);
void check_strategy(const Problem& p, const RandomizedStrategy& s);

// Exact per-theta behavior of a strategy.
//
//   err[theta]        error probabilities; one entry for Single/Joint
//                     semantics, one per coordinate for PerCoordinate.
//   cost_mean[theta]  expected number of oracle calls.
//   cost_dist[theta]  stopping-time law, index k = Pr(exactly k calls);
//                     all rows padded to depth+1 entries.
//   depth             largest k with positive mass in any cost_dist row.
struct Evaluation {
  std::vector<std::vector<Rat>> err;
  std::vector<Rat> cost_mean;
  std::vector<std::vector<Rat>> cost_dist;
  int depth = 0;

  bool operator==(const Evaluation& other) const;
};

Evaluation evaluate(const Problem& p, const RandomizedStrategy& s);
Evaluation evaluate(const Problem& p, const DeterministicTree& t);

struct MuAggregates {
  std::vector<Rat> error;  // one entry, or one per coordinate
  Rat expectation;
  Rat variance;
};

// Prior-weighted aggregates; variance comes from the stopping-time law via
// E[k^2] - E[k]^2.
MuAggregates mu_aggregates(const Problem& p, const Evaluation& ev, const Prior& mu);

struct WorstCase {
  Rat max_error;
  Rat max_expected_cost;
  int depth = 0;
};

WorstCase worst_case(const Evaluation& ev);

// Extracts a zero-error atom from a strategy whose worst-case error is below
// 1/|Theta| on a deterministic-oracle problem; existence is guaranteed by the
// union bound over Theta. Atoms are scanned in order and the first zero-error
// one is returned.
DeterministicTree derandomize(const Problem& p, const RandomizedStrategy& s);

// Collapses query nodes whose children are all identical subtrees, bottom-up.
// Error behavior is preserved exactly on every compatible problem; cost and
// depth never increase (they strictly drop on collapsed paths).
DeterministicTree canonicalize(const DeterministicTree& t);

}  // namespace oq
