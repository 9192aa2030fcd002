#pragma once

// Finite oracle problems: a parameter set Theta, a stochastic answer kernel
// per parameter, a target set of acceptable outcomes per parameter, an
// optional prior, and the n-fold product constructions used for
// multi-instance runs.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "oq/rational.hpp"

namespace oq {

struct OutcomeSpace {
  std::vector<std::string> labels;
  // Optional numeric payload per label; all vectors share one dimension.
  std::optional<std::vector<std::vector<Rat>>> values;

  int index_of(const std::string& label) const;
};

struct Oracle {
  std::vector<std::string> inputs;
  std::vector<std::string> answers;
  // kernel[theta][input] is a probability vector over answers.
  std::vector<std::vector<std::vector<Rat>>> kernel;

  // True iff every kernel row is a unit vector.
  bool deterministic() const;
};

struct TargetFunction {
  // accept[theta]: acceptable outcome indices, sorted ascending. An empty
  // list is allowed; it makes the problem infeasible at error 0.
  std::vector<std::vector<int>> accept;
};

struct Prior {
  std::vector<Rat> weights;

  Rat min_weight() const;  // minimum over the support
  bool nontrivial() const;  // max weight < 1
  static Prior uniform(std::size_t n);
  static Prior point(std::size_t n, std::size_t at);
};

enum class ErrorSemantics { Single, PerCoordinate, Joint };

std::string semantics_str(ErrorSemantics s);

struct Problem;

// Present on problems built by product_problem. Coordinate 0 is the most
// significant digit in every mixed-radix index (theta, outcome, input).
struct ProductInfo {
  int n = 1;
  std::shared_ptr<const Problem> base;
};

struct Problem {
  std::string name;
  std::vector<std::string> theta;
  OutcomeSpace outcomes;
  Oracle oracle;
  TargetFunction target;
  std::optional<Prior> prior;
  ErrorSemantics semantics = ErrorSemantics::Single;
  std::optional<ProductInfo> product;

  std::size_t theta_count() const { return theta.size(); }
  std::size_t input_count() const { return oracle.inputs.size(); }
  std::size_t answer_count() const { return oracle.answers.size(); }
  std::size_t outcome_count() const { return outcomes.labels.size(); }

  int coordinates() const { return product ? product->n : 1; }

  // Outcome membership in the (joint) target set of theta.
  bool accepts(int theta_idx, int outcome_idx) const;
  // Coordinate-wise membership; coord must be 0 on non-product problems.
  bool accepts_coord(int theta_idx, int outcome_idx, int coord) const;

  // Mixed-radix digit extraction for product problems.
  int theta_digit(int theta_idx, int coord) const;
  int outcome_digit(int outcome_idx, int coord) const;
  int input_coord(int input_idx) const;
  int input_base(int input_idx) const;

  // False iff some theta has an empty target set.
  bool zero_error_target_feasible() const;

  const Prior& require_prior() const;  // throws PreconditionError if absent
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Reports every violated structural invariant; empty report iff well-formed.
ValidationReport validate_problem(const Problem& p);

// Throws PreconditionError listing the violations unless validate passes.
void require_valid(const Problem& p);

// n-fold product: Theta' = Theta^n, inputs tagged by coordinate, prior mu^n
// when present. Joint semantics accepts only tuples correct in every
// coordinate; PerCoordinate keeps coordinate-wise error accounting.
Problem product_problem(const Problem& p, int n, ErrorSemantics semantics);

// (1 - delta/2) mu + (delta/2) uniform; floor weight delta / (2 |Theta|).
Prior smooth_prior(const Prior& mu, const Rat& delta);

// Query problem for a truth table f over {0,1}^bits; theta ranges over the
// promise (all words by default), the oracle answers bit i of the word.
// Truth table is indexed by the word read as a binary number, word[0] most
// significant.
Problem make_query_problem(int bits, const std::vector<int>& truth,
                           const std::vector<std::string>* promise = nullptr,
                           const std::string& name = "query");

// Input-free sampling oracle: kernels[theta] is the answer distribution.
Problem make_estimation_problem(const std::vector<std::string>& theta,
                                const std::vector<std::string>& answers,
                                const std::vector<std::vector<Rat>>& kernels,
                                const std::vector<std::string>& outcome_labels,
                                const std::vector<std::vector<int>>& targets,
                                const std::string& name = "estimation");

struct PacConcept {
  std::string name;
  std::vector<int> truth;  // label per instance-space element
};

struct PacDistribution {
  std::string name;
  std::vector<Rat> weights;
};

// Theta = concepts x distributions; the oracle emits a labeled sample
// (x, h(x)) with x ~ D; a concept c is acceptable for (h, D) when its
// disagreement mass Pr_D(c(x) != h(x)) is at most `tolerance`.
Problem make_pac_problem(const std::vector<std::string>& instance_labels,
                         const std::vector<PacConcept>& concepts,
                         const std::vector<PacDistribution>& dists,
                         const Rat& tolerance, const std::string& name = "pac");

Problem with_prior(Problem p, Prior mu);
Problem with_uniform_prior(Problem p);

}  // namespace oq
