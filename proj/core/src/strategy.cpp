#include "oq/strategy.hpp"

#include <algorithm>

#include "oq/error.hpp"

namespace oq {

TreePtr make_leaf(int outcome) {
  auto n = std::make_shared<TreeNode>();
  n->outcome = outcome;
  return n;
}

TreePtr make_query(int input, std::vector<TreePtr> children) {
  auto n = std::make_shared<TreeNode>();
  n->input = input;
  n->children = std::move(children);
  return n;
}

namespace {

int node_depth(const TreePtr& n) {
  if (!n || n->is_leaf()) return 0;
  int d = 0;
  for (const auto& c : n->children) d = std::max(d, node_depth(c));
  return d + 1;
}

bool node_equal(const TreePtr& a, const TreePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->outcome != b->outcome || a->input != b->input) return false;
  if (a->children.size() != b->children.size()) return false;
  for (std::size_t i = 0; i < a->children.size(); ++i)
    if (!node_equal(a->children[i], b->children[i])) return false;
  return true;
}

}  // namespace

int DeterministicTree::depth() const { return node_depth(root); }

bool DeterministicTree::operator==(const DeterministicTree& other) const {
  return node_equal(root, other.root);
}

RandomizedStrategy RandomizedStrategy::pure(DeterministicTree t) {
  RandomizedStrategy s;
  s.atoms.push_back({Rat(1), std::move(t)});
  return s;
}

int RandomizedStrategy::depth() const {
  int d = 0;
  for (const auto& a : atoms) d = std::max(d, a.tree.depth());
  return d;
}

namespace {

void check_node(const Problem& p, const TreePtr& n) {
  if (!n) throw PreconditionError("null tree node");
  if (n->is_leaf()) {
    if (n->outcome >= static_cast<int>(p.outcome_count()))
      throw PreconditionError("tree references unknown outcome index " +
                              std::to_string(n->outcome));
    return;
  }
  if (n->input < 0 || n->input >= static_cast<int>(p.input_count()))
    throw PreconditionError("tree references unknown input index " +
                            std::to_string(n->input));
  if (n->children.size() != p.answer_count())
    throw PreconditionError("query node must have one child per answer");
  for (const auto& c : n->children) check_node(p, c);
}

}  // namespace

void check_tree(const Problem& p, const DeterministicTree& t) { check_node(p, t.root); }

void check_strategy(const Problem& p, const RandomizedStrategy& s) {
  if (s.atoms.empty()) throw PreconditionError("strategy has no atoms");
  Rat sum = 0;
  for (const auto& a : s.atoms) {
    if (a.weight <= 0) throw PreconditionError("atom weight must be positive");
    sum += a.weight;
    check_tree(p, a.tree);
  }
  if (sum != 1) throw PreconditionError("atom weights sum to " + rat_str(sum) + ", not 1");
}

namespace {

struct EvalAccum {
  const Problem& p;
  int coords;
  std::vector<std::vector<Rat>>& err;
  std::vector<std::vector<Rat>>& dist;

  // weight[theta] is the probability of the path so far under theta,
  // already scaled by the atom weight.
  void walk(const TreePtr& n, std::vector<Rat> weight, int calls) {
    if (n->is_leaf()) {
      for (std::size_t t = 0; t < weight.size(); ++t) {
        if (weight[t] == 0) continue;
        dist[t][static_cast<std::size_t>(calls)] += weight[t];
        if (p.semantics == ErrorSemantics::PerCoordinate) {
          for (int i = 0; i < coords; ++i)
            if (!p.accepts_coord(static_cast<int>(t), n->outcome, i))
              err[t][static_cast<std::size_t>(i)] += weight[t];
        } else if (!p.accepts(static_cast<int>(t), n->outcome)) {
          err[t][0] += weight[t];
        }
      }
      return;
    }
    for (std::size_t y = 0; y < n->children.size(); ++y) {
      std::vector<Rat> next(weight.size());
      bool any = false;
      for (std::size_t t = 0; t < weight.size(); ++t) {
        if (weight[t] == 0) continue;
        next[t] = weight[t] *
                  p.oracle.kernel[t][static_cast<std::size_t>(n->input)][y];
        if (next[t] != 0) any = true;
      }
      if (any) walk(n->children[y], std::move(next), calls + 1);
    }
  }
};

}  // namespace

Evaluation evaluate(const Problem& p, const RandomizedStrategy& s) {
  check_strategy(p, s);
  const std::size_t nt = p.theta_count();
  const int coords = p.semantics == ErrorSemantics::PerCoordinate ? p.coordinates() : 1;
  const int maxd = s.depth();

  Evaluation ev;
  ev.err.assign(nt, std::vector<Rat>(static_cast<std::size_t>(coords), Rat(0)));
  ev.cost_dist.assign(nt, std::vector<Rat>(static_cast<std::size_t>(maxd) + 1, Rat(0)));

  for (const auto& a : s.atoms) {
    EvalAccum acc{p, coords, ev.err, ev.cost_dist};
    acc.walk(a.tree.root, std::vector<Rat>(nt, a.weight), 0);
  }

  int depth = 0;
  ev.cost_mean.assign(nt, Rat(0));
  for (std::size_t t = 0; t < nt; ++t) {
    for (std::size_t k = 0; k < ev.cost_dist[t].size(); ++k) {
      if (ev.cost_dist[t][k] != 0) depth = std::max(depth, static_cast<int>(k));
      ev.cost_mean[t] += Rat(static_cast<long>(k)) * ev.cost_dist[t][k];
    }
  }
  ev.depth = depth;
  for (auto& row : ev.cost_dist) row.resize(static_cast<std::size_t>(depth) + 1);
  return ev;
}

Evaluation evaluate(const Problem& p, const DeterministicTree& t) {
  return evaluate(p, RandomizedStrategy::pure(t));
}

bool Evaluation::operator==(const Evaluation& other) const {
  return depth == other.depth && err == other.err && cost_mean == other.cost_mean &&
         cost_dist == other.cost_dist;
}

MuAggregates mu_aggregates(const Problem& p, const Evaluation& ev, const Prior& mu) {
  if (mu.weights.size() != p.theta_count())
    throw PreconditionError("prior dimension mismatch");
  MuAggregates agg;
  const std::size_t coords = ev.err.empty() ? 1 : ev.err.front().size();
  agg.error.assign(coords, Rat(0));
  agg.expectation = 0;
  Rat second_moment = 0;
  for (std::size_t t = 0; t < p.theta_count(); ++t) {
    const Rat& w = mu.weights[t];
    if (w == 0) continue;
    for (std::size_t i = 0; i < coords; ++i) agg.error[i] += w * ev.err[t][i];
    agg.expectation += w * ev.cost_mean[t];
    for (std::size_t k = 0; k < ev.cost_dist[t].size(); ++k)
      second_moment += w * Rat(static_cast<long>(k * k)) * ev.cost_dist[t][k];
  }
  agg.variance = second_moment - agg.expectation * agg.expectation;
  return agg;
}

WorstCase worst_case(const Evaluation& ev) {
  WorstCase wc;
  wc.max_error = 0;
  wc.max_expected_cost = 0;
  wc.depth = ev.depth;
  for (const auto& row : ev.err)
    for (const auto& e : row) wc.max_error = std::max(wc.max_error, e);
  for (const auto& c : ev.cost_mean) wc.max_expected_cost = std::max(wc.max_expected_cost, c);
  return wc;
}

DeterministicTree derandomize(const Problem& p, const RandomizedStrategy& s) {
  if (!p.oracle.deterministic())
    throw PreconditionError("derandomize requires a deterministic oracle");
  Evaluation ev = evaluate(p, s);
  WorstCase wc = worst_case(ev);
  const Rat bound(1, static_cast<unsigned long>(p.theta_count()));
  if (wc.max_error >= bound)
    throw PreconditionError("derandomize requires worst-case error < 1/|Theta| = " +
                            rat_str(bound) + ", got " + rat_str(wc.max_error));
  for (const auto& a : s.atoms) {
    Evaluation aev = evaluate(p, a.tree);
    bool clean = true;
    for (const auto& row : aev.err)
      for (const auto& e : row)
        if (e != 0) { clean = false; break; }
    if (clean) return a.tree;
  }
  throw InternalError("no zero-error atom despite satisfied union-bound precondition");
}

namespace {

TreePtr canonical_node(const TreePtr& n) {
  if (!n || n->is_leaf()) return n;
  std::vector<TreePtr> ch;
  ch.reserve(n->children.size());
  for (const auto& c : n->children) ch.push_back(canonical_node(c));
  bool all_same = true;
  for (std::size_t i = 1; i < ch.size(); ++i)
    if (!node_equal(ch[i], ch[0])) { all_same = false; break; }
  if (all_same && !ch.empty()) return ch[0];
  return make_query(n->input, std::move(ch));
}

}  // namespace

DeterministicTree canonicalize(const DeterministicTree& t) {
  return DeterministicTree{canonical_node(t.root)};
}

}  // namespace oq
