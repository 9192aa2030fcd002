#include "oq/constructions.hpp"

#include <algorithm>

#include "oq/error.hpp"

namespace oq {

namespace {

constexpr std::size_t kAtomCap = 200000;

void merge_equal_atoms(RandomizedStrategy& s) {
  std::vector<Atom> merged;
  for (auto& a : s.atoms) {
    bool found = false;
    for (auto& m : merged) {
      if (m.tree == a.tree) {
        m.weight += a.weight;
        found = true;
        break;
      }
    }
    if (!found) merged.push_back(std::move(a));
  }
  s.atoms = std::move(merged);
}

}  // namespace

Budget chebyshev_budget(const Rat& mean, const Rat& variance, const Rat& k_squared) {
  if (variance < 0) throw PreconditionError("variance must be nonnegative");
  if (k_squared <= 0) throw PreconditionError("k^2 must be positive");
  Budget b;
  b.max_calls = ceil_mean_plus_sqrt(mean, k_squared * variance);
  b.certificate = Rat(1) / k_squared;
  return b;
}

namespace {

// Rebuilds `node` addressed at coordinate `coord` of an n-fold product; at
// each leaf accumulates the outcome digit and continues with the next
// coordinate's tree.
TreePtr compose_coordinate(const std::vector<const DeterministicTree*>& trees,
                           std::size_t coord, const TreePtr& node, long acc,
                           long outcome_radix, long input_radix) {
  if (node->is_leaf()) {
    long acc2 = acc * outcome_radix + node->outcome;
    if (coord + 1 == trees.size()) return make_leaf(static_cast<int>(acc2));
    return compose_coordinate(trees, coord + 1, trees[coord + 1]->root, acc2,
                              outcome_radix, input_radix);
  }
  std::vector<TreePtr> ch;
  ch.reserve(node->children.size());
  for (const auto& c : node->children)
    ch.push_back(compose_coordinate(trees, coord, c, acc, outcome_radix, input_radix));
  return make_query(static_cast<int>(coord) * static_cast<int>(input_radix) + node->input,
                    std::move(ch));
}

}  // namespace

RandomizedStrategy repeat_n(const Problem& base, const RandomizedStrategy& s, int n) {
  if (n < 1) throw PreconditionError("repeat requires n >= 1");
  check_strategy(base, s);

  double predicted = 1;
  for (int i = 0; i < n; ++i) predicted *= static_cast<double>(s.atoms.size());
  if (predicted > static_cast<double>(kAtomCap))
    throw ResourceCapError("repeat would produce " + std::to_string(predicted) + " atoms");

  const long bo = static_cast<long>(base.outcome_count());
  const long bx = static_cast<long>(base.input_count());

  RandomizedStrategy out;
  std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
  while (true) {
    Rat w = 1;
    std::vector<const DeterministicTree*> trees(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const Atom& a = s.atoms[pick[static_cast<std::size_t>(i)]];
      w *= a.weight;
      trees[static_cast<std::size_t>(i)] = &a.tree;
    }
    out.atoms.push_back(
        {w, DeterministicTree{compose_coordinate(trees, 0, trees[0]->root, 0, bo, bx)}});

    int i = n - 1;
    while (i >= 0 && ++pick[static_cast<std::size_t>(i)] == s.atoms.size()) {
      pick[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  merge_equal_atoms(out);
  return out;
}

namespace {

struct WeightedTree {
  Rat weight;
  TreePtr tree;
};

// Resolves simulated coordinates of a product-strategy tree for one fixed
// assignment of filler parameters. Real-coordinate queries stay as tree
// nodes; simulated queries branch probabilistically and the branch weights
// fold into mixture weights. Distinct simulated query nodes draw
// independently given the filler parameters, so choices across the children
// of a real query node combine by cartesian product.
std::vector<WeightedTree> expand_simulated(const Problem& prod, const Problem& base,
                                           int real_coord,
                                           const std::vector<int>& filler_theta,
                                           const TreePtr& node) {
  if (node->is_leaf()) {
    int digit = prod.outcome_digit(node->outcome, real_coord);
    return {{Rat(1), make_leaf(digit)}};
  }
  const int coord = prod.input_coord(node->input);
  const int x = prod.input_base(node->input);
  if (coord != real_coord) {
    const int th = filler_theta[static_cast<std::size_t>(coord)];
    std::vector<WeightedTree> out;
    for (std::size_t y = 0; y < base.answer_count(); ++y) {
      const Rat& py = base.oracle.kernel[static_cast<std::size_t>(th)]
                                        [static_cast<std::size_t>(x)][y];
      if (py == 0) continue;
      for (auto& wt : expand_simulated(prod, base, real_coord, filler_theta,
                                       node->children[y]))
        out.push_back({py * wt.weight, std::move(wt.tree)});
    }
    return out;
  }
  // Real query: cartesian product over the per-answer expansions.
  std::vector<std::vector<WeightedTree>> per_answer;
  per_answer.reserve(node->children.size());
  std::size_t combos = 1;
  for (const auto& c : node->children) {
    per_answer.push_back(expand_simulated(prod, base, real_coord, filler_theta, c));
    combos *= per_answer.back().size();
    if (combos > kAtomCap)
      throw ResourceCapError("embedding expansion exceeds atom cap");
  }
  std::vector<WeightedTree> out;
  std::vector<std::size_t> pick(per_answer.size(), 0);
  while (true) {
    Rat w = 1;
    std::vector<TreePtr> ch(per_answer.size());
    for (std::size_t y = 0; y < per_answer.size(); ++y) {
      w *= per_answer[y][pick[y]].weight;
      ch[y] = per_answer[y][pick[y]].tree;
    }
    out.push_back({std::move(w), make_query(x, std::move(ch))});
    std::size_t y = per_answer.size();
    while (y > 0 && ++pick[y - 1] == per_answer[y - 1].size()) pick[--y] = 0;
    if (y == 0) break;
  }
  return out;
}

void embed_fixed(const Problem& prod, const Problem& base, const RandomizedStrategy& s_n,
                 int real_coord, const std::vector<Prior>& fillers, const Rat& scale,
                 RandomizedStrategy& out) {
  const int n = prod.coordinates();
  // Enumerate filler assignments over coordinates != real_coord.
  std::vector<int> theta(static_cast<std::size_t>(n), 0);
  auto advance = [&]() {
    for (int i = n - 1; i >= 0; --i) {
      if (i == real_coord) continue;
      if (++theta[static_cast<std::size_t>(i)] < static_cast<int>(base.theta_count()))
        return true;
      theta[static_cast<std::size_t>(i)] = 0;
    }
    return false;
  };
  do {
    Rat tw = 1;
    for (int i = 0; i < n; ++i) {
      if (i == real_coord) continue;
      tw *= fillers[static_cast<std::size_t>(i)]
                .weights[static_cast<std::size_t>(theta[static_cast<std::size_t>(i)])];
    }
    if (tw == 0) continue;
    for (const auto& a : s_n.atoms) {
      for (auto& wt : expand_simulated(prod, base, real_coord, theta, a.tree.root)) {
        out.atoms.push_back(
            {scale * tw * a.weight * wt.weight, DeterministicTree{std::move(wt.tree)}});
        if (out.atoms.size() > kAtomCap)
          throw ResourceCapError("embedding exceeds atom cap");
      }
    }
  } while (advance());
}

}  // namespace

RandomizedStrategy embed_coordinate(const Problem& prod, const RandomizedStrategy& s_n,
                                    std::optional<int> fixed_i,
                                    const std::vector<Prior>& fillers) {
  if (!prod.product) throw PreconditionError("embed requires a product problem");
  const Problem& base = *prod.product->base;
  const int n = prod.coordinates();
  check_strategy(prod, s_n);
  if (fillers.size() != static_cast<std::size_t>(n))
    throw PreconditionError("expected one filler prior per coordinate");
  for (const auto& f : fillers)
    if (f.weights.size() != base.theta_count())
      throw PreconditionError("filler prior support mismatch");
  if (fixed_i && (*fixed_i < 0 || *fixed_i >= n))
    throw PreconditionError("fixed coordinate out of range");

  RandomizedStrategy out;
  if (fixed_i) {
    embed_fixed(prod, base, s_n, *fixed_i, fillers, Rat(1), out);
  } else {
    const Rat inv(1, static_cast<unsigned long>(n));
    for (int i = 0; i < n; ++i) embed_fixed(prod, base, s_n, i, fillers, inv, out);
  }
  merge_equal_atoms(out);
  return out;
}

namespace {

TreePtr truncate_node(const TreePtr& node, long remaining, int fallback_outcome) {
  if (node->is_leaf()) return node;
  if (remaining == 0) return make_leaf(fallback_outcome);
  std::vector<TreePtr> ch;
  ch.reserve(node->children.size());
  for (const auto& c : node->children)
    ch.push_back(truncate_node(c, remaining - 1, fallback_outcome));
  return make_query(node->input, std::move(ch));
}

}  // namespace

RandomizedStrategy truncate(const RandomizedStrategy& s, const Budget& b,
                            int fallback_outcome) {
  if (b.max_calls < 0) throw PreconditionError("budget must be nonnegative");
  RandomizedStrategy out;
  out.atoms.reserve(s.atoms.size());
  for (const auto& a : s.atoms)
    out.atoms.push_back(
        {a.weight, DeterministicTree{truncate_node(a.tree.root, b.max_calls,
                                                   fallback_outcome)}});
  merge_equal_atoms(out);
  return out;
}

RandomizedStrategy mix(const RandomizedStrategy& s1, const RandomizedStrategy& s2,
                       const Rat& w) {
  if (w < 0 || w > 1) throw PreconditionError("mixture weight must lie in [0,1]");
  if (w == 1) return s1;
  if (w == 0) return s2;
  RandomizedStrategy out;
  for (const auto& a : s1.atoms) out.atoms.push_back({w * a.weight, a.tree});
  for (const auto& a : s2.atoms) out.atoms.push_back({(1 - w) * a.weight, a.tree});
  merge_equal_atoms(out);
  return out;
}

namespace {

struct LeafVisit {
  int atom;
  std::vector<int> path;
  const TreeNode* leaf;
  std::vector<Rat> joint;  // Pr(theta, atom, path), full length
};

void collect_leaves(const Problem& p, const TreePtr& node, int atom,
                    std::vector<int>& path, std::vector<Rat> joint,
                    std::vector<LeafVisit>& out) {
  if (node->is_leaf()) {
    out.push_back({atom, path, node.get(), std::move(joint)});
    return;
  }
  for (std::size_t y = 0; y < node->children.size(); ++y) {
    std::vector<Rat> next(joint.size());
    bool any = false;
    for (std::size_t t = 0; t < joint.size(); ++t) {
      if (joint[t] == 0) continue;
      next[t] = joint[t] * p.oracle.kernel[t][static_cast<std::size_t>(node->input)][y];
      if (next[t] != 0) any = true;
    }
    if (!any) continue;
    path.push_back(static_cast<int>(y));
    collect_leaves(p, node->children[y], atom, path, std::move(next), out);
    path.pop_back();
  }
}

std::vector<LeafVisit> reachable_leaves(const Problem& p, const RandomizedStrategy& s) {
  const Prior& mu = p.require_prior();
  std::vector<LeafVisit> out;
  for (std::size_t a = 0; a < s.atoms.size(); ++a) {
    std::vector<Rat> joint(p.theta_count());
    for (std::size_t t = 0; t < p.theta_count(); ++t)
      joint[t] = mu.weights[t] * s.atoms[a].weight;
    std::vector<int> path;
    collect_leaves(p, s.atoms[a].tree.root, static_cast<int>(a), path, std::move(joint),
                   out);
  }
  return out;
}

}  // namespace

std::vector<PosteriorRecord> posterior_table(const Problem& p,
                                             const RandomizedStrategy& s) {
  check_strategy(p, s);
  std::vector<PosteriorRecord> table;
  int id = 0;
  for (auto& v : reachable_leaves(p, s)) {
    PosteriorRecord rec;
    rec.leaf_id = id++;
    rec.atom = v.atom;
    rec.path = v.path;
    rec.out = v.leaf->outcome;
    for (const auto& w : v.joint) rec.reach += w;
    rec.posterior.resize(p.theta_count());
    for (std::size_t t = 0; t < p.theta_count(); ++t) {
      rec.posterior[t] = v.joint[t] / rec.reach;
      if (!p.accepts(static_cast<int>(t), rec.out)) rec.perr += rec.posterior[t];
    }
    table.push_back(std::move(rec));
  }
  return table;
}

namespace {

TreePtr graft_at_paths(const TreePtr& node, std::vector<int>& path,
                       const std::vector<std::pair<std::vector<int>, TreePtr>>& grafts) {
  for (const auto& [gpath, gtree] : grafts)
    if (gpath == path) return gtree;
  if (node->is_leaf()) return node;
  std::vector<TreePtr> ch(node->children.size());
  for (std::size_t y = 0; y < node->children.size(); ++y) {
    path.push_back(static_cast<int>(y));
    ch[y] = graft_at_paths(node->children[y], path, grafts);
    path.pop_back();
  }
  return make_query(node->input, std::move(ch));
}

}  // namespace

RandomizedStrategy filter_posterior(const Problem& p, const RandomizedStrategy& s,
                                    const Rat& threshold,
                                    const RandomizedStrategy& fallback) {
  const Prior& mu = p.require_prior();
  if (!(mu.min_weight() > threshold))
    throw PreconditionError("posterior filter requires mu_min > threshold; mu_min = " +
                            rat_str(mu.min_weight()));
  check_strategy(p, s);
  check_strategy(p, fallback);

  // Filtered leaves per atom, found on the reachable part of each tree.
  std::vector<std::vector<std::vector<int>>> sites(s.atoms.size());
  for (const auto& v : reachable_leaves(p, s)) {
    Rat reach = 0, bad = 0;
    for (std::size_t t = 0; t < v.joint.size(); ++t) {
      reach += v.joint[t];
      if (!p.accepts(static_cast<int>(t), v.leaf->outcome)) bad += v.joint[t];
    }
    if (bad > threshold * reach)  // perr > threshold, kept exact
      sites[static_cast<std::size_t>(v.atom)].push_back(v.path);
  }

  RandomizedStrategy out;
  for (std::size_t a = 0; a < s.atoms.size(); ++a) {
    const auto& atom = s.atoms[a];
    const auto& placed = sites[a];
    if (placed.empty()) {
      out.atoms.push_back(atom);
      continue;
    }
    double combos = 1;
    for (std::size_t i = 0; i < placed.size(); ++i)
      combos *= static_cast<double>(fallback.atoms.size());
    if (combos > static_cast<double>(kAtomCap))
      throw ResourceCapError("posterior filter graft exceeds atom cap");

    std::vector<std::size_t> pick(placed.size(), 0);
    while (true) {
      Rat w = atom.weight;
      std::vector<std::pair<std::vector<int>, TreePtr>> grafts;
      grafts.reserve(placed.size());
      for (std::size_t i = 0; i < placed.size(); ++i) {
        const Atom& fa = fallback.atoms[pick[i]];
        w *= fa.weight;
        grafts.emplace_back(placed[i], fa.tree.root);
      }
      std::vector<int> path;
      out.atoms.push_back(
          {std::move(w), DeterministicTree{graft_at_paths(atom.tree.root, path, grafts)}});
      std::size_t i = placed.size();
      while (i > 0 && ++pick[i - 1] == fallback.atoms.size()) pick[--i] = 0;
      if (i == 0) break;
    }
  }
  merge_equal_atoms(out);
  return out;
}

}  // namespace oq
