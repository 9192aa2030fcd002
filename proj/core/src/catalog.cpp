#include <algorithm>
#include <map>

#include "internal.hpp"
#include "oq/error.hpp"
#include "oq/solver.hpp"

namespace oq {

namespace internal {

std::vector<HullPt> lower_frontier(std::vector<HullPt> pts) {
  if (pts.empty()) return {};
  std::sort(pts.begin(), pts.end(), [](const HullPt& a, const HullPt& b) {
    if (a.e != b.e) return a.e < b.e;
    if (a.c != b.c) return a.c < b.c;
    return a.tag < b.tag;
  });
  // keep the cheapest point per error level
  std::vector<HullPt> uniq;
  for (auto& p : pts)
    if (uniq.empty() || p.e != uniq.back().e) uniq.push_back(std::move(p));

  // monotone chain, lower hull
  std::vector<HullPt> hull;
  for (auto& p : uniq) {
    while (hull.size() >= 2) {
      const HullPt& a = hull[hull.size() - 2];
      const HullPt& b = hull.back();
      // drop b unless (a -> b -> p) turns strictly left
      Rat cross = (b.e - a.e) * (p.c - a.c) - (b.c - a.c) * (p.e - a.e);
      if (cross > 0) break;
      hull.pop_back();
    }
    hull.push_back(std::move(p));
  }
  // trim to the strictly cost-decreasing prefix
  std::size_t keep = 1;
  while (keep < hull.size() && hull[keep].c < hull[keep - 1].c) ++keep;
  hull.resize(keep);
  return hull;
}

std::vector<HullPt> minkowski_sum(const std::vector<std::vector<HullPt>>& hulls) {
  HullPt acc{0, 0, -1};
  struct Edge {
    Rat de, dc;
  };
  std::vector<Edge> edges;
  for (const auto& h : hulls) {
    acc.e += h.front().e;
    acc.c += h.front().c;
    for (std::size_t i = 1; i < h.size(); ++i)
      edges.push_back({h[i].e - h[i - 1].e, h[i].c - h[i - 1].c});
  }
  // slopes dc/de ascend along a convex decreasing chain; de > 0 throughout
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return a.dc * b.de < b.dc * a.de; });
  std::vector<HullPt> out{acc};
  for (const auto& ed : edges) {
    HullPt nxt = out.back();
    nxt.e += ed.de;
    nxt.c += ed.dc;
    out.push_back(std::move(nxt));
  }
  return out;
}

std::vector<Rat> fingerprint(const Evaluation& ev, std::size_t pad_len) {
  std::vector<Rat> key;
  key.reserve(ev.err.size() * (ev.err.empty() ? 0 : ev.err.front().size()) +
              ev.err.size() * pad_len);
  for (const auto& row : ev.err) key.insert(key.end(), row.begin(), row.end());
  for (const auto& row : ev.cost_dist) {
    for (std::size_t k = 0; k < pad_len; ++k)
      key.push_back(k < row.size() ? row[k] : Rat(0));
  }
  return key;
}

Evaluation compose_eval(const Problem& p, int input,
                        const std::vector<const Evaluation*>& children) {
  const std::size_t nt = p.theta_count();
  const std::size_t coords = children.front()->err.front().size();
  Evaluation ev;
  ev.err.assign(nt, std::vector<Rat>(coords, Rat(0)));
  int child_depth = 0;
  for (const auto* c : children) child_depth = std::max(child_depth, c->depth);
  ev.cost_dist.assign(nt, std::vector<Rat>(static_cast<std::size_t>(child_depth) + 2, Rat(0)));
  ev.cost_mean.assign(nt, Rat(0));

  for (std::size_t t = 0; t < nt; ++t) {
    const auto& krow = p.oracle.kernel[t][static_cast<std::size_t>(input)];
    for (std::size_t y = 0; y < children.size(); ++y) {
      if (krow[y] == 0) continue;
      const Evaluation& ce = *children[y];
      for (std::size_t i = 0; i < coords; ++i)
        ev.err[t][i] += krow[y] * ce.err[t][i];
      for (std::size_t k = 0; k < ce.cost_dist[t].size(); ++k)
        ev.cost_dist[t][k + 1] += krow[y] * ce.cost_dist[t][k];
      ev.cost_mean[t] += krow[y] * (ce.cost_mean[t] + 1);
    }
  }
  int depth = 0;
  for (std::size_t t = 0; t < nt; ++t)
    for (std::size_t k = 0; k < ev.cost_dist[t].size(); ++k)
      if (ev.cost_dist[t][k] != 0) depth = std::max(depth, static_cast<int>(k));
  ev.depth = depth;
  for (auto& row : ev.cost_dist) row.resize(static_cast<std::size_t>(depth) + 1);
  return ev;
}

}  // namespace internal

using internal::HullPt;

TreeCatalog enumerate_trees(const Problem& p, int depth_bound, const SolveOptions& opt) {
  if (depth_bound < 0) throw PreconditionError("depth bound must be nonnegative");
  require_valid(p);
  TreeCatalog cat;
  cat.depth_bound = depth_bound;
  const std::size_t pad = static_cast<std::size_t>(depth_bound) + 1;

  std::map<std::vector<Rat>, std::size_t> seen;
  auto try_add = [&](DeterministicTree tree, Evaluation ev) {
    auto key = internal::fingerprint(ev, pad);
    if (seen.emplace(std::move(key), cat.entries.size()).second)
      cat.entries.push_back({std::move(tree), std::move(ev)});
  };

  for (std::size_t o = 0; o < p.outcome_count(); ++o) {
    DeterministicTree t{make_leaf(static_cast<int>(o))};
    try_add(t, evaluate(p, t));
  }

  for (int d = 1; d <= depth_bound; ++d) {
    const std::size_t prev = cat.entries.size();
    double predicted = static_cast<double>(p.input_count());
    for (std::size_t y = 0; y < p.answer_count(); ++y)
      predicted *= static_cast<double>(prev);
    if (predicted > static_cast<double>(opt.catalog_cap))
      throw ResourceCapError("catalog at depth " + std::to_string(d) + " would need " +
                             std::to_string(predicted) + " combinations (cap " +
                             std::to_string(opt.catalog_cap) + ")");

    for (std::size_t x = 0; x < p.input_count(); ++x) {
      std::vector<std::size_t> pick(p.answer_count(), 0);
      while (true) {
        bool all_same = true;
        for (std::size_t y = 1; y < pick.size(); ++y)
          if (pick[y] != pick[0]) { all_same = false; break; }
        if (!all_same) {
          std::vector<const Evaluation*> ch_ev(pick.size());
          std::vector<TreePtr> ch(pick.size());
          for (std::size_t y = 0; y < pick.size(); ++y) {
            ch_ev[y] = &cat.entries[pick[y]].eval;
            ch[y] = cat.entries[pick[y]].tree.root;
          }
          Evaluation ev = internal::compose_eval(p, static_cast<int>(x), ch_ev);
          try_add(DeterministicTree{make_query(static_cast<int>(x), std::move(ch))},
                  std::move(ev));
        }
        std::size_t y = pick.size();
        while (y > 0 && ++pick[y - 1] == prev) pick[--y] = 0;
        if (y == 0) break;
      }
    }
  }
  return cat;
}

bool FrontierCurve::feasible(const Rat& eps) const {
  return !vertices.empty() && eps >= vertices.front().error;
}

std::optional<Rat> FrontierCurve::value_at(const Rat& eps) const {
  if (!feasible(eps)) return std::nullopt;
  if (eps >= vertices.back().error) return vertices.back().cost;
  std::size_t i = 0;
  while (vertices[i + 1].error < eps) ++i;
  const auto& a = vertices[i];
  const auto& b = vertices[i + 1];
  return a.cost + (eps - a.error) * (b.cost - a.cost) / (b.error - a.error);
}

std::optional<RandomizedStrategy> FrontierCurve::witness_at(const Rat& eps) const {
  if (!feasible(eps)) return std::nullopt;
  if (eps >= vertices.back().error)
    return RandomizedStrategy::pure(vertices.back().witness);
  std::size_t i = 0;
  while (vertices[i + 1].error < eps) ++i;
  const auto& a = vertices[i];
  const auto& b = vertices[i + 1];
  if (a.error == eps) return RandomizedStrategy::pure(a.witness);
  Rat lambda = (b.error - eps) / (b.error - a.error);
  RandomizedStrategy s;
  s.atoms.push_back({lambda, a.witness});
  s.atoms.push_back({1 - lambda, b.witness});
  return s;
}

const Rat& FrontierCurve::min_error() const { return vertices.front().error; }
const Rat& FrontierCurve::max_vertex_error() const { return vertices.back().error; }

FrontierCurve dist_frontier(const Problem& p, const TreeCatalog& cat) {
  const Prior& mu = p.require_prior();
  if (p.semantics == ErrorSemantics::PerCoordinate)
    throw PreconditionError(
        "dist_frontier needs a scalar error; use dist_value for per-coordinate "
        "semantics");
  if (cat.entries.empty()) throw PreconditionError("empty catalog");

  std::vector<HullPt> pts;
  pts.reserve(cat.entries.size());
  for (std::size_t i = 0; i < cat.entries.size(); ++i) {
    MuAggregates agg = mu_aggregates(p, cat.entries[i].eval, mu);
    pts.push_back({agg.error[0], agg.expectation, static_cast<long>(i)});
  }
  FrontierCurve curve;
  for (auto& v : internal::lower_frontier(std::move(pts)))
    curve.vertices.push_back(
        {std::move(v.e), std::move(v.c),
         cat.entries[static_cast<std::size_t>(v.tag)].tree});
  return curve;
}

}  // namespace oq
