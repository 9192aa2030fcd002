#include "oq/problem.hpp"

#include <algorithm>
#include <set>

#include "oq/error.hpp"

namespace oq {

int OutcomeSpace::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<int>(i);
  return -1;
}

bool Oracle::deterministic() const {
  for (const auto& rows : kernel)
    for (const auto& row : rows)
      for (const auto& p : row)
        if (p != 0 && p != 1) return false;
  return true;
}

Rat Prior::min_weight() const {
  Rat m = 2;
  for (const auto& w : weights)
    if (w > 0 && w < m) m = w;
  if (m == 2) throw PreconditionError("prior has empty support");
  return m;
}

bool Prior::nontrivial() const {
  for (const auto& w : weights)
    if (w >= 1) return false;
  return true;
}

Prior Prior::uniform(std::size_t n) {
  Prior mu;
  mu.weights.assign(n, Rat(1, static_cast<unsigned long>(n)));
  return mu;
}

Prior Prior::point(std::size_t n, std::size_t at) {
  Prior mu;
  mu.weights.assign(n, Rat(0));
  mu.weights.at(at) = 1;
  return mu;
}

std::string semantics_str(ErrorSemantics s) {
  switch (s) {
    case ErrorSemantics::Single: return "single";
    case ErrorSemantics::PerCoordinate: return "per_coordinate";
    case ErrorSemantics::Joint: return "joint";
  }
  return "?";
}

bool Problem::accepts(int theta_idx, int outcome_idx) const {
  const auto& acc = target.accept.at(static_cast<std::size_t>(theta_idx));
  return std::binary_search(acc.begin(), acc.end(), outcome_idx);
}

bool Problem::accepts_coord(int theta_idx, int outcome_idx, int coord) const {
  if (!product) {
    if (coord != 0) throw InternalError("coordinate on non-product problem");
    return accepts(theta_idx, outcome_idx);
  }
  return product->base->accepts(theta_digit(theta_idx, coord),
                                outcome_digit(outcome_idx, coord));
}

namespace {
int digit_of(int index, int coord, int n, int radix) {
  int idx = index;
  for (int i = n - 1; i > coord; --i) idx /= radix;
  return idx % radix;
}
}  // namespace

int Problem::theta_digit(int theta_idx, int coord) const {
  if (!product) return theta_idx;
  return digit_of(theta_idx, coord, product->n,
                  static_cast<int>(product->base->theta_count()));
}

int Problem::outcome_digit(int outcome_idx, int coord) const {
  if (!product) return outcome_idx;
  return digit_of(outcome_idx, coord, product->n,
                  static_cast<int>(product->base->outcome_count()));
}

int Problem::input_coord(int input_idx) const {
  if (!product) return 0;
  return input_idx / static_cast<int>(product->base->input_count());
}

int Problem::input_base(int input_idx) const {
  if (!product) return input_idx;
  return input_idx % static_cast<int>(product->base->input_count());
}

bool Problem::zero_error_target_feasible() const {
  for (const auto& acc : target.accept)
    if (acc.empty()) return false;
  return true;
}

const Prior& Problem::require_prior() const {
  if (!prior) throw PreconditionError("problem '" + name + "' has no prior");
  return *prior;
}

namespace {

void check_labels(const std::vector<std::string>& labels, const std::string& what,
                  std::vector<std::string>& out) {
  if (labels.empty()) out.push_back(what + " list is empty");
  std::set<std::string> seen;
  for (const auto& l : labels)
    if (!seen.insert(l).second) out.push_back("duplicate " + what + " label '" + l + "'");
}

}  // namespace

ValidationReport validate_problem(const Problem& p) {
  ValidationReport rep;
  auto& v = rep.violations;
  check_labels(p.theta, "theta", v);
  check_labels(p.oracle.inputs, "input", v);
  check_labels(p.oracle.answers, "answer", v);
  check_labels(p.outcomes.labels, "outcome", v);

  if (p.outcomes.values) {
    if (p.outcomes.values->size() != p.outcome_count()) {
      v.push_back("outcome values list length mismatch");
    } else if (!p.outcomes.values->empty()) {
      std::size_t d = p.outcomes.values->front().size();
      if (d < 1) v.push_back("outcome value dimension must be >= 1");
      for (const auto& vec : *p.outcomes.values)
        if (vec.size() != d) v.push_back("outcome value dimension mismatch");
    }
  }

  if (p.oracle.kernel.size() != p.theta_count()) {
    v.push_back("kernel theta dimension mismatch");
  } else {
    for (std::size_t t = 0; t < p.theta_count(); ++t) {
      const auto& rows = p.oracle.kernel[t];
      if (rows.size() != p.input_count()) {
        v.push_back("kernel input dimension mismatch at theta '" + p.theta[t] + "'");
        continue;
      }
      for (std::size_t x = 0; x < rows.size(); ++x) {
        const auto& row = rows[x];
        if (row.size() != p.answer_count()) {
          v.push_back("kernel answer dimension mismatch at theta '" + p.theta[t] +
                      "', input '" + p.oracle.inputs[x] + "'");
          continue;
        }
        Rat sum = 0;
        bool range_ok = true;
        for (const auto& q : row) {
          sum += q;
          if (q < 0 || q > 1) range_ok = false;
        }
        if (sum != 1)
          v.push_back("row sum != 1 at theta '" + p.theta[t] + "', input '" +
                      p.oracle.inputs[x] + "' (sum " + rat_str(sum) + ")");
        if (!range_ok)
          v.push_back("kernel entry outside [0,1] at theta '" + p.theta[t] +
                      "', input '" + p.oracle.inputs[x] + "'");
      }
    }
  }

  if (p.target.accept.size() != p.theta_count()) {
    v.push_back("target theta dimension mismatch");
  } else {
    for (std::size_t t = 0; t < p.theta_count(); ++t) {
      const auto& acc = p.target.accept[t];
      if (!std::is_sorted(acc.begin(), acc.end()))
        v.push_back("target set not sorted at theta '" + p.theta[t] + "'");
      for (std::size_t i = 1; i < acc.size(); ++i)
        if (acc[i] == acc[i - 1])
          v.push_back("duplicate target outcome at theta '" + p.theta[t] + "'");
      for (int o : acc)
        if (o < 0 || o >= static_cast<int>(p.outcome_count()))
          v.push_back("unknown outcome label in target of theta '" + p.theta[t] + "'");
    }
  }

  if (p.prior) {
    if (p.prior->weights.size() != p.theta_count()) {
      v.push_back("prior dimension mismatch");
    } else {
      Rat sum = 0;
      bool support = false, range_ok = true;
      for (const auto& w : p.prior->weights) {
        sum += w;
        if (w > 0) support = true;
        if (w < 0) range_ok = false;
      }
      if (sum != 1) v.push_back("prior does not sum to 1 (sum " + rat_str(sum) + ")");
      if (!support) v.push_back("prior support is empty");
      if (!range_ok) v.push_back("negative prior weight");
    }
  }

  if (p.semantics != ErrorSemantics::Single && !p.product)
    v.push_back("per-coordinate/joint semantics require a product problem");
  if (p.product) {
    if (p.product->n < 1 || !p.product->base) {
      v.push_back("malformed product info");
    } else {
      const auto& b = *p.product->base;
      std::size_t n = static_cast<std::size_t>(p.product->n);
      auto ipow = [](std::size_t base, std::size_t e) {
        std::size_t r = 1;
        while (e--) r *= base;
        return r;
      };
      if (p.theta_count() != ipow(b.theta_count(), n))
        v.push_back("product theta cardinality mismatch");
      if (p.outcome_count() != ipow(b.outcome_count(), n))
        v.push_back("product outcome cardinality mismatch");
      if (p.input_count() != n * b.input_count())
        v.push_back("product input cardinality mismatch");
    }
  }

  return rep;
}

void require_valid(const Problem& p) {
  auto rep = validate_problem(p);
  if (rep.ok()) return;
  std::string msg = "invalid problem '" + p.name + "':";
  for (const auto& s : rep.violations) msg += " [" + s + "]";
  throw PreconditionError(msg);
}

Problem product_problem(const Problem& p, int n, ErrorSemantics semantics) {
  if (p.semantics != ErrorSemantics::Single)
    throw PreconditionError("product of a product problem is not supported");
  if (n < 1) throw PreconditionError("product requires n >= 1");
  if (semantics == ErrorSemantics::Single)
    throw PreconditionError("product semantics must be per_coordinate or joint");

  const std::size_t bt = p.theta_count();
  const std::size_t bo = p.outcome_count();
  const std::size_t bx = p.input_count();
  std::size_t nt = 1, no = 1;
  for (int i = 0; i < n; ++i) { nt *= bt; no *= bo; }

  Problem q;
  q.name = p.name + "^" + std::to_string(n) + "[" + semantics_str(semantics) + "]";
  q.semantics = semantics;
  q.product = ProductInfo{n, std::make_shared<Problem>(p)};

  auto tuple_label = [&](std::size_t flat, std::size_t radix,
                         const std::vector<std::string>& base_labels) {
    std::vector<int> digits(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
      digits[static_cast<std::size_t>(i)] = static_cast<int>(flat % radix);
      flat /= radix;
    }
    std::string s = "(";
    for (int i = 0; i < n; ++i) {
      if (i) s += ",";
      s += base_labels[static_cast<std::size_t>(digits[static_cast<std::size_t>(i)])];
    }
    return s + ")";
  };

  q.theta.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t) q.theta.push_back(tuple_label(t, bt, p.theta));

  q.outcomes.labels.reserve(no);
  for (std::size_t o = 0; o < no; ++o)
    q.outcomes.labels.push_back(tuple_label(o, bo, p.outcomes.labels));
  if (p.outcomes.values) {
    std::vector<std::vector<Rat>> vals(no);
    for (std::size_t o = 0; o < no; ++o) {
      std::size_t rest = o;
      std::vector<int> digits(static_cast<std::size_t>(n));
      for (int i = n - 1; i >= 0; --i) {
        digits[static_cast<std::size_t>(i)] = static_cast<int>(rest % bo);
        rest /= bo;
      }
      for (int i = 0; i < n; ++i) {
        const auto& bv = (*p.outcomes.values)[static_cast<std::size_t>(digits[static_cast<std::size_t>(i)])];
        vals[o].insert(vals[o].end(), bv.begin(), bv.end());
      }
    }
    q.outcomes.values = std::move(vals);
  }

  q.oracle.answers = p.oracle.answers;
  q.oracle.inputs.reserve(static_cast<std::size_t>(n) * bx);
  for (int i = 0; i < n; ++i)
    for (std::size_t x = 0; x < bx; ++x)
      q.oracle.inputs.push_back(std::to_string(i + 1) + ":" + p.oracle.inputs[x]);

  q.oracle.kernel.resize(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    q.oracle.kernel[t].reserve(static_cast<std::size_t>(n) * bx);
    for (int i = 0; i < n; ++i) {
      int td = digit_of(static_cast<int>(t), i, n, static_cast<int>(bt));
      for (std::size_t x = 0; x < bx; ++x)
        q.oracle.kernel[t].push_back(p.oracle.kernel[static_cast<std::size_t>(td)][x]);
    }
  }

  q.target.accept.resize(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    for (std::size_t o = 0; o < no; ++o) {
      bool all = true;
      for (int i = 0; i < n && all; ++i) {
        int td = digit_of(static_cast<int>(t), i, n, static_cast<int>(bt));
        int od = digit_of(static_cast<int>(o), i, n, static_cast<int>(bo));
        all = p.accepts(td, od);
      }
      if (all) q.target.accept[t].push_back(static_cast<int>(o));
    }
  }

  if (p.prior) {
    Prior mu;
    mu.weights.resize(nt);
    for (std::size_t t = 0; t < nt; ++t) {
      Rat w = 1;
      for (int i = 0; i < n; ++i)
        w *= p.prior->weights[static_cast<std::size_t>(
            digit_of(static_cast<int>(t), i, n, static_cast<int>(bt)))];
      mu.weights[t] = w;
    }
    q.prior = std::move(mu);
  }

  return q;
}

Prior smooth_prior(const Prior& mu, const Rat& delta) {
  if (delta <= 0 || delta >= 1)
    throw PreconditionError("smoothing delta must lie in (0,1)");
  if (mu.weights.empty()) throw PreconditionError("empty prior");
  const Rat u(1, static_cast<unsigned long>(mu.weights.size()));
  Prior out;
  out.weights.reserve(mu.weights.size());
  for (const auto& w : mu.weights)
    out.weights.push_back((1 - delta / 2) * w + (delta / 2) * u);
  return out;
}

Problem make_query_problem(int bits, const std::vector<int>& truth,
                           const std::vector<std::string>* promise,
                           const std::string& name) {
  if (bits < 1) throw PreconditionError("query problem needs at least one bit");
  const std::size_t words = static_cast<std::size_t>(1) << bits;
  if (truth.size() != words) throw PreconditionError("truth table size mismatch");
  std::vector<std::string> all;
  all.reserve(words);
  for (std::size_t w = 0; w < words; ++w) {
    std::string s(static_cast<std::size_t>(bits), '0');
    for (int i = 0; i < bits; ++i)
      if (w & (static_cast<std::size_t>(1) << (bits - 1 - i))) s[static_cast<std::size_t>(i)] = '1';
    all.push_back(s);
  }

  Problem p;
  p.name = name;
  if (promise) {
    if (promise->empty()) throw PreconditionError("empty promise set");
    for (const auto& w : *promise) {
      if (w.size() != static_cast<std::size_t>(bits) ||
          w.find_first_not_of("01") != std::string::npos)
        throw PreconditionError("promise word '" + w + "' is not a " +
                                std::to_string(bits) + "-bit string");
      p.theta.push_back(w);
    }
  } else {
    p.theta = all;
  }

  p.outcomes.labels = {"0", "1"};
  for (int i = 0; i < bits; ++i) p.oracle.inputs.push_back(std::to_string(i + 1));
  p.oracle.answers = {"0", "1"};

  p.oracle.kernel.resize(p.theta_count());
  p.target.accept.resize(p.theta_count());
  for (std::size_t t = 0; t < p.theta_count(); ++t) {
    const std::string& w = p.theta[t];
    std::size_t val = 0;
    for (char c : w) val = 2 * val + static_cast<std::size_t>(c - '0');
    int f = truth[val];
    if (f != 0 && f != 1) throw PreconditionError("truth table entries must be 0/1");
    p.target.accept[t] = {f};
    p.oracle.kernel[t].resize(static_cast<std::size_t>(bits));
    for (int i = 0; i < bits; ++i) {
      auto& row = p.oracle.kernel[t][static_cast<std::size_t>(i)];
      row.assign(2, Rat(0));
      row[static_cast<std::size_t>(w[static_cast<std::size_t>(i)] - '0')] = 1;
    }
  }
  return p;
}

Problem make_estimation_problem(const std::vector<std::string>& theta,
                                const std::vector<std::string>& answers,
                                const std::vector<std::vector<Rat>>& kernels,
                                const std::vector<std::string>& outcome_labels,
                                const std::vector<std::vector<int>>& targets,
                                const std::string& name) {
  Problem p;
  p.name = name;
  p.theta = theta;
  p.outcomes.labels = outcome_labels;
  p.oracle.inputs = {"*"};
  p.oracle.answers = answers;
  if (kernels.size() != theta.size() || targets.size() != theta.size())
    throw PreconditionError("estimation problem dimension mismatch");
  p.oracle.kernel.resize(theta.size());
  for (std::size_t t = 0; t < theta.size(); ++t)
    p.oracle.kernel[t] = {kernels[t]};
  p.target.accept = targets;
  for (auto& acc : p.target.accept) std::sort(acc.begin(), acc.end());
  require_valid(p);
  return p;
}

Problem make_pac_problem(const std::vector<std::string>& instance_labels,
                         const std::vector<PacConcept>& concepts,
                         const std::vector<PacDistribution>& dists,
                         const Rat& tolerance, const std::string& name) {
  if (instance_labels.empty() || concepts.empty() || dists.empty())
    throw PreconditionError("pac problem needs nonempty X, concepts, distributions");
  Problem p;
  p.name = name;
  for (const auto& c : concepts) p.outcomes.labels.push_back(c.name);
  for (const auto& h : concepts)
    for (const auto& d : dists) p.theta.push_back("(" + h.name + "," + d.name + ")");

  p.oracle.inputs = {"*"};
  for (const auto& x : instance_labels) {
    p.oracle.answers.push_back("(" + x + ",0)");
    p.oracle.answers.push_back("(" + x + ",1)");
  }

  const std::size_t nx = instance_labels.size();
  p.oracle.kernel.resize(p.theta_count());
  p.target.accept.resize(p.theta_count());
  std::size_t t = 0;
  for (const auto& h : concepts) {
    if (h.truth.size() != nx) throw PreconditionError("concept truth table size mismatch");
    for (const auto& d : dists) {
      if (d.weights.size() != nx) throw PreconditionError("distribution size mismatch");
      auto& row = p.oracle.kernel[t];
      row.resize(1);
      row[0].assign(2 * nx, Rat(0));
      for (std::size_t x = 0; x < nx; ++x)
        row[0][2 * x + static_cast<std::size_t>(h.truth[x])] = d.weights[x];
      for (std::size_t c = 0; c < concepts.size(); ++c) {
        Rat disagree = 0;
        for (std::size_t x = 0; x < nx; ++x)
          if (concepts[c].truth[x] != h.truth[x]) disagree += d.weights[x];
        if (disagree <= tolerance)
          p.target.accept[t].push_back(static_cast<int>(c));
      }
      ++t;
    }
  }
  require_valid(p);
  return p;
}

Problem with_prior(Problem p, Prior mu) {
  p.prior = std::move(mu);
  return p;
}

Problem with_uniform_prior(Problem p) {
  p.prior = Prior::uniform(p.theta_count());
  return p;
}

}  // namespace oq
