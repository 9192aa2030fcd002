#include "oq/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oq/error.hpp"

namespace oq {

using json = nlohmann::json;

namespace {

json rat_json(const Rat& q) { return rat_str(q); }

Rat rat_from(const json& j, const std::string& where) {
  if (!j.is_string())
    throw ParseError(where + ": expected a fraction string, got " + j.dump());
  return parse_rat(j.get<std::string>());
}

json problem_json(const Problem& p) {
  json j;
  if (!p.name.empty()) j["name"] = p.name;
  j["theta"] = p.theta;
  j["inputs"] = p.oracle.inputs;
  j["answers"] = p.oracle.answers;
  j["outcomes"] = p.outcomes.labels;
  if (p.outcomes.values) {
    json vals;
    for (std::size_t o = 0; o < p.outcome_count(); ++o) {
      json vec = json::array();
      for (const auto& v : (*p.outcomes.values)[o]) vec.push_back(rat_json(v));
      vals[p.outcomes.labels[o]] = vec;
    }
    j["outcome_values"] = vals;
  }
  json kernel;
  for (std::size_t t = 0; t < p.theta_count(); ++t) {
    json rows;
    for (std::size_t x = 0; x < p.input_count(); ++x) {
      json row = json::array();
      for (const auto& v : p.oracle.kernel[t][x]) row.push_back(rat_json(v));
      rows[p.oracle.inputs[x]] = row;
    }
    kernel[p.theta[t]] = rows;
  }
  j["kernel"] = kernel;
  json target;
  for (std::size_t t = 0; t < p.theta_count(); ++t) {
    json acc = json::array();
    for (int o : p.target.accept[t]) acc.push_back(p.outcomes.labels[static_cast<std::size_t>(o)]);
    target[p.theta[t]] = acc;
  }
  j["target"] = target;
  if (p.prior) {
    json w = json::array();
    for (const auto& v : p.prior->weights) w.push_back(rat_json(v));
    j["prior"] = w;
  }
  j["semantics"] = semantics_str(p.semantics);
  if (p.product) {
    j["copies"] = p.product->n;
    j["base"] = problem_json(*p.product->base);
  }
  return j;
}

Problem problem_from(const json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  Problem p;
  auto need = [&](const char* key) -> const json& {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(where + ": missing field '" + key + "'");
    return *it;
  };
  auto labels = [&](const json& arr, const char* key) {
    if (!arr.is_array()) throw ParseError(where + ": '" + std::string(key) + "' must be a list");
    std::vector<std::string> out;
    for (const auto& v : arr) {
      if (!v.is_string()) throw ParseError(where + ": labels must be strings");
      out.push_back(v.get<std::string>());
    }
    return out;
  };
  if (j.contains("name")) p.name = j["name"].get<std::string>();
  p.theta = labels(need("theta"), "theta");
  p.oracle.inputs = labels(need("inputs"), "inputs");
  p.oracle.answers = labels(need("answers"), "answers");
  p.outcomes.labels = labels(need("outcomes"), "outcomes");

  if (j.contains("outcome_values")) {
    std::vector<std::vector<Rat>> vals(p.outcome_count());
    const json& v = j["outcome_values"];
    for (std::size_t o = 0; o < p.outcome_count(); ++o) {
      const std::string& lbl = p.outcomes.labels[o];
      if (!v.contains(lbl)) throw ParseError(where + ": outcome_values missing '" + lbl + "'");
      for (const auto& e : v[lbl]) vals[o].push_back(rat_from(e, where + ".outcome_values"));
    }
    p.outcomes.values = std::move(vals);
  }

  const json& kernel = need("kernel");
  p.oracle.kernel.resize(p.theta_count());
  for (std::size_t t = 0; t < p.theta_count(); ++t) {
    if (!kernel.contains(p.theta[t]))
      throw ParseError(where + ": kernel missing theta '" + p.theta[t] + "'");
    const json& rows = kernel[p.theta[t]];
    p.oracle.kernel[t].resize(p.input_count());
    for (std::size_t x = 0; x < p.input_count(); ++x) {
      if (!rows.contains(p.oracle.inputs[x]))
        throw ParseError(where + ": kernel missing input '" + p.oracle.inputs[x] +
                         "' at theta '" + p.theta[t] + "'");
      const json& row = rows[p.oracle.inputs[x]];
      if (!row.is_array() || row.size() != p.answer_count())
        throw ParseError(where + ": kernel row length mismatch at theta '" + p.theta[t] +
                         "'");
      for (const auto& e : row)
        p.oracle.kernel[t][x].push_back(rat_from(e, where + ".kernel"));
    }
  }

  const json& target = need("target");
  p.target.accept.resize(p.theta_count());
  for (std::size_t t = 0; t < p.theta_count(); ++t) {
    if (!target.contains(p.theta[t]))
      throw ParseError(where + ": target missing theta '" + p.theta[t] + "'");
    for (const auto& e : target[p.theta[t]]) {
      if (!e.is_string()) throw ParseError(where + ": target entries must be labels");
      int idx = p.outcomes.index_of(e.get<std::string>());
      if (idx < 0)
        throw ParseError(where + ": unknown outcome label '" + e.get<std::string>() +
                         "' in target");
      p.target.accept[t].push_back(idx);
    }
    std::sort(p.target.accept[t].begin(), p.target.accept[t].end());
  }

  if (j.contains("prior")) {
    Prior mu;
    for (const auto& e : j["prior"]) mu.weights.push_back(rat_from(e, where + ".prior"));
    p.prior = std::move(mu);
  }

  std::string sem = need("semantics").get<std::string>();
  if (sem == "single") {
    p.semantics = ErrorSemantics::Single;
  } else if (sem == "per_coordinate" || sem == "joint") {
    p.semantics =
        sem == "joint" ? ErrorSemantics::Joint : ErrorSemantics::PerCoordinate;
    if (!j.contains("copies") || !j.contains("base"))
      throw ParseError(where + ": product semantics need 'copies' and 'base'");
    ProductInfo info;
    info.n = j["copies"].get<int>();
    info.base = std::make_shared<Problem>(problem_from(j["base"], where + ".base"));
    p.product = std::move(info);
  } else {
    throw ParseError(where + ": unknown semantics '" + sem + "'");
  }
  return p;
}

json tree_json(const Problem& p, const TreePtr& n) {
  json j;
  if (n->is_leaf()) {
    j["leaf"] = p.outcomes.labels[static_cast<std::size_t>(n->outcome)];
    return j;
  }
  j["query"] = p.oracle.inputs[static_cast<std::size_t>(n->input)];
  json ch = json::array();
  for (const auto& c : n->children) ch.push_back(tree_json(p, c));
  j["children"] = ch;
  return j;
}

TreePtr tree_from(const Problem& p, const json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": tree node must be an object");
  if (j.contains("leaf")) {
    int idx = p.outcomes.index_of(j["leaf"].get<std::string>());
    if (idx < 0)
      throw ParseError(where + ": unknown outcome label '" +
                       j["leaf"].get<std::string>() + "'");
    return make_leaf(idx);
  }
  if (!j.contains("query"))
    throw ParseError(where + ": tree node needs 'leaf' or 'query'");
  std::string lbl = j["query"].get<std::string>();
  int input = -1;
  for (std::size_t x = 0; x < p.input_count(); ++x)
    if (p.oracle.inputs[x] == lbl) input = static_cast<int>(x);
  if (input < 0) throw ParseError(where + ": unknown input label '" + lbl + "'");
  if (!j.contains("children") || !j["children"].is_array() ||
      j["children"].size() != p.answer_count())
    throw ParseError(where + ": 'children' must list one subtree per answer");
  std::vector<TreePtr> ch;
  for (const auto& c : j["children"]) ch.push_back(tree_from(p, c, where));
  return make_query(input, std::move(ch));
}

}  // namespace

std::string problem_to_json(const Problem& p) { return problem_json(p).dump(2) + "\n"; }

Problem problem_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("problem file: ") + e.what());
  }
  Problem p = problem_from(j, "problem");
  auto rep = validate_problem(p);
  if (!rep.ok()) {
    std::string msg = "problem file fails validation:";
    for (const auto& v : rep.violations) msg += " [" + v + "]";
    throw ParseError(msg);
  }
  return p;
}

std::string strategy_to_json(const Problem& p, const RandomizedStrategy& s) {
  json atoms = json::array();
  for (const auto& a : s.atoms) {
    json atom;
    atom["weight"] = rat_json(a.weight);
    atom["tree"] = tree_json(p, a.tree.root);
    atoms.push_back(atom);
  }
  json j;
  j["atoms"] = atoms;
  return j.dump(2) + "\n";
}

RandomizedStrategy strategy_from_json(const Problem& p, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("strategy file: ") + e.what());
  }
  RandomizedStrategy s;
  if (j.contains("atoms")) {
    for (const auto& a : j["atoms"]) {
      if (!a.contains("weight") || !a.contains("tree"))
        throw ParseError("strategy file: atoms need 'weight' and 'tree'");
      s.atoms.push_back({rat_from(a["weight"], "strategy.weight"),
                         DeterministicTree{tree_from(p, a["tree"], "strategy")}});
    }
  } else {
    s.atoms.push_back({Rat(1), DeterministicTree{tree_from(p, j, "strategy")}});
  }
  check_strategy(p, s);
  return s;
}

std::string frontier_to_csv(const FrontierCurve& c, int decimal_digits) {
  std::ostringstream out;
  out << "epsilon,expected_cost\n";
  for (const auto& v : c.vertices) {
    if (decimal_digits < 0)
      out << rat_str(v.error) << "," << rat_str(v.cost) << "\n";
    else
      out << rat_decimal(v.error, decimal_digits) << ","
          << rat_decimal(v.cost, decimal_digits) << "\n";
  }
  return out.str();
}

std::string game_value_to_json(const Problem& p, const GameValue& gv) {
  json j;
  j["feasible"] = gv.feasible;
  if (gv.feasible) {
    j["primal_value"] = rat_json(gv.primal_value);
    j["dual_value"] = rat_json(gv.dual_value);
    j["gap"] = rat_json(gv.gap);
    json atoms = json::array();
    for (const auto& a : gv.primal_mixture.atoms) {
      json atom;
      atom["weight"] = rat_json(a.weight);
      atom["tree"] = tree_json(p, a.tree.root);
      atoms.push_back(atom);
    }
    j["primal_mixture"] = {{"atoms", atoms}};
    json prior = json::array();
    for (const auto& w : gv.dual_prior.weights) prior.push_back(rat_json(w));
    j["dual_prior"] = prior;
  }
  return j.dump(2) + "\n";
}

std::string evaluation_to_json(const Problem& p, const Evaluation& ev) {
  json j;
  json err, mean, dist;
  for (std::size_t t = 0; t < p.theta_count(); ++t) {
    json row = json::array();
    for (const auto& e : ev.err[t]) row.push_back(rat_json(e));
    err[p.theta[t]] = row;
    mean[p.theta[t]] = rat_json(ev.cost_mean[t]);
    json drow = json::array();
    for (const auto& e : ev.cost_dist[t]) drow.push_back(rat_json(e));
    dist[p.theta[t]] = drow;
  }
  j["error"] = err;
  j["expected_calls"] = mean;
  j["calls_distribution"] = dist;
  j["depth"] = ev.depth;
  if (p.prior) {
    MuAggregates agg = mu_aggregates(p, ev, *p.prior);
    json aerr = json::array();
    for (const auto& e : agg.error) aerr.push_back(rat_json(e));
    j["prior_error"] = aerr;
    j["prior_expected_calls"] = rat_json(agg.expectation);
    j["prior_variance"] = rat_json(agg.variance);
  }
  return j.dump(2) + "\n";
}

std::string report_to_json(const CheckReport& r) {
  json j;
  j["check"] = r.check;
  j["instance"] = r.instance;
  j["pass"] = r.pass();
  json lines = json::array();
  for (const auto& l : r.lines) {
    json lj;
    lj["claim"] = l.claim;
    lj["pass"] = l.pass;
    lj["skipped"] = l.skipped;
    if (!l.note.empty()) lj["note"] = l.note;
    lines.push_back(lj);
  }
  j["lines"] = lines;
  return j.dump(2) + "\n";
}

std::string report_to_table(const CheckReport& r) {
  std::ostringstream out;
  out << "== " << r.check << " :: " << r.instance << " ==\n";
  for (const auto& l : r.lines) {
    const char* tag = l.skipped ? "SKIP" : (l.pass ? "PASS" : "FAIL");
    out << "  [" << tag << "] " << l.claim;
    if (!l.note.empty()) out << "  (" << l.note << ")";
    out << "\n";
  }
  out << "  => " << (r.pass() ? (r.all_skipped() ? "SKIPPED" : "PASS") : "FAIL") << "\n";
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << content;
}

}  // namespace oq
