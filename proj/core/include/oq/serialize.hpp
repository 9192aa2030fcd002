#pragma once

// File formats. Problems, strategies, game values and check reports travel
// as JSON with every number rendered as an exact fraction string; frontiers
// export as a two-column CSV. Identical inputs serialize byte-identically.

#include <string>

#include "oq/problem.hpp"
#include "oq/solver.hpp"
#include "oq/strategy.hpp"
#include "oq/verify.hpp"

namespace oq {

std::string problem_to_json(const Problem& p);
Problem problem_from_json(const std::string& text);

// Strategies are stored with label names; parsing binds them against the
// problem's inputs/answers/outcomes.
std::string strategy_to_json(const Problem& p, const RandomizedStrategy& s);
RandomizedStrategy strategy_from_json(const Problem& p, const std::string& text);

// Header "epsilon,expected_cost", one vertex per row. decimal_digits < 0
// keeps exact fractions, otherwise values are rendered with that many
// fractional digits.
std::string frontier_to_csv(const FrontierCurve& c, int decimal_digits = -1);

std::string game_value_to_json(const Problem& p, const GameValue& gv);
std::string evaluation_to_json(const Problem& p, const Evaluation& ev);

std::string report_to_json(const CheckReport& r);
std::string report_to_table(const CheckReport& r);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace oq
