#pragma once

#include <string>

#include "hitkit/cnf.hpp"
#include "hitkit/dimacs.hpp"
#include "oracles.hpp"

namespace testing_support {

inline oracle::OFormula to_oracle(const hitkit::Formula& f) {
  oracle::OFormula out;
  for (const auto& c : f) out.push_back(c.to_dimacs());
  return out;
}

inline hitkit::Formula from_oracle(const oracle::OFormula& f) {
  std::vector<hitkit::Clause> cs;
  for (const auto& c : f) cs.push_back(hitkit::Clause::from_dimacs(c));
  return hitkit::Formula(cs);
}

inline std::string fixture(const std::string& name) { return std::string(HITKIT_FIXTURES) + "/" + name; }

// Formulas used across several suites.

/// Deficiency-two MU formula over 1..k: the implication cycle plus the two
/// all-positive and all-negative clauses (k + 2 clauses).
inline hitkit::Formula mutwo(int k) {
  std::vector<hitkit::Clause> cs;
  for (int i = 1; i < k; ++i) cs.push_back(hitkit::Clause{-i, i + 1});
  cs.push_back(hitkit::Clause{-k, 1});
  std::vector<int> all_pos, all_neg;
  for (int i = 1; i <= k; ++i) all_pos.push_back(i), all_neg.push_back(-i);
  cs.push_back(hitkit::Clause::from_dimacs(all_pos));
  cs.push_back(hitkit::Clause::from_dimacs(all_neg));
  return hitkit::Formula(cs);
}

inline hitkit::Formula fixture_formula(const std::string& name) {
  return hitkit::read_formula_dimacs_file(fixture(name));
}

}  // namespace testing_support
