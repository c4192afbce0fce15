#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "hitkit/cnf.hpp"

namespace hitkit {

/// Plain CNF instance in DIMACS numbering. Used for encodings, where clause
/// order and duplicates are irrelevant and normalization would only cost time.
struct Cnf {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;

  int new_var() { return ++num_vars; }
  void add(std::vector<int> clause) { clauses.push_back(std::move(clause)); }
  void add(std::initializer_list<int> clause) { clauses.emplace_back(clause); }
};

class DimacsError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

Cnf read_dimacs(std::istream& in);
Cnf read_dimacs_file(const std::string& path);
void write_dimacs(std::ostream& out, const Cnf& cnf, const std::vector<std::string>& comments = {});

/// Formula <-> DIMACS. The header variable count is max(declared, max_var).
Formula read_formula_dimacs(std::istream& in);
Formula read_formula_dimacs_file(const std::string& path);
void write_formula_dimacs(std::ostream& out, const Formula& f, Var declared_vars = 0);
std::string to_dimacs_string(const Formula& f, Var declared_vars = 0);

Cnf to_cnf(const Formula& f);
Formula to_formula(const Cnf& cnf);

}  // namespace hitkit
