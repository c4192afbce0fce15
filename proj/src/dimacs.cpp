#include "hitkit/dimacs.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace hitkit {

Cnf read_dimacs(std::istream& in) {
  Cnf cnf;
  bool header = false;
  long declared_clauses = 0;
  std::vector<int> current;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "c" || tok[0] == 'c' || tok == "%") continue;
    if (tok == "p") {
      std::string fmt;
      if (header || !(ls >> fmt >> cnf.num_vars >> declared_clauses) || fmt != "cnf")
        throw DimacsError("line " + std::to_string(lineno) + ": bad problem line");
      header = true;
      continue;
    }
    if (!header) throw DimacsError("line " + std::to_string(lineno) + ": clause before header");
    ls.clear();
    ls.str(line);
    long x;
    while (ls >> x) {
      if (x == 0) {
        cnf.clauses.push_back(std::move(current));
        current.clear();
      } else {
        if (std::abs(x) > cnf.num_vars)
          throw DimacsError("line " + std::to_string(lineno) + ": literal " + std::to_string(x) +
                            " exceeds declared variable count");
        current.push_back(static_cast<int>(x));
      }
    }
    if (!ls.eof()) throw DimacsError("line " + std::to_string(lineno) + ": non-integer token");
  }
  if (!header) throw DimacsError("missing 'p cnf' header");
  if (!current.empty()) throw DimacsError("last clause not terminated by 0");
  if (static_cast<long>(cnf.clauses.size()) != declared_clauses)
    throw DimacsError("header declares " + std::to_string(declared_clauses) + " clauses, found " +
                      std::to_string(cnf.clauses.size()));
  return cnf;
}

Cnf read_dimacs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DimacsError("cannot open " + path);
  return read_dimacs(in);
}

void write_dimacs(std::ostream& out, const Cnf& cnf, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "c " << c << '\n';
  out << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const auto& clause : cnf.clauses) {
    for (int x : clause) out << x << ' ';
    out << "0\n";
  }
}

Cnf to_cnf(const Formula& f) {
  Cnf cnf;
  cnf.num_vars = static_cast<int>(f.max_var());
  for (const auto& c : f) cnf.clauses.push_back(c.to_dimacs());
  return cnf;
}

Formula to_formula(const Cnf& cnf) {
  std::vector<Clause> cs;
  for (const auto& c : cnf.clauses) cs.push_back(Clause::from_dimacs(c));
  if (cs.size() != Formula(cs).size()) throw DimacsError("duplicate clauses in formula file");
  return Formula(std::move(cs));
}

Formula read_formula_dimacs(std::istream& in) {
  try {
    return to_formula(read_dimacs(in));
  } catch (const std::invalid_argument& e) {
    throw DimacsError(e.what());
  }
}

Formula read_formula_dimacs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DimacsError("cannot open " + path);
  return read_formula_dimacs(in);
}

void write_formula_dimacs(std::ostream& out, const Formula& f, Var declared_vars) {
  Cnf cnf = to_cnf(f);
  cnf.num_vars = std::max<int>(cnf.num_vars, static_cast<int>(declared_vars));
  std::vector<std::string> comments;
  if (!f.name().empty()) comments.push_back(f.name());
  write_dimacs(out, cnf, comments);
}

std::string to_dimacs_string(const Formula& f, Var declared_vars) {
  std::ostringstream os;
  write_formula_dimacs(os, f, declared_vars);
  return os.str();
}

}  // namespace hitkit
