#include "hitkit/catalog.hpp"

#include <fstream>
#include <sstream>

#include "hitkit/dimacs.hpp"
#include "hitkit/factor.hpp"

namespace hitkit {

std::string format_catalog_line(int n, const Formula& f) {
  std::ostringstream out;
  out << n << ' ' << f.size() << " |";
  bool first = true;
  for (const auto& c : f) {
    out << (first ? " " : " ; ");
    first = false;
    bool first_lit = true;
    for (Literal l : c) {
      if (!first_lit) out << ' ';
      first_lit = false;
      out << l.dimacs();
    }
  }
  return out.str();
}

CatalogLine parse_catalog_line(const std::string& line) {
  const auto bar = line.find('|');
  if (bar == std::string::npos) throw CatalogFormatError("catalog line without '|': " + line);
  std::istringstream head(line.substr(0, bar));
  CatalogLine out;
  std::size_t m = 0;
  if (!(head >> out.n >> m)) throw CatalogFormatError("catalog line must start with 'n m': " + line);
  std::vector<std::string> pieces;
  std::string rest = line.substr(bar + 1);
  std::size_t at = 0;
  while (true) {
    auto next = rest.find(';', at);
    pieces.push_back(rest.substr(at, next == std::string::npos ? std::string::npos : next - at));
    if (next == std::string::npos) break;
    at = next + 1;
  }
  if (pieces.size() != m) throw CatalogFormatError("clause count does not match header: " + line);
  std::vector<Clause> clauses;
  for (const auto& p : pieces) {
    std::istringstream lits(p);
    std::vector<int> xs;
    std::string tok;
    while (lits >> tok) {
      try {
        std::size_t used = 0;
        int x = std::stoi(tok, &used);
        if (used != tok.size() || x == 0) throw std::invalid_argument(tok);
        xs.push_back(x);
      } catch (const std::exception&) {
        throw CatalogFormatError("bad literal '" + tok + "' in: " + line);
      }
    }
    try {
      clauses.push_back(Clause::from_dimacs(xs));
    } catch (const std::invalid_argument& e) {
      throw CatalogFormatError(std::string(e.what()) + " in: " + line);
    }
  }
  out.formula = Formula(clauses);
  if (out.formula.size() != m) throw CatalogFormatError("duplicate clauses in: " + line);
  if (out.formula.max_var() > static_cast<Var>(out.n)) throw CatalogFormatError("variable above n in: " + line);
  return out;
}

std::vector<CatalogLine> read_catalog(std::istream& in) {
  std::vector<CatalogLine> out;
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(parse_catalog_line(line));
  }
  return out;
}

std::vector<CatalogLine> read_catalog_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CatalogFormatError("cannot open " + path);
  return read_catalog(in);
}

void write_catalog(std::ostream& out, const std::vector<CatalogLine>& lines) {
  for (const auto& l : lines) out << format_catalog_line(l.n, l.formula) << '\n';
}

std::vector<CatalogLine> read_formulas_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CatalogFormatError("cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (line[first] == 'c' || line[first] == 'p') {
      Cnf cnf = read_dimacs_file(path);
      Formula f = to_formula(cnf);
      return {CatalogLine{std::max(cnf.num_vars, static_cast<int>(f.max_var())), f}};
    }
    break;
  }
  return read_catalog_file(path);
}

bool Catalog::insert(CatalogEntry entry) {
  CanonicalKey key = canonical_key(entry.formula);
  return entries_.emplace(std::move(key), std::move(entry)).second;
}

nlohmann::json generation_manifest(const GenerationTask& task, const GenerationResult& result) {
  const auto& st = result.stats;
  nlohmann::json pruned = nlohmann::json::object();
  for (std::size_t i = 1; i < prune_reason_count; ++i)
    pruned[to_string(static_cast<PruneReason>(i))] = st.pruned[i];
  return {
      {"task", {{"n", task.n}, {"m", task.m}, {"class", to_string(task.cls)},
                {"capacity_prune", task.capacity_prune}, {"jobs", task.jobs},
                {"max_nodes", task.limits.max_nodes}, {"max_seconds", task.limits.max_seconds}}},
      {"count", result.formulas.size()},
      {"complete", st.complete},
      {"stats", {{"nodes", st.nodes}, {"pruned", pruned}, {"orbit_skipped", st.orbit_skipped},
                 {"non_canonical", st.non_canonical}, {"sibling_duplicates", st.sibling_duplicates},
                 {"accepted", st.accepted}, {"leaves", st.leaves}, {"rejected_leaves", st.rejected_leaves}}},
      {"wall_seconds", st.seconds},
  };
}

std::string hardness_csv_header() { return "key,n,m,class,h,engine,sat_time,unsat_time,copies"; }

std::string format_hardness_row(const HardnessRow& r) {
  std::ostringstream out;
  out << r.key << ',' << r.n << ',' << r.m << ',' << r.cls << ',' << r.h << ',' << r.engine << ','
      << r.sat_time << ',' << r.unsat_time << ',' << r.copies;
  return out.str();
}

HardnessRow parse_hardness_row(const std::string& line) {
  std::vector<std::string> f;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) f.push_back(cell);
  if (f.size() != 9) throw CatalogFormatError("hardness row needs 9 fields: " + line);
  try {
    HardnessRow r;
    r.key = f[0];
    r.n = std::stoi(f[1]);
    r.m = std::stoi(f[2]);
    r.cls = f[3];
    r.h = std::stoi(f[4]);
    r.engine = f[5];
    r.sat_time = std::stod(f[6]);
    r.unsat_time = std::stod(f[7]);
    r.copies = BigInt(f[8]);
    return r;
  } catch (const std::exception&) {
    throw CatalogFormatError("malformed hardness row: " + line);
  }
}

std::vector<HardnessRow> read_hardness_csv(std::istream& in) {
  std::vector<HardnessRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line == hardness_csv_header()) continue;
    rows.push_back(parse_hardness_row(line));
  }
  return rows;
}

std::vector<CellStats> cell_stats(const std::vector<HardnessRow>& rows) {
  struct Acc {
    CellStats cell;
    BigInt weighted = 0, weight = 0;
  };
  std::map<std::pair<int, int>, Acc> cells;
  for (const auto& r : rows) {
    auto& a = cells[{r.n, r.m}];
    a.cell.n = r.n;
    a.cell.m = r.m;
    ++a.cell.total;
    if (r.h > a.cell.max_h) {
      a.cell.max_h = r.h;
      a.cell.attaining = 1;
    } else if (r.h == a.cell.max_h) {
      ++a.cell.attaining;
    }
    a.weighted += r.copies * r.h;
    a.weight += r.copies;
  }
  std::vector<CellStats> out;
  for (auto& [nm, a] : cells) {
    if (a.weight > 0) a.cell.weighted_mean_h = static_cast<double>(a.weighted) / static_cast<double>(a.weight);
    out.push_back(a.cell);
  }
  return out;
}

namespace {

template <typename F>
std::optional<bool> bounded(F&& fn) {
  try {
    return fn();
  } catch (const LimitExceeded&) {
    return std::nullopt;
  }
}

}  // namespace

FormulaReport analyze(const Formula& f, int n) {
  FormulaReport r;
  r.n = n;
  r.m = static_cast<int>(f.size());
  r.hitting = is_hitting(f);
  r.unsat = r.hitting ? std::optional<bool>(is_unsat_hitting(f)) : bounded([&] { return !is_satisfiable(f); });
  r.mu = bounded([&] { return is_minimally_unsatisfiable(f); });
  r.saturated = bounded([&] { return is_saturated_mu(f); });
  r.regular = is_regular(f);
  r.deficiency = deficiency(f);
  r.irreducible = bounded([&] { return is_irreducible(f); });
  r.strongly_irreducible = bounded([&] { return is_strongly_irreducible(f); });
  auto sym = automorphisms(f);
  r.aut_order = sym.order;
  r.orbits = sym.variable_orbits;
  r.key = canonical_key(f).hex();
  return r;
}

nlohmann::json to_json(const FormulaReport& r) {
  auto opt = [](const std::optional<bool>& b) -> nlohmann::json {
    if (!b) return nullptr;
    return *b;
  };
  return {{"n", r.n},
          {"m", r.m},
          {"hitting", r.hitting},
          {"unsat", opt(r.unsat)},
          {"mu", opt(r.mu)},
          {"saturated", opt(r.saturated)},
          {"regular", r.regular},
          {"deficiency", r.deficiency},
          {"irreducible", opt(r.irreducible)},
          {"strongly_irreducible", opt(r.strongly_irreducible)},
          {"aut_order", r.aut_order.str()},
          {"orbits", r.orbits},
          {"key", r.key}};
}

}  // namespace hitkit
