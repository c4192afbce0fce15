#pragma once

// Catalog files, hardness CSV, per-cell statistics and formula reports.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hitkit/encode.hpp"
#include "hitkit/genesis.hpp"
#include "hitkit/hitting.hpp"
#include "hitkit/iso.hpp"

namespace hitkit {

class CatalogFormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One catalog line: "n m | c1 ; c2 ; ... ; cm", literals as signed integers.
struct CatalogLine {
  int n = 0;
  Formula formula;
};

std::string format_catalog_line(int n, const Formula& f);
CatalogLine parse_catalog_line(const std::string& line);
/// Skips blank lines and lines starting with '#'.
std::vector<CatalogLine> read_catalog(std::istream& in);
std::vector<CatalogLine> read_catalog_file(const std::string& path);
void write_catalog(std::ostream& out, const std::vector<CatalogLine>& lines);

/// Reads a catalog, or a single DIMACS formula if the file looks like one.
std::vector<CatalogLine> read_formulas_file(const std::string& path);

struct CatalogEntry {
  int n = 0;
  Formula formula;
  std::optional<FormulaClass> cls;
  std::optional<HardnessRecord> hardness;
  BigInt copies = 0;
};

/// Entries keyed by canonical key; insertion rejects a second formula of the same class.
class Catalog {
public:
  bool insert(CatalogEntry entry);  // false if the key is already present
  const std::map<CanonicalKey, CatalogEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  nlohmann::json manifest;

private:
  std::map<CanonicalKey, CatalogEntry> entries_;
};

nlohmann::json generation_manifest(const GenerationTask& task, const GenerationResult& result);

/// One row of the hardness CSV.
struct HardnessRow {
  std::string key;
  int n = 0;
  int m = 0;
  std::string cls;
  int h = 0;
  std::string engine;
  double sat_time = 0;
  double unsat_time = 0;
  BigInt copies = 0;
};

std::string hardness_csv_header();
std::string format_hardness_row(const HardnessRow& row);
HardnessRow parse_hardness_row(const std::string& line);
std::vector<HardnessRow> read_hardness_csv(std::istream& in);

/// Table cell: max h, how many reach it, how many formulas, copy-weighted mean h.
struct CellStats {
  int n = 0;
  int m = 0;
  int max_h = 0;
  std::size_t attaining = 0;
  std::size_t total = 0;
  double weighted_mean_h = 0;
};

std::vector<CellStats> cell_stats(const std::vector<HardnessRow>& rows);

struct FormulaReport {
  int n = 0;
  int m = 0;
  bool hitting = false;
  std::optional<bool> unsat;  // missing when too large to decide
  std::optional<bool> mu;
  std::optional<bool> saturated;
  bool regular = false;
  long deficiency = 0;
  std::optional<bool> irreducible;
  std::optional<bool> strongly_irreducible;
  BigInt aut_order = 1;
  std::vector<std::vector<Var>> orbits;
  std::string key;
};

FormulaReport analyze(const Formula& f, int n);
nlohmann::json to_json(const FormulaReport& r);

}  // namespace hitkit
