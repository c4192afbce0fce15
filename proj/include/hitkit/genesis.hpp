#pragma once

// Isomorph-free generation of unsatisfiable hitting formulas by canonical
// augmentation, clause by clause in nondecreasing size order.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hitkit/cnf.hpp"
#include "hitkit/detail/dense.hpp"
#include "hitkit/iso.hpp"

namespace hitkit {

enum class FormulaClass { uh, ruh, iuh };

std::string to_string(FormulaClass c);
FormulaClass parse_formula_class(const std::string& s);

struct GenerationLimits {
  std::uint64_t max_nodes = 0;  // 0 = unlimited
  double max_seconds = 0;       // 0 = unlimited
};

struct GenerationTask {
  int n = 0;
  int m = 1;
  FormulaClass cls = FormulaClass::iuh;
  GenerationLimits limits;
  /// Extra prune: discard nodes whose remaining clauses cannot supply the
  /// occurrences still missing for regularity (RUH/IUH) or for using all n variables.
  bool capacity_prune = false;
  unsigned jobs = 1;

  void validate() const;
};

enum class PruneReason { keep, too_many_models, too_few_models, not_hitting, has_factor, capacity };
inline constexpr std::size_t prune_reason_count = 6;
std::string to_string(PruneReason r);

/// Node of the search tree: clauses over dense variables 0..n-1, sorted by size,
/// the last one being the clause just added.
struct PartialFormula {
  std::vector<detail::DenseClause> clauses;
};

/// Pruning rules in order: model surplus, model shortage, last clause not hitting
/// the others, factor containing the last clause (IUH only), then the optional
/// capacity check.
PruneReason prune(const PartialFormula& node, const GenerationTask& task);

struct GenerationStats {
  std::uint64_t nodes = 0;  // candidate children examined
  std::array<std::uint64_t, prune_reason_count> pruned{};
  std::uint64_t orbit_skipped = 0;
  std::uint64_t non_canonical = 0;
  std::uint64_t sibling_duplicates = 0;
  std::uint64_t accepted = 0;
  std::uint64_t leaves = 0;
  std::uint64_t rejected_leaves = 0;  // wrong variable count, irregular
  bool complete = true;
  double seconds = 0;

  GenerationStats& operator+=(const GenerationStats& o);
};

struct GeneratedFormula {
  Formula formula;
  CanonicalKey key;
};

struct GenerationResult {
  std::vector<GeneratedFormula> formulas;  // sorted by key
  GenerationStats stats;
};

/// Canonical-augmentation generator.
GenerationResult generate(const GenerationTask& task);

/// Slow cross-check: builds all hitting clause sets level by level with only the
/// hitting prune, keeping one per canonical key, then filters the last level
/// with the standalone predicates.
GenerationResult generate_crosscheck(const GenerationTask& task);

/// Whether f is in the class with exactly n variables and m clauses, decided with
/// the general-purpose predicates.
bool in_class(const Formula& f, FormulaClass cls, int n, int m);

}  // namespace hitkit
