#pragma once

// SAT encoding of "F has a resolution refutation with exactly s steps" and the
// hardness driver built on it.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hitkit/cnf.hpp"
#include "hitkit/dimacs.hpp"
#include "hitkit/iso.hpp"
#include "hitkit/refutation.hpp"
#include "hitkit/satgate.hpp"

namespace hitkit {

enum class Cardinality { pairwise, sequential };

struct EncodeOptions {
  /// Some axiom resolved at the first resolvent position is used again later.
  bool reuse = false;
  /// Same statement at every resolvent position, phrased as "used at another
  /// position" so that it stays sound when the other use comes first.
  bool reuse_all_positions = false;
  /// Refutation ends with {v}, {~v}, empty clause for an orbit representative v.
  bool symmetry = false;
  /// Independent neighbouring resolvents appear in increasing order of
  /// (larger premise, smaller premise).
  bool topo = false;
  /// Every position before the last is a premise of some later position.
  bool require_used = false;
  Cardinality cardinality = Cardinality::pairwise;
};

class EncodingError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A model that does not describe a valid refutation.
class DecodeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Positions are 1..s; 1..m hold the axioms in normalized order.
struct Encoding {
  Formula formula;
  int s = 0;
  EncodeOptions options;
  Cnf cnf;
  std::vector<Var> vars;  // var(F), ascending
  std::map<std::string, int> varmap;
  /// Which strengthenings were actually added (their preconditions may fail).
  bool reuse_applied = false;
  bool symmetry_applied = false;

  int m() const { return static_cast<int>(formula.size()); }
  int pos(int i, Var v) const { return pos_[slot(i, v)]; }
  int neg(int i, Var v) const { return neg_[slot(i, v)]; }
  /// Premise i holds the pivot positively / negatively for resolvent j.
  int lpos(int i, int j) const { return lpos_[pair(i, j)]; }
  int lneg(int i, int j) const { return lneg_[pair(i, j)]; }
  int arc(int i, int j) const { return arc_[pair(i, j)]; }
  int pivot(int j, Var v) const { return pivot_[slot(j, v)]; }

  nlohmann::json varmap_json() const;

  // Builders.
  int named_var(const std::string& name);
  void init_tables();

  std::size_t slot(int i, Var v) const;
  std::size_t pair(int i, int j) const {
    return static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(s) + static_cast<std::size_t>(i - 1);
  }
  std::vector<int> pos_, neg_, lpos_, lneg_, arc_, pivot_;
};

/// Requires F minimally unsatisfiable (unchecked here) and s > |F|.
Encoding encode(const Formula& f, int s, const EncodeOptions& opts = {},
                const SymmetryInfo* symmetry = nullptr);

/// Adds the axiom-reuse clauses; a no-op unless |F| > 2.
void add_reuse_constraint(Encoding& e, bool all_positions = false);
/// Adds the end-of-refutation symmetry breaking; a no-op when F has unit clauses
/// or s - 2 is an axiom position.
void add_symmetry_breaking(Encoding& e, const SymmetryInfo& sym);

/// Full s-step derivation read off a model; throws DecodeError if it is not a
/// valid refutation.
RefutationDag decode(const Encoding& e, const Assignment& model);

struct LengthAttempt {
  int s = 0;
  SolveStatus status = SolveStatus::unknown;
  double seconds = 0;
  std::uint64_t conflicts = 0;
};

enum class HardnessEngine { oracle, solver };
std::string to_string(HardnessEngine e);

struct HardnessRecord {
  CanonicalKey key;
  int h = 0;
  RefutationDag witness;  // used steps only, length h
  HardnessEngine engine = HardnessEngine::solver;
  std::vector<LengthAttempt> attempts;
  bool strongly_irreducible = false;

  double sat_time() const;    // at s = h
  double unsat_time() const;  // at s = h - 1, 0 when not encoded
};

struct HardnessOptions {
  EncodeOptions encode;
  SolverConfig solver;
  int max_s = 64;
  /// Check minimal unsatisfiability and strong irreducibility by brute force
  /// before applying the reuse constraint; when false reuse is trusted.
  bool verify_preconditions = true;
};

class HardnessError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Linear search upward from s = m + 1. Throws HardnessError if the solver gives
/// up or max_s is reached.
HardnessRecord compute_hardness(const Formula& f, const HardnessOptions& opts = {});

/// Same record from the brute-force oracle.
HardnessRecord compute_hardness_oracle(const Formula& f, std::size_t cap = 64,
                                       OracleBudget budget = {});

}  // namespace hitkit
