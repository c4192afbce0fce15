#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hitkit/cnf.hpp"

namespace hitkit {

/// One line of a resolution derivation. Premise indices are 0-based in memory.
struct ProofStep {
  enum class Kind { axiom, resolvent };
  Kind kind = Kind::axiom;
  Clause clause;
  std::size_t left = 0;
  std::size_t right = 0;
  Var pivot = 0;

  static ProofStep axiom(Clause c) { return {Kind::axiom, std::move(c), 0, 0, 0}; }
  static ProofStep resolvent(std::size_t left, std::size_t right, Var pivot, Clause c) {
    return {Kind::resolvent, std::move(c), left, right, pivot};
  }
  bool is_axiom() const { return kind == Kind::axiom; }
  bool operator==(const ProofStep&) const = default;
};

/// Resolution derivation with a fixed history per step; its length counts axioms too.
class RefutationDag {
public:
  RefutationDag() = default;
  explicit RefutationDag(std::vector<ProofStep> steps) : steps_(std::move(steps)) {}

  const std::vector<ProofStep>& steps() const { return steps_; }
  std::size_t length() const { return steps_.size(); }
  const ProofStep& operator[](std::size_t i) const { return steps_[i]; }
  const ProofStep& back() const { return steps_.back(); }

  std::size_t add_axiom(Clause c);
  std::size_t add_resolvent(std::size_t left, std::size_t right);
  std::size_t add_resolvent(std::size_t left, std::size_t right, Var pivot, Clause c);

  /// Number of later steps using step i as a premise.
  std::vector<std::size_t> out_degrees() const;
  std::vector<Clause> axioms() const;
  std::size_t axiom_count() const;
  /// Keeps only the ancestors of the last step, preserving order.
  RefutationDag prune_unused() const;

  bool operator==(const RefutationDag&) const = default;

private:
  std::vector<ProofStep> steps_;
};

struct ValidationResult {
  bool valid = false;
  std::optional<std::size_t> bad_step;  // 0-based
  std::string message;
  explicit operator bool() const { return valid; }
};

/// Checks axioms against F, each resolvent against its premises and pivot, and
/// that the last clause is empty.
ValidationResult validate_refutation(const Formula& f, const RefutationDag& proof);
/// Same checks without requiring the empty clause at the end; `target`, if given,
/// must equal the last clause.
ValidationResult validate_derivation(const Formula& f, const RefutationDag& proof,
                                     const std::optional<Clause>& target = std::nullopt);

bool is_read_once(const RefutationDag& proof);

// Text format: "A <lits> 0" for axioms, "R <i> <j> <pivot> <lits> 0" for
// resolvents, with 1-based step indices. '#' and 'c' lines are comments.
class ProofFormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};
RefutationDag read_proof(std::istream& in);
RefutationDag read_proof_file(const std::string& path);
void write_proof(std::ostream& out, const RefutationDag& proof);
std::string to_proof_string(const RefutationDag& proof);

struct ShortestRefutation {
  std::size_t h = 0;
  RefutationDag proof;
  std::uint64_t states = 0;
};

struct OracleBudget {
  std::uint64_t max_states = 50'000'000;
};

/// Exact h(F) by iterative deepening over sets of derived clauses; nullopt if
/// h(F) > cap. Throws LimitExceeded when the state budget runs out.
std::optional<ShortestRefutation> shortest_refutation_bruteforce(const Formula& f,
                                                                 std::size_t cap,
                                                                 OracleBudget budget = {});

}  // namespace hitkit
