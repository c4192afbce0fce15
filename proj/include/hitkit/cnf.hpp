#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hitkit {

using Var = std::uint32_t;

/// A variable with a polarity. Stored in DIMACS form (v or -v).
class Literal {
public:
  constexpr Literal() = default;
  constexpr Literal(Var var, bool positive)
      : value_(positive ? static_cast<std::int32_t>(var) : -static_cast<std::int32_t>(var)) {
    if (var == 0) throw std::invalid_argument("variable ids start at 1");
  }

  static constexpr Literal from_dimacs(int value) {
    if (value == 0) throw std::invalid_argument("0 is not a literal");
    return Literal(static_cast<Var>(value < 0 ? -value : value), value > 0);
  }

  constexpr Var var() const { return static_cast<Var>(value_ < 0 ? -value_ : value_); }
  constexpr bool positive() const { return value_ > 0; }
  constexpr int dimacs() const { return value_; }
  constexpr Literal operator~() const { return from_dimacs(-value_); }

  /// Dense index: 2(v-1) for v, 2(v-1)+1 for -v.
  constexpr std::size_t index() const { return 2 * (var() - 1) + (positive() ? 0 : 1); }
  static constexpr Literal from_index(std::size_t idx) {
    return Literal(static_cast<Var>(idx / 2 + 1), idx % 2 == 0);
  }

  constexpr bool operator==(const Literal&) const = default;
  // Ordered by variable, positive before negative.
  constexpr std::strong_ordering operator<=>(const Literal& o) const {
    if (auto c = var() <=> o.var(); c != 0) return c;
    return o.positive() <=> positive();
  }

private:
  std::int32_t value_ = 1;
};

/// Non-tautological set of literals, kept sorted.
class Clause {
public:
  Clause() = default;
  Clause(std::initializer_list<int> dimacs);
  explicit Clause(std::vector<Literal> lits);
  static Clause from_dimacs(std::span<const int> dimacs);

  const std::vector<Literal>& literals() const { return lits_; }
  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  auto begin() const { return lits_.begin(); }
  auto end() const { return lits_.end(); }

  bool contains(Literal l) const;
  bool contains_var(Var v) const;
  std::vector<Var> vars() const;
  bool subset_of(const Clause& other) const;
  /// Literals l of this clause with ~l in other.
  std::vector<Literal> clashing_literals(const Clause& other) const;
  bool clashes_with(const Clause& other) const;

  Clause without(Literal l) const;
  Clause with(Literal l) const;
  Clause unite(const Clause& other) const;
  Clause intersect(const Clause& other) const;
  Clause minus(const Clause& other) const;

  std::vector<int> to_dimacs() const;
  std::string to_string() const;

  bool operator==(const Clause&) const = default;
  /// Normalized order: by size, then lexicographically by literal.
  std::strong_ordering operator<=>(const Clause& o) const;

private:
  std::vector<Literal> lits_;
};

/// A finite set of clauses, stored in normalized order with no duplicates.
class Formula {
public:
  Formula() = default;
  Formula(std::initializer_list<Clause> clauses);
  explicit Formula(std::vector<Clause> clauses, std::string name = {});

  const std::vector<Clause>& clauses() const { return clauses_; }
  std::size_t size() const { return clauses_.size(); }
  bool empty() const { return clauses_.empty(); }
  const Clause& operator[](std::size_t i) const { return clauses_[i]; }
  auto begin() const { return clauses_.begin(); }
  auto end() const { return clauses_.end(); }

  bool contains(const Clause& c) const;
  std::optional<std::size_t> index_of(const Clause& c) const;

  /// var(F), sorted ascending.
  std::vector<Var> vars() const;
  std::size_t num_vars() const { return vars().size(); }
  Var max_var() const;

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  Formula with(const Clause& c) const;
  Formula without(const Clause& c) const;
  Formula subset(std::span<const std::size_t> indices) const;

  std::string to_string() const;

  bool operator==(const Formula& o) const { return clauses_ == o.clauses_; }

private:
  std::vector<Clause> clauses_;
  std::string name_;
};

/// Partial assignment, identified with the consistent set of literals it makes true.
class Assignment {
public:
  Assignment() = default;
  Assignment(std::initializer_list<int> dimacs);
  explicit Assignment(std::vector<Literal> true_literals);

  std::optional<bool> value(Var v) const;
  std::optional<bool> value(Literal l) const;
  void set(Var v, bool value);
  const std::vector<Literal>& literals() const { return lits_; }
  std::size_t size() const { return lits_.size(); }
  bool satisfies(const Clause& c) const;

private:
  std::vector<Literal> lits_;
};

class LimitExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NotResolvable : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Variable ceiling for exhaustive enumeration over assignments.
struct BruteForceLimit {
  std::size_t max_vars = 20;
};

/// C[tau] for every clause not satisfied by tau.
Formula restrict(const Formula& f, const Assignment& tau);
/// nullopt stands for the satisfied clause.
std::optional<Clause> restrict(const Clause& c, const Assignment& tau);

bool is_satisfiable(const Formula& f, BruteForceLimit limit = {});
/// Models over total assignments to var(F).
std::uint64_t count_models_bruteforce(const Formula& f, BruteForceLimit limit = {});
bool is_minimally_unsatisfiable(const Formula& f, BruteForceLimit limit = {});

Clause resolve(const Clause& a, const Clause& b);
/// Same, but requires the clash to be on `pivot`.
Clause resolve_on(const Clause& a, const Clause& b, Var pivot);
std::optional<Var> resolution_pivot(const Clause& a, const Clause& b);

/// F |= C, checked by enumeration over var(F) and var(C).
bool entails(const Formula& f, const Clause& c, BruteForceLimit limit = {});
bool entails(const Formula& f, const Formula& g, BruteForceLimit limit = {});
bool equivalent(const Formula& f, const Formula& g, BruteForceLimit limit = {});

}  // namespace hitkit
