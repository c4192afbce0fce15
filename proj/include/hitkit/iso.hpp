#pragma once

// Clause-literal graphs, canonical keys and formula automorphisms.

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hitkit/canon.hpp"
#include "hitkit/cnf.hpp"
#include "hitkit/detail/dense.hpp"
#include "hitkit/hitting.hpp"

namespace hitkit {

/// Literal map fixed by the images of the positive literals; phi(~x) = ~phi(x).
struct SignedPermutation {
  std::map<Var, Literal> image;

  Literal operator()(Literal l) const;
  Clause operator()(const Clause& c) const;
  Formula operator()(const Formula& f) const;
  bool is_identity() const;
  /// Variable action phi*.
  Var on_var(Var v) const { return (*this)(Literal(v, true)).var(); }
};

/// Literal vertices 0..2k-1 (x_i at 2i, ~x_i at 2i+1 over the sorted var(F)),
/// clause vertices 2k..2k+m-1 in formula order.
struct ClauseLiteralGraph {
  std::vector<Var> vars;
  ColoredGraph graph{0};

  int literal_vertex(Literal l) const;
  Literal vertex_literal(int v) const;
  int clause_vertex(std::size_t i) const { return static_cast<int>(2 * vars.size() + i); }
};

ClauseLiteralGraph clause_literal_graph(const Formula& f);

class CanonicalKey {
public:
  static constexpr std::uint8_t version = 1;

  CanonicalKey() = default;
  explicit CanonicalKey(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {}
  static CanonicalKey from_hex(const std::string& hex);

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::string hex() const;

  bool operator==(const CanonicalKey&) const = default;
  std::strong_ordering operator<=>(const CanonicalKey& o) const { return bytes_ <=> o.bytes_; }

private:
  std::vector<std::uint8_t> bytes_;
};

CanonicalKey canonical_key(const Formula& f);
/// Isomorphic copy of f over variables 1..k whose shape depends only on the key.
Formula canonical_form(const Formula& f);
bool are_isomorphic(const Formula& a, const Formula& b);

struct SymmetryInfo {
  std::vector<SignedPermutation> generators;
  BigInt order = 1;
  std::vector<std::vector<Var>> variable_orbits;  // each sorted, ordered by smallest member
};

SymmetryInfo automorphisms(const Formula& f);

/// 2^n n! / |Aut(F)| with n = |var(F)|.
BigInt count_labeled_copies(const Formula& f);

/// Labeling of a formula given over dense variables 0..n-1, some possibly unused.
struct DenseLabeling {
  CanonicalKey key;
  /// Canonical position of each clause among the clauses.
  std::vector<int> clause_position;
  /// Smallest clause index in each clause's Aut orbit.
  std::vector<int> clause_orbit;
  /// Aut generators as maps on the 2n literal indices (2v, 2v+1); unused
  /// variables contribute flips and transpositions.
  std::vector<std::vector<int>> literal_generators;
};

DenseLabeling label_dense(const std::vector<detail::DenseClause>& clauses, int n);

}  // namespace hitkit
