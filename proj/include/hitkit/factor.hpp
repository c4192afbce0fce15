#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hitkit/cnf.hpp"
#include "hitkit/refutation.hpp"

namespace hitkit {

/// A subset of a host formula together with the clause it collapses to.
struct FactorWitness {
  enum class Kind { factor, pseudo_factor };
  std::vector<std::size_t> subset;  // indices into the host, ascending
  Clause basis;                     // intersection of the subset
  Kind kind = Kind::factor;
  Clause interpolant;               // equals basis for factors
};

/// Subset enumeration strategy for factor search.
enum class FactorSearch {
  automatic,  // closed sets when the host is known unsatisfiable, all subsets otherwise
  all_subsets,
  closed_sets,  // subsets S with S = {D : intersection(S) is contained in D}
};

class NotASubset : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Factor test: `sub` is equivalent to the intersection of its clauses. Hitting
/// subsets are decided by exact model counting, others by enumeration.
std::optional<FactorWitness> is_factor(const Formula& sub, const Formula& host,
                                       BruteForceLimit limit = {});

/// All non-trivial factors (1 < |S| < |F|), ordered by size then indices.
std::vector<FactorWitness> nontrivial_factors(const Formula& f,
                                              FactorSearch search = FactorSearch::automatic,
                                              BruteForceLimit limit = {});
std::optional<FactorWitness> find_nontrivial_factor(const Formula& f,
                                                    FactorSearch search = FactorSearch::automatic,
                                                    BruteForceLimit limit = {});
bool is_irreducible(const Formula& f, FactorSearch search = FactorSearch::automatic,
                    BruteForceLimit limit = {});

/// A split (S, F \ S), 1 < |S| < |F|, with a clause C over var(F) such that
/// S |= C and C together with F \ S is unsatisfiable.
std::optional<FactorWitness> find_pseudo_factor(const Formula& f, BruteForceLimit limit = {});
bool is_strongly_irreducible(const Formula& f, BruteForceLimit limit = {});

using RefuteFn = std::function<RefutationDag(const Formula&)>;

/// Turns a refutation of F[not C] into a derivation of C from F by adding C
/// back to every clause; F must be a factor with basis C.
RefutationDag lift_to_basis(const RefutationDag& restricted, const Formula& factor,
                            const Clause& basis);

/// Replaces the axiom `basis` in `outer` by the derivation `basis_derivation`.
RefutationDag splice_derivation(const RefutationDag& basis_derivation, const RefutationDag& outer,
                                const Clause& basis);

/// Refutes G by collapsing non-trivial factors recursively; irreducible pieces
/// are handed to `refute`.
RefutationDag build_decomposition_refutation(const Formula& g, const RefuteFn& refute);

}  // namespace hitkit
