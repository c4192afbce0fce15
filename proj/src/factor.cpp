#include "hitkit/factor.hpp"

#include <algorithm>
#include <bit>

#include "hitkit/detail/dense.hpp"
#include "hitkit/hitting.hpp"

namespace hitkit {

namespace {

Clause intersection_of(const Formula& f, std::uint64_t mask) {
  std::optional<Clause> acc;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!((mask >> i) & 1)) continue;
    acc = acc ? acc->intersect(f[i]) : f[i];
  }
  return acc.value_or(Clause{});
}

std::vector<std::size_t> indices_of(std::uint64_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; mask; ++i, mask >>= 1)
    if (mask & 1) out.push_back(i);
  return out;
}

// Decides whether the clauses in `mask` form a factor of f.
class FactorTester {
public:
  FactorTester(const Formula& f, BruteForceLimit limit)
      : f_(f), limit_(limit), hitting_(is_hitting(f)) {}

  std::optional<Clause> basis_if_factor(std::uint64_t mask) const {
    Clause basis = intersection_of(f_, mask);
    if (hitting_) {
      // S is equivalent to its basis C iff sum 2^-|D| = 2^-|C|.
      std::size_t w = basis.size();
      for (std::size_t i = 0; i < f_.size(); ++i)
        if ((mask >> i) & 1) w = std::max(w, f_[i].size());
      BigInt sum = 0;
      for (std::size_t i = 0; i < f_.size(); ++i)
        if ((mask >> i) & 1) sum += BigInt(1) << (w - f_[i].size());
      if (sum == (BigInt(1) << (w - basis.size()))) return basis;
      return std::nullopt;
    }
    std::vector<Clause> residual;
    for (std::size_t i = 0; i < f_.size(); ++i)
      if ((mask >> i) & 1) residual.push_back(f_[i].minus(basis));
    if (is_satisfiable(Formula(std::move(residual)), limit_)) return std::nullopt;
    return basis;
  }

private:
  const Formula& f_;
  BruteForceLimit limit_;
  bool hitting_;
};

// Closed-set enumeration in the style of LCM: every S with S = closure(S) is
// produced exactly once, by extending prefix-preserving closures.
class ClosedSets {
public:
  explicit ClosedSets(const Formula& f) : f_(f) {}

  template <class Visit>
  void run(Visit&& visit) {
    walk(0, -1, visit);
  }

private:
  std::uint64_t closure(std::uint64_t mask) const {
    Clause c = intersection_of(f_, mask);
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < f_.size(); ++i)
      if (c.subset_of(f_[i])) out |= std::uint64_t{1} << i;
    return out;
  }

  template <class Visit>
  void walk(std::uint64_t set, int core, Visit& visit) {
    for (std::size_t j = static_cast<std::size_t>(core + 1); j < f_.size(); ++j) {
      std::uint64_t bit = std::uint64_t{1} << j;
      if (set & bit) continue;
      std::uint64_t next = closure(set | bit);
      std::uint64_t below = bit - 1;
      if ((next & below) != (set & below)) continue;
      visit(next);
      walk(next, static_cast<int>(j), visit);
    }
  }

  const Formula& f_;
};

bool known_unsat(const Formula& f, BruteForceLimit limit) {
  if (is_hitting(f)) return clause_weight(f).is_one();
  if (f.num_vars() > limit.max_vars) return false;
  return !is_satisfiable(f, limit);
}

}  // namespace

std::optional<FactorWitness> is_factor(const Formula& sub, const Formula& host, BruteForceLimit limit) {
  std::vector<std::size_t> idx;
  for (const auto& c : sub) {
    auto i = host.index_of(c);
    if (!i) throw NotASubset("clause " + c.to_string() + " is not in the host formula");
    idx.push_back(*i);
  }
  std::sort(idx.begin(), idx.end());
  if (sub.empty()) return std::nullopt;
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < sub.size(); ++i) mask |= std::uint64_t{1} << i;
  FactorTester tester(sub, limit);
  auto basis = tester.basis_if_factor(mask);
  if (!basis) return std::nullopt;
  return FactorWitness{idx, *basis, FactorWitness::Kind::factor, *basis};
}

std::vector<FactorWitness> nontrivial_factors(const Formula& f, FactorSearch search,
                                              BruteForceLimit limit) {
  const std::size_t m = f.size();
  if (m > 62) throw LimitExceeded("factor search supports at most 62 clauses");
  std::vector<FactorWitness> out;
  if (m < 3) return out;
  FactorTester tester(f, limit);
  auto consider = [&](std::uint64_t mask) {
    int k = std::popcount(mask);
    if (k < 2 || static_cast<std::size_t>(k) >= m) return;
    if (auto basis = tester.basis_if_factor(mask))
      out.push_back(FactorWitness{indices_of(mask), *basis, FactorWitness::Kind::factor, *basis});
  };
  if (search == FactorSearch::automatic)
    search = known_unsat(f, limit) ? FactorSearch::closed_sets : FactorSearch::all_subsets;
  if (search == FactorSearch::closed_sets) {
    ClosedSets(f).run(consider);
  } else {
    if (m > 25) throw LimitExceeded("full subset enumeration supports at most 25 clauses");
    const std::uint64_t full = (std::uint64_t{1} << m) - 1;
    for (std::uint64_t mask = 1; mask < full; ++mask) consider(mask);
  }
  std::sort(out.begin(), out.end(), [](const FactorWitness& a, const FactorWitness& b) {
    if (a.subset.size() != b.subset.size()) return a.subset.size() < b.subset.size();
    return a.subset < b.subset;
  });
  return out;
}

std::optional<FactorWitness> find_nontrivial_factor(const Formula& f, FactorSearch search,
                                                    BruteForceLimit limit) {
  auto all = nontrivial_factors(f, search, limit);
  if (all.empty()) return std::nullopt;
  return all.front();
}

bool is_irreducible(const Formula& f, FactorSearch search, BruteForceLimit limit) {
  return !find_nontrivial_factor(f, search, limit).has_value();
}

// Interpolants only need variables of F: if C uses y outside var(F) and works,
// then C without y works too (S |= C and S does not mention y give S |= C - y;
// C - y implies C, so C - y with F \ S stays unsatisfiable).
std::optional<FactorWitness> find_pseudo_factor(const Formula& f, BruteForceLimit limit) {
  const std::size_t m = f.size();
  if (m < 3) return std::nullopt;
  if (m > 25) throw LimitExceeded("split enumeration supports at most 25 clauses");
  auto index = detail::DenseIndex::of(f);
  if (index.size() > limit.max_vars) throw LimitExceeded("too many variables for split enumeration");
  const std::size_t k = index.size();
  std::vector<detail::ModelSet> clause_models;
  for (const auto& c : f) clause_models.push_back(detail::ModelSet::of_clause(index.dense(c), k));

  const std::uint64_t full = (std::uint64_t{1} << m) - 1;
  std::vector<std::uint64_t> order;
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    int s = std::popcount(mask);
    if (s >= 2 && static_cast<std::size_t>(s) < m) order.push_back(mask);
  }
  std::stable_sort(order.begin(), order.end(),
                   [](std::uint64_t a, std::uint64_t b) { return std::popcount(a) < std::popcount(b); });
  for (std::uint64_t mask : order) {
    detail::ModelSet inside(k, true), outside(k, true);
    for (std::size_t i = 0; i < m; ++i) ((mask >> i) & 1 ? inside : outside) &= clause_models[i];
    // Need a clause C whose falsifying subcube Q contains every model of F \ S
    // and no model of S. The smallest candidate Q is the bounding cube.
    std::optional<detail::DenseClause> interpolant;
    if (outside.empty()) {
      if (inside.empty()) {
        interpolant = detail::DenseClause{};
      } else {
        const std::uint64_t n = std::uint64_t{1} << k;
        for (std::uint64_t a = 0; a < n; ++a)
          if (!inside.test(a)) {
            const std::uint64_t all = k >= 64 ? ~std::uint64_t{0} : n - 1;
            interpolant = detail::DenseClause{~a & all, a};
            break;
          }
      }
    } else {
      auto cube = outside.bounding_cube();
      // C is falsified exactly on the cube: literal v for fixed-false, -v for fixed-true.
      detail::DenseClause c{cube.neg, cube.pos};
      if (inside.subset_of(detail::ModelSet::of_clause(c, k))) interpolant = c;
    }
    if (!interpolant) continue;
    Clause basis = intersection_of(f, mask);
    return FactorWitness{indices_of(mask), basis, FactorWitness::Kind::pseudo_factor,
                         index.sparse(*interpolant)};
  }
  return std::nullopt;
}

bool is_strongly_irreducible(const Formula& f, BruteForceLimit limit) {
  return !find_pseudo_factor(f, limit).has_value();
}

// ---- decomposition refutation ---------------------------------------------

RefutationDag lift_to_basis(const RefutationDag& restricted, const Formula& factor,
                            const Clause& basis) {
  std::vector<ProofStep> steps;
  for (const auto& s : restricted.steps()) {
    ProofStep t = s;
    t.clause = s.clause.unite(basis);
    if (t.is_axiom() && !factor.contains(t.clause))
      throw std::logic_error("lifted axiom " + t.clause.to_string() + " is not in the factor");
    steps.push_back(std::move(t));
  }
  return RefutationDag(std::move(steps));
}

RefutationDag splice_derivation(const RefutationDag& basis_derivation, const RefutationDag& outer,
                                const Clause& basis) {
  std::vector<ProofStep> steps = basis_derivation.steps();
  const std::size_t basis_step = steps.size() - 1;
  std::vector<std::size_t> remap(outer.length(), 0);
  for (std::size_t i = 0; i < outer.length(); ++i) {
    const ProofStep& s = outer[i];
    if (s.is_axiom() && s.clause == basis) {
      remap[i] = basis_step;
      continue;
    }
    ProofStep t = s;
    if (!t.is_axiom()) {
      t.left = remap[t.left];
      t.right = remap[t.right];
    }
    remap[i] = steps.size();
    steps.push_back(std::move(t));
  }
  return RefutationDag(std::move(steps));
}

RefutationDag build_decomposition_refutation(const Formula& g, const RefuteFn& refute) {
  auto witness = find_nontrivial_factor(g);
  if (!witness) return refute(g);

  Formula factor = g.subset(witness->subset);
  const Clause& basis = witness->basis;
  std::vector<Literal> falsify;
  for (Literal l : basis) falsify.push_back(~l);
  Formula inner = restrict(factor, Assignment(falsify));

  std::vector<Clause> rest;
  for (std::size_t i = 0, j = 0; i < g.size(); ++i) {
    if (j < witness->subset.size() && witness->subset[j] == i) {
      ++j;
      continue;
    }
    rest.push_back(g[i]);
  }
  rest.push_back(basis);
  Formula outer(std::move(rest));

  RefutationDag derivation = lift_to_basis(build_decomposition_refutation(inner, refute), factor, basis);
  RefutationDag outer_proof = build_decomposition_refutation(outer, refute);
  return splice_derivation(derivation, outer_proof, basis);
}

}  // namespace hitkit
