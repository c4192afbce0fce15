#include <gtest/gtest.h>

#include <random>

#include "hitkit/encode.hpp"
#include "hitkit/hitting.hpp"
#include "support.hpp"

using namespace hitkit;
using testing_support::from_oracle;

namespace {

SolveStatus status_at(const Formula& f, int s, const EncodeOptions& opts = {}) {
  return solve_builtin(encode(f, s, opts).cnf).status;
}

Formula square() { return Formula{Clause{1, 2}, Clause{1, -2}, Clause{-1, 2}, Clause{-1, -2}}; }

std::vector<EncodeOptions> all_flag_sets() {
  std::vector<EncodeOptions> out;
  for (int mask = 0; mask < 32; ++mask) {
    EncodeOptions o;
    o.reuse = mask & 1;
    o.symmetry = mask & 2;
    o.topo = mask & 4;
    o.require_used = mask & 8;
    o.cardinality = mask & 16 ? Cardinality::sequential : Cardinality::pairwise;
    out.push_back(o);
  }
  return out;
}

// Random MU formulas: unsatisfiable hitting formulas over three variables.
std::vector<Formula> small_mu_formulas() {
  std::mt19937_64 rng(13);
  std::vector<Formula> out = {Formula{Clause{1}, Clause{-1}}, Formula{Clause{1, 2}, Clause{-1}, Clause{-2}},
                              square(), testing_support::mutwo(3)};
  for (int i = 0; i < 12; ++i) {
    Formula f = from_oracle(oracle::random_unsat_hitting(3, 2 + static_cast<int>(rng() % 4), rng));
    if (f.size() > 1) out.push_back(f);
  }
  return out;
}

}  // namespace

TEST(Encode, RejectsBadArguments) {
  Formula f{Clause{1}, Clause{-1}};
  EXPECT_THROW(encode(f, 2), EncodingError);
  EXPECT_THROW(encode(Formula{Clause{}}, 3), EncodingError);
  EXPECT_NO_THROW(encode(f, 3));
}

TEST(Encode, VariableMapNamesEveryVariable) {
  Encoding e = encode(square(), 7);
  EXPECT_EQ(static_cast<int>(e.varmap.size()), e.cnf.num_vars);
  EXPECT_EQ(e.varmap.at("pos(1,1)"), e.pos(1, 1));
  EXPECT_EQ(e.varmap.at("arc(2,5)"), e.arc(2, 5));
  auto j = e.varmap_json();
  EXPECT_EQ(j["pivot(7,2)"].get<int>(), e.pivot(7, 2));
}

TEST(Encode, ExactlySIsMonotone) {
  Formula f = testing_support::mutwo(3);
  for (int s = 6; s <= 12; ++s) EXPECT_EQ(status_at(f, s), s >= 10 ? SolveStatus::sat : SolveStatus::unsat) << s;
  Formula g = square();
  for (int s = 5; s <= 9; ++s) EXPECT_EQ(status_at(g, s), s >= 7 ? SolveStatus::sat : SolveStatus::unsat) << s;
}

TEST(Encode, DecodedModelsAreValidRefutations) {
  Formula f = testing_support::mutwo(3);
  for (int s : {10, 11, 13}) {
    Encoding e = encode(f, s);
    auto v = solve_builtin(e.cnf);
    ASSERT_EQ(v.status, SolveStatus::sat);
    RefutationDag p = decode(e, *v.model);
    EXPECT_EQ(static_cast<int>(p.length()), s);
    EXPECT_TRUE(validate_refutation(f, p));
    // used steps form a refutation of their own, never shorter than h
    EXPECT_GE(p.prune_unused().length(), 10u);
    EXPECT_TRUE(validate_refutation(f, p.prune_unused()));
  }
}

TEST(Encode, TamperedModelsAreRejected) {
  Formula f = square();
  Encoding e = encode(f, 7);
  auto v = solve_builtin(e.cnf);
  ASSERT_EQ(v.status, SolveStatus::sat);
  auto flip = [&](int var) {
    std::vector<Literal> lits = v.model->literals();
    for (auto& l : lits)
      if (static_cast<int>(l.var()) == var) l = ~l;
    return Assignment(lits);
  };
  EXPECT_NO_THROW(decode(e, *v.model));
  EXPECT_THROW(decode(e, flip(e.pos(1, 1))), DecodeError);
  EXPECT_THROW(decode(e, flip(e.neg(1, 1))), DecodeError);
  // the last clause gains a literal
  EXPECT_THROW(decode(e, flip(e.pos(7, 2))), DecodeError);
  // the last position loses its positive premise
  for (int i = 1; i < 7; ++i)
    if (v.model->value(static_cast<Var>(e.lpos(i, 7))) == std::optional<bool>(true))
      EXPECT_THROW(decode(e, flip(e.lpos(i, 7))), DecodeError);
  std::vector<Literal> partial(v.model->literals().begin(), v.model->literals().begin() + 3);
  EXPECT_THROW(decode(e, Assignment(partial)), DecodeError);
}

TEST(Encode, HardnessIsInvariantUnderFlags) {
  for (const Formula& f : small_mu_formulas()) {
    int expect = static_cast<int>(shortest_refutation_bruteforce(f, 30)->h);
    for (const auto& o : all_flag_sets()) {
      HardnessOptions opts;
      opts.encode = o;
      auto rec = compute_hardness(f, opts);
      EXPECT_EQ(rec.h, expect) << f.to_string() << " reuse=" << o.reuse << " sym=" << o.symmetry
                               << " topo=" << o.topo << " used=" << o.require_used;
      EXPECT_TRUE(validate_refutation(f, rec.witness));
      EXPECT_EQ(static_cast<int>(rec.witness.length()), rec.h);
    }
    HardnessOptions all;
    all.encode.reuse_all_positions = true;
    EXPECT_EQ(compute_hardness(f, all).h, expect);
  }
}

TEST(Encode, SymmetryWitnessEndsWithUnitPair) {
  Formula f = testing_support::mutwo(3);
  SymmetryInfo sym = automorphisms(f);
  EncodeOptions o;
  o.symmetry = true;
  Encoding e = encode(f, 10, o, &sym);
  ASSERT_TRUE(e.symmetry_applied);
  auto v = solve_builtin(e.cnf);
  ASSERT_EQ(v.status, SolveStatus::sat);
  RefutationDag p = decode(e, *v.model);
  const auto& steps = p.steps();
  Clause a = steps[7].clause, b = steps[8].clause;
  ASSERT_EQ(a.size(), 1u);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_TRUE(a.literals()[0].positive());
  EXPECT_EQ(b.literals()[0], ~a.literals()[0]);
  Var rep = a.literals()[0].var();
  bool is_rep = false;
  for (const auto& orbit : sym.variable_orbits) is_rep = is_rep || orbit.front() == rep;
  EXPECT_TRUE(is_rep);
  EXPECT_TRUE(steps[9].clause.empty());
}

TEST(Encode, SymmetrySkippedWhenPreconditionsFail) {
  EncodeOptions o;
  o.symmetry = true;
  // unit clauses
  Formula f{Clause{1, 2}, Clause{-1}, Clause{-2}};
  EXPECT_FALSE(encode(f, 5, o).symmetry_applied);
  // s - 2 is an axiom position
  EXPECT_FALSE(encode(square(), 5, o).symmetry_applied);
  EXPECT_TRUE(encode(square(), 7, o).symmetry_applied);
}

TEST(Encode, ReuseNeedsMoreThanTwoClauses) {
  EncodeOptions o;
  o.reuse = true;
  EXPECT_FALSE(encode(Formula{Clause{1}, Clause{-1}}, 3, o).reuse_applied);
  EXPECT_TRUE(encode(square(), 7, o).reuse_applied);
}

TEST(Hardness, DriverBehaviour) {
  EXPECT_EQ(compute_hardness(Formula{Clause{}}).h, 1);
  EXPECT_THROW(compute_hardness(Formula{}), HardnessError);
  EXPECT_THROW(compute_hardness(Formula{Clause{}, Clause{1}}), HardnessError);
  EXPECT_THROW(compute_hardness(Formula{Clause{1}, Clause{-1}, Clause{1, 2}}), HardnessError);
  HardnessOptions capped;
  capped.max_s = 8;
  EXPECT_THROW(compute_hardness(testing_support::mutwo(3), capped), HardnessError);
  auto rec = compute_hardness(testing_support::mutwo(3));
  EXPECT_EQ(rec.h, 10);
  EXPECT_EQ(rec.attempts.size(), 5u);
  EXPECT_EQ(rec.attempts.back().status, SolveStatus::sat);
  EXPECT_EQ(rec.key, canonical_key(testing_support::mutwo(3)));
  EXPECT_FALSE(is_read_once(rec.witness));
}

TEST(Hardness, ReuseOnlyForStronglyIrreducible) {
  HardnessOptions opts;
  opts.encode.reuse = true;
  Formula f{Clause{1, 2}, Clause{-1}, Clause{-2}};
  auto rec = compute_hardness(f, opts);
  EXPECT_FALSE(rec.strongly_irreducible);
  EXPECT_EQ(rec.h, 5);
  EXPECT_TRUE(compute_hardness(testing_support::mutwo(3), opts).strongly_irreducible);
}

TEST(Hardness, OracleRecord) {
  auto rec = compute_hardness_oracle(square());
  EXPECT_EQ(rec.h, 7);
  EXPECT_EQ(rec.engine, HardnessEngine::oracle);
  EXPECT_EQ(to_string(rec.engine), "oracle");
  EXPECT_EQ(compute_hardness_oracle(Formula{Clause{}}).h, 1);
}

TEST(Hardness, MutwoFiveIsTen) {
  HardnessOptions opts;
  opts.encode.reuse = opts.encode.symmetry = true;
  auto rec = compute_hardness(testing_support::fixture_formula("mutwo5.cnf"), opts);
  EXPECT_EQ(rec.h, 10);
}
