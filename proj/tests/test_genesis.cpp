#include <gtest/gtest.h>

#include <set>

#include "hitkit/factor.hpp"
#include "hitkit/genesis.hpp"
#include "hitkit/hitting.hpp"
#include "support.hpp"

using namespace hitkit;
using detail::DenseClause;

namespace {

GenerationTask task(int n, int m, FormulaClass cls) {
  GenerationTask t;
  t.n = n;
  t.m = m;
  t.cls = cls;
  return t;
}

std::vector<CanonicalKey> keys_of(const GenerationResult& r) {
  std::vector<CanonicalKey> out;
  for (const auto& g : r.formulas) out.push_back(g.key);
  return out;
}

}  // namespace

TEST(Prune, ModelSurplus) {
  // {x, y, z} leaves 7 models, four more 3-clauses cover at most 4
  PartialFormula node{{DenseClause{0b111, 0}}};
  EXPECT_EQ(prune(node, task(3, 5, FormulaClass::iuh)), PruneReason::too_many_models);
}

TEST(Prune, ModelShortage) {
  PartialFormula node{{DenseClause{0b1, 0}, DenseClause{0, 0b1}}};
  EXPECT_EQ(prune(node, task(2, 4, FormulaClass::uh)), PruneReason::too_few_models);
}

TEST(Prune, LastClauseMustHitTheOthers) {
  PartialFormula node{{DenseClause{0b011, 0}, DenseClause{0b101, 0}}};
  EXPECT_EQ(prune(node, task(3, 6, FormulaClass::uh)), PruneReason::not_hitting);
}

TEST(Prune, FactorOnlyForIrreducibleTasks) {
  // {x, y}, {x, ~y} collapses to {x}
  PartialFormula node{{DenseClause{0b11, 0}, DenseClause{0b01, 0b10}}};
  EXPECT_EQ(prune(node, task(3, 5, FormulaClass::iuh)), PruneReason::has_factor);
  EXPECT_EQ(prune(node, task(3, 5, FormulaClass::ruh)), PruneReason::keep);
}

TEST(Prune, CapacityIsOptIn) {
  PartialFormula node{{DenseClause{0b001, 0}}};
  GenerationTask t = task(3, 3, FormulaClass::ruh);
  EXPECT_EQ(prune(node, t), PruneReason::keep);
  t.capacity_prune = true;
  EXPECT_EQ(prune(node, t), PruneReason::capacity);
}

TEST(Task, Validation) {
  EXPECT_THROW(generate(task(-1, 3, FormulaClass::uh)), std::invalid_argument);
  EXPECT_THROW(generate(task(2, 0, FormulaClass::uh)), std::invalid_argument);
  EXPECT_THROW(generate(task(13, 20, FormulaClass::uh)), std::invalid_argument);
  EXPECT_THROW(generate(task(3, 25, FormulaClass::uh)), std::invalid_argument);
  EXPECT_EQ(parse_formula_class("RUH"), FormulaClass::ruh);
  EXPECT_EQ(to_string(FormulaClass::iuh), "iuh");
  EXPECT_THROW(parse_formula_class("xyz"), std::invalid_argument);
}

TEST(Generate, SmallIuhCells) {
  auto r = generate(task(3, 5, FormulaClass::iuh));
  ASSERT_EQ(r.formulas.size(), 1u);
  EXPECT_TRUE(are_isomorphic(r.formulas[0].formula, testing_support::mutwo(3)));
  EXPECT_TRUE(r.stats.complete);
  EXPECT_EQ(generate(task(0, 1, FormulaClass::iuh)).formulas.size(), 1u);
  EXPECT_EQ(generate(task(4, 7, FormulaClass::iuh)).formulas.size(), 2u);
  EXPECT_EQ(generate(task(4, 8, FormulaClass::iuh)).formulas.size(), 2u);
}

TEST(Generate, NoIuhWithTwoThreeFourOrSixClauses) {
  for (int m : {2, 3, 4, 6})
    for (int n = 0; n < m; ++n)
      EXPECT_TRUE(generate(task(n, m, FormulaClass::iuh)).formulas.empty()) << n << "," << m;
}

TEST(Generate, SmallRuhCells) {
  EXPECT_EQ(generate(task(2, 4, FormulaClass::ruh)).formulas.size(), 1u);
  EXPECT_EQ(generate(task(3, 5, FormulaClass::ruh)).formulas.size(), 1u);
  EXPECT_EQ(generate(task(3, 6, FormulaClass::ruh)).formulas.size(), 3u);
  EXPECT_EQ(generate(task(4, 7, FormulaClass::ruh)).formulas.size(), 10u);
}

TEST(Generate, OutputsAreInClassSortedAndDistinct) {
  for (auto cls : {FormulaClass::uh, FormulaClass::ruh, FormulaClass::iuh})
    for (int m = 1; m <= 7; ++m)
      for (int n = 0; n < m; ++n) {
        auto r = generate(task(n, m, cls));
        auto keys = keys_of(r);
        EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
        EXPECT_EQ(std::set<CanonicalKey>(keys.begin(), keys.end()).size(), keys.size());
        for (const auto& g : r.formulas) {
          EXPECT_TRUE(in_class(g.formula, cls, n, m)) << g.formula.to_string();
          EXPECT_EQ(g.key, canonical_key(g.formula));
          EXPECT_TRUE(is_unsat_hitting(g.formula));
          if (cls == FormulaClass::iuh)
            EXPECT_TRUE(is_irreducible(g.formula, FactorSearch::all_subsets));
        }
      }
}

TEST(Generate, AgreesWithCrossCheckUpToSevenClauses) {
  // one slow UH run per cell, filtered for the smaller classes
  for (int m = 1; m <= 7; ++m)
    for (int n = 0; n < m && n <= 5; ++n) {
      auto slow = generate_crosscheck(task(n, m, FormulaClass::uh));
      ASSERT_TRUE(slow.stats.complete);
      for (auto cls : {FormulaClass::uh, FormulaClass::ruh, FormulaClass::iuh}) {
        std::vector<CanonicalKey> expect;
        for (const auto& g : slow.formulas)
          if (in_class(g.formula, cls, n, m)) expect.push_back(g.key);
        EXPECT_EQ(keys_of(generate(task(n, m, cls))), expect) << to_string(cls) << "(" << n << "," << m << ")";
      }
    }
}

TEST(Generate, CrossCheckFiltersByClass) {
  auto r = generate_crosscheck(task(3, 5, FormulaClass::iuh));
  ASSERT_EQ(r.formulas.size(), 1u);
  EXPECT_TRUE(are_isomorphic(r.formulas[0].formula, testing_support::mutwo(3)));
  EXPECT_EQ(generate_crosscheck(task(0, 1, FormulaClass::iuh)).formulas.size(), 1u);
  GenerationTask t = task(4, 7, FormulaClass::uh);
  t.limits.max_nodes = 10;
  EXPECT_FALSE(generate_crosscheck(t).stats.complete);
}

TEST(Generate, ParallelRunMatchesSequential) {
  GenerationTask t = task(4, 8, FormulaClass::ruh);
  auto seq = generate(t);
  t.jobs = 3;
  auto par = generate(t);
  EXPECT_EQ(keys_of(seq), keys_of(par));
  EXPECT_EQ(par.formulas.size(), 49u);
}

TEST(Generate, CapacityPruneKeepsTheResult) {
  GenerationTask t = task(5, 9, FormulaClass::iuh);
  auto plain = generate(t);
  t.capacity_prune = true;
  auto pruned = generate(t);
  EXPECT_EQ(keys_of(plain), keys_of(pruned));
  EXPECT_LE(pruned.stats.nodes, plain.stats.nodes);
}

TEST(Generate, NodeBudgetMarksIncomplete) {
  GenerationTask t = task(5, 10, FormulaClass::iuh);
  t.limits.max_nodes = 50;
  auto r = generate(t);
  EXPECT_FALSE(r.stats.complete);
}

TEST(InClass, Predicates) {
  Formula f = testing_support::mutwo(3);
  EXPECT_TRUE(in_class(f, FormulaClass::iuh, 3, 5));
  EXPECT_FALSE(in_class(f, FormulaClass::iuh, 4, 5));
  Formula g{Clause{1}, Clause{-1, 2}, Clause{-1, -2}};
  EXPECT_TRUE(in_class(g, FormulaClass::uh, 2, 3));
  EXPECT_FALSE(in_class(g, FormulaClass::ruh, 2, 3));
  EXPECT_TRUE(in_class(Formula{Clause{}}, FormulaClass::iuh, 0, 1));
  EXPECT_FALSE(in_class(Formula{Clause{1}, Clause{-1}}, FormulaClass::ruh, 1, 2));
}
