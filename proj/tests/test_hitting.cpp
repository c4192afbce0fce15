#include <gtest/gtest.h>

#include <random>

#include "hitkit/hitting.hpp"
#include "support.hpp"

using namespace hitkit;
using testing_support::from_oracle;
using testing_support::to_oracle;

TEST(Dyadic, Arithmetic) {
  DyadicCount a = DyadicCount::inverse_power(2) + DyadicCount::inverse_power(2);
  EXPECT_EQ(a, DyadicCount::inverse_power(1));
  EXPECT_EQ(a.numerator(), 1);
  EXPECT_EQ(a.log2_denominator(), 1u);
  a += DyadicCount::inverse_power(1);
  EXPECT_TRUE(a.is_one());
  a -= DyadicCount::inverse_power(3);
  EXPECT_EQ(a.to_string(), "7/2^3");
  EXPECT_EQ(a.scaled(5), 28);
  EXPECT_LT(a, DyadicCount(1, 0));
  EXPECT_TRUE((a - a).is_zero());
  EXPECT_THROW(DyadicCount::inverse_power(4).scaled(2), std::domain_error);
}

TEST(Hitting, Predicate) {
  EXPECT_TRUE(is_hitting(Formula{Clause{1, 2}, Clause{-1}, Clause{1, -2}}));
  EXPECT_FALSE(is_hitting(Formula{Clause{1, 2}, Clause{-1}, Clause{2}}));
  EXPECT_TRUE(is_hitting(Formula{}));
  EXPECT_TRUE(is_hitting(Formula{Clause{}}));
}

TEST(Hitting, IwamaAgreesWithBruteForceOnRandomFormulas) {
  std::mt19937_64 rng(2024);
  int unsat_seen = 0;
  for (int round = 0; round < 1000; ++round) {
    int n = 1 + static_cast<int>(rng() % 12);
    oracle::OFormula of = oracle::random_hitting(n, rng);
    ASSERT_TRUE(oracle::hitting(of));
    Formula f = from_oracle(of);
    BigInt iwama = count_models_hitting(f, static_cast<unsigned>(n));
    std::uint64_t expect = oracle::count_models(of, n);
    ASSERT_EQ(iwama, BigInt(expect)) << f.to_string();
    unsat_seen += expect == 0;
  }
  EXPECT_GT(unsat_seen, 10);
}

TEST(Hitting, CountOverLargerBase) {
  Formula f{Clause{1}, Clause{-1, 2}};
  EXPECT_EQ(count_models_hitting(f), 1);
  EXPECT_EQ(count_models_hitting(f, 4), 4);
  EXPECT_THROW(count_models_hitting(f, 1), std::invalid_argument);
  EXPECT_THROW(count_models_hitting(Formula{Clause{1}, Clause{2}}), NotHitting);
}

TEST(Hitting, UnsatTest) {
  EXPECT_TRUE(is_unsat_hitting(Formula{Clause{}}));
  EXPECT_TRUE(is_unsat_hitting(Formula{Clause{1}, Clause{-1, 2}, Clause{-1, -2}}));
  EXPECT_FALSE(is_unsat_hitting(Formula{Clause{1}, Clause{-1, 2}}));
  EXPECT_THROW(is_unsat_hitting(Formula{Clause{1}, Clause{2}}), NotHitting);
}

TEST(Hitting, UnsatHittingFormulasAreSaturatedMu) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 60; ++round) {
    oracle::OFormula of = oracle::random_unsat_hitting(5, 1 + static_cast<int>(rng() % 10), rng);
    Formula f = from_oracle(of);
    ASSERT_TRUE(is_unsat_hitting(f));
    EXPECT_TRUE(is_minimally_unsatisfiable(f));
    EXPECT_TRUE(is_saturated_mu(f)) << f.to_string();
  }
}

TEST(Hitting, SaturationFailsForNonSaturatedMu) {
  // extending {x} by y keeps it unsatisfiable
  Formula f{Clause{1}, Clause{-1, 2}, Clause{-2}};
  EXPECT_TRUE(is_minimally_unsatisfiable(f));
  EXPECT_FALSE(is_saturated_mu(f));
  EXPECT_FALSE(is_saturated_mu(Formula{Clause{1}, Clause{-1}, Clause{1, 2}}));
}

TEST(Hitting, DeficiencyAndRegularity) {
  Formula f = testing_support::mutwo(3);
  EXPECT_EQ(deficiency(f), 2);
  EXPECT_TRUE(is_regular(f));
  Formula g{Clause{1}, Clause{-1, 2}, Clause{-1, -2}};
  EXPECT_EQ(deficiency(g), 1);
  EXPECT_EQ(singular_vars(g), (std::vector<Var>{1, 2}));
  EXPECT_FALSE(is_regular(g));
  auto occ = literal_occurrences(g);
  EXPECT_EQ(occ[Literal(1, false).index()], 2u);
  EXPECT_EQ(occ[Literal(2, true).index()], 1u);
}

TEST(Hitting, SingularReductionKeepsUnsatHittingAndDeficiency) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 100; ++round) {
    oracle::OFormula of = oracle::random_unsat_hitting(6, 2 + static_cast<int>(rng() % 14), rng);
    Formula f = from_oracle(of);
    Formula g = singular_dp_reduce(f);
    EXPECT_TRUE(is_regular(g));
    ASSERT_TRUE(is_hitting(g)) << f.to_string();
    EXPECT_TRUE(is_unsat_hitting(g));
    EXPECT_EQ(deficiency(g), deficiency(f));
  }
}

TEST(Hitting, DpEliminate) {
  Formula f{Clause{1, 2}, Clause{-1, 3}, Clause{-1, -2}, Clause{4}};
  Formula g = dp_eliminate(f, 1);
  EXPECT_EQ(g, (Formula{Clause{4}, Clause{2, 3}}));
}
