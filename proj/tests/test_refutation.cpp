#include <gtest/gtest.h>

#include <sstream>

#include "hitkit/refutation.hpp"
#include "support.hpp"

using namespace hitkit;

namespace {

// Every proof obtained by flipping, deleting or adding one literal in one step.
std::vector<RefutationDag> single_literal_mutations(const RefutationDag& p, const Formula& f) {
  std::vector<RefutationDag> out;
  auto vars = f.vars();
  for (std::size_t i = 0; i < p.length(); ++i) {
    const Clause& c = p[i].clause;
    auto with_clause = [&](Clause d) {
      auto steps = p.steps();
      steps[i].clause = std::move(d);
      out.emplace_back(std::move(steps));
    };
    for (Literal l : c) {
      std::vector<Literal> flipped;
      for (Literal x : c) flipped.push_back(x == l ? ~x : x);
      with_clause(Clause(flipped));
      with_clause(c.without(l));
    }
    for (Var v : vars)
      if (!c.contains_var(v))
        for (bool sign : {true, false}) with_clause(c.with(Literal(v, sign)));
  }
  return out;
}

}  // namespace

TEST(Dag, BuildAndPrune) {
  RefutationDag p;
  auto a = p.add_axiom(Clause{1, 2});
  auto b = p.add_axiom(Clause{-1, 2});
  auto unused = p.add_axiom(Clause{3});
  auto c = p.add_axiom(Clause{-2});
  auto r = p.add_resolvent(a, b);
  EXPECT_EQ(p[r].clause, (Clause{2}));
  EXPECT_EQ(p[r].pivot, 1u);
  p.add_resolvent(r, c);
  EXPECT_EQ(p.length(), 6u);
  EXPECT_EQ(p.axiom_count(), 4u);
  EXPECT_EQ(p.out_degrees()[unused], 0u);
  RefutationDag q = p.prune_unused();
  EXPECT_EQ(q.length(), 5u);
  EXPECT_TRUE(validate_refutation(Formula{Clause{1, 2}, Clause{-1, 2}, Clause{-2}}, q));
  EXPECT_THROW(p.add_resolvent(a, a), NotResolvable);
}

TEST(Validate, ReportsTheFirstBadStep) {
  Formula f{Clause{1}, Clause{-1}};
  RefutationDag ok({ProofStep::axiom(Clause{1}), ProofStep::axiom(Clause{-1}),
                    ProofStep::resolvent(0, 1, 1, Clause{})});
  EXPECT_TRUE(validate_refutation(f, ok));

  RefutationDag not_axiom({ProofStep::axiom(Clause{2}), ProofStep::axiom(Clause{-1}),
                           ProofStep::resolvent(0, 1, 1, Clause{})});
  auto v = validate_refutation(f, not_axiom);
  EXPECT_FALSE(v);
  EXPECT_EQ(v.bad_step, std::optional<std::size_t>(0));

  RefutationDag forward({ProofStep::axiom(Clause{1}), ProofStep::resolvent(0, 2, 1, Clause{}),
                         ProofStep::axiom(Clause{-1})});
  EXPECT_EQ(validate_refutation(f, forward).bad_step, std::optional<std::size_t>(1));

  RefutationDag bad_pivot({ProofStep::axiom(Clause{1}), ProofStep::axiom(Clause{-1}),
                           ProofStep::resolvent(0, 1, 2, Clause{})});
  EXPECT_EQ(validate_refutation(f, bad_pivot).bad_step, std::optional<std::size_t>(2));

  RefutationDag not_empty({ProofStep::axiom(Clause{1})});
  EXPECT_FALSE(validate_refutation(f, not_empty));
  EXPECT_TRUE(validate_derivation(f, not_empty, Clause{1}));
  EXPECT_FALSE(validate_refutation(f, RefutationDag{}));
}

TEST(Fixtures, Figure2ProofIsValidAndNotReadOnce) {
  Formula f = testing_support::fixture_formula("mutwo5.cnf");
  RefutationDag p = read_proof_file(testing_support::fixture("fig2.proof"));
  EXPECT_EQ(p.length(), 10u);
  EXPECT_TRUE(validate_refutation(f, p));
  EXPECT_FALSE(is_read_once(p));
}

TEST(Fixtures, Figure4ProofIsValid) {
  Formula g = testing_support::fixture_formula("g_example.cnf");
  RefutationDag p = read_proof_file(testing_support::fixture("fig4.proof"));
  EXPECT_EQ(p.length(), 20u);
  EXPECT_TRUE(validate_refutation(g, p));
}

TEST(Fixtures, SingleLiteralMutationsAreRejected) {
  for (auto [formula, proof] : {std::pair{"mutwo5.cnf", "fig2.proof"}, std::pair{"g_example.cnf", "fig4.proof"}}) {
    Formula f = testing_support::fixture_formula(formula);
    RefutationDag p = read_proof_file(testing_support::fixture(proof));
    auto mutants = single_literal_mutations(p, f);
    EXPECT_GT(mutants.size(), 50u);
    for (const auto& q : mutants) EXPECT_FALSE(validate_refutation(f, q)) << to_proof_string(q);
  }
}

TEST(TextFormat, RoundTrip) {
  RefutationDag p = read_proof_file(testing_support::fixture("fig4.proof"));
  std::istringstream in(to_proof_string(p));
  EXPECT_EQ(read_proof(in), p);
}

TEST(TextFormat, Errors) {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return read_proof(in);
  };
  EXPECT_THROW(parse("X 1 0\n"), ProofFormatError);
  EXPECT_THROW(parse("A 1 2\n"), ProofFormatError);
  EXPECT_THROW(parse("R 0 1 1 0\n"), ProofFormatError);
  EXPECT_THROW(parse("A 1 -1 0\n"), ProofFormatError);
  EXPECT_THROW(read_proof_file("/nonexistent.proof"), ProofFormatError);
  EXPECT_EQ(parse("# c\nc x\nA 1 0\n").length(), 1u);
}

TEST(ReadOnce, Detection) {
  RefutationDag p({ProofStep::axiom(Clause{1}), ProofStep::axiom(Clause{-1}),
                   ProofStep::resolvent(0, 1, 1, Clause{})});
  EXPECT_TRUE(is_read_once(p));
  RefutationDag q = read_proof_file(testing_support::fixture("fig2.proof"));
  EXPECT_FALSE(is_read_once(q));
}

TEST(Oracle, KnownSmallValues) {
  auto h = [](const Formula& f) {
    auto r = shortest_refutation_bruteforce(f, 30);
    EXPECT_TRUE(r.has_value());
    EXPECT_TRUE(validate_refutation(f, r->proof));
    EXPECT_EQ(r->proof.length(), r->h);
    return r->h;
  };
  EXPECT_EQ(h(Formula{Clause{}}), 1u);
  EXPECT_EQ(h(Formula{Clause{1}, Clause{-1}}), 3u);
  EXPECT_EQ(h(Formula{Clause{1, 2}, Clause{1, -2}, Clause{-1, 2}, Clause{-1, -2}}), 7u);
  EXPECT_EQ(h(testing_support::mutwo(3)), 10u);
  EXPECT_EQ(h(Formula{Clause{1}, Clause{-1, 2}, Clause{-2}}), 5u);
}

TEST(Oracle, CapAndLimits) {
  EXPECT_FALSE(shortest_refutation_bruteforce(testing_support::mutwo(3), 9).has_value());
  EXPECT_FALSE(shortest_refutation_bruteforce(Formula{Clause{1}}, 10).has_value());
  EXPECT_THROW(shortest_refutation_bruteforce(Formula{Clause{1, 2, 3, 4, 5, 6, 7}, Clause{-1}}, 5),
               LimitExceeded);
  EXPECT_THROW(shortest_refutation_bruteforce(testing_support::mutwo(3), 10, OracleBudget{5}), LimitExceeded);
}
