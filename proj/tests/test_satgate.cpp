#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <random>

#include "hitkit/satgate.hpp"
#include "support.hpp"

using namespace hitkit;

namespace {

Cnf random_cnf(int n, int m, int width, std::mt19937_64& rng) {
  Cnf cnf;
  cnf.num_vars = n;
  for (int i = 0; i < m; ++i) {
    std::vector<int> c;
    for (int j = 0; j < width; ++j) {
      int v = 1 + static_cast<int>(rng() % n);
      c.push_back(rng() % 2 ? v : -v);
    }
    cnf.add(c);
  }
  return cnf;
}

bool brute_sat(const Cnf& cnf) {
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << cnf.num_vars); ++bits) {
    bool ok = true;
    for (const auto& c : cnf.clauses) {
      bool sat = false;
      for (int l : c) sat = sat || (((bits >> (std::abs(l) - 1)) & 1u) == (l > 0 ? 1u : 0u));
      if (!sat) { ok = false; break; }
    }
    if (ok) return true;
  }
  return false;
}

// p pigeons into h holes
Cnf pigeonhole(int p, int h) {
  Cnf cnf;
  cnf.num_vars = p * h;
  auto x = [h](int i, int j) { return i * h + j + 1; };
  for (int i = 0; i < p; ++i) {
    std::vector<int> c;
    for (int j = 0; j < h; ++j) c.push_back(x(i, j));
    cnf.add(c);
  }
  for (int j = 0; j < h; ++j)
    for (int a = 0; a < p; ++a)
      for (int b = a + 1; b < p; ++b) cnf.add({-x(a, j), -x(b, j)});
  return cnf;
}

SolverConfig shell(const std::string& command, double timeout = 0) {
  SolverConfig c;
  c.backend = SolverConfig::Backend::external;
  c.command = command;
  c.timeout_seconds = timeout;
  return c;
}

bool have_pysat() { return std::system("python3 -c 'import pysat' >/dev/null 2>&1") == 0; }

}  // namespace

TEST(Builtin, AgreesWithBruteForce) {
  std::mt19937_64 rng(31);
  int sat = 0, unsat = 0;
  for (int round = 0; round < 400; ++round) {
    int n = 3 + static_cast<int>(rng() % 12);
    int m = static_cast<int>(n * (3.0 + (rng() % 30) / 10.0));
    Cnf cnf = random_cnf(n, m, 3, rng);
    SolverVerdict v = solve_builtin(cnf);
    bool expect = brute_sat(cnf);
    ASSERT_EQ(v.status, expect ? SolveStatus::sat : SolveStatus::unsat);
    if (expect) {
      ASSERT_TRUE(v.model);
      EXPECT_TRUE(model_satisfies(cnf, *v.model));
      ++sat;
    } else {
      ++unsat;
    }
  }
  EXPECT_GT(sat, 20);
  EXPECT_GT(unsat, 20);
}

TEST(Builtin, EdgeCases) {
  Cnf empty;
  EXPECT_EQ(solve_builtin(empty).status, SolveStatus::sat);
  Cnf with_empty_clause;
  with_empty_clause.num_vars = 1;
  with_empty_clause.add(std::vector<int>{});
  EXPECT_EQ(solve_builtin(with_empty_clause).status, SolveStatus::unsat);
  Cnf units;
  units.num_vars = 2;
  units.add({1});
  units.add({-1, 2});
  units.add({-2, 1});
  auto v = solve_builtin(units);
  ASSERT_EQ(v.status, SolveStatus::sat);
  EXPECT_EQ(v.model->value(Var{2}), std::optional<bool>(true));
  Cnf bad;
  bad.num_vars = 1;
  bad.add({2});
  EXPECT_THROW(solve_builtin(bad), std::invalid_argument);
}

TEST(Builtin, PigeonholeAndLimits) {
  EXPECT_EQ(solve_builtin(pigeonhole(6, 5)).status, SolveStatus::unsat);
  EXPECT_EQ(solve_builtin(pigeonhole(5, 5)).status, SolveStatus::sat);
  EXPECT_EQ(solve_builtin(pigeonhole(10, 9), 0, 20).status, SolveStatus::unknown);
}

TEST(Parser, CompetitionOutput) {
  auto v = parse_competition_output("c hi\ns SATISFIABLE\nv 1 -2\nv 3 0\n", 3);
  ASSERT_EQ(v.status, SolveStatus::sat);
  EXPECT_EQ(v.model->value(Var{2}), std::optional<bool>(false));
  EXPECT_EQ(v.model->value(Var{3}), std::optional<bool>(true));
  EXPECT_EQ(parse_competition_output("s UNSATISFIABLE\n", 3).status, SolveStatus::unsat);
  EXPECT_EQ(parse_competition_output("s UNKNOWN\n", 3).status, SolveStatus::unknown);
  EXPECT_THROW(parse_competition_output("c nothing\n", 3), SolverError);
  EXPECT_THROW(parse_competition_output("s SATISFIABLE\ns UNSATISFIABLE\n", 3), SolverError);
  EXPECT_THROW(parse_competition_output("s MAYBE\n", 3), SolverError);
  EXPECT_THROW(parse_competition_output("s SATISFIABLE\nv 1 x 0\n", 3), SolverError);
  EXPECT_THROW(parse_competition_output("s SATISFIABLE\nv 1 2\n", 3), SolverError);
  EXPECT_THROW(parse_competition_output("s SATISFIABLE\nv 1 7 0\n", 3), SolverError);
  EXPECT_THROW(parse_competition_output("hello\n", 3), SolverError);
}

TEST(External, FakeSolversThroughTheShell) {
  Cnf cnf = pigeonhole(3, 2);
  EXPECT_EQ(solve(cnf, shell("printf 's UNSATISFIABLE\\n'; exit 20")).status, SolveStatus::unsat);
  EXPECT_THROW(solve(cnf, shell("printf 's SATISFIABLE\\n'; exit 20")), SolverError);
  EXPECT_THROW(solve(cnf, shell("exit 3")), SolverError);
  // a model that falsifies the instance
  EXPECT_THROW(solve(cnf, shell("printf 's SATISFIABLE\\nv -1 -2 -3 -4 -5 -6 0\\n'; exit 10")), SolverError);
  // the instance path is substituted
  EXPECT_EQ(solve(cnf, shell("grep -q '^p cnf 6 9' {cnf} && printf 's UNSATISFIABLE\\n'")).status,
            SolveStatus::unsat);
  EXPECT_THROW(solve(cnf, shell("{solver} {cnf}")), SolverError);
}

TEST(External, TimeoutGivesUnknown) {
  auto v = solve(pigeonhole(3, 2), shell("sleep 5; printf 's UNSATISFIABLE\\n'", 0.3));
  EXPECT_EQ(v.status, SolveStatus::unknown);
  EXPECT_LT(v.stats.seconds, 3.0);
}

TEST(External, EnvironmentSelectsBackend) {
  unsetenv("HITKIT_SOLVER");
  EXPECT_EQ(SolverConfig::from_environment().backend, SolverConfig::Backend::builtin);
  setenv("HITKIT_SOLVER", "/usr/bin/some-solver", 1);
  setenv("HITKIT_SOLVER_TEMPLATE", "{solver} -q {cnf}", 1);
  SolverConfig c = SolverConfig::from_environment();
  EXPECT_EQ(c.backend, SolverConfig::Backend::external);
  EXPECT_EQ(c.solver, "/usr/bin/some-solver");
  EXPECT_EQ(c.command, "{solver} -q {cnf}");
  unsetenv("HITKIT_SOLVER");
  unsetenv("HITKIT_SOLVER_TEMPLATE");
}

TEST(External, PysatWrapperAgreesWithBuiltin) {
  if (!have_pysat()) GTEST_SKIP() << "python-sat not installed";
  SolverConfig c = shell("python3 {solver} {cnf}");
  c.solver = HITKIT_TOOLS_DIR "/pysat_solve.py";
  std::mt19937_64 rng(8);
  for (int round = 0; round < 10; ++round) {
    Cnf cnf = random_cnf(20, 85, 3, rng);
    EXPECT_EQ(solve(cnf, c).status, solve_builtin(cnf).status);
  }
}
