#pragma once

// One interface over the built-in CDCL solver and external DIMACS solvers.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hitkit/cnf.hpp"
#include "hitkit/dimacs.hpp"

namespace hitkit {

enum class SolveStatus { sat, unsat, unknown };
std::string to_string(SolveStatus s);

struct SolverStats {
  std::uint64_t decisions = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t propagations = 0;
  double seconds = 0;
};

struct SolverVerdict {
  SolveStatus status = SolveStatus::unknown;
  std::optional<Assignment> model;  // total over 1..num_vars when SAT
  SolverStats stats;
  std::string backend;
};

/// Raised when an external solver cannot be run or prints something unparsable.
class SolverError : public std::runtime_error {
public:
  SolverError(const std::string& what, std::string output)
      : std::runtime_error(what), output_(std::move(output)) {}
  const std::string& output() const { return output_; }

private:
  std::string output_;
};

struct SolverConfig {
  enum class Backend { builtin, external };
  Backend backend = Backend::builtin;
  /// Shell command template; {solver} and {cnf} are substituted.
  std::string command = "{solver} {cnf}";
  std::string solver;
  double timeout_seconds = 0;  // 0 = none
  std::uint64_t conflict_limit = 0;  // builtin only; 0 = none

  /// External backend if HITKIT_SOLVER is set, builtin otherwise.
  static SolverConfig from_environment();
};

SolverVerdict solve(const Cnf& cnf, const SolverConfig& config = {});
SolverVerdict solve_builtin(const Cnf& cnf, double timeout_seconds = 0, std::uint64_t conflict_limit = 0);
SolverVerdict solve_external(const Cnf& cnf, const SolverConfig& config);

/// Parses "s ..." and "v ..." lines of SAT-competition output.
SolverVerdict parse_competition_output(const std::string& text, int num_vars);

/// Every clause has a true literal under the model.
bool model_satisfies(const Cnf& cnf, const Assignment& model);

}  // namespace hitkit
