#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "hitkit/cnf.hpp"

namespace hitkit {

using BigInt = boost::multiprecision::cpp_int;

/// Exact value numerator / 2^log2_denominator, kept with odd numerator (or 0/2^0).
class DyadicCount {
public:
  DyadicCount() = default;
  DyadicCount(BigInt numerator, unsigned log2_denominator);
  /// 2^-k
  static DyadicCount inverse_power(unsigned k);

  const BigInt& numerator() const { return num_; }
  unsigned log2_denominator() const { return log2_den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && log2_den_ == 0; }
  /// value * 2^n; requires the result to be an integer.
  BigInt scaled(unsigned n) const;

  DyadicCount& operator+=(const DyadicCount& o);
  DyadicCount& operator-=(const DyadicCount& o);
  friend DyadicCount operator+(DyadicCount a, const DyadicCount& b) { return a += b; }
  friend DyadicCount operator-(DyadicCount a, const DyadicCount& b) { return a -= b; }
  bool operator==(const DyadicCount&) const = default;
  std::strong_ordering operator<=>(const DyadicCount& o) const;

  std::string to_string() const;

private:
  void canonicalize();
  BigInt num_ = 0;
  unsigned log2_den_ = 0;
};

class NotHitting : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

bool is_hitting(const Formula& f);
/// Sum over clauses of 2^-|C|.
DyadicCount clause_weight(const Formula& f);
/// 2^n (1 - sum 2^-|C|) for a hitting formula over n >= |var(F)| variables.
BigInt count_models_hitting(const Formula& f, unsigned n);
BigInt count_models_hitting(const Formula& f);
bool is_unsat_hitting(const Formula& f);

bool is_saturated_mu(const Formula& f, BruteForceLimit limit = {});

long deficiency(const Formula& f);
/// Number of clauses containing each literal of lit(F), indexed by Literal::index().
std::vector<std::size_t> literal_occurrences(const Formula& f);
/// Variables of F with a literal occurring in fewer than two clauses.
std::vector<Var> singular_vars(const Formula& f);
bool is_regular(const Formula& f);
/// DP-resolution on v: all resolvents on v plus the clauses without v.
Formula dp_eliminate(const Formula& f, Var v);
/// Eliminates singular variables, smallest id first, until regular.
Formula singular_dp_reduce(const Formula& f);

}  // namespace hitkit
