#include "hitkit/hitting.hpp"

#include <algorithm>

#include "hitkit/detail/dense.hpp"

namespace hitkit {

DyadicCount::DyadicCount(BigInt numerator, unsigned log2_denominator)
    : num_(std::move(numerator)), log2_den_(log2_denominator) {
  if (num_ < 0) throw std::invalid_argument("dyadic counts are non-negative");
  canonicalize();
}

DyadicCount DyadicCount::inverse_power(unsigned k) { return DyadicCount(1, k); }

void DyadicCount::canonicalize() {
  if (num_ == 0) {
    log2_den_ = 0;
    return;
  }
  unsigned tz = static_cast<unsigned>(boost::multiprecision::lsb(num_));
  unsigned shift = std::min(tz, log2_den_);
  num_ >>= shift;
  log2_den_ -= shift;
}

BigInt DyadicCount::scaled(unsigned n) const {
  if (n < log2_den_) throw std::domain_error("dyadic value times 2^n is not an integer");
  return num_ << (n - log2_den_);
}

DyadicCount& DyadicCount::operator+=(const DyadicCount& o) {
  unsigned l = std::max(log2_den_, o.log2_den_);
  num_ = (num_ << (l - log2_den_)) + (o.num_ << (l - o.log2_den_));
  log2_den_ = l;
  canonicalize();
  return *this;
}

DyadicCount& DyadicCount::operator-=(const DyadicCount& o) {
  unsigned l = std::max(log2_den_, o.log2_den_);
  BigInt r = (num_ << (l - log2_den_)) - (o.num_ << (l - o.log2_den_));
  if (r < 0) throw std::domain_error("negative dyadic count");
  num_ = std::move(r);
  log2_den_ = l;
  canonicalize();
  return *this;
}

std::strong_ordering DyadicCount::operator<=>(const DyadicCount& o) const {
  unsigned l = std::max(log2_den_, o.log2_den_);
  BigInt a = num_ << (l - log2_den_), b = o.num_ << (l - o.log2_den_);
  if (a < b) return std::strong_ordering::less;
  if (a > b) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string DyadicCount::to_string() const {
  return num_.str() + "/2^" + std::to_string(log2_den_);
}

bool is_hitting(const Formula& f) {
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j)
      if (!f[i].clashes_with(f[j])) return false;
  return true;
}

DyadicCount clause_weight(const Formula& f) {
  // Accumulate with a common denominator 2^w, w = max width, then canonicalize once.
  std::size_t w = 0;
  for (const auto& c : f) w = std::max(w, c.size());
  BigInt num = 0;
  for (const auto& c : f) num += BigInt(1) << (w - c.size());
  return DyadicCount(std::move(num), static_cast<unsigned>(w));
}

BigInt count_models_hitting(const Formula& f, unsigned n) {
  if (n < f.num_vars()) throw std::invalid_argument("n is smaller than |var(F)|");
  if (!is_hitting(f)) throw NotHitting("formula is not hitting");
  BigInt covered = clause_weight(f).scaled(n);
  BigInt total = BigInt(1) << n;
  if (covered > total)
    throw std::logic_error("negative model count: covered assignments exceed 2^n");
  return total - covered;
}

BigInt count_models_hitting(const Formula& f) {
  return count_models_hitting(f, static_cast<unsigned>(f.num_vars()));
}

bool is_unsat_hitting(const Formula& f) {
  if (!is_hitting(f)) throw NotHitting("formula is not hitting");
  return clause_weight(f).is_one();
}

bool is_saturated_mu(const Formula& f, BruteForceLimit limit) {
  if (!is_minimally_unsatisfiable(f, limit)) return false;
  // Adding a literal on a fresh variable: (F \ {C}) u {C u {y}} is satisfiable
  // iff F \ {C} is, which minimality already guarantees.
  const auto vars = f.vars();
  for (const auto& c : f) {
    Formula rest = f.without(c);
    for (Var v : vars) {
      if (c.contains_var(v)) continue;
      for (bool sign : {true, false}) {
        Formula g = rest.with(c.with(Literal(v, sign)));
        // Duplicate clause collapses the set; then g = rest, which is satisfiable.
        if (!is_satisfiable(g, limit)) return false;
      }
    }
  }
  return true;
}

long deficiency(const Formula& f) {
  return static_cast<long>(f.size()) - static_cast<long>(f.num_vars());
}

std::vector<std::size_t> literal_occurrences(const Formula& f) {
  std::vector<std::size_t> occ(2 * f.max_var(), 0);
  for (const auto& c : f)
    for (Literal l : c) ++occ[l.index()];
  return occ;
}

std::vector<Var> singular_vars(const Formula& f) {
  auto occ = literal_occurrences(f);
  std::vector<Var> out;
  for (Var v : f.vars())
    if (occ[Literal(v, true).index()] < 2 || occ[Literal(v, false).index()] < 2) out.push_back(v);
  return out;
}

bool is_regular(const Formula& f) { return singular_vars(f).empty(); }

Formula dp_eliminate(const Formula& f, Var v) {
  std::vector<Clause> pos, neg, out;
  for (const auto& c : f) {
    if (c.contains(Literal(v, true)))
      pos.push_back(c);
    else if (c.contains(Literal(v, false)))
      neg.push_back(c);
    else
      out.push_back(c);
  }
  for (const auto& p : pos)
    for (const auto& n : neg)
      if (p.clashing_literals(n).size() == 1) out.push_back(resolve(p, n));
  return Formula(std::move(out), f.name());
}

Formula singular_dp_reduce(const Formula& f) {
  Formula g = f;
  for (;;) {
    auto sing = singular_vars(g);
    if (sing.empty()) return g;
    g = dp_eliminate(g, sing.front());
  }
}

}  // namespace hitkit
