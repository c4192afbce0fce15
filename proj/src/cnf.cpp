#include "hitkit/cnf.hpp"

#include <algorithm>
#include <sstream>

#include "hitkit/detail/dense.hpp"

namespace hitkit {

namespace {

void normalize(std::vector<Literal>& lits) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (std::size_t i = 1; i < lits.size(); ++i)
    if (lits[i].var() == lits[i - 1].var())
      throw std::invalid_argument("tautological clause on variable " + std::to_string(lits[i].var()));
}

void check_limit(std::size_t k, BruteForceLimit limit) {
  if (k > limit.max_vars || k > 30)
    throw LimitExceeded("brute force over " + std::to_string(k) + " variables exceeds limit " +
                        std::to_string(limit.max_vars));
}

}  // namespace

// ---- Clause ---------------------------------------------------------------

Clause::Clause(std::initializer_list<int> dimacs) {
  for (int x : dimacs) lits_.push_back(Literal::from_dimacs(x));
  normalize(lits_);
}

Clause::Clause(std::vector<Literal> lits) : lits_(std::move(lits)) { normalize(lits_); }

Clause Clause::from_dimacs(std::span<const int> dimacs) {
  std::vector<Literal> lits;
  for (int x : dimacs) lits.push_back(Literal::from_dimacs(x));
  return Clause(std::move(lits));
}

bool Clause::contains(Literal l) const { return std::binary_search(lits_.begin(), lits_.end(), l); }

bool Clause::contains_var(Var v) const {
  return contains(Literal(v, true)) || contains(Literal(v, false));
}

std::vector<Var> Clause::vars() const {
  std::vector<Var> out;
  for (Literal l : lits_) out.push_back(l.var());
  return out;
}

bool Clause::subset_of(const Clause& other) const {
  return std::includes(other.lits_.begin(), other.lits_.end(), lits_.begin(), lits_.end());
}

std::vector<Literal> Clause::clashing_literals(const Clause& other) const {
  std::vector<Literal> out;
  for (Literal l : lits_)
    if (other.contains(~l)) out.push_back(l);
  return out;
}

bool Clause::clashes_with(const Clause& other) const {
  return std::any_of(lits_.begin(), lits_.end(), [&](Literal l) { return other.contains(~l); });
}

Clause Clause::without(Literal l) const {
  Clause c = *this;
  std::erase(c.lits_, l);
  return c;
}

Clause Clause::with(Literal l) const {
  auto lits = lits_;
  lits.push_back(l);
  return Clause(std::move(lits));
}

Clause Clause::unite(const Clause& other) const {
  std::vector<Literal> lits;
  std::set_union(lits_.begin(), lits_.end(), other.lits_.begin(), other.lits_.end(),
                 std::back_inserter(lits));
  return Clause(std::move(lits));
}

Clause Clause::intersect(const Clause& other) const {
  Clause c;
  std::set_intersection(lits_.begin(), lits_.end(), other.lits_.begin(), other.lits_.end(),
                        std::back_inserter(c.lits_));
  return c;
}

Clause Clause::minus(const Clause& other) const {
  Clause c;
  std::set_difference(lits_.begin(), lits_.end(), other.lits_.begin(), other.lits_.end(),
                      std::back_inserter(c.lits_));
  return c;
}

std::vector<int> Clause::to_dimacs() const {
  std::vector<int> out;
  for (Literal l : lits_) out.push_back(l.dimacs());
  return out;
}

std::string Clause::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < lits_.size(); ++i) os << (i ? "," : "") << lits_[i].dimacs();
  os << '}';
  return os.str();
}

std::strong_ordering Clause::operator<=>(const Clause& o) const {
  if (auto c = lits_.size() <=> o.lits_.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(lits_.begin(), lits_.end(), o.lits_.begin(),
                                                o.lits_.end());
}

// ---- Formula --------------------------------------------------------------

Formula::Formula(std::initializer_list<Clause> clauses) : Formula(std::vector<Clause>(clauses)) {}

Formula::Formula(std::vector<Clause> clauses, std::string name)
    : clauses_(std::move(clauses)), name_(std::move(name)) {
  std::sort(clauses_.begin(), clauses_.end());
  clauses_.erase(std::unique(clauses_.begin(), clauses_.end()), clauses_.end());
}

bool Formula::contains(const Clause& c) const {
  return std::binary_search(clauses_.begin(), clauses_.end(), c);
}

std::optional<std::size_t> Formula::index_of(const Clause& c) const {
  auto it = std::lower_bound(clauses_.begin(), clauses_.end(), c);
  if (it == clauses_.end() || *it != c) return std::nullopt;
  return static_cast<std::size_t>(it - clauses_.begin());
}

std::vector<Var> Formula::vars() const {
  std::vector<Var> out;
  for (const auto& c : clauses_)
    for (Literal l : c) out.push_back(l.var());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Var Formula::max_var() const {
  Var m = 0;
  for (const auto& c : clauses_)
    for (Literal l : c) m = std::max(m, l.var());
  return m;
}

Formula Formula::with(const Clause& c) const {
  auto cs = clauses_;
  cs.push_back(c);
  return Formula(std::move(cs), name_);
}

Formula Formula::without(const Clause& c) const {
  auto cs = clauses_;
  std::erase(cs, c);
  return Formula(std::move(cs), name_);
}

Formula Formula::subset(std::span<const std::size_t> indices) const {
  std::vector<Clause> cs;
  for (auto i : indices) cs.push_back(clauses_.at(i));
  return Formula(std::move(cs));
}

std::string Formula::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < clauses_.size(); ++i) os << (i ? ", " : "") << clauses_[i].to_string();
  os << '}';
  return os.str();
}

// ---- Assignment -----------------------------------------------------------

Assignment::Assignment(std::initializer_list<int> dimacs) {
  for (int x : dimacs) {
    Literal l = Literal::from_dimacs(x);
    set(l.var(), l.positive());
  }
}

Assignment::Assignment(std::vector<Literal> true_literals) {
  for (Literal l : true_literals) set(l.var(), l.positive());
}

std::optional<bool> Assignment::value(Var v) const {
  auto it = std::lower_bound(lits_.begin(), lits_.end(), Literal(v, true));
  if (it == lits_.end() || it->var() != v) return std::nullopt;
  return it->positive();
}

std::optional<bool> Assignment::value(Literal l) const {
  auto v = value(l.var());
  if (!v) return std::nullopt;
  return *v == l.positive();
}

void Assignment::set(Var v, bool value) {
  auto it = std::lower_bound(lits_.begin(), lits_.end(), Literal(v, true));
  if (it != lits_.end() && it->var() == v) {
    if (it->positive() != value)
      throw std::invalid_argument("inconsistent assignment to variable " + std::to_string(v));
    return;
  }
  lits_.insert(it, Literal(v, value));
}

bool Assignment::satisfies(const Clause& c) const {
  return std::any_of(c.begin(), c.end(), [&](Literal l) { return value(l) == true; });
}

// ---- Operations -----------------------------------------------------------

std::optional<Clause> restrict(const Clause& c, const Assignment& tau) {
  std::vector<Literal> kept;
  for (Literal l : c) {
    auto v = tau.value(l);
    if (v == true) return std::nullopt;
    if (!v) kept.push_back(l);
  }
  return Clause(std::move(kept));
}

Formula restrict(const Formula& f, const Assignment& tau) {
  std::vector<Clause> out;
  for (const auto& c : f)
    if (auto r = restrict(c, tau)) out.push_back(std::move(*r));
  return Formula(std::move(out));
}

std::uint64_t count_models_bruteforce(const Formula& f, BruteForceLimit limit) {
  auto index = detail::DenseIndex::of(f);
  check_limit(index.size(), limit);
  auto dense = index.dense(f);
  const std::uint64_t n = std::uint64_t{1} << index.size();
  std::uint64_t count = 0;
  for (std::uint64_t a = 0; a < n; ++a) {
    bool ok = std::none_of(dense.begin(), dense.end(),
                           [a](const detail::DenseClause& c) { return c.falsified_by(a); });
    count += ok ? 1 : 0;
  }
  return count;
}

bool is_satisfiable(const Formula& f, BruteForceLimit limit) {
  auto index = detail::DenseIndex::of(f);
  check_limit(index.size(), limit);
  auto dense = index.dense(f);
  const std::uint64_t n = std::uint64_t{1} << index.size();
  for (std::uint64_t a = 0; a < n; ++a)
    if (std::none_of(dense.begin(), dense.end(),
                     [a](const detail::DenseClause& c) { return c.falsified_by(a); }))
      return true;
  return false;
}

bool is_minimally_unsatisfiable(const Formula& f, BruteForceLimit limit) {
  auto index = detail::DenseIndex::of(f);
  check_limit(index.size(), limit);
  auto dense = index.dense(f);
  const std::uint64_t n = std::uint64_t{1} << index.size();
  // MU iff every assignment is falsified by some clause, and every clause is the
  // only falsified one for at least one assignment.
  std::vector<bool> sole(dense.size(), false);
  for (std::uint64_t a = 0; a < n; ++a) {
    std::size_t hits = 0, last = 0;
    for (std::size_t i = 0; i < dense.size() && hits < 2; ++i)
      if (dense[i].falsified_by(a)) {
        ++hits;
        last = i;
      }
    if (hits == 0) return false;
    if (hits == 1) sole[last] = true;
  }
  return std::all_of(sole.begin(), sole.end(), [](bool b) { return b; });
}

std::optional<Var> resolution_pivot(const Clause& a, const Clause& b) {
  auto clash = a.clashing_literals(b);
  if (clash.size() != 1) return std::nullopt;
  return clash.front().var();
}

Clause resolve(const Clause& a, const Clause& b) {
  auto clash = a.clashing_literals(b);
  if (clash.size() != 1)
    throw NotResolvable(a.to_string() + " and " + b.to_string() + " clash on " +
                        std::to_string(clash.size()) + " literals");
  Literal l = clash.front();
  return a.without(l).unite(b.without(~l));
}

Clause resolve_on(const Clause& a, const Clause& b, Var pivot) {
  auto p = resolution_pivot(a, b);
  if (!p || *p != pivot)
    throw NotResolvable(a.to_string() + " and " + b.to_string() + " do not resolve on " +
                        std::to_string(pivot));
  return resolve(a, b);
}

bool entails(const Formula& f, const Clause& c, BruteForceLimit limit) {
  // F |= C iff F restricted by the falsifying assignment of C is unsatisfiable.
  std::vector<Literal> neg;
  for (Literal l : c) neg.push_back(~l);
  return !is_satisfiable(restrict(f, Assignment(neg)), limit);
}

bool entails(const Formula& f, const Formula& g, BruteForceLimit limit) {
  return std::all_of(g.begin(), g.end(), [&](const Clause& c) { return entails(f, c, limit); });
}

bool equivalent(const Formula& f, const Formula& g, BruteForceLimit limit) {
  return entails(f, g, limit) && entails(g, f, limit);
}

}  // namespace hitkit
