#pragma once

// Bit-parallel views of small formulas used by the exhaustive checks.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

#include "hitkit/cnf.hpp"

namespace hitkit::detail {

/// Clause over dense variable indices 0..k-1 (k <= 64).
struct DenseClause {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;

  int size() const { return std::popcount(pos) + std::popcount(neg); }
  bool falsified_by(std::uint64_t assignment) const {
    return (pos & assignment) == 0 && (neg & ~assignment) == 0;
  }
  bool clashes(const DenseClause& o) const { return (pos & o.neg) != 0 || (neg & o.pos) != 0; }
  bool operator==(const DenseClause&) const = default;
};

/// Maps var(F) (plus any extra variables) onto 0..k-1.
class DenseIndex {
public:
  DenseIndex() = default;
  explicit DenseIndex(std::vector<Var> vars) : vars_(std::move(vars)) {
    std::sort(vars_.begin(), vars_.end());
    vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
  }
  static DenseIndex of(const Formula& f) { return DenseIndex(f.vars()); }

  std::size_t size() const { return vars_.size(); }
  const std::vector<Var>& vars() const { return vars_; }
  std::size_t index(Var v) const {
    return static_cast<std::size_t>(std::lower_bound(vars_.begin(), vars_.end(), v) - vars_.begin());
  }
  bool has(Var v) const { return std::binary_search(vars_.begin(), vars_.end(), v); }

  DenseClause dense(const Clause& c) const {
    DenseClause d;
    for (Literal l : c) {
      std::uint64_t bit = std::uint64_t{1} << index(l.var());
      (l.positive() ? d.pos : d.neg) |= bit;
    }
    return d;
  }
  std::vector<DenseClause> dense(const Formula& f) const {
    std::vector<DenseClause> out;
    out.reserve(f.size());
    for (const auto& c : f) out.push_back(dense(c));
    return out;
  }
  Clause sparse(const DenseClause& d) const {
    std::vector<Literal> lits;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      std::uint64_t bit = std::uint64_t{1} << i;
      if (d.pos & bit) lits.emplace_back(vars_[i], true);
      if (d.neg & bit) lits.emplace_back(vars_[i], false);
    }
    return Clause(std::move(lits));
  }

private:
  std::vector<Var> vars_;
};

/// Set of total assignments over k dense variables, one bit per assignment.
class ModelSet {
public:
  ModelSet() = default;
  ModelSet(std::size_t k, bool full) : k_(k), words_(word_count(k), full ? ~std::uint64_t{0} : 0) {
    trim();
  }

  static ModelSet of_clause(const DenseClause& c, std::size_t k) {
    ModelSet s(k, false);
    const std::uint64_t n = std::uint64_t{1} << k;
    for (std::uint64_t a = 0; a < n; ++a)
      if (!c.falsified_by(a)) s.words_[a >> 6] |= std::uint64_t{1} << (a & 63);
    return s;
  }
  static ModelSet of_formula(const std::vector<DenseClause>& f, std::size_t k) {
    ModelSet s(k, true);
    for (const auto& c : f) s &= of_clause(c, k);
    return s;
  }

  ModelSet& operator&=(const ModelSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  ModelSet& operator|=(const ModelSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  ModelSet operator~() const {
    ModelSet r = *this;
    for (auto& w : r.words_) w = ~w;
    r.trim();
    return r;
  }
  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }
  std::uint64_t count() const {
    std::uint64_t c = 0;
    for (auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
    return c;
  }
  bool subset_of(const ModelSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }
  bool disjoint(const ModelSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return false;
    return true;
  }
  bool test(std::uint64_t a) const { return (words_[a >> 6] >> (a & 63)) & 1; }
  std::size_t num_vars() const { return k_; }

  /// Smallest subcube containing the set, as (fixed-true, fixed-false) masks; requires non-empty.
  DenseClause bounding_cube() const {
    std::uint64_t all_one = ~std::uint64_t{0}, all_zero = ~std::uint64_t{0};
    const std::uint64_t n = std::uint64_t{1} << k_;
    for (std::uint64_t a = 0; a < n; ++a) {
      if (!test(a)) continue;
      all_one &= a;
      all_zero &= ~a;
    }
    const std::uint64_t mask = k_ >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k_) - 1;
    return DenseClause{all_one & mask, all_zero & mask};
  }

  bool operator==(const ModelSet&) const = default;

private:
  static std::size_t word_count(std::size_t k) {
    return k >= 6 ? (std::size_t{1} << (k - 6)) : 1;
  }
  void trim() {
    if (k_ < 6 && !words_.empty()) words_[0] &= (std::uint64_t{1} << (std::uint64_t{1} << k_)) - 1;
  }

  std::size_t k_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace hitkit::detail
