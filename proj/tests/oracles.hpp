#pragma once

// Slow reference implementations for the tests. They work on plain integer
// vectors and share no code with the library.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using OClause = std::vector<int>;
using OFormula = std::vector<OClause>;

inline OClause sorted_clause(OClause c) {
  std::sort(c.begin(), c.end(), [](int a, int b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
    return a > b;
  });
  return c;
}

/// Clauses sorted internally, then the clause list sorted; comparable with ==.
inline OFormula normalize(OFormula f) {
  for (auto& c : f) c = sorted_clause(std::move(c));
  std::sort(f.begin(), f.end(), [](const OClause& a, const OClause& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

inline std::vector<int> variables(const OFormula& f) {
  std::set<int> vs;
  for (const auto& c : f)
    for (int l : c) vs.insert(std::abs(l));
  return {vs.begin(), vs.end()};
}

inline bool satisfies(const OClause& c, std::uint64_t bits) {
  for (int l : c) {
    bool v = (bits >> (std::abs(l) - 1)) & 1u;
    if ((l > 0) == v) return true;
  }
  return false;
}

/// Models over variables 1..n.
inline std::uint64_t count_models(const OFormula& f, int n) {
  std::uint64_t count = 0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    bool ok = true;
    for (const auto& c : f)
      if (!satisfies(c, bits)) { ok = false; break; }
    count += ok;
  }
  return count;
}

inline int max_var(const OFormula& f) {
  int n = 0;
  for (const auto& c : f)
    for (int l : c) n = std::max(n, std::abs(l));
  return n;
}

inline bool unsat(const OFormula& f) { return count_models(f, max_var(f)) == 0; }

inline bool clash(const OClause& a, const OClause& b) {
  for (int x : a)
    for (int y : b)
      if (x == -y) return true;
  return false;
}

inline bool hitting(const OFormula& f) {
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j)
      if (!clash(f[i], f[j])) return false;
  return true;
}

/// perm[v-1] is the image variable of v, neg[v-1] whether it is negated.
struct SignedPerm {
  std::vector<int> perm;
  std::vector<bool> neg;
  int operator()(int lit) const {
    int v = std::abs(lit);
    int img = perm[v - 1] + 1;
    bool flip = neg[v - 1] != (lit < 0);
    return flip ? -img : img;
  }
  OFormula operator()(const OFormula& f) const {
    OFormula g;
    for (const auto& c : f) {
      OClause d;
      for (int l : c) d.push_back((*this)(l));
      g.push_back(d);
    }
    return normalize(g);
  }
};

template <class Fn>
void for_each_signed_perm(int n, Fn&& fn) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      SignedPerm p{perm, std::vector<bool>(n)};
      for (int i = 0; i < n; ++i) p.neg[i] = (mask >> i) & 1u;
      fn(p);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
}

inline SignedPerm random_signed_perm(int n, std::mt19937_64& rng) {
  SignedPerm p{std::vector<int>(n), std::vector<bool>(n)};
  std::iota(p.perm.begin(), p.perm.end(), 0);
  std::shuffle(p.perm.begin(), p.perm.end(), rng);
  for (int i = 0; i < n; ++i) p.neg[i] = rng() & 1u;
  return p;
}

/// Renames var(F) to 1..k in increasing order.
inline OFormula compact(const OFormula& f) {
  auto vs = variables(f);
  std::map<int, int> to;
  for (std::size_t i = 0; i < vs.size(); ++i) to[vs[i]] = static_cast<int>(i) + 1;
  OFormula g;
  for (const auto& c : f) {
    OClause d;
    for (int l : c) d.push_back(l > 0 ? to[l] : -to[-l]);
    g.push_back(d);
  }
  return normalize(g);
}

/// Least image over all signed permutations; exponential, k <= 6 or so.
inline OFormula canonical_form(const OFormula& f) {
  OFormula g = compact(f);
  int k = static_cast<int>(variables(g).size());
  OFormula best;
  bool first = true;
  for_each_signed_perm(k, [&](const SignedPerm& p) {
    OFormula img = p(g);
    if (first || img < best) best = img, first = false;
  });
  return best;
}

inline std::uint64_t automorphism_count(const OFormula& f) {
  OFormula g = compact(f);
  int k = static_cast<int>(variables(g).size());
  std::uint64_t count = 0;
  for_each_signed_perm(k, [&](const SignedPerm& p) { count += p(g) == g; });
  return count;
}

/// Backtracking search for a signed variable bijection mapping a onto b.
inline bool isomorphic(const OFormula& a0, const OFormula& b0) {
  OFormula a = compact(a0), b = compact(b0);
  int k = static_cast<int>(variables(a).size());
  if (a.size() != b.size() || k != static_cast<int>(variables(b).size())) return false;
  std::set<OClause> target(b.begin(), b.end());
  std::vector<int> img(k + 1, 0);
  std::vector<bool> used(k + 1, false);
  auto consistent = [&](int upto) {
    for (const auto& c : a) {
      OClause d;
      bool full = true;
      for (int l : c) {
        if (std::abs(l) > upto) { full = false; break; }
        d.push_back(l > 0 ? img[l] : -img[-l]);
      }
      if (full && !target.count(sorted_clause(d))) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, int v) -> bool {
    if (v > k) return true;
    for (int w = 1; w <= k; ++w) {
      if (used[w]) continue;
      used[w] = true;
      for (int s : {w, -w}) {
        img[v] = s;
        if (consistent(v) && self(self, v + 1)) return true;
      }
      used[w] = false;
    }
    img[v] = 0;
    return false;
  };
  return rec(rec, 1);
}

/// Some clause C over var(F) with S |= C and C with the rest unsatisfiable;
/// tries all 3^k clauses.
inline std::optional<OClause> interpolant(const OFormula& s, const OFormula& rest) {
  OFormula all = s;
  all.insert(all.end(), rest.begin(), rest.end());
  int n = max_var(all);
  std::vector<int> digits(n, 0);
  while (true) {
    OClause c;
    for (int v = 1; v <= n; ++v)
      if (digits[v - 1] == 1) c.push_back(v);
      else if (digits[v - 1] == 2) c.push_back(-v);
    bool entailed = true;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n) && entailed; ++bits) {
      bool sat_s = true;
      for (const auto& d : s)
        if (!satisfies(d, bits)) { sat_s = false; break; }
      if (sat_s && !satisfies(c, bits)) entailed = false;
    }
    if (entailed) {
      OFormula g = rest;
      g.push_back(c);
      if (count_models(g, n) == 0) return c;
    }
    int i = 0;
    while (i < n && digits[i] == 2) digits[i++] = 0;
    if (i == n) break;
    ++digits[i];
  }
  return std::nullopt;
}

/// Some split 1 < |S| < |F| admits an interpolant.
inline bool strongly_irreducible(const OFormula& f) {
  std::size_t m = f.size();
  for (std::uint32_t mask = 1; mask + 1 < (1u << m); ++mask) {
    int bits = __builtin_popcount(mask);
    if (bits < 2 || bits == static_cast<int>(m)) continue;
    OFormula s, rest;
    for (std::size_t i = 0; i < m; ++i) ((mask >> i) & 1u ? s : rest).push_back(f[i]);
    if (interpolant(s, rest)) return false;
  }
  return true;
}

/// Unsatisfiable hitting formula over 1..n grown by splitting clauses on
/// fresh variables, starting from the empty clause.
inline OFormula random_unsat_hitting(int n, int splits, std::mt19937_64& rng) {
  OFormula f{{}};
  for (int t = 0; t < splits; ++t) {
    std::size_t i = rng() % f.size();
    std::vector<int> free;
    for (int v = 1; v <= n; ++v)
      if (std::none_of(f[i].begin(), f[i].end(), [v](int l) { return std::abs(l) == v; }))
        free.push_back(v);
    if (free.empty()) continue;
    int v = free[rng() % free.size()];
    OClause a = f[i], b = f[i];
    a.push_back(v);
    b.push_back(-v);
    f[i] = a;
    f.push_back(b);
  }
  return normalize(f);
}

/// Random hitting formula: a random subset of a random unsatisfiable one.
inline OFormula random_hitting(int n, std::mt19937_64& rng) {
  OFormula full = random_unsat_hitting(n, 1 + static_cast<int>(rng() % 40), rng);
  OFormula f;
  for (const auto& c : full)
    if (rng() % 3 != 0) f.push_back(c);
  return f;
}

}  // namespace oracle
