#include "hitkit/refutation.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "hitkit/detail/dense.hpp"

namespace hitkit {

std::size_t RefutationDag::add_axiom(Clause c) {
  steps_.push_back(ProofStep::axiom(std::move(c)));
  return steps_.size() - 1;
}

std::size_t RefutationDag::add_resolvent(std::size_t left, std::size_t right) {
  const Clause& a = steps_.at(left).clause;
  const Clause& b = steps_.at(right).clause;
  auto pivot = resolution_pivot(a, b);
  if (!pivot) throw NotResolvable(a.to_string() + " and " + b.to_string() + " do not resolve");
  return add_resolvent(left, right, *pivot, resolve(a, b));
}

std::size_t RefutationDag::add_resolvent(std::size_t left, std::size_t right, Var pivot, Clause c) {
  steps_.push_back(ProofStep::resolvent(left, right, pivot, std::move(c)));
  return steps_.size() - 1;
}

std::vector<std::size_t> RefutationDag::out_degrees() const {
  std::vector<std::size_t> deg(steps_.size(), 0);
  for (const auto& s : steps_)
    if (!s.is_axiom()) {
      ++deg[s.left];
      ++deg[s.right];
    }
  return deg;
}

std::vector<Clause> RefutationDag::axioms() const {
  std::vector<Clause> out;
  for (const auto& s : steps_)
    if (s.is_axiom()) out.push_back(s.clause);
  return out;
}

std::size_t RefutationDag::axiom_count() const {
  return static_cast<std::size_t>(
      std::count_if(steps_.begin(), steps_.end(), [](const ProofStep& s) { return s.is_axiom(); }));
}

RefutationDag RefutationDag::prune_unused() const {
  if (steps_.empty()) return {};
  std::vector<bool> keep(steps_.size(), false);
  keep.back() = true;
  for (std::size_t i = steps_.size(); i-- > 0;) {
    if (!keep[i] || steps_[i].is_axiom()) continue;
    keep[steps_[i].left] = keep[steps_[i].right] = true;
  }
  std::vector<std::size_t> remap(steps_.size(), 0);
  std::vector<ProofStep> out;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (!keep[i]) continue;
    ProofStep s = steps_[i];
    if (!s.is_axiom()) {
      s.left = remap[s.left];
      s.right = remap[s.right];
    }
    remap[i] = out.size();
    out.push_back(std::move(s));
  }
  return RefutationDag(std::move(out));
}

namespace {

ValidationResult fail(std::size_t step, std::string msg) {
  return ValidationResult{false, step, "step " + std::to_string(step + 1) + ": " + std::move(msg)};
}

}  // namespace

ValidationResult validate_derivation(const Formula& f, const RefutationDag& proof,
                                     const std::optional<Clause>& target) {
  if (proof.length() == 0) return ValidationResult{false, std::nullopt, "empty proof"};
  for (std::size_t i = 0; i < proof.length(); ++i) {
    const ProofStep& s = proof[i];
    if (s.is_axiom()) {
      if (!f.contains(s.clause)) return fail(i, "axiom " + s.clause.to_string() + " not in formula");
      continue;
    }
    if (s.left >= i || s.right >= i) return fail(i, "premise index not smaller than step index");
    if (s.left == s.right) return fail(i, "both premises are the same step");
    const Clause& a = proof[s.left].clause;
    const Clause& b = proof[s.right].clause;
    auto pivot = resolution_pivot(a, b);
    if (!pivot)
      return fail(i, a.to_string() + " and " + b.to_string() + " do not clash on exactly one literal");
    if (*pivot != s.pivot)
      return fail(i, "pivot " + std::to_string(s.pivot) + " but premises clash on " +
                         std::to_string(*pivot));
    Clause expected = resolve(a, b);
    if (expected != s.clause)
      return fail(i, "clause " + s.clause.to_string() + " is not the resolvent " + expected.to_string());
  }
  if (target && proof.back().clause != *target)
    return fail(proof.length() - 1, "derives " + proof.back().clause.to_string() + ", expected " +
                                        target->to_string());
  return ValidationResult{true, std::nullopt, "ok"};
}

ValidationResult validate_refutation(const Formula& f, const RefutationDag& proof) {
  return validate_derivation(f, proof, Clause{});
}

bool is_read_once(const RefutationDag& proof) {
  auto deg = proof.out_degrees();
  return std::all_of(deg.begin(), deg.end(), [](std::size_t d) { return d <= 1; });
}

// ---- text format ----------------------------------------------------------

RefutationDag read_proof(std::istream& in) {
  std::vector<ProofStep> steps;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#' || tag == "c") continue;
    auto where = [&] { return "line " + std::to_string(lineno) + ": "; };
    ProofStep step;
    if (tag == "A") {
      step.kind = ProofStep::Kind::axiom;
    } else if (tag == "R") {
      long i, j, p;
      if (!(ls >> i >> j >> p)) throw ProofFormatError(where() + "expected 'R i j pivot'");
      if (i < 1 || j < 1 || p < 1) throw ProofFormatError(where() + "indices and pivot start at 1");
      step.kind = ProofStep::Kind::resolvent;
      step.left = static_cast<std::size_t>(i - 1);
      step.right = static_cast<std::size_t>(j - 1);
      step.pivot = static_cast<Var>(p);
    } else {
      throw ProofFormatError(where() + "unknown step tag '" + tag + "'");
    }
    std::vector<int> lits;
    long x;
    bool terminated = false;
    while (ls >> x) {
      if (x == 0) {
        terminated = true;
        break;
      }
      lits.push_back(static_cast<int>(x));
    }
    if (!terminated) throw ProofFormatError(where() + "clause not terminated by 0");
    try {
      step.clause = Clause::from_dimacs(lits);
    } catch (const std::invalid_argument& e) {
      throw ProofFormatError(where() + e.what());
    }
    steps.push_back(std::move(step));
  }
  return RefutationDag(std::move(steps));
}

RefutationDag read_proof_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProofFormatError("cannot open " + path);
  return read_proof(in);
}

void write_proof(std::ostream& out, const RefutationDag& proof) {
  for (const auto& s : proof.steps()) {
    if (s.is_axiom())
      out << "A ";
    else
      out << "R " << s.left + 1 << ' ' << s.right + 1 << ' ' << s.pivot << ' ';
    for (int x : s.clause.to_dimacs()) out << x << ' ';
    out << "0\n";
  }
}

std::string to_proof_string(const RefutationDag& proof) {
  std::ostringstream os;
  write_proof(os, proof);
  return os.str();
}

// ---- brute-force shortest refutation --------------------------------------

namespace {

constexpr std::size_t kMaxOracleVars = 6;  // 3^6 = 729 clause ids
constexpr std::size_t kWords = 12;

using ClauseSet = std::array<std::uint64_t, kWords>;

struct ClauseSetHash {
  std::size_t operator()(const ClauseSet& s) const {
    std::size_t h = 1469598103934665603ull;
    for (auto w : s) h = (h ^ w) * 1099511628211ull;
    return h;
  }
};

class Oracle {
public:
  Oracle(const Formula& f, OracleBudget budget) : index_(detail::DenseIndex::of(f)), budget_(budget) {
    if (index_.size() > kMaxOracleVars)
      throw LimitExceeded("shortest-refutation oracle supports at most 6 variables");
    pow3_.resize(index_.size() + 1, 1);
    for (std::size_t i = 1; i <= index_.size(); ++i) pow3_[i] = pow3_[i - 1] * 3;
    for (const auto& c : f) {
      auto d = index_.dense(c);
      axioms_.push_back(d);
      axiom_ids_.push_back(id(d));
    }
    mu_ = is_minimally_unsatisfiable(f);
  }

  std::optional<ShortestRefutation> run(std::size_t cap) {
    for (std::size_t i = 0; i < axioms_.size(); ++i)
      if (axioms_[i].pos == 0 && axioms_[i].neg == 0) {
        RefutationDag p;
        p.add_axiom(Clause{});
        return ShortestRefutation{1, p, 1};
      }
    for (bound_ = 1; bound_ <= cap; ++bound_) {
      seen_.clear();
      in_proof_.fill(0);
      used_axiom_.assign(axioms_.size(), false);
      derived_.clear();
      if (dfs(0)) return ShortestRefutation{bound_, build_proof(), states_};
    }
    return std::nullopt;
  }

private:
  struct Derived {
    detail::DenseClause clause;
    // premise references: >= 0 index into derived_, < 0 means axiom -(k+1)
    int left, right;
    std::size_t pivot;
  };

  std::size_t id(const detail::DenseClause& c) const {
    std::size_t r = 0;
    for (std::size_t i = 0; i < index_.size(); ++i) {
      std::uint64_t bit = std::uint64_t{1} << i;
      r += pow3_[i] * ((c.pos & bit) ? 1 : (c.neg & bit) ? 2 : 0);
    }
    return r;
  }
  bool has(std::size_t i) const { return (in_proof_[i >> 6] >> (i & 63)) & 1; }
  void flip(std::size_t i) { in_proof_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  std::size_t cost() const {
    return derived_.size() +
           static_cast<std::size_t>(std::count(used_axiom_.begin(), used_axiom_.end(), true));
  }
  std::size_t lower_bound_remaining() const {
    std::size_t lb = 1;
    if (mu_) lb += static_cast<std::size_t>(std::count(used_axiom_.begin(), used_axiom_.end(), false));
    return lb;
  }

  // Candidate premises: all axioms plus derived clauses, encoded as in Derived.
  bool dfs(std::size_t depth) {
    if (++states_ > budget_.max_states) throw LimitExceeded("oracle state budget exhausted");
    if (cost() + lower_bound_remaining() > bound_) return false;
    if (!seen_.insert(in_proof_).second) return false;

    const int na = static_cast<int>(axioms_.size());
    const int total = na + static_cast<int>(derived_.size());
    auto clause_of = [&](int r) -> const detail::DenseClause& {
      return r < na ? axioms_[static_cast<std::size_t>(r)] : derived_[static_cast<std::size_t>(r - na)].clause;
    };
    for (int a = 0; a < total; ++a) {
      for (int b = a + 1; b < total; ++b) {
        const auto& ca = clause_of(a);
        const auto& cb = clause_of(b);
        std::uint64_t clash = (ca.pos & cb.neg) | (ca.neg & cb.pos);
        if (std::popcount(clash) != 1) continue;
        detail::DenseClause r{(ca.pos | cb.pos) & ~clash, (ca.neg | cb.neg) & ~clash};
        std::size_t rid = id(r);
        if (has(rid)) continue;
        if (std::find(axiom_ids_.begin(), axiom_ids_.end(), rid) != axiom_ids_.end()) continue;

        bool newa = a < na && !used_axiom_[static_cast<std::size_t>(a)];
        bool newb = b < na && !used_axiom_[static_cast<std::size_t>(b)];
        auto mark = [&](int x, bool on) {
          if (x < na && (on ? !used_axiom_[x] : true)) {
            if (on) {
              used_axiom_[static_cast<std::size_t>(x)] = true;
              flip(axiom_ids_[static_cast<std::size_t>(x)]);
            } else {
              used_axiom_[static_cast<std::size_t>(x)] = false;
              flip(axiom_ids_[static_cast<std::size_t>(x)]);
            }
          }
        };
        if (newa) mark(a, true);
        if (newb) mark(b, true);
        flip(rid);
        derived_.push_back(Derived{r, a < na ? -(a + 1) : a - na, b < na ? -(b + 1) : b - na,
                                   static_cast<std::size_t>(std::countr_zero(clash))});
        bool found = (r.pos == 0 && r.neg == 0) ? cost() <= bound_ : dfs(depth + 1);
        if (found) return true;
        derived_.pop_back();
        flip(rid);
        if (newb) mark(b, false);
        if (newa) mark(a, false);
      }
    }
    return false;
  }

  RefutationDag build_proof() const {
    RefutationDag p;
    std::vector<std::size_t> axiom_step(axioms_.size(), 0);
    for (std::size_t i = 0; i < axioms_.size(); ++i)
      if (used_axiom_[i]) axiom_step[i] = p.add_axiom(index_.sparse(axioms_[i]));
    std::vector<std::size_t> derived_step;
    auto step_of = [&](int ref) {
      return ref < 0 ? axiom_step[static_cast<std::size_t>(-ref - 1)] : derived_step[static_cast<std::size_t>(ref)];
    };
    for (const auto& d : derived_) {
      derived_step.push_back(p.add_resolvent(step_of(d.left), step_of(d.right),
                                             index_.vars()[d.pivot], index_.sparse(d.clause)));
    }
    return p;
  }

  detail::DenseIndex index_;
  OracleBudget budget_;
  std::vector<std::size_t> pow3_;
  std::vector<detail::DenseClause> axioms_;
  std::vector<std::size_t> axiom_ids_;
  bool mu_ = false;

  std::size_t bound_ = 0;
  std::uint64_t states_ = 0;
  ClauseSet in_proof_{};
  std::vector<bool> used_axiom_;
  std::vector<Derived> derived_;
  std::unordered_set<ClauseSet, ClauseSetHash> seen_;
};

}  // namespace

std::optional<ShortestRefutation> shortest_refutation_bruteforce(const Formula& f, std::size_t cap,
                                                                 OracleBudget budget) {
  Oracle oracle(f, budget);
  return oracle.run(cap);
}

}  // namespace hitkit
