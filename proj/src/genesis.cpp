#include "hitkit/genesis.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <thread>

#include "hitkit/factor.hpp"
#include "hitkit/hitting.hpp"

namespace hitkit {

using detail::DenseClause;

std::string to_string(FormulaClass c) {
  switch (c) {
    case FormulaClass::uh: return "uh";
    case FormulaClass::ruh: return "ruh";
    case FormulaClass::iuh: return "iuh";
  }
  return "?";
}

FormulaClass parse_formula_class(const std::string& s) {
  std::string t;
  for (char ch : s) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (t == "uh") return FormulaClass::uh;
  if (t == "ruh") return FormulaClass::ruh;
  if (t == "iuh") return FormulaClass::iuh;
  throw std::invalid_argument("unknown formula class: " + s);
}

std::string to_string(PruneReason r) {
  switch (r) {
    case PruneReason::keep: return "keep";
    case PruneReason::too_many_models: return "too-many-models";
    case PruneReason::too_few_models: return "too-few-models";
    case PruneReason::not_hitting: return "not-hitting";
    case PruneReason::has_factor: return "factor";
    case PruneReason::capacity: return "capacity";
  }
  return "?";
}

void GenerationTask::validate() const {
  if (n < 0) throw std::invalid_argument("n must be non-negative");
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  if (n > 12) throw std::invalid_argument("generation supports at most 12 variables");
  if (m > 24) throw std::invalid_argument("generation supports at most 24 clauses");
}

GenerationStats& GenerationStats::operator+=(const GenerationStats& o) {
  nodes += o.nodes;
  for (std::size_t i = 0; i < pruned.size(); ++i) pruned[i] += o.pruned[i];
  orbit_skipped += o.orbit_skipped;
  non_canonical += o.non_canonical;
  sibling_duplicates += o.sibling_duplicates;
  accepted += o.accepted;
  leaves += o.leaves;
  rejected_leaves += o.rejected_leaves;
  complete = complete && o.complete;
  return *this;
}

namespace {

std::int64_t weight(const DenseClause& c, int n) { return std::int64_t{1} << (n - c.size()); }

std::int64_t models_of(const std::vector<DenseClause>& clauses, int n) {
  std::int64_t models = std::int64_t{1} << n;
  for (const auto& c : clauses) models -= weight(c, n);
  return models;
}

bool last_hits_others(const std::vector<DenseClause>& clauses) {
  const auto& last = clauses.back();
  for (std::size_t i = 0; i + 1 < clauses.size(); ++i)
    if (!clauses[i].clashes(last)) return false;
  return true;
}

// Some S with the last clause in S, 1 < |S| < |F| (or S = F while |F| < m), whose
// clause weights sum to the weight of its intersection. Subsets of hitting formulas
// are hitting, so that equality is exactly equivalence with the intersection.
bool has_factor_with_last(const std::vector<DenseClause>& clauses, int n, int m) {
  const int total = static_cast<int>(clauses.size());
  if (total < 2) return false;
  const int k = total - 1;
  const auto& last = clauses.back();
  thread_local std::vector<std::int64_t> sum;
  thread_local std::vector<DenseClause> meet;
  const std::size_t subsets = std::size_t{1} << k;
  sum.resize(subsets);
  meet.resize(subsets);
  sum[0] = weight(last, n);
  meet[0] = last;
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    const int low = std::countr_zero(mask);
    const std::size_t rest = mask & (mask - 1);
    const auto& c = clauses[static_cast<std::size_t>(low)];
    sum[mask] = sum[rest] + weight(c, n);
    meet[mask] = DenseClause{meet[rest].pos & c.pos, meet[rest].neg & c.neg};
    const int size = std::popcount(mask) + 1;
    if (size == total && total >= m) continue;
    if (sum[mask] == weight(meet[mask], n)) return true;
  }
  return false;
}

bool over_capacity(const std::vector<DenseClause>& clauses, const GenerationTask& task) {
  const int remaining = task.m - static_cast<int>(clauses.size());
  if (task.cls == FormulaClass::uh) {
    std::uint64_t used = 0;
    for (const auto& c : clauses) used |= c.pos | c.neg;
    const int missing = task.n - std::popcount(used);
    return missing > 0 && static_cast<long>(missing) > static_cast<long>(remaining) * task.n;
  }
  for (int v = 0; v < task.n; ++v) {
    const std::uint64_t bit = std::uint64_t{1} << v;
    int pos = 0, neg = 0;
    for (const auto& c : clauses) {
      pos += (c.pos & bit) != 0;
      neg += (c.neg & bit) != 0;
    }
    // Each future clause holds at most one literal of v.
    if (std::max(0, 2 - pos) + std::max(0, 2 - neg) > remaining) return true;
  }
  return false;
}

PruneReason prune_with(const std::vector<DenseClause>& clauses, std::int64_t models,
                       const GenerationTask& task) {
  const int n = task.n;
  const int placed = static_cast<int>(clauses.size());
  const std::int64_t remaining = task.m - placed;
  if (placed > 0) {
    const int last_size = clauses.back().size();
    if (models > remaining * (std::int64_t{1} << (n - last_size))) return PruneReason::too_many_models;
  }
  if (models < remaining) return PruneReason::too_few_models;
  if (placed > 1 && !last_hits_others(clauses)) return PruneReason::not_hitting;
  if (task.cls == FormulaClass::iuh && has_factor_with_last(clauses, n, task.m)) return PruneReason::has_factor;
  if (task.capacity_prune && over_capacity(clauses, task)) return PruneReason::capacity;
  return PruneReason::keep;
}

Formula to_formula(const std::vector<DenseClause>& clauses, int n) {
  std::vector<Var> vars;
  for (int v = 0; v < n; ++v) vars.push_back(static_cast<Var>(v + 1));
  detail::DenseIndex index(vars);
  std::vector<Clause> out;
  for (const auto& c : clauses) out.push_back(index.sparse(c));
  return Formula(std::move(out));
}

// All clauses over n variables in (size, lexicographic) order.
class ClauseTable {
public:
  explicit ClauseTable(int n) : n_(n) {
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= 3;
    std::vector<std::pair<Clause, DenseClause>> all;
    all.reserve(total);
    std::vector<Var> vars;
    for (int v = 0; v < n; ++v) vars.push_back(static_cast<Var>(v + 1));
    detail::DenseIndex index(vars);
    for (std::size_t id = 0; id < total; ++id) {
      DenseClause d;
      std::size_t rest = id;
      for (int v = 0; v < n; ++v, rest /= 3) {
        if (rest % 3 == 1) d.pos |= std::uint64_t{1} << v;
        if (rest % 3 == 2) d.neg |= std::uint64_t{1} << v;
      }
      all.emplace_back(index.sparse(d), d);
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    clauses_.reserve(total);
    index_of_id_.assign(total, 0);
    first_of_size_.assign(static_cast<std::size_t>(n) + 2, static_cast<int>(total));
    for (std::size_t i = 0; i < total; ++i) {
      const DenseClause& d = all[i].second;
      clauses_.push_back(d);
      index_of_id_[id(d)] = static_cast<int>(i);
      auto& first = first_of_size_[static_cast<std::size_t>(d.size())];
      first = std::min(first, static_cast<int>(i));
    }
    for (int s = n; s >= 0; --s)
      first_of_size_[static_cast<std::size_t>(s)] =
          std::min(first_of_size_[static_cast<std::size_t>(s)], first_of_size_[static_cast<std::size_t>(s) + 1]);
  }

  int size() const { return static_cast<int>(clauses_.size()); }
  const DenseClause& operator[](int i) const { return clauses_[static_cast<std::size_t>(i)]; }
  int first_of_size(int s) const { return first_of_size_[static_cast<std::size_t>(s)]; }
  int index_of(const DenseClause& d) const { return index_of_id_[id(d)]; }

  DenseClause apply(const std::vector<int>& literal_map, const DenseClause& c) const {
    DenseClause out;
    std::uint64_t bits = c.pos | c.neg;
    while (bits) {
      const int v = std::countr_zero(bits);
      bits &= bits - 1;
      const int lit = 2 * v + ((c.neg >> v) & 1 ? 1 : 0);
      const int img = literal_map[static_cast<std::size_t>(lit)];
      (img & 1 ? out.neg : out.pos) |= std::uint64_t{1} << (img / 2);
    }
    return out;
  }

private:
  std::size_t id(const DenseClause& d) const {
    std::size_t r = 0, p = 1;
    for (int v = 0; v < n_; ++v, p *= 3) {
      if ((d.pos >> v) & 1) r += p;
      if ((d.neg >> v) & 1) r += 2 * p;
    }
    return r;
  }

  int n_;
  std::vector<DenseClause> clauses_;
  std::vector<int> index_of_id_;
  std::vector<int> first_of_size_;
};

struct Node {
  std::vector<DenseClause> clauses;
  std::int64_t models = 0;
  std::vector<std::vector<int>> generators;
};

class Generator {
public:
  explicit Generator(const GenerationTask& task) : task_(task), table_(task.n) {
    start_ = std::chrono::steady_clock::now();
  }

  GenerationResult run() {
    Node root;
    root.models = std::int64_t{1} << task_.n;
    // Unused variables: all flips and adjacent transpositions.
    root.generators = label_dense({}, task_.n).literal_generators;

    GenerationResult result;
    if (task_.jobs <= 1 || task_.m <= 2) {
      Worker w(*this);
      w.expand(root);
      result.formulas = std::move(w.out);
      result.stats = w.stats;
    } else {
      // Split at depth 2 and hand the subtrees to workers.
      Worker seed(*this);
      std::vector<Node> frontier;
      seed.collect = &frontier;
      seed.collect_depth = 2;
      seed.expand(root);
      result.stats = seed.stats;
      result.formulas = std::move(seed.out);
      std::atomic<std::size_t> next{0};
      std::mutex merge;
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < task_.jobs; ++t) {
        pool.emplace_back([&] {
          Worker w(*this);
          for (std::size_t i = next++; i < frontier.size(); i = next++) w.expand(frontier[i]);
          std::lock_guard lock(merge);
          result.stats += w.stats;
          for (auto& f : w.out) result.formulas.push_back(std::move(f));
        });
      }
      for (auto& th : pool) th.join();
    }
    if (stopped_) result.stats.complete = false;
    std::sort(result.formulas.begin(), result.formulas.end(),
              [](const auto& a, const auto& b) { return a.key < b.key; });
    result.stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return result;
  }

private:
  struct Worker {
    explicit Worker(Generator& g) : gen(g) {}

    void expand(const Node& parent) {
      const auto& task = gen.task_;
      const auto& table = gen.table_;
      const int n = task.n;
      const int placed = static_cast<int>(parent.clauses.size());
      if (collect && placed == collect_depth) {
        collect->push_back(parent);
        return;
      }
      const int min_size = placed == 0 ? 0 : parent.clauses.back().size();

      // Rules 1-3 are isomorphism invariant, so filter before forming orbits.
      std::vector<int> survivors;
      std::vector<DenseClause> child = parent.clauses;
      child.emplace_back();
      for (int i = table.first_of_size(min_size); i < table.size(); ++i) {
        if (gen.out_of_budget()) return;
        const DenseClause& c = table[i];
        if (std::find(parent.clauses.begin(), parent.clauses.end(), c) != parent.clauses.end()) continue;
        ++stats.nodes;
        child.back() = c;
        const std::int64_t models = parent.models - weight(c, n);
        PruneReason r = prune_with(child, models, task);
        if (r != PruneReason::keep) {
          ++stats.pruned[static_cast<std::size_t>(r)];
          continue;
        }
        survivors.push_back(i);
      }
      survivors = orbit_representatives_of(survivors, parent.generators);

      std::set<CanonicalKey> seen;
      for (int i : survivors) {
        if (gen.out_of_budget()) return;
        const DenseClause& c = table[i];
        child.back() = c;
        DenseLabeling lab = label_dense(child, n);
        // Canonical deletion: the largest clause earliest in the canonical order.
        const int last = placed;
        int chosen = last;
        for (int j = 0; j <= placed; ++j) {
          if (child[static_cast<std::size_t>(j)].size() != c.size()) continue;
          if (lab.clause_position[static_cast<std::size_t>(j)] < lab.clause_position[static_cast<std::size_t>(chosen)])
            chosen = j;
        }
        if (lab.clause_orbit[static_cast<std::size_t>(chosen)] != lab.clause_orbit[static_cast<std::size_t>(last)]) {
          ++stats.non_canonical;
          continue;
        }
        if (!seen.insert(lab.key).second) {
          ++stats.sibling_duplicates;
          continue;
        }
        ++stats.accepted;
        if (placed + 1 == task.m) {
          ++stats.leaves;
          if (!leaf_ok(child)) {
            ++stats.rejected_leaves;
            continue;
          }
          out.push_back(GeneratedFormula{to_formula(child, n), std::move(lab.key)});
          continue;
        }
        Node next;
        next.clauses = child;
        next.models = parent.models - weight(c, n);
        next.generators = std::move(lab.literal_generators);
        expand(next);
      }
    }

    std::vector<int> orbit_representatives_of(const std::vector<int>& candidates,
                                              const std::vector<std::vector<int>>& gens) {
      if (gens.empty() || candidates.size() < 2) return candidates;
      const auto& table = gen.table_;
      // Union-find over candidate slots; images of candidates are candidates.
      std::vector<int> slot(static_cast<std::size_t>(table.size()), -1);
      for (std::size_t s = 0; s < candidates.size(); ++s) slot[static_cast<std::size_t>(candidates[s])] = static_cast<int>(s);
      std::vector<int> parent(candidates.size());
      for (std::size_t s = 0; s < parent.size(); ++s) parent[s] = static_cast<int>(s);
      auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
          parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
          x = parent[static_cast<std::size_t>(x)];
        }
        return x;
      };
      for (const auto& g : gens) {
        for (std::size_t s = 0; s < candidates.size(); ++s) {
          const int img = slot[static_cast<std::size_t>(table.index_of(table.apply(g, table[candidates[s]])))];
          if (img < 0) throw std::logic_error("automorphism image left the candidate set");
          int a = find(static_cast<int>(s)), b = find(img);
          if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
        }
      }
      std::vector<int> reps;
      for (std::size_t s = 0; s < candidates.size(); ++s) {
        if (find(static_cast<int>(s)) == static_cast<int>(s))
          reps.push_back(candidates[s]);
        else
          ++stats.orbit_skipped;
      }
      return reps;
    }

    bool leaf_ok(const std::vector<DenseClause>& clauses) const {
      const int n = gen.task_.n;
      for (int v = 0; v < n; ++v) {
        const std::uint64_t bit = std::uint64_t{1} << v;
        int pos = 0, neg = 0;
        for (const auto& c : clauses) {
          pos += (c.pos & bit) != 0;
          neg += (c.neg & bit) != 0;
        }
        if (pos + neg == 0) return false;
        if (gen.task_.cls != FormulaClass::uh && (pos < 2 || neg < 2)) return false;
      }
      return true;
    }

    Generator& gen;
    GenerationStats stats;
    std::vector<GeneratedFormula> out;
    std::vector<Node>* collect = nullptr;
    int collect_depth = -1;
  };

  bool out_of_budget() {
    if (stopped_) return true;
    const auto count = ++ticks_;
    if (task_.limits.max_nodes && count > task_.limits.max_nodes) stopped_ = true;
    if (task_.limits.max_seconds > 0 && count % 1024 == 0) {
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
      if (elapsed > task_.limits.max_seconds) stopped_ = true;
    }
    return stopped_;
  }

  const GenerationTask& task_;
  ClauseTable table_;
  std::chrono::steady_clock::time_point start_;
  std::atomic<std::uint64_t> ticks_{0};
  std::atomic<bool> stopped_{false};
};

}  // namespace

PruneReason prune(const PartialFormula& node, const GenerationTask& task) {
  return prune_with(node.clauses, models_of(node.clauses, task.n), task);
}

GenerationResult generate(const GenerationTask& task) {
  task.validate();
  return Generator(task).run();
}

bool in_class(const Formula& f, FormulaClass cls, int n, int m) {
  if (static_cast<int>(f.size()) != m || static_cast<int>(f.num_vars()) != n) return false;
  if (!is_hitting(f) || !is_unsat_hitting(f)) return false;
  if (cls == FormulaClass::uh) return true;
  if (!is_regular(f)) return false;
  return cls == FormulaClass::ruh || is_irreducible(f);
}

namespace {

// The clause whose falsifying assignments are the ones no clause falsifies, if
// they form a subcube.
std::optional<DenseClause> completing_clause(const std::vector<DenseClause>& clauses, int n) {
  std::uint64_t and_bits = ~std::uint64_t{0}, or_bits = 0, count = 0;
  const std::uint64_t full = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a) {
    bool falsified = false;
    for (const auto& c : clauses)
      if (c.falsified_by(a)) { falsified = true; break; }
    if (falsified) continue;
    and_bits &= a;
    or_bits |= a;
    ++count;
  }
  if (count == 0) return std::nullopt;
  // fixed coordinates: 1 in all (and_bits) or 0 in all (~or_bits)
  const std::uint64_t fixed_true = and_bits & full, fixed_false = ~or_bits & full;
  const int free = n - std::popcount(fixed_true | fixed_false);
  if (count != (std::uint64_t{1} << free)) return std::nullopt;
  // falsified iff every fixed coordinate takes its value
  return DenseClause{fixed_false, fixed_true};
}

}  // namespace

GenerationResult generate_crosscheck(const GenerationTask& task) {
  task.validate();
  const auto start = std::chrono::steady_clock::now();
  ClauseTable table(task.n);
  GenerationResult result;
  std::uint64_t visited = 0;
  bool stopped = false;

  // Level by level: every hitting clause set with j clauses, one per isomorphism
  // class, extended by clauses at least as large as its largest one.
  std::vector<std::vector<DenseClause>> level{{}};
  for (int depth = 0; depth + 1 < task.m && !stopped; ++depth) {
    std::map<CanonicalKey, std::vector<DenseClause>> next;
    for (const auto& node : level) {
      const int from = node.empty() ? 0 : table.first_of_size(node.back().size());
      for (int i = from; i < table.size() && !stopped; ++i) {
        if (task.limits.max_nodes && ++visited > task.limits.max_nodes) {
          stopped = true;
          break;
        }
        ++result.stats.nodes;
        const DenseClause& c = table[i];
        if (std::find(node.begin(), node.end(), c) != node.end()) continue;
        auto child = node;
        child.push_back(c);
        if (!last_hits_others(child)) {
          ++result.stats.pruned[static_cast<std::size_t>(PruneReason::not_hitting)];
          continue;
        }
        CanonicalKey key = canonical_key(to_formula(child, task.n));
        if (!next.emplace(std::move(key), child).second) ++result.stats.sibling_duplicates;
      }
    }
    level.clear();
    for (auto& [key, clauses] : next) level.push_back(std::move(clauses));
  }

  if (!stopped) {
    // The last clause of an unsatisfiable hitting formula is forced: its
    // falsifying assignments are exactly the ones nothing else falsifies.
    std::set<CanonicalKey> seen;
    for (auto clauses : level) {
      auto last = completing_clause(clauses, task.n);
      if (!last) continue;
      if (!clauses.empty() && last->size() < clauses.back().size()) continue;
      clauses.push_back(*last);
      ++result.stats.leaves;
      Formula f = to_formula(clauses, task.n);
      if (static_cast<int>(f.size()) != task.m) continue;
      if (!in_class(f, task.cls, task.n, task.m)) {
        ++result.stats.rejected_leaves;
        continue;
      }
      CanonicalKey key = canonical_key(f);
      if (seen.insert(key).second) result.formulas.push_back(GeneratedFormula{std::move(f), std::move(key)});
    }
  }
  result.stats.complete = !stopped;
  result.stats.accepted = result.formulas.size();
  std::sort(result.formulas.begin(), result.formulas.end(),
            [](const auto& a, const auto& b) { return a.key < b.key; });
  result.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace hitkit
