#include "hitkit/encode.hpp"

#include <algorithm>
#include <chrono>

#include "hitkit/factor.hpp"

namespace hitkit {

namespace {

std::string name2(const char* base, long a, long b) {
  return std::string(base) + "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

void exactly_one(Encoding& e, const std::vector<int>& xs, const std::string& tag) {
  e.cnf.add(xs);
  if (e.options.cardinality == Cardinality::pairwise || xs.size() <= 4) {
    for (std::size_t a = 0; a < xs.size(); ++a)
      for (std::size_t b = a + 1; b < xs.size(); ++b) e.cnf.add({-xs[a], -xs[b]});
    return;
  }
  // Sequential counter: r_k = some of x_1..x_k is true.
  std::vector<int> r;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) r.push_back(e.named_var("seq[" + tag + "]" + std::to_string(k + 1)));
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    e.cnf.add({-xs[k], r[k]});
    if (k > 0) {
      e.cnf.add({-r[k - 1], r[k]});
      e.cnf.add({-xs[k], -r[k - 1]});
    }
  }
  e.cnf.add({-xs.back(), -r.back()});
}

}  // namespace

nlohmann::json Encoding::varmap_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, index] : varmap) j[name] = index;
  return j;
}

int Encoding::named_var(const std::string& name) {
  int v = cnf.new_var();
  if (!varmap.emplace(name, v).second) throw std::logic_error("duplicate encoding variable " + name);
  return v;
}

std::size_t Encoding::slot(int i, Var v) const {
  auto it = std::lower_bound(vars.begin(), vars.end(), v);
  if (it == vars.end() || *it != v) throw std::out_of_range("variable not in the formula");
  return static_cast<std::size_t>(i - 1) * vars.size() + static_cast<std::size_t>(it - vars.begin());
}

void Encoding::init_tables() {
  const std::size_t k = vars.size();
  const std::size_t ss = static_cast<std::size_t>(s);
  pos_.assign(ss * k, 0);
  neg_.assign(ss * k, 0);
  pivot_.assign(ss * k, 0);
  lpos_.assign(ss * ss, 0);
  lneg_.assign(ss * ss, 0);
  arc_.assign(ss * ss, 0);
  for (int i = 1; i <= s; ++i) {
    for (Var v : vars) {
      pos_[slot(i, v)] = named_var(name2("pos", i, v));
      neg_[slot(i, v)] = named_var(name2("neg", i, v));
    }
  }
  for (int j = m() + 1; j <= s; ++j) {
    for (int i = 1; i < j; ++i) {
      arc_[pair(i, j)] = named_var(name2("arc", i, j));
      lpos_[pair(i, j)] = named_var(name2("lpos", i, j));
      lneg_[pair(i, j)] = named_var(name2("lneg", i, j));
    }
    for (Var v : vars) pivot_[slot(j, v)] = named_var(name2("pivot", j, v));
  }
}

Encoding encode(const Formula& f, int s, const EncodeOptions& opts, const SymmetryInfo* symmetry) {
  const int m = static_cast<int>(f.size());
  if (s <= m) throw EncodingError("refutation length must exceed the number of clauses");
  if (f.contains(Clause{})) throw EncodingError("formula contains the empty clause");
  Encoding e;
  e.formula = f;
  e.s = s;
  e.options = opts;
  e.vars = f.vars();
  e.init_tables();
  auto& cnf = e.cnf;

  for (int i = 1; i <= m; ++i) {
    const Clause& c = f[static_cast<std::size_t>(i - 1)];
    for (Var v : e.vars) {
      cnf.add({c.contains(Literal(v, true)) ? e.pos(i, v) : -e.pos(i, v)});
      cnf.add({c.contains(Literal(v, false)) ? e.neg(i, v) : -e.neg(i, v)});
    }
  }
  for (int i = m + 1; i <= s; ++i)
    for (Var v : e.vars) cnf.add({-e.pos(i, v), -e.neg(i, v)});

  for (int j = m + 1; j <= s; ++j) {
    std::vector<int> lp, ln, pv;
    for (int i = 1; i < j; ++i) {
      cnf.add({-e.lpos(i, j), e.arc(i, j)});
      cnf.add({-e.lneg(i, j), e.arc(i, j)});
      cnf.add({-e.arc(i, j), e.lpos(i, j), e.lneg(i, j)});
      cnf.add({-e.lpos(i, j), -e.lneg(i, j)});
      lp.push_back(e.lpos(i, j));
      ln.push_back(e.lneg(i, j));
    }
    exactly_one(e, lp, name2("lpos", j, 0));
    exactly_one(e, ln, name2("lneg", j, 0));
    for (Var v : e.vars) pv.push_back(e.pivot(j, v));
    exactly_one(e, pv, name2("pivot", j, 0));

    for (Var v : e.vars) {
      // Literal content of the two premises.
      const int pp = e.named_var(name2("Pp", j, v)), pn = e.named_var(name2("Pn", j, v));
      const int np = e.named_var(name2("Np", j, v)), nn = e.named_var(name2("Nn", j, v));
      for (int i = 1; i < j; ++i) {
        const int a = e.lpos(i, j), b = e.lneg(i, j);
        const int x = e.pos(i, v), y = e.neg(i, v);
        cnf.add({-a, -x, pp});
        cnf.add({-a, x, -pp});
        cnf.add({-a, -y, pn});
        cnf.add({-a, y, -pn});
        cnf.add({-b, -x, np});
        cnf.add({-b, x, -np});
        cnf.add({-b, -y, nn});
        cnf.add({-b, y, -nn});
      }
      const int piv = e.pivot(j, v);
      cnf.add({-piv, pp});
      cnf.add({-piv, nn});
      const int cp = e.pos(j, v), cn = e.neg(j, v);
      cnf.add({-cp, pp, np});
      cnf.add({-cp, -piv});
      cnf.add({-pp, piv, cp});
      cnf.add({-np, piv, cp});
      cnf.add({-cn, pn, nn});
      cnf.add({-cn, -piv});
      cnf.add({-pn, piv, cn});
      cnf.add({-nn, piv, cn});
    }
  }
  for (Var v : e.vars) {
    cnf.add({-e.pos(s, v)});
    cnf.add({-e.neg(s, v)});
  }

  if (opts.require_used) {
    for (int i = 1; i < s; ++i) {
      std::vector<int> out;
      for (int j = std::max(i, m) + 1; j <= s; ++j) out.push_back(e.arc(i, j));
      cnf.add(out);
    }
  }
  if (opts.reuse || opts.reuse_all_positions) add_reuse_constraint(e, opts.reuse_all_positions);
  if (opts.symmetry) {
    if (symmetry) {
      add_symmetry_breaking(e, *symmetry);
    } else {
      add_symmetry_breaking(e, automorphisms(f));
    }
  }

  if (opts.topo) {
    // ge(j,i): the larger premise of j is at least i.
    std::map<std::pair<int, int>, int> ge;
    auto ge_var = [&](int j, int i) { return i >= j ? 0 : ge.at({j, i}); };
    for (int j = m + 1; j <= s; ++j) {
      for (int i = j - 1; i >= 1; --i) {
        const int g = e.named_var(name2("maxge", j, i));
        ge[{j, i}] = g;
        const int above = ge_var(j, i + 1);
        cnf.add({-e.arc(i, j), g});
        if (above) {
          cnf.add({-above, g});
          cnf.add({-g, e.arc(i, j), above});
        } else {
          cnf.add({-g, e.arc(i, j)});
        }
      }
    }
    const int last = e.symmetry_applied ? s - 3 : s - 1;
    for (int j = m + 1; j + 1 <= last; ++j) {
      const int dep = e.arc(j, j + 1);
      for (int i = 1; i < j; ++i) cnf.add({dep, -ge_var(j, i), ge_var(j + 1, i)});
      for (int i = 2; i < j; ++i) {
        for (int t2 = 1; t2 < i; ++t2) {
          std::vector<int> cl{dep, -e.arc(i, j), -e.arc(i, j + 1), -e.arc(t2, j + 1)};
          if (int g = ge_var(j, i + 1)) cl.push_back(g);
          if (int g = ge_var(j + 1, i + 1)) cl.push_back(g);
          for (int t = 1; t <= t2; ++t) cl.push_back(e.arc(t, j));
          cnf.add(cl);
        }
      }
    }
  }
  return e;
}

void add_reuse_constraint(Encoding& e, bool all_positions) {
  const int m = e.m(), s = e.s;
  if (m <= 2) return;
  auto& cnf = e.cnf;
  if (!all_positions) {
    const int k = m + 1;
    std::vector<int> active(static_cast<std::size_t>(m) + 1, 0);
    for (int i = 1; i <= m; ++i) {
      const int a = e.named_var(name2("active", i, k + 1));
      active[static_cast<std::size_t>(i)] = a;
      std::vector<int> def{-a};
      for (int t = k + 1; t <= s; ++t) {
        cnf.add({-e.arc(i, t), a});
        def.push_back(e.arc(i, t));
      }
      cnf.add(def);
    }
    for (int i = 1; i <= m; ++i)
      for (int j = i + 1; j <= m; ++j)
        cnf.add({-e.arc(i, k), -e.arc(j, k), active[static_cast<std::size_t>(i)], active[static_cast<std::size_t>(j)]});
  } else {
    for (int k = m + 1; k <= s; ++k) {
      for (int i = 1; i <= m; ++i) {
        for (int j = i + 1; j <= m; ++j) {
          std::vector<int> cl{-e.arc(i, k), -e.arc(j, k)};
          for (int t = m + 1; t <= s; ++t) {
            if (t == k) continue;
            cl.push_back(e.arc(i, t));
            cl.push_back(e.arc(j, t));
          }
          cnf.add(cl);
        }
      }
    }
  }
  e.reuse_applied = true;
}

void add_symmetry_breaking(Encoding& e, const SymmetryInfo& sym) {
  const int s = e.s;
  if (s - 2 <= e.m()) return;
  for (const auto& c : e.formula)
    if (c.size() == 1) return;
  std::vector<Var> reps;
  for (const auto& orbit : sym.variable_orbits) reps.push_back(*std::min_element(orbit.begin(), orbit.end()));
  auto& cnf = e.cnf;
  for (Var v : e.vars) {
    cnf.add({-e.pos(s - 1, v)});
    cnf.add({-e.neg(s - 2, v)});
    if (std::find(reps.begin(), reps.end(), v) == reps.end()) {
      cnf.add({-e.neg(s - 1, v)});
      cnf.add({-e.pos(s - 2, v)});
    } else {
      cnf.add({-e.neg(s - 1, v), e.pos(s - 2, v)});
      cnf.add({e.neg(s - 1, v), -e.pos(s - 2, v)});
    }
  }
  cnf.add({e.arc(s - 2, s)});
  cnf.add({e.arc(s - 1, s)});
  cnf.add({-e.arc(s - 2, s - 1)});
  e.symmetry_applied = true;
}

RefutationDag decode(const Encoding& e, const Assignment& model) {
  auto truth = [&](int var) {
    auto v = model.value(static_cast<Var>(var));
    if (!v) throw DecodeError("model leaves encoding variable " + std::to_string(var) + " unassigned");
    return *v;
  };
  auto clause_at = [&](int i) {
    std::vector<Literal> lits;
    for (Var v : e.vars) {
      const bool p = truth(e.pos(i, v)), n = truth(e.neg(i, v));
      if (p && n) throw DecodeError("position " + std::to_string(i) + " is tautological");
      if (p) lits.emplace_back(v, true);
      if (n) lits.emplace_back(v, false);
    }
    return Clause(std::move(lits));
  };
  const int m = e.m();
  RefutationDag dag;
  for (int i = 1; i <= m; ++i) {
    Clause c = clause_at(i);
    if (c != e.formula[static_cast<std::size_t>(i - 1)]) throw DecodeError("axiom position " + std::to_string(i) + " altered");
    dag.add_axiom(std::move(c));
  }
  for (int j = m + 1; j <= e.s; ++j) {
    int left = 0, right = 0;
    for (int i = 1; i < j; ++i) {
      if (truth(e.lpos(i, j))) {
        if (left) throw DecodeError("two positive premises at position " + std::to_string(j));
        left = i;
      }
      if (truth(e.lneg(i, j))) {
        if (right) throw DecodeError("two negative premises at position " + std::to_string(j));
        right = i;
      }
    }
    Var pivot = 0;
    for (Var v : e.vars) {
      if (!truth(e.pivot(j, v))) continue;
      if (pivot) throw DecodeError("two pivots at position " + std::to_string(j));
      pivot = v;
    }
    if (!left || !right || !pivot) throw DecodeError("incomplete resolvent at position " + std::to_string(j));
    dag.add_resolvent(static_cast<std::size_t>(left - 1), static_cast<std::size_t>(right - 1), pivot, clause_at(j));
  }
  if (auto r = validate_refutation(e.formula, dag); !r.valid)
    throw DecodeError("decoded derivation is invalid: " + r.message);
  return dag;
}

std::string to_string(HardnessEngine e) { return e == HardnessEngine::oracle ? "oracle" : "solver"; }

double HardnessRecord::sat_time() const {
  for (const auto& a : attempts)
    if (a.s == h) return a.seconds;
  return 0;
}

double HardnessRecord::unsat_time() const {
  for (const auto& a : attempts)
    if (a.s == h - 1) return a.seconds;
  return 0;
}

namespace {

bool trivial_refutation(const Formula& f, HardnessRecord& rec) {
  if (!f.contains(Clause{})) return false;
  if (f.size() != 1) throw HardnessError("formula with the empty clause and other clauses is not minimally unsatisfiable");
  rec.h = 1;
  rec.witness.add_axiom(Clause{});
  return true;
}

}  // namespace

HardnessRecord compute_hardness(const Formula& f, const HardnessOptions& opts) {
  HardnessRecord rec;
  rec.key = canonical_key(f);
  rec.engine = HardnessEngine::solver;
  if (f.empty()) throw HardnessError("the empty formula is satisfiable");
  if (trivial_refutation(f, rec)) return rec;
  if (opts.verify_preconditions && !is_minimally_unsatisfiable(f))
    throw HardnessError("formula is not minimally unsatisfiable");

  EncodeOptions eo = opts.encode;
  if (eo.reuse || eo.reuse_all_positions) {
    rec.strongly_irreducible = !opts.verify_preconditions || is_strongly_irreducible(f);
    if (!rec.strongly_irreducible) eo.reuse = eo.reuse_all_positions = false;
  }
  std::optional<SymmetryInfo> sym;
  if (eo.symmetry) sym = automorphisms(f);

  const int m = static_cast<int>(f.size());
  for (int s = m + 1; s <= opts.max_s; ++s) {
    Encoding e = encode(f, s, eo, sym ? &*sym : nullptr);
    SolverVerdict v = solve(e.cnf, opts.solver);
    rec.attempts.push_back({s, v.status, v.stats.seconds, v.stats.conflicts});
    if (v.status == SolveStatus::unknown) throw HardnessError("solver gave up at s = " + std::to_string(s));
    if (v.status == SolveStatus::unsat) continue;
    RefutationDag full = decode(e, *v.model);
    rec.witness = full.prune_unused();
    if (static_cast<int>(rec.witness.length()) != s)
      throw std::logic_error("shorter refutation hidden inside a model at s = " + std::to_string(s));
    rec.h = s;
    return rec;
  }
  throw HardnessError("no refutation up to length " + std::to_string(opts.max_s));
}

HardnessRecord compute_hardness_oracle(const Formula& f, std::size_t cap, OracleBudget budget) {
  HardnessRecord rec;
  rec.key = canonical_key(f);
  rec.engine = HardnessEngine::oracle;
  if (trivial_refutation(f, rec)) return rec;
  const auto start = std::chrono::steady_clock::now();
  auto r = shortest_refutation_bruteforce(f, cap, budget);
  if (!r) throw HardnessError("no refutation up to length " + std::to_string(cap));
  rec.h = static_cast<int>(r->h);
  rec.witness = r->proof;
  rec.attempts.push_back({rec.h, SolveStatus::sat,
                          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 0});
  return rec;
}

}  // namespace hitkit
