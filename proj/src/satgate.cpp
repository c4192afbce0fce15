#include "hitkit/satgate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

namespace hitkit {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::sat: return "SAT";
    case SolveStatus::unsat: return "UNSAT";
    case SolveStatus::unknown: return "UNKNOWN";
  }
  return "?";
}

SolverConfig SolverConfig::from_environment() {
  SolverConfig c;
  if (const char* s = std::getenv("HITKIT_SOLVER"); s && *s) {
    c.backend = Backend::external;
    c.solver = s;
  }
  if (const char* t = std::getenv("HITKIT_SOLVER_TEMPLATE"); t && *t) c.command = t;
  return c;
}

bool model_satisfies(const Cnf& cnf, const Assignment& model) {
  for (const auto& c : cnf.clauses) {
    bool ok = std::any_of(c.begin(), c.end(),
                          [&](int l) { return model.value(Literal::from_dimacs(l)) == true; });
    if (!ok) return false;
  }
  return true;
}

namespace {

// Literal codes: 2(v-1) for v, 2(v-1)+1 for -v.
inline int code(int dimacs) { return dimacs > 0 ? 2 * (dimacs - 1) : 2 * (-dimacs - 1) + 1; }

class Cdcl {
public:
  explicit Cdcl(int num_vars)
      : n_(num_vars),
        watches_(2 * static_cast<std::size_t>(num_vars)),
        value_(static_cast<std::size_t>(num_vars), -1),
        phase_(static_cast<std::size_t>(num_vars), 0),
        level_(static_cast<std::size_t>(num_vars), 0),
        reason_(static_cast<std::size_t>(num_vars), -1),
        activity_(static_cast<std::size_t>(num_vars), 0.0),
        heap_index_(static_cast<std::size_t>(num_vars), -1),
        seen_(static_cast<std::size_t>(num_vars), 0) {
    for (int v = 0; v < n_; ++v) heap_insert(v);
  }

  void add_clause(const std::vector<int>& dimacs) {
    if (!ok_) return;
    std::vector<int> lits;
    for (int l : dimacs) lits.push_back(code(l));
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    std::vector<int> kept;
    for (std::size_t i = 0; i < lits.size(); ++i) {
      if (i + 1 < lits.size() && (lits[i] ^ 1) == lits[i + 1]) return;  // tautology
      int val = lit_value(lits[i]);
      if (val == 1) return;
      if (val == -1) kept.push_back(lits[i]);
    }
    if (kept.empty()) {
      ok_ = false;
    } else if (kept.size() == 1) {
      assign(kept[0], -1);
      if (propagate() >= 0) ok_ = false;
    } else {
      attach(new_clause(std::move(kept), false));
    }
  }

  SolveStatus solve(double timeout, std::uint64_t conflict_limit, SolverStats& stats) {
    const auto start = std::chrono::steady_clock::now();
    if (!ok_) return SolveStatus::unsat;
    std::uint64_t restart_index = 0;
    std::size_t max_learnts = std::max<std::size_t>(clauses_.size() / 3, 2000);
    while (true) {
      const std::uint64_t budget = 100 * luby(restart_index++);
      std::uint64_t conflicts_here = 0;
      while (true) {
        int conflict = propagate();
        if (conflict >= 0) {
          ++stats.conflicts;
          ++conflicts_here;
          if (decision_level() == 0) return SolveStatus::unsat;
          std::vector<int> learnt;
          int back = analyze(conflict, learnt);
          cancel_until(back);
          if (learnt.size() == 1) {
            assign(learnt[0], -1);
          } else {
            int lbd = compute_lbd(learnt);
            int cref = new_clause(std::move(learnt), true);
            clauses_[static_cast<std::size_t>(cref)].lbd = lbd;
            attach(cref);
            learnts_.push_back(cref);
            assign(clauses_[static_cast<std::size_t>(cref)].lits[0], cref);
          }
          var_inc_ /= 0.95;
          if (stats.conflicts % 256 == 0 && timeout > 0) {
            double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            if (elapsed > timeout) return SolveStatus::unknown;
          }
          if (conflict_limit && stats.conflicts >= conflict_limit) return SolveStatus::unknown;
        } else {
          if (conflicts_here >= budget) {
            cancel_until(0);
            break;
          }
          if (learnts_.size() >= max_learnts + trail_.size()) {
            reduce_db();
            max_learnts += max_learnts / 10;
          }
          int next = pick_branch();
          if (next < 0) {
            model_.assign(static_cast<std::size_t>(n_), false);
            for (int v = 0; v < n_; ++v) model_[static_cast<std::size_t>(v)] = value_[static_cast<std::size_t>(v)] == 1;
            return SolveStatus::sat;
          }
          ++stats.decisions;
          trail_lim_.push_back(static_cast<int>(trail_.size()));
          assign(next, -1);
        }
        stats.propagations = propagations_;
      }
    }
  }

  const std::vector<bool>& model() const { return model_; }

private:
  struct ClauseRec {
    std::vector<int> lits;
    bool learnt = false;
    bool deleted = false;
    int lbd = 0;
  };
  struct Watch {
    int cref;
    int blocker;
  };

  static std::uint64_t luby(std::uint64_t i) {
    // Luby sequence 1 1 2 1 1 2 4 ...
    std::uint64_t size = 1, seq = 0;
    while (size < i + 1) {
      ++seq;
      size = 2 * size + 1;
    }
    while (size - 1 != i) {
      size = (size - 1) >> 1;
      --seq;
      i = i % size;
    }
    return std::uint64_t{1} << seq;
  }

  int lit_value(int lit) const {
    int v = value_[static_cast<std::size_t>(lit >> 1)];
    return v < 0 ? -1 : (v ^ (lit & 1));
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  int new_clause(std::vector<int> lits, bool learnt) {
    ClauseRec c;
    c.lits = std::move(lits);
    c.learnt = learnt;
    clauses_.push_back(std::move(c));
    return static_cast<int>(clauses_.size()) - 1;
  }
  void attach(int cref) {
    const auto& c = clauses_[static_cast<std::size_t>(cref)];
    watches_[static_cast<std::size_t>(c.lits[0])].push_back({cref, c.lits[1]});
    watches_[static_cast<std::size_t>(c.lits[1])].push_back({cref, c.lits[0]});
  }

  void assign(int lit, int reason) {
    const std::size_t v = static_cast<std::size_t>(lit >> 1);
    value_[v] = static_cast<std::int8_t>((lit & 1) ^ 1);
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(lit);
  }

  // Returns a conflicting clause or -1.
  int propagate() {
    while (qhead_ < trail_.size()) {
      const int p = trail_[qhead_++];
      const int false_lit = p ^ 1;
      auto& ws = watches_[static_cast<std::size_t>(false_lit)];
      ++propagations_;
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        Watch w = ws[i++];
        auto& c = clauses_[static_cast<std::size_t>(w.cref)];
        if (c.deleted) continue;
        if (lit_value(w.blocker) == 1) {
          ws[j++] = w;
          continue;
        }
        auto& lits = c.lits;
        if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
        const int first = lits[0];
        if (first != w.blocker && lit_value(first) == 1) {
          ws[j++] = {w.cref, first};
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < lits.size(); ++k) {
          if (lit_value(lits[k]) != 0) {
            std::swap(lits[1], lits[k]);
            watches_[static_cast<std::size_t>(lits[1])].push_back({w.cref, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {w.cref, first};
        if (lit_value(first) == 0) {
          while (i < ws.size()) ws[j++] = ws[i++];
          ws.resize(j);
          qhead_ = trail_.size();
          return w.cref;
        }
        assign(first, w.cref);
      }
      ws.resize(j);
    }
    return -1;
  }

  int analyze(int conflict, std::vector<int>& learnt) {
    learnt.assign(1, 0);
    int path = 0;
    int p = -1;
    std::size_t index = trail_.size();
    do {
      auto& c = clauses_[static_cast<std::size_t>(conflict)];
      for (std::size_t k = (p < 0 ? 0 : 1); k < c.lits.size(); ++k) {
        const int q = c.lits[k];
        const std::size_t v = static_cast<std::size_t>(q >> 1);
        if (seen_[v] || level_[v] == 0) continue;
        seen_[v] = 1;
        bump(static_cast<int>(v));
        if (level_[v] >= decision_level())
          ++path;
        else
          learnt.push_back(q);
      }
      while (!seen_[static_cast<std::size_t>(trail_[--index] >> 1)]) {
      }
      p = trail_[index];
      conflict = reason_[static_cast<std::size_t>(p >> 1)];
      seen_[static_cast<std::size_t>(p >> 1)] = 0;
      --path;
      if (conflict >= 0) {
        // Keep the implied literal at position 0 of its reason.
        auto& r = clauses_[static_cast<std::size_t>(conflict)].lits;
        if (r[0] != p) std::swap(r[0], r[1]);
      }
    } while (path > 0);
    learnt[0] = p ^ 1;

    // Drop literals whose reason is covered by the rest of the clause.
    std::vector<int> kept{learnt[0]};
    for (std::size_t k = 1; k < learnt.size(); ++k) {
      const int r = reason_[static_cast<std::size_t>(learnt[k] >> 1)];
      bool redundant = r >= 0;
      if (redundant) {
        for (int q : clauses_[static_cast<std::size_t>(r)].lits) {
          const std::size_t v = static_cast<std::size_t>(q >> 1);
          if (static_cast<int>(v) == (learnt[k] >> 1)) continue;
          if (!seen_[v] && level_[v] > 0) {
            redundant = false;
            break;
          }
        }
      }
      if (!redundant) kept.push_back(learnt[k]);
    }
    for (std::size_t k = 1; k < learnt.size(); ++k) seen_[static_cast<std::size_t>(learnt[k] >> 1)] = 0;
    learnt = std::move(kept);

    int back = 0;
    if (learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t k = 2; k < learnt.size(); ++k)
        if (level_[static_cast<std::size_t>(learnt[k] >> 1)] > level_[static_cast<std::size_t>(learnt[max_i] >> 1)]) max_i = k;
      std::swap(learnt[1], learnt[max_i]);
      back = level_[static_cast<std::size_t>(learnt[1] >> 1)];
    }
    return back;
  }

  int compute_lbd(const std::vector<int>& lits) {
    std::vector<int> levels;
    for (int l : lits) levels.push_back(level_[static_cast<std::size_t>(l >> 1)]);
    std::sort(levels.begin(), levels.end());
    return static_cast<int>(std::unique(levels.begin(), levels.end()) - levels.begin());
  }

  void cancel_until(int level) {
    if (decision_level() <= level) return;
    const std::size_t stop = static_cast<std::size_t>(trail_lim_[static_cast<std::size_t>(level)]);
    for (std::size_t i = trail_.size(); i-- > stop;) {
      const std::size_t v = static_cast<std::size_t>(trail_[i] >> 1);
      phase_[v] = static_cast<std::int8_t>(trail_[i] & 1);
      value_[v] = -1;
      reason_[v] = -1;
      if (heap_index_[v] < 0) heap_insert(static_cast<int>(v));
    }
    trail_.resize(stop);
    trail_lim_.resize(static_cast<std::size_t>(level));
    qhead_ = trail_.size();
  }

  void reduce_db() {
    std::vector<int> candidates;
    for (int cref : learnts_) {
      const auto& c = clauses_[static_cast<std::size_t>(cref)];
      if (c.deleted || c.lbd <= 2) continue;
      const int first = c.lits[0];
      const bool locked = lit_value(first) == 1 && reason_[static_cast<std::size_t>(first >> 1)] == cref;
      if (!locked) candidates.push_back(cref);
    }
    std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
      return clauses_[static_cast<std::size_t>(a)].lbd > clauses_[static_cast<std::size_t>(b)].lbd;
    });
    for (std::size_t i = 0; i < candidates.size() / 2; ++i) {
      auto& c = clauses_[static_cast<std::size_t>(candidates[i])];
      c.deleted = true;
      c.lits.clear();
      c.lits.shrink_to_fit();
    }
    std::vector<int> alive;
    for (int cref : learnts_)
      if (!clauses_[static_cast<std::size_t>(cref)].deleted) alive.push_back(cref);
    learnts_ = std::move(alive);
  }

  // VSIDS with a binary max-heap on activity.
  void bump(int v) {
    auto& a = activity_[static_cast<std::size_t>(v)];
    a += var_inc_;
    if (a > 1e100) {
      for (auto& x : activity_) x *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_index_[static_cast<std::size_t>(v)] >= 0) sift_up(heap_index_[static_cast<std::size_t>(v)]);
  }
  bool before(int a, int b) const { return activity_[static_cast<std::size_t>(a)] > activity_[static_cast<std::size_t>(b)]; }
  void heap_insert(int v) {
    heap_index_[static_cast<std::size_t>(v)] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    sift_up(static_cast<int>(heap_.size()) - 1);
  }
  void sift_up(int i) {
    int v = heap_[static_cast<std::size_t>(i)];
    while (i > 0) {
      int parent = (i - 1) / 2;
      if (!before(v, heap_[static_cast<std::size_t>(parent)])) break;
      heap_[static_cast<std::size_t>(i)] = heap_[static_cast<std::size_t>(parent)];
      heap_index_[static_cast<std::size_t>(heap_[static_cast<std::size_t>(i)])] = i;
      i = parent;
    }
    heap_[static_cast<std::size_t>(i)] = v;
    heap_index_[static_cast<std::size_t>(v)] = i;
  }
  void sift_down(int i) {
    int v = heap_[static_cast<std::size_t>(i)];
    const int size = static_cast<int>(heap_.size());
    while (true) {
      int child = 2 * i + 1;
      if (child >= size) break;
      if (child + 1 < size && before(heap_[static_cast<std::size_t>(child) + 1], heap_[static_cast<std::size_t>(child)])) ++child;
      if (!before(heap_[static_cast<std::size_t>(child)], v)) break;
      heap_[static_cast<std::size_t>(i)] = heap_[static_cast<std::size_t>(child)];
      heap_index_[static_cast<std::size_t>(heap_[static_cast<std::size_t>(i)])] = i;
      i = child;
    }
    heap_[static_cast<std::size_t>(i)] = v;
    heap_index_[static_cast<std::size_t>(v)] = i;
  }
  int heap_pop() {
    int top = heap_[0];
    heap_index_[static_cast<std::size_t>(top)] = -1;
    int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      heap_index_[static_cast<std::size_t>(last)] = 0;
      sift_down(0);
    }
    return top;
  }
  int pick_branch() {
    while (!heap_.empty()) {
      int v = heap_pop();
      if (value_[static_cast<std::size_t>(v)] < 0) return 2 * v + phase_[static_cast<std::size_t>(v)];
    }
    return -1;
  }

  int n_;
  bool ok_ = true;
  std::vector<ClauseRec> clauses_;
  std::vector<int> learnts_;
  std::vector<std::vector<Watch>> watches_;
  std::vector<std::int8_t> value_;
  std::vector<std::int8_t> phase_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<int> trail_;
  std::vector<int> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<int> heap_;
  std::vector<int> heap_index_;
  std::vector<char> seen_;
  std::vector<bool> model_;
  std::uint64_t propagations_ = 0;
};

Assignment to_assignment(const std::vector<bool>& values) {
  std::vector<Literal> lits;
  lits.reserve(values.size());
  for (std::size_t v = 0; v < values.size(); ++v) lits.emplace_back(static_cast<Var>(v + 1), values[v]);
  return Assignment(std::move(lits));
}

void check_model(const Cnf& cnf, SolverVerdict& verdict) {
  if (verdict.status != SolveStatus::sat) return;
  if (!verdict.model || !model_satisfies(cnf, *verdict.model))
    throw std::logic_error("internal error: " + verdict.backend + " returned a model that falsifies the instance");
}

}  // namespace

SolverVerdict solve_builtin(const Cnf& cnf, double timeout_seconds, std::uint64_t conflict_limit) {
  const auto start = std::chrono::steady_clock::now();
  SolverVerdict verdict;
  verdict.backend = "builtin";
  for (const auto& c : cnf.clauses)
    for (int l : c)
      if (l == 0 || std::abs(l) > cnf.num_vars) throw std::invalid_argument("literal outside the declared variables");
  Cdcl solver(cnf.num_vars);
  for (const auto& c : cnf.clauses) solver.add_clause(c);
  verdict.status = solver.solve(timeout_seconds, conflict_limit, verdict.stats);
  if (verdict.status == SolveStatus::sat) verdict.model = to_assignment(solver.model());
  verdict.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  check_model(cnf, verdict);
  return verdict;
}

SolverVerdict parse_competition_output(const std::string& text, int num_vars) {
  SolverVerdict verdict;
  std::istringstream in(text);
  std::string line;
  bool have_status = false, terminated = false;
  std::vector<int> values(static_cast<std::size_t>(num_vars) + 1, 0);
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    if (line[0] == 's') {
      std::string status = line.substr(1);
      status.erase(0, status.find_first_not_of(" \t"));
      status.erase(status.find_last_not_of(" \t\r") + 1);
      if (have_status) throw SolverError("solver output has two status lines", text);
      have_status = true;
      if (status == "SATISFIABLE")
        verdict.status = SolveStatus::sat;
      else if (status == "UNSATISFIABLE")
        verdict.status = SolveStatus::unsat;
      else if (status == "UNKNOWN")
        verdict.status = SolveStatus::unknown;
      else
        throw SolverError("unrecognized status line: " + line, text);
    } else if (line[0] == 'v') {
      std::istringstream vs(line.substr(1));
      std::string tok;
      while (vs >> tok) {
        int lit = 0;
        try {
          std::size_t used = 0;
          lit = std::stoi(tok, &used);
          if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
          throw SolverError("bad literal in value line: " + tok, text);
        }
        if (lit == 0) {
          terminated = true;
          continue;
        }
        if (std::abs(lit) > num_vars) throw SolverError("value line names an undeclared variable", text);
        values[static_cast<std::size_t>(std::abs(lit))] = lit > 0 ? 1 : -1;
      }
    } else {
      throw SolverError("unexpected solver output line: " + line, text);
    }
  }
  if (!have_status) throw SolverError("solver output has no status line", text);
  if (verdict.status == SolveStatus::sat) {
    if (!terminated) throw SolverError("SAT answer without a complete value list", text);
    std::vector<bool> model(static_cast<std::size_t>(num_vars));
    for (int v = 1; v <= num_vars; ++v) model[static_cast<std::size_t>(v - 1)] = values[static_cast<std::size_t>(v)] > 0;
    verdict.model = to_assignment(model);
  }
  return verdict;
}

SolverVerdict solve_external(const Cnf& cnf, const SolverConfig& config) {
  namespace fs = std::filesystem;
  const auto start = std::chrono::steady_clock::now();
  if (config.solver.empty() && config.command.find("{solver}") != std::string::npos)
    throw SolverError("no external solver configured", "");

  char dir_template[] = "/tmp/hitkit-XXXXXX";
  if (!mkdtemp(dir_template)) throw SolverError("cannot create a temporary directory", "");
  const fs::path dir(dir_template);
  const fs::path cnf_path = dir / "instance.cnf";
  const fs::path out_path = dir / "solver.out";
  {
    std::ofstream out(cnf_path);
    write_dimacs(out, cnf);
  }
  std::string cmd = config.command;
  auto substitute = [&](const std::string& key, const std::string& value) {
    for (std::size_t at = cmd.find(key); at != std::string::npos; at = cmd.find(key, at + value.size()))
      cmd.replace(at, key.size(), value);
  };
  substitute("{solver}", config.solver);
  substitute("{cnf}", cnf_path.string());

  pid_t pid = fork();
  if (pid < 0) throw SolverError("fork failed", "");
  if (pid == 0) {
    setpgid(0, 0);
    FILE* out = std::freopen(out_path.c_str(), "w", stdout);
    if (!out) _exit(127);
    execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  int status = 0;
  bool timed_out = false;
  while (true) {
    pid_t r = waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (config.timeout_seconds > 0 && elapsed > config.timeout_seconds) {
      kill(-pid, SIGKILL);
      waitpid(pid, &status, 0);
      timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  std::string text;
  {
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  std::error_code ec;
  fs::remove_all(dir, ec);

  SolverVerdict verdict;
  if (timed_out) {
    verdict.status = SolveStatus::unknown;
  } else {
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (code != 0 && code != 10 && code != 20)
      throw SolverError("external solver exited with code " + std::to_string(code), text);
    verdict = parse_competition_output(text, cnf.num_vars);
    if ((code == 10 && verdict.status != SolveStatus::sat) || (code == 20 && verdict.status != SolveStatus::unsat))
      throw SolverError("solver exit code disagrees with its status line", text);
  }
  verdict.backend = "external";
  verdict.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (verdict.status == SolveStatus::sat && !model_satisfies(cnf, *verdict.model))
    throw SolverError("external solver returned a model that falsifies the instance", text);
  return verdict;
}

SolverVerdict solve(const Cnf& cnf, const SolverConfig& config) {
  if (config.backend == SolverConfig::Backend::external) return solve_external(cnf, config);
  return solve_builtin(cnf, config.timeout_seconds, config.conflict_limit);
}

}  // namespace hitkit
