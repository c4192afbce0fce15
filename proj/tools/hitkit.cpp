// hitkit: generate, analyze and measure unsatisfiable hitting formulas.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hitkit/catalog.hpp"
#include "hitkit/dimacs.hpp"
#include "hitkit/encode.hpp"
#include "hitkit/factor.hpp"
#include "hitkit/genesis.hpp"
#include "hitkit/hitting.hpp"
#include "hitkit/iso.hpp"
#include "hitkit/refutation.hpp"

using namespace hitkit;
using nlohmann::json;

namespace {

struct Globals {
  unsigned jobs = 1;
  std::uint64_t budget = 0;
  std::string solver;
  std::string solver_template;
  double timeout = 0;
  std::string format = "text";
};

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  return file;
}

SolverConfig solver_config(const Globals& g) {
  SolverConfig c = SolverConfig::from_environment();
  if (!g.solver.empty()) {
    c.backend = g.solver == "builtin" ? SolverConfig::Backend::builtin : SolverConfig::Backend::external;
    c.solver = g.solver;
  }
  if (!g.solver_template.empty()) c.command = g.solver_template;
  c.timeout_seconds = g.timeout;
  c.conflict_limit = g.budget;
  return c;
}

std::string yes_no(const std::optional<bool>& b) { return b ? (*b ? "yes" : "no") : "unknown"; }

std::string formula_class_label(const Formula& f) {
  if (!is_hitting(f) || !is_unsat_hitting(f)) return "mu";
  if (!is_regular(f)) return "uh";
  return is_irreducible(f) ? "iuh" : "ruh";
}

// Runs fn(i) for i in [0, count) on a small worker pool.
template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_lock;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_lock);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

int cmd_generate(const Globals& g, int n, int m, const std::string& cls, const std::string& out_path,
                 const std::string& manifest_path, bool crosscheck, bool capacity, double time_limit) {
  GenerationTask task;
  task.n = n;
  task.m = m;
  task.cls = parse_formula_class(cls);
  task.jobs = g.jobs;
  task.capacity_prune = capacity;
  task.limits.max_nodes = g.budget;
  task.limits.max_seconds = time_limit;
  GenerationResult result = crosscheck ? generate_crosscheck(task) : generate(task);
  std::ofstream file;
  std::ostream& out = open_out(out_path, file);
  for (const auto& f : result.formulas) out << format_catalog_line(n, f.formula) << '\n';
  json manifest = generation_manifest(task, result);
  manifest["mode"] = crosscheck ? "crosscheck" : "canonical-augmentation";
  if (!manifest_path.empty()) {
    std::ofstream mf(manifest_path);
    mf << manifest.dump(2) << '\n';
  }
  std::cerr << result.formulas.size() << " formulas" << (result.stats.complete ? "" : " (incomplete: budget exhausted)")
            << " in " << result.stats.seconds << " s\n";
  return result.stats.complete ? 0 : 3;
}

int cmd_check(const Globals& g, const std::string& path) {
  auto lines = read_formulas_file(path);
  json all = json::array();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    FormulaReport r = analyze(lines[i].formula, lines[i].n);
    if (g.format == "json") {
      all.push_back(to_json(r));
      continue;
    }
    if (g.format == "csv") {
      if (i == 0) std::cout << "index,n,m,hitting,unsat,mu,saturated,regular,deficiency,irreducible,strongly_irreducible,aut_order\n";
      std::cout << i + 1 << ',' << r.n << ',' << r.m << ',' << (r.hitting ? "yes" : "no") << ',' << yes_no(r.unsat) << ','
                << yes_no(r.mu) << ',' << yes_no(r.saturated) << ',' << (r.regular ? "yes" : "no") << ',' << r.deficiency
                << ',' << yes_no(r.irreducible) << ',' << yes_no(r.strongly_irreducible) << ',' << r.aut_order << '\n';
      continue;
    }
    std::cout << "formula " << i + 1 << ": " << format_catalog_line(lines[i].n, lines[i].formula) << '\n'
              << "  hitting: " << (r.hitting ? "yes" : "no") << '\n'
              << "  unsatisfiable: " << yes_no(r.unsat) << '\n'
              << "  minimally unsatisfiable: " << yes_no(r.mu) << '\n'
              << "  saturated: " << yes_no(r.saturated) << '\n'
              << "  regular: " << (r.regular ? "yes" : "no") << '\n'
              << "  deficiency: " << r.deficiency << '\n'
              << "  irreducible: " << yes_no(r.irreducible) << '\n'
              << "  strongly irreducible: " << yes_no(r.strongly_irreducible) << '\n'
              << "  |Aut|: " << r.aut_order << '\n'
              << "  variable orbits:";
    for (const auto& o : r.orbits) {
      std::cout << " {";
      for (std::size_t k = 0; k < o.size(); ++k) std::cout << (k ? "," : "") << o[k];
      std::cout << '}';
    }
    std::cout << "\n  key: " << r.key << '\n';
  }
  if (g.format == "json") std::cout << all.dump(2) << '\n';
  return 0;
}

int cmd_count(const Globals& g, const std::string& path, int vars) {
  auto lines = read_formulas_file(path);
  json all = json::array();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const Formula& f = lines[i].formula;
    const unsigned n = static_cast<unsigned>(vars >= 0 ? vars : lines[i].n);
    BigInt count;
    std::string method;
    if (is_hitting(f)) {
      count = count_models_hitting(f, n);
      method = "hitting";
    } else {
      if (n < f.num_vars()) throw std::invalid_argument("--vars is below the number of variables used");
      count = BigInt(count_models_bruteforce(f)) << (n - f.num_vars());
      method = "enumeration";
    }
    if (g.format == "json")
      all.push_back({{"index", i + 1}, {"n", n}, {"models", count.str()}, {"method", method}});
    else if (g.format == "csv")
      std::cout << (i == 0 ? "index,n,models,method\n" : "") << i + 1 << ',' << n << ',' << count << ',' << method << '\n';
    else
      std::cout << "formula " << i + 1 << ": " << count << " models over " << n << " variables (" << method << ")\n";
  }
  if (g.format == "json") std::cout << all.dump(2) << '\n';
  return 0;
}

int cmd_canon(const Globals& g, const std::string& path) {
  auto lines = read_formulas_file(path);
  json all = json::array();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const Formula& f = lines[i].formula;
    auto key = canonical_key(f);
    Formula cf = canonical_form(f);
    auto copies = count_labeled_copies(f);
    std::string line = format_catalog_line(static_cast<int>(cf.num_vars()), cf);
    if (g.format == "json")
      all.push_back({{"index", i + 1}, {"key", key.hex()}, {"canonical", line}, {"copies", copies.str()}});
    else if (g.format == "csv")
      std::cout << (i == 0 ? "index,key,copies\n" : "") << i + 1 << ',' << key.hex() << ',' << copies << '\n';
    else
      std::cout << key.hex() << "  " << line << "  copies=" << copies << '\n';
  }
  if (g.format == "json") std::cout << all.dump(2) << '\n';
  return 0;
}

EncodeOptions encode_options(bool reuse, bool reuse_all, bool symmetry, bool topo, bool used, bool sequential) {
  EncodeOptions o;
  o.reuse = reuse;
  o.reuse_all_positions = reuse_all;
  o.symmetry = symmetry;
  o.topo = topo;
  o.require_used = used;
  o.cardinality = sequential ? Cardinality::sequential : Cardinality::pairwise;
  return o;
}

int cmd_encode(const std::string& path, std::size_t index, int s, const EncodeOptions& opts,
               const std::string& out_path, const std::string& varmap_path) {
  auto lines = read_formulas_file(path);
  if (index < 1 || index > lines.size()) throw std::invalid_argument("--index out of range");
  const Formula& f = lines[index - 1].formula;
  Encoding e = encode(f, s, opts);
  std::ofstream file;
  std::ostream& out = open_out(out_path, file);
  write_dimacs(out, e.cnf,
               {"refutation of length " + std::to_string(s) + " for " + format_catalog_line(lines[index - 1].n, f),
                std::string("reuse ") + (e.reuse_applied ? "on" : "off") + ", symmetry " +
                    (e.symmetry_applied ? "on" : "off") + ", topo " + (opts.topo ? "on" : "off")});
  if (!varmap_path.empty()) {
    std::ofstream vm(varmap_path);
    vm << e.varmap_json().dump(1) << '\n';
  }
  return 0;
}

int cmd_hardness(const Globals& g, const std::string& path, const std::string& engine, const EncodeOptions& opts,
                 int max_s, const std::string& out_path, const std::string& proof_dir) {
  auto lines = read_formulas_file(path);
  std::vector<HardnessRow> rows(lines.size());
  std::vector<HardnessRecord> records(lines.size());
  HardnessOptions ho;
  ho.encode = opts;
  ho.solver = solver_config(g);
  ho.max_s = max_s;
  parallel_for(lines.size(), g.jobs, [&](std::size_t i) {
    const Formula& f = lines[i].formula;
    if (engine == "oracle") {
      OracleBudget b;
      if (g.budget) b.max_states = g.budget;
      records[i] = compute_hardness_oracle(f, static_cast<std::size_t>(max_s), b);
    } else if (engine == "solver") {
      records[i] = compute_hardness(f, ho);
    } else {
      throw std::invalid_argument("unknown engine " + engine);
    }
    const auto& r = records[i];
    if (auto v = validate_refutation(f, r.witness); !v.valid || static_cast<int>(r.witness.length()) != r.h)
      throw std::logic_error("witness check failed: " + v.message);
    rows[i] = HardnessRow{r.key.hex(), lines[i].n, static_cast<int>(f.size()), formula_class_label(f), r.h,
                          to_string(r.engine), r.sat_time(), r.unsat_time(), count_labeled_copies(f)};
  });
  if (!proof_dir.empty()) {
    std::filesystem::create_directories(proof_dir);
    for (std::size_t i = 0; i < records.size(); ++i) {
      std::ofstream pf(std::filesystem::path(proof_dir) / (std::to_string(i + 1) + ".proof"));
      write_proof(pf, records[i].witness);
    }
  }
  std::ofstream file;
  std::ostream& out = open_out(out_path, file);
  if (g.format == "json") {
    json all = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      json attempts = json::array();
      for (const auto& a : records[i].attempts)
        attempts.push_back({{"s", a.s}, {"status", to_string(a.status)}, {"seconds", a.seconds}, {"conflicts", a.conflicts}});
      all.push_back({{"key", rows[i].key}, {"n", rows[i].n}, {"m", rows[i].m}, {"class", rows[i].cls},
                     {"h", rows[i].h}, {"engine", rows[i].engine}, {"copies", rows[i].copies.str()},
                     {"attempts", attempts}});
    }
    out << all.dump(2) << '\n';
  } else {
    out << hardness_csv_header() << '\n';
    for (const auto& r : rows) out << format_hardness_row(r) << '\n';
  }
  return 0;
}

int cmd_verify(const Globals& g, const std::string& formula_path, const std::string& proof_path) {
  auto lines = read_formulas_file(formula_path);
  if (lines.size() != 1) throw std::invalid_argument("verify expects exactly one formula");
  const Formula& f = lines[0].formula;
  RefutationDag p = read_proof_file(proof_path);
  auto v = validate_refutation(f, p);
  const bool read_once = v.valid && is_read_once(p);
  if (g.format == "json") {
    json j = {{"valid", v.valid}, {"length", p.length()}, {"read_once", read_once}};
    if (!v.valid) {
      j["message"] = v.message;
      if (v.bad_step) j["bad_step"] = *v.bad_step + 1;
    }
    std::cout << j.dump(2) << '\n';
  } else if (v.valid) {
    std::cout << "valid refutation, length " << p.length() << ", used steps " << p.prune_unused().length()
              << ", read-once: " << (read_once ? "yes" : "no") << '\n';
  } else {
    std::cout << "invalid";
    if (v.bad_step) std::cout << " at step " << *v.bad_step + 1;
    std::cout << ": " << v.message << '\n';
  }
  return v.valid ? 0 : 1;
}

int cmd_stats(const Globals& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  auto cells = cell_stats(read_hardness_csv(in));
  if (g.format == "json") {
    json all = json::array();
    for (const auto& c : cells)
      all.push_back({{"n", c.n}, {"m", c.m}, {"max_h", c.max_h}, {"attaining", c.attaining},
                     {"total", c.total}, {"weighted_mean_h", c.weighted_mean_h}});
    std::cout << all.dump(2) << '\n';
  } else if (g.format == "csv") {
    std::cout << "n,m,max_h,attaining,total,weighted_mean_h\n";
    for (const auto& c : cells)
      std::cout << c.n << ',' << c.m << ',' << c.max_h << ',' << c.attaining << ',' << c.total << ',' << c.weighted_mean_h << '\n';
  } else {
    for (const auto& c : cells)
      std::cout << "(" << c.n << "," << c.m << ")  " << c.max_h << "_" << c.attaining << "^" << c.total
                << "  mean " << c.weighted_mean_h << '\n';
  }
  return 0;
}

int cmd_export(const std::string& path, const std::string& dir) {
  auto lines = read_formulas_file(path);
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& l = lines[i];
    auto name = std::to_string(l.n) + "_" + std::to_string(l.formula.size()) + "_" + std::to_string(i + 1) + ".cnf";
    std::ofstream out(std::filesystem::path(dir) / name);
    out << "c " << canonical_key(l.formula).hex() << '\n';
    write_formula_dimacs(out, l.formula, static_cast<Var>(l.n));
  }
  std::cerr << lines.size() << " files written to " << dir << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate, classify and measure unsatisfiable hitting formulas"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--budget", g.budget, "Node budget (generate), state budget (oracle) or conflict budget (builtin solver)");
  app.add_option("--solver", g.solver, "External solver executable, or 'builtin'");
  app.add_option("--solver-template", g.solver_template, "Command template with {solver} and {cnf}");
  app.add_option("--timeout", g.timeout, "Per-call solver timeout in seconds");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));

  int n = 0, m = 1, vars = -1, length = 0, max_s = 64;
  std::size_t index = 1;
  std::string cls = "iuh", out, manifest, file, proof, engine = "solver", varmap, dir;
  bool crosscheck = false, capacity = false;
  bool reuse = false, reuse_all = false, symmetry = false, topo = false, used = false, sequential = false;
  double time_limit = 0;

  auto* gen = app.add_subcommand("generate", "Enumerate UH/RUH/IUH formulas up to isomorphism");
  gen->add_option("-n,--vars", n, "Number of variables")->required();
  gen->add_option("-m,--clauses", m, "Number of clauses")->required();
  gen->add_option("--class", cls, "uh, ruh or iuh");
  gen->add_option("-o,--out", out, "Catalog output (default stdout)");
  gen->add_option("--manifest", manifest, "JSON run manifest");
  gen->add_flag("--crosscheck", crosscheck, "Slow labeled enumeration with key dedup");
  gen->add_flag("--capacity-prune", capacity, "Prune nodes that cannot reach regularity");
  gen->add_option("--time-limit", time_limit, "Wall-clock budget in seconds");

  auto* check = app.add_subcommand("check", "Report structural properties");
  check->add_option("file", file)->required();

  auto* count = app.add_subcommand("count", "Count models");
  count->add_option("file", file)->required();
  count->add_option("--vars", vars, "Variables to count over (default n of the entry)");

  auto* canon = app.add_subcommand("canon", "Canonical keys and forms");
  canon->add_option("file", file)->required();

  auto add_encoding_flags = [&](CLI::App* sub) {
    sub->add_flag("--reuse", reuse, "Axiom reuse at the first resolvent");
    sub->add_flag("--reuse-all", reuse_all, "Axiom reuse at every resolvent");
    sub->add_flag("--symmetry", symmetry, "End-of-refutation symmetry breaking");
    sub->add_flag("--topo", topo, "Ordering of independent resolvents");
    sub->add_flag("--require-used", used, "Every step is used");
    sub->add_flag("--sequential", sequential, "Sequential-counter cardinality");
  };
  auto* enc = app.add_subcommand("encode", "Emit the refutation-length CNF");
  enc->add_option("file", file)->required();
  enc->add_option("-s,--length", length, "Refutation length")->required();
  enc->add_option("--index", index, "Formula index within the file (1-based)");
  enc->add_option("-o,--out", out, "DIMACS output (default stdout)");
  enc->add_option("--varmap", varmap, "JSON name-to-index map");
  add_encoding_flags(enc);

  auto* hard = app.add_subcommand("hardness", "Shortest refutation lengths");
  hard->add_option("file", file)->required();
  hard->add_option("--engine", engine, "solver or oracle")->check(CLI::IsMember({"solver", "oracle"}));
  hard->add_option("--max-length", max_s, "Give up above this length");
  hard->add_option("-o,--out", out, "CSV output (default stdout)");
  hard->add_option("--proofs", dir, "Directory for witness proofs");
  add_encoding_flags(hard);

  auto* ver = app.add_subcommand("verify", "Validate a refutation");
  ver->add_option("formula", file)->required();
  ver->add_option("proof", proof)->required();

  auto* st = app.add_subcommand("stats", "Per-cell summary of a hardness CSV");
  st->add_option("csv", file)->required();

  auto* ex = app.add_subcommand("export-dimacs", "One DIMACS file per catalog entry");
  ex->add_option("file", file)->required();
  ex->add_option("--dir", dir, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    EncodeOptions eo = encode_options(reuse, reuse_all, symmetry, topo, used, sequential);
    if (*gen) return cmd_generate(g, n, m, cls, out, manifest, crosscheck, capacity, time_limit);
    if (*check) return cmd_check(g, file);
    if (*count) return cmd_count(g, file, vars);
    if (*canon) return cmd_canon(g, file);
    if (*enc) return cmd_encode(file, index, length, eo, out, varmap);
    if (*hard) return cmd_hardness(g, file, engine, eo, max_s, out, dir);
    if (*ver) return cmd_verify(g, file, proof);
    if (*st) return cmd_stats(g, file);
    if (*ex) return cmd_export(file, dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
