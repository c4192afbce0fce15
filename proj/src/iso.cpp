#include "hitkit/iso.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace hitkit {

Literal SignedPermutation::operator()(Literal l) const {
  auto it = image.find(l.var());
  if (it == image.end()) return l;
  return l.positive() ? it->second : ~it->second;
}

Clause SignedPermutation::operator()(const Clause& c) const {
  std::vector<Literal> lits;
  lits.reserve(c.size());
  for (Literal l : c) lits.push_back((*this)(l));
  return Clause(std::move(lits));
}

Formula SignedPermutation::operator()(const Formula& f) const {
  std::vector<Clause> cs;
  cs.reserve(f.size());
  for (const auto& c : f) cs.push_back((*this)(c));
  return Formula(std::move(cs), f.name());
}

bool SignedPermutation::is_identity() const {
  return std::all_of(image.begin(), image.end(),
                     [](const auto& kv) { return kv.second == Literal(kv.first, true); });
}

int ClauseLiteralGraph::literal_vertex(Literal l) const {
  auto it = std::lower_bound(vars.begin(), vars.end(), l.var());
  if (it == vars.end() || *it != l.var()) throw std::out_of_range("literal not in the graph");
  return static_cast<int>(2 * (it - vars.begin()) + (l.positive() ? 0 : 1));
}

Literal ClauseLiteralGraph::vertex_literal(int v) const {
  return Literal(vars[static_cast<std::size_t>(v / 2)], v % 2 == 0);
}

namespace {

// Clauses as lists of literal vertices over k variables.
using VertexClauses = std::vector<std::vector<int>>;

ColoredGraph build_graph(int k, const VertexClauses& clauses) {
  const int m = static_cast<int>(clauses.size());
  ColoredGraph g(2 * k + m);
  for (int i = 0; i < k; ++i) g.add_edge(2 * i, 2 * i + 1);
  for (int c = 0; c < m; ++c) {
    const auto& lits = clauses[static_cast<std::size_t>(c)];
    g.set_color(2 * k + c, 1 + static_cast<int>(lits.size()));
    for (int l : lits) g.add_edge(2 * k + c, l);
  }
  return g;
}

void put16(std::vector<std::uint8_t>& out, std::size_t v) {
  if (v > 0xffff) throw std::length_error("formula too large for a canonical key");
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
}

std::size_t get16(const std::vector<std::uint8_t>& in, std::size_t at) {
  if (at + 1 >= in.size()) throw std::invalid_argument("truncated canonical key");
  return (static_cast<std::size_t>(in[at]) << 8) | in[at + 1];
}

CanonicalKey make_key(int k, const VertexClauses& clauses, const std::vector<int>& position) {
  const int m = static_cast<int>(clauses.size());
  const int n = 2 * k + m;
  std::vector<int> lab(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) lab[static_cast<std::size_t>(position[static_cast<std::size_t>(v)])] = v;

  std::vector<std::uint8_t> out;
  out.push_back(CanonicalKey::version);
  put16(out, static_cast<std::size_t>(k));
  put16(out, static_cast<std::size_t>(m));
  for (int p = 0; p < 2 * k; ++p) {
    int v = lab[static_cast<std::size_t>(p)];
    put16(out, static_cast<std::size_t>(position[static_cast<std::size_t>(v ^ 1)]));
  }
  const std::size_t row_bytes = (static_cast<std::size_t>(2 * k) + 7) / 8;
  for (int q = 0; q < m; ++q) {
    int c = lab[static_cast<std::size_t>(2 * k + q)] - 2 * k;
    std::vector<std::uint8_t> row(row_bytes, 0);
    for (int l : clauses[static_cast<std::size_t>(c)]) {
      int p = position[static_cast<std::size_t>(l)];
      row[static_cast<std::size_t>(p / 8)] |= static_cast<std::uint8_t>(1u << (p % 8));
    }
    out.insert(out.end(), row.begin(), row.end());
  }
  return CanonicalKey(std::move(out));
}

VertexClauses vertex_clauses(const ClauseLiteralGraph& g, const Formula& f) {
  VertexClauses out;
  out.reserve(f.size());
  for (const auto& c : f) {
    std::vector<int> lits;
    for (Literal l : c) lits.push_back(g.literal_vertex(l));
    out.push_back(std::move(lits));
  }
  return out;
}

Formula formula_from_key(const CanonicalKey& key) {
  const auto& b = key.bytes();
  if (b.empty() || b[0] != CanonicalKey::version) throw std::invalid_argument("unknown canonical key version");
  const std::size_t k = get16(b, 1), m = get16(b, 3);
  std::vector<int> lit(2 * k, 0);  // position -> dimacs literal
  int next = 0;
  for (std::size_t p = 0; p < 2 * k; ++p) {
    std::size_t partner = get16(b, 5 + 2 * p);
    if (partner >= 2 * k) throw std::invalid_argument("malformed canonical key");
    if (lit[p] != 0) continue;
    ++next;
    lit[p] = next;
    lit[partner] = -next;
  }
  const std::size_t row_bytes = (2 * k + 7) / 8;
  std::size_t at = 5 + 4 * k;
  if (b.size() != at + m * row_bytes) throw std::invalid_argument("malformed canonical key");
  std::vector<Clause> clauses;
  for (std::size_t q = 0; q < m; ++q, at += row_bytes) {
    std::vector<int> lits;
    for (std::size_t p = 0; p < 2 * k; ++p)
      if ((b[at + p / 8] >> (p % 8)) & 1) lits.push_back(lit[p]);
    clauses.push_back(Clause::from_dimacs(lits));
  }
  return Formula(std::move(clauses));
}

}  // namespace

ClauseLiteralGraph clause_literal_graph(const Formula& f) {
  ClauseLiteralGraph g;
  g.vars = f.vars();
  VertexClauses vc = vertex_clauses(g, f);
  g.graph = build_graph(static_cast<int>(g.vars.size()), vc);
  return g;
}

std::string CanonicalKey::hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s;
  s.reserve(2 * bytes_.size());
  for (auto b : bytes_) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 15]);
  }
  return s;
}

CanonicalKey CanonicalKey::from_hex(const std::string& hex) {
  if (hex.size() % 2) throw std::invalid_argument("odd-length hex key");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    throw std::invalid_argument("bad hex digit in key");
  };
  std::vector<std::uint8_t> bytes;
  for (std::size_t i = 0; i < hex.size(); i += 2)
    bytes.push_back(static_cast<std::uint8_t>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
  return CanonicalKey(std::move(bytes));
}

CanonicalKey canonical_key(const Formula& f) {
  ClauseLiteralGraph g = clause_literal_graph(f);
  VertexClauses vc = vertex_clauses(g, f);
  auto lab = canonical_labeling(g.graph);
  return make_key(static_cast<int>(g.vars.size()), vc, lab.position);
}

Formula canonical_form(const Formula& f) {
  Formula out = formula_from_key(canonical_key(f));
  out.set_name(f.name());
  return out;
}

bool are_isomorphic(const Formula& a, const Formula& b) {
  if (a.size() != b.size() || a.num_vars() != b.num_vars()) return false;
  return canonical_key(a) == canonical_key(b);
}

SymmetryInfo automorphisms(const Formula& f) {
  ClauseLiteralGraph g = clause_literal_graph(f);
  auto lab = canonical_labeling(g.graph);
  const int k = static_cast<int>(g.vars.size());

  SymmetryInfo info;
  std::vector<Permutation> var_perms;
  for (const auto& gamma : lab.generators) {
    SignedPermutation phi;
    Permutation on_vars(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      int img = gamma[static_cast<std::size_t>(2 * i)];
      if (gamma[static_cast<std::size_t>(2 * i + 1)] != (img ^ 1))
        throw std::logic_error("automorphism does not commute with negation");
      phi.image.emplace(g.vars[static_cast<std::size_t>(i)], g.vertex_literal(img));
      on_vars[static_cast<std::size_t>(i)] = img / 2;
    }
    var_perms.push_back(std::move(on_vars));
    info.generators.push_back(std::move(phi));
  }
  info.order = group_order(g.graph.size(), lab.generators);

  auto reps = orbit_representatives(k, var_perms);
  std::map<int, std::vector<Var>> orbits;
  for (int i = 0; i < k; ++i) orbits[reps[static_cast<std::size_t>(i)]].push_back(g.vars[static_cast<std::size_t>(i)]);
  for (auto& [rep, vars] : orbits) info.variable_orbits.push_back(std::move(vars));
  return info;
}

BigInt count_labeled_copies(const Formula& f) {
  const std::size_t n = f.num_vars();
  BigInt total = BigInt(1) << n;
  for (std::size_t i = 2; i <= n; ++i) total *= i;
  return total / automorphisms(f).order;
}

DenseLabeling label_dense(const std::vector<detail::DenseClause>& clauses, int n) {
  std::uint64_t used = 0;
  for (const auto& c : clauses) used |= c.pos | c.neg;
  std::vector<int> dense_of(static_cast<std::size_t>(n), -1), var_of;
  for (int v = 0; v < n; ++v) {
    if ((used >> v) & 1) {
      dense_of[static_cast<std::size_t>(v)] = static_cast<int>(var_of.size());
      var_of.push_back(v);
    }
  }
  const int k = static_cast<int>(var_of.size());
  VertexClauses vc;
  vc.reserve(clauses.size());
  for (const auto& c : clauses) {
    std::vector<int> lits;
    for (int i = 0; i < k; ++i) {
      std::uint64_t bit = std::uint64_t{1} << var_of[static_cast<std::size_t>(i)];
      if (c.pos & bit) lits.push_back(2 * i);
      if (c.neg & bit) lits.push_back(2 * i + 1);
    }
    vc.push_back(std::move(lits));
  }
  ColoredGraph g = build_graph(k, vc);
  auto lab = canonical_labeling(g);

  DenseLabeling out;
  out.key = make_key(k, vc, lab.position);
  const int m = static_cast<int>(clauses.size());
  out.clause_position.resize(static_cast<std::size_t>(m));
  for (int c = 0; c < m; ++c)
    out.clause_position[static_cast<std::size_t>(c)] = lab.position[static_cast<std::size_t>(2 * k + c)] - 2 * k;
  auto reps = orbit_representatives(g.size(), lab.generators);
  out.clause_orbit.resize(static_cast<std::size_t>(m));
  for (int c = 0; c < m; ++c) out.clause_orbit[static_cast<std::size_t>(c)] = reps[static_cast<std::size_t>(2 * k + c)] - 2 * k;

  auto identity = [&] {
    std::vector<int> p(static_cast<std::size_t>(2 * n));
    std::iota(p.begin(), p.end(), 0);
    return p;
  };
  for (const auto& gamma : lab.generators) {
    auto p = identity();
    for (int i = 0; i < k; ++i) {
      int v = var_of[static_cast<std::size_t>(i)];
      int img = gamma[static_cast<std::size_t>(2 * i)];
      int w = var_of[static_cast<std::size_t>(img / 2)];
      p[static_cast<std::size_t>(2 * v)] = 2 * w + (img & 1);
      p[static_cast<std::size_t>(2 * v + 1)] = 2 * w + ((img & 1) ^ 1);
    }
    out.literal_generators.push_back(std::move(p));
  }
  int prev_unused = -1;
  for (int v = 0; v < n; ++v) {
    if ((used >> v) & 1) continue;
    auto flip = identity();
    std::swap(flip[static_cast<std::size_t>(2 * v)], flip[static_cast<std::size_t>(2 * v + 1)]);
    out.literal_generators.push_back(std::move(flip));
    if (prev_unused >= 0) {
      auto swap = identity();
      std::swap(swap[static_cast<std::size_t>(2 * v)], swap[static_cast<std::size_t>(2 * prev_unused)]);
      std::swap(swap[static_cast<std::size_t>(2 * v + 1)], swap[static_cast<std::size_t>(2 * prev_unused + 1)]);
      out.literal_generators.push_back(std::move(swap));
    }
    prev_unused = v;
  }
  return out;
}

}  // namespace hitkit
