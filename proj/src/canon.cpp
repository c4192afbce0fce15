#include "hitkit/canon.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace hitkit {

ColoredGraph::ColoredGraph(int vertices)
    : n_(vertices),
      words_((vertices + 63) / 64 == 0 ? 1 : (vertices + 63) / 64),
      rows_(static_cast<std::size_t>(vertices) * static_cast<std::size_t>(words_), 0),
      colors_(static_cast<std::size_t>(vertices), 0) {}

void ColoredGraph::add_edge(int u, int v) {
  if (u == v) throw std::invalid_argument("self-loops are not supported");
  rows_[idx(u, v)] |= std::uint64_t{1} << (v & 63);
  rows_[idx(v, u)] |= std::uint64_t{1} << (u & 63);
}

std::vector<std::uint64_t> relabeled_adjacency(const ColoredGraph& g, const std::vector<int>& position) {
  const int n = g.size(), w = g.words();
  std::vector<int> lab(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) lab[static_cast<std::size_t>(position[static_cast<std::size_t>(v)])] = v;
  std::vector<std::uint64_t> out(static_cast<std::size_t>(n) * static_cast<std::size_t>(w), 0);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t* r = g.row(lab[static_cast<std::size_t>(i)]);
    for (int wi = 0; wi < w; ++wi) {
      std::uint64_t bits = r[wi];
      while (bits) {
        int v = wi * 64 + std::countr_zero(bits);
        bits &= bits - 1;
        int j = position[static_cast<std::size_t>(v)];
        out[static_cast<std::size_t>(i) * w + (j >> 6)] |= std::uint64_t{1} << (j & 63);
      }
    }
  }
  return out;
}

namespace {

struct UnionFind {
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent[static_cast<std::size_t>(a)] = b;  // smaller id stays root
  }
  std::vector<int> parent;
};

// Ordered partition: lab lists vertices, cells are contiguous ranges.
struct Partition {
  std::vector<int> lab;
  std::vector<int> cell_of;   // vertex -> start position of its cell
  std::vector<int> cell_end;  // start position -> end position (exclusive)

  bool discrete() const {
    for (int s = 0; s < static_cast<int>(lab.size()); s = cell_end[static_cast<std::size_t>(s)])
      if (cell_end[static_cast<std::size_t>(s)] - s > 1) return false;
    return true;
  }
};

class Search {
public:
  explicit Search(const ColoredGraph& g) : g_(g), n_(g.size()), w_(g.words()) {}

  CanonicalLabeling run() {
    Partition p;
    p.lab.resize(static_cast<std::size_t>(n_));
    std::iota(p.lab.begin(), p.lab.end(), 0);
    std::stable_sort(p.lab.begin(), p.lab.end(), [&](int a, int b) { return g_.color(a) < g_.color(b); });
    p.cell_of.assign(static_cast<std::size_t>(n_), 0);
    p.cell_end.assign(static_cast<std::size_t>(n_) + 1, 0);
    std::vector<int> queue;
    for (int i = 0; i < n_;) {
      int j = i;
      while (j < n_ && g_.color(p.lab[static_cast<std::size_t>(j)]) == g_.color(p.lab[static_cast<std::size_t>(i)])) ++j;
      for (int k = i; k < j; ++k) p.cell_of[static_cast<std::size_t>(p.lab[static_cast<std::size_t>(k)])] = i;
      p.cell_end[static_cast<std::size_t>(i)] = j;
      queue.push_back(i);
      i = j;
    }
    refine(p, queue);
    if (n_ > 0) explore(p, 0);

    CanonicalLabeling out;
    out.position.assign(static_cast<std::size_t>(n_), 0);
    for (int i = 0; i < n_; ++i) out.position[static_cast<std::size_t>(best_lab_[static_cast<std::size_t>(i)])] = i;
    out.generators = std::move(gens_);
    out.tree_nodes = nodes_;
    return out;
  }

private:
  void refine(Partition& p, std::vector<int>& queue) {
    std::vector<std::uint64_t> mask(static_cast<std::size_t>(w_));
    std::vector<int> count(static_cast<std::size_t>(n_));
    std::vector<char> queued(static_cast<std::size_t>(n_) + 1, 0);
    for (int s : queue) queued[static_cast<std::size_t>(s)] = 1;
    std::size_t head = 0;
    while (head < queue.size()) {
      int ws = queue[head++];
      queued[static_cast<std::size_t>(ws)] = 0;
      std::fill(mask.begin(), mask.end(), 0);
      for (int k = ws; k < p.cell_end[static_cast<std::size_t>(ws)]; ++k) {
        int v = p.lab[static_cast<std::size_t>(k)];
        mask[static_cast<std::size_t>(v >> 6)] |= std::uint64_t{1} << (v & 63);
      }
      for (int xs = 0; xs < n_;) {
        int xe = p.cell_end[static_cast<std::size_t>(xs)];
        if (xe - xs > 1) {
          bool uniform = true;
          for (int k = xs; k < xe; ++k) {
            int v = p.lab[static_cast<std::size_t>(k)];
            const std::uint64_t* r = g_.row(v);
            int c = 0;
            for (int wi = 0; wi < w_; ++wi) c += std::popcount(r[wi] & mask[static_cast<std::size_t>(wi)]);
            count[static_cast<std::size_t>(v)] = c;
            if (c != count[static_cast<std::size_t>(p.lab[static_cast<std::size_t>(xs)])]) uniform = false;
          }
          if (!uniform) {
            std::stable_sort(p.lab.begin() + xs, p.lab.begin() + xe, [&](int a, int b) {
              return count[static_cast<std::size_t>(a)] < count[static_cast<std::size_t>(b)];
            });
            for (int k = xs; k < xe;) {
              int j = k;
              int c = count[static_cast<std::size_t>(p.lab[static_cast<std::size_t>(k)])];
              while (j < xe && count[static_cast<std::size_t>(p.lab[static_cast<std::size_t>(j)])] == c) ++j;
              for (int t = k; t < j; ++t) p.cell_of[static_cast<std::size_t>(p.lab[static_cast<std::size_t>(t)])] = k;
              p.cell_end[static_cast<std::size_t>(k)] = j;
              if (!queued[static_cast<std::size_t>(k)]) {
                queued[static_cast<std::size_t>(k)] = 1;
                queue.push_back(k);
              }
              k = j;
            }
          }
        }
        xs = xe;
      }
    }
    queue.clear();
  }

  std::vector<std::uint64_t> certificate(const Partition& p) const {
    std::vector<int> position(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) position[static_cast<std::size_t>(p.lab[static_cast<std::size_t>(i)])] = i;
    return relabeled_adjacency(g_, position);
  }

  void record_automorphism(const std::vector<int>& from_lab, const std::vector<int>& to_lab) {
    Permutation gamma(static_cast<std::size_t>(n_));
    bool identity = true;
    for (int i = 0; i < n_; ++i) {
      gamma[static_cast<std::size_t>(from_lab[static_cast<std::size_t>(i)])] = to_lab[static_cast<std::size_t>(i)];
      if (from_lab[static_cast<std::size_t>(i)] != to_lab[static_cast<std::size_t>(i)]) identity = false;
    }
    if (!identity) gens_.push_back(std::move(gamma));
  }

  static std::size_t common_prefix(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t k = 0;
    while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
    return k;
  }

  // Returns the depth to unwind to: the search continues at the node of that depth.
  std::size_t explore(Partition& p, std::size_t depth) {
    ++nodes_;
    if (p.discrete()) return leaf(p);

    int target = -1, best_size = n_ + 1;
    for (int s = 0; s < n_; s = p.cell_end[static_cast<std::size_t>(s)]) {
      int size = p.cell_end[static_cast<std::size_t>(s)] - s;
      if (size > 1 && size < best_size) {
        best_size = size;
        target = s;
      }
    }
    std::vector<int> candidates(p.lab.begin() + target, p.lab.begin() + p.cell_end[static_cast<std::size_t>(target)]);
    std::sort(candidates.begin(), candidates.end());
    std::vector<int> tried;
    for (int v : candidates) {
      if (!tried.empty() && pruned(v, tried)) continue;
      tried.push_back(v);

      Partition child = p;
      // Individualize v: move it to the front of its cell as a singleton.
      int end = child.cell_end[static_cast<std::size_t>(target)];
      auto it = std::find(child.lab.begin() + target, child.lab.begin() + end, v);
      std::iter_swap(child.lab.begin() + target, it);
      child.cell_end[static_cast<std::size_t>(target)] = target + 1;
      child.cell_end[static_cast<std::size_t>(target) + 1] = end;
      for (int k = target + 1; k < end; ++k) child.cell_of[static_cast<std::size_t>(child.lab[static_cast<std::size_t>(k)])] = target + 1;
      std::vector<int> queue{target};
      refine(child, queue);

      path_.push_back(v);
      std::size_t back = explore(child, depth + 1);
      path_.pop_back();
      if (back < depth) return back;
    }
    return depth;
  }

  bool pruned(int v, const std::vector<int>& tried) const {
    // Orbits of the subgroup of found automorphisms fixing the current path pointwise.
    UnionFind uf(n_);
    for (const auto& gamma : gens_) {
      bool fixes = std::all_of(path_.begin(), path_.end(),
                               [&](int x) { return gamma[static_cast<std::size_t>(x)] == x; });
      if (!fixes) continue;
      for (int x = 0; x < n_; ++x) uf.unite(x, gamma[static_cast<std::size_t>(x)]);
    }
    int rv = uf.find(v);
    return std::any_of(tried.begin(), tried.end(), [&](int t) { return uf.find(t) == rv; });
  }

  std::size_t leaf(const Partition& p) {
    auto cert = certificate(p);
    const std::size_t here = path_.size();
    if (first_lab_.empty()) {
      first_lab_ = p.lab;
      first_cert_ = cert;
      first_path_ = path_;
      best_lab_ = p.lab;
      best_cert_ = std::move(cert);
      best_path_ = path_;
      return here;
    }
    if (cert == first_cert_) {
      record_automorphism(first_lab_, p.lab);
      return common_prefix(first_path_, path_);
    }
    if (cert == best_cert_) {
      record_automorphism(best_lab_, p.lab);
      return common_prefix(best_path_, path_);
    }
    if (cert > best_cert_) {
      best_lab_ = p.lab;
      best_cert_ = std::move(cert);
      best_path_ = path_;
    }
    return here;
  }

  const ColoredGraph& g_;
  int n_, w_;
  std::vector<int> path_;
  std::vector<int> first_lab_, best_lab_, first_path_, best_path_;
  std::vector<std::uint64_t> first_cert_, best_cert_;
  std::vector<Permutation> gens_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

CanonicalLabeling canonical_labeling(const ColoredGraph& g) { return Search(g).run(); }

std::vector<int> orbit_representatives(int n, const std::vector<Permutation>& gens) {
  UnionFind uf(n);
  for (const auto& g : gens)
    for (int x = 0; x < n; ++x) uf.unite(x, g[static_cast<std::size_t>(x)]);
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) out[static_cast<std::size_t>(x)] = uf.find(x);
  return out;
}

namespace {

// Knuth's sifting formulation of Schreier-Sims with base 0, 1, ..., n-1.
// Products apply left to right: (a*b)(x) = b(a(x)).
class SchreierSims {
public:
  explicit SchreierSims(int n)
      : n_(n), gens_(static_cast<std::size_t>(n) + 1),
        reps_(static_cast<std::size_t>(n), std::vector<Permutation>(static_cast<std::size_t>(n))) {
    for (int k = 0; k < n; ++k) reps_[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] = identity();
  }

  void add(const Permutation& g) {
    if (!is_identity(g)) add_generator(0, g);
  }

  boost::multiprecision::cpp_int order() const {
    boost::multiprecision::cpp_int o = 1;
    for (const auto& level : reps_) {
      long defined = std::count_if(level.begin(), level.end(), [](const Permutation& p) { return !p.empty(); });
      o *= defined;
    }
    return o;
  }

private:
  Permutation identity() const {
    Permutation p(static_cast<std::size_t>(n_));
    std::iota(p.begin(), p.end(), 0);
    return p;
  }
  static bool is_identity(const Permutation& p) {
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] != static_cast<int>(i)) return false;
    return true;
  }
  static Permutation compose(const Permutation& a, const Permutation& b) {
    Permutation r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = b[static_cast<std::size_t>(a[i])];
    return r;
  }
  static Permutation inverse(const Permutation& a) {
    Permutation r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[static_cast<std::size_t>(a[i])] = static_cast<int>(i);
    return r;
  }

  bool member(int k, Permutation g) const {
    for (int i = k; i < n_; ++i) {
      const auto& slot = reps_[static_cast<std::size_t>(i)][static_cast<std::size_t>(g[static_cast<std::size_t>(i)])];
      if (slot.empty()) return false;
      g = compose(g, inverse(slot));
    }
    return is_identity(g);
  }

  void add_generator(int k, const Permutation& g) {
    if (member(k, g)) return;
    gens_[static_cast<std::size_t>(k)].push_back(g);
    std::vector<Permutation> current;
    for (const auto& r : reps_[static_cast<std::size_t>(k)])
      if (!r.empty()) current.push_back(r);
    for (const auto& r : current) sift(k, compose(r, g));
  }

  void sift(int k, const Permutation& g) {
    int j = g[static_cast<std::size_t>(k)];
    auto& slot = reps_[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
    if (slot.empty()) {
      slot = g;
      auto gens = gens_[static_cast<std::size_t>(k)];
      for (const auto& h : gens) sift(k, compose(g, h));
      return;
    }
    Permutation p = compose(g, inverse(slot));
    if (!is_identity(p)) add_generator(k + 1, p);
  }

  int n_;
  std::vector<std::vector<Permutation>> gens_;
  std::vector<std::vector<Permutation>> reps_;
};

}  // namespace

boost::multiprecision::cpp_int group_order(int n, const std::vector<Permutation>& gens) {
  if (n == 0) return 1;
  SchreierSims ss(n);
  for (const auto& g : gens) ss.add(g);
  return ss.order();
}

}  // namespace hitkit
