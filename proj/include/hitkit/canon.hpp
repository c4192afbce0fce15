#pragma once

// Canonical labeling of small vertex-colored graphs by individualization and
// refinement, with automorphism pruning.

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace hitkit {

using Permutation = std::vector<int>;

class ColoredGraph {
public:
  explicit ColoredGraph(int vertices);

  int size() const { return n_; }
  void add_edge(int u, int v);
  bool adjacent(int u, int v) const { return (rows_[idx(u, v)] >> (v & 63)) & 1; }
  const std::uint64_t* row(int u) const { return &rows_[static_cast<std::size_t>(u) * words_]; }
  int words() const { return words_; }

  void set_color(int v, int color) { colors_[static_cast<std::size_t>(v)] = color; }
  int color(int v) const { return colors_[static_cast<std::size_t>(v)]; }

private:
  std::size_t idx(int u, int v) const { return static_cast<std::size_t>(u) * words_ + (v >> 6); }
  int n_;
  int words_;
  std::vector<std::uint64_t> rows_;
  std::vector<int> colors_;
};

struct CanonicalLabeling {
  /// position[v] = canonical index of vertex v; vertices of smaller color come first.
  std::vector<int> position;
  /// Generators of the color-preserving automorphism group (vertex permutations).
  std::vector<Permutation> generators;
  std::uint64_t tree_nodes = 0;
};

CanonicalLabeling canonical_labeling(const ColoredGraph& g);

/// Adjacency of g relabeled by `position`, row-major bit matrix.
std::vector<std::uint64_t> relabeled_adjacency(const ColoredGraph& g, const std::vector<int>& position);

/// Orbits of the group generated by `gens` on 0..n-1; result[v] = smallest point of v's orbit.
std::vector<int> orbit_representatives(int n, const std::vector<Permutation>& gens);

/// Order of the group generated by `gens` (Schreier-Sims).
boost::multiprecision::cpp_int group_order(int n, const std::vector<Permutation>& gens);

}  // namespace hitkit
