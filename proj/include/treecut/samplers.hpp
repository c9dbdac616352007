#pragma once

#include <vector>

#include "treecut/offspring.hpp"
#include "treecut/rng.hpp"
#include "treecut/rooted_tree.hpp"

namespace treecut {

// Uniform rooted labelled tree on 1..n (each of the n^{n-1} trees equally
// likely): Prufer decode of a uniform sequence plus an independent uniform
// root.  O(n).
RootedTree sample_cayley(int n, RngStream& rng);

// Uniform ordered rooted forest on 1..n (each of the n^n forests equally
// likely), via the tree-with-marked-vertex bijection.
OrderedForest sample_ordered_forest(int n, RngStream& rng);

// Galton-Watson tree with the given critical offspring law, conditioned to
// have exactly n vertices, with an independent uniform labelling of 1..n.
// Offspring counts are drawn conditioned on total progeny n and rotated to a
// valid depth-first walk (cycle lemma), so the tree is exact, not truncated.
RootedTree sample_conditioned_gw(const OffspringLaw& law, int n, RngStream& rng);

// Exact sigma^2 of the law (spec'd alongside the samplers).
inline Rational variance_of(const OffspringLaw& law) { return law.variance(); }

// --- exposed internals (tested directly) ------------------------------------

// Decode a Prufer sequence over 1..n (length n-2) into the edge list of the
// unique unrooted labelled tree.
std::vector<std::pair<int, int>> prufer_decode(int n, const std::vector<int>& seq);

// Rotate offspring counts summing to n-1 into the unique cyclic shift that
// forms a valid depth-first walk, then build the tree; vertex i gets label
// labels[i-1] where labels is a permutation of 1..n (preorder positions).
RootedTree tree_from_offsets(const std::vector<int>& offsets, const std::vector<int>& labels);
std::vector<int> cycle_lemma_rotation(const std::vector<int>& offsets);

}  // namespace treecut
