#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "treecut/rng.hpp"
#include "treecut/rooted_tree.hpp"

namespace treecut {

// One step of the root-rewiring dynamics: selecting the current root leaves
// the tree unchanged; selecting any other vertex x removes the edge above x,
// hangs the old root's component below x, and makes x the new root.
RootedTree ab_step(const RootedTree& t, int x_next);

// Output of the pruning variant of the dynamics, which ignores selections
// falling in already-pruned subtrees.  Components of `forest` appear in cut
// order (the original root's component last); `that_tree` chains the
// component roots r_1 <- r_2 <- ... <- r_kappa and is rooted at r_1.
struct ModifiedTrace {
    std::vector<std::uint64_t> effective_times;  // sigma_1 < ... < sigma_kappa
    std::vector<int> effective_vertices;         // x at each effective time
    OrderedForest forest;
    RootedTree that_tree;

    int kappa() const { return static_cast<int>(effective_vertices.size()); }
};

// Run the pruning dynamics on t driven by i.i.d. uniform selections.
// Effective vertices are drawn directly from the surviving root component
// (identical conditional law); the skipped-selection counts are simulated so
// the reported times match the i.i.d. driving sequence.
ModifiedTrace modified_dynamics(const RootedTree& t, RngStream& rng);

// Deterministic replay for a given effective-vertex sequence (must end at
// the root and every entry must be alive at its turn; throws otherwise).
// Effective times are the trivial 1..kappa stamps.
ModifiedTrace replay_modified(const RootedTree& t, const std::vector<int>& effective);

// Cut the edges of the path from r(t) to v; components are listed from v's
// end of the path back to the root's end (the component containing r(t)
// comes last).
OrderedForest tree_to_forest(const RootedTree& t, int v);

// Inverse of tree_to_forest: rebuilds (t, v).
std::pair<RootedTree, int> forest_to_tree(const OrderedForest& f);

// Random inverse of the forest map: attach the root of each component to a
// uniform vertex among the later components, rooting at the last root.
// Maps the uniform forest law to the uniform tree law.
RootedTree reverse_transform(const OrderedForest& f, RngStream& rng);

}  // namespace treecut
