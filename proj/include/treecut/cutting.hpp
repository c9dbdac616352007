#pragma once

#include <utility>
#include <vector>

#include "treecut/rational.hpp"
#include "treecut/rng.hpp"
#include "treecut/rooted_tree.hpp"

namespace treecut {

// An edge of a planted tree, in its original orientation: (child, parent)
// for tree edges, (marker label n+i, attach vertex) for marker edges.
using PlantedEdge = std::pair<int, int>;

// Record of one run of an edge-removal procedure on t planted at `targets`.
struct CutTrace {
    int n = 0;
    int k = 0;
    std::vector<PlantedEdge> removed;       // E_1, ..., E_M in removal order
    std::vector<int> component_sizes;       // real size of C(W,.) after 0..M cuts
    std::vector<int> isolation_steps;       // sorted; i-th marker isolation time M_i
    std::vector<int> marker_isolation;      // per-marker isolation step (target order)

    int total_cuts() const { return static_cast<int>(removed.size()); }
};

// Planted cutting: repeatedly remove a uniform edge from among the edges of
// the components containing the markers, until every marker is isolated.
CutTrace planted_cut(const RootedTree& t, const std::vector<int>& targets, RngStream& rng);

// Ordered cutting: for each marker in target order, repeatedly remove a
// uniform edge of that marker's current component until it is isolated.
// Markers isolated during an earlier phase get an empty phase.
CutTrace ordered_cut(const RootedTree& t, const std::vector<int>& targets, RngStream& rng);

// Canonical reordering of a possible cutting sequence: all cuts that shrink
// marker 1's component first (in arrival order), then the remaining cuts for
// marker 2, and so on.  Throws InvalidCutSequence (with the first offending
// 0-based index) if `seq` is not a possible cutting sequence for (t, targets).
struct ReorderPlan {
    // Times are 1-based positions in the input sequence, as are a/b block
    // boundaries in the output sequence.
    std::vector<std::vector<int>> U;        // per marker: times cutting its component
    std::vector<std::vector<int>> U_star;   // U_i minus earlier markers' times
    std::vector<int> s;                     // first index within U_i (1-based) landing in U_star
    std::vector<int> m;                     // |U_i|
    std::vector<int> a, b;                  // block i occupies positions a_i..b_i of the output
};
std::pair<ReorderPlan, std::vector<PlantedEdge>> reorder(const RootedTree& t,
                                                         const std::vector<int>& targets,
                                                         const std::vector<PlantedEdge>& seq);

// Number of record vertices under a uniform random labelling: vertices whose
// label is minimal on their path to the root.  One O(n) pass; distributed as
// the number of effective cuts needed to isolate the root under uniform
// vertex-selection cutting.
int records_count(const RootedTree& t, RngStream& rng);

// Same count for a fixed ranking (rank[v] must be a permutation of 1..n).
int records_count_with_ranks(const RootedTree& t, const std::vector<int>& rank);

// Probability that vertex u produces a cut: exactly 1/(h_t(u)+1).
Rational expected_cut_probability(const RootedTree& t, int u);

// Isolation steps of each marker derived from a removal sequence
// (position of each marker edge, 1-based), in target order.
std::vector<int> marker_isolation_steps(int n, int k, const std::vector<PlantedEdge>& seq);

}  // namespace treecut
