#pragma once

#include <limits>
#include <vector>

#include "treecut/rng.hpp"
#include "treecut/rooted_tree.hpp"

namespace treecut {

// One Poisson arrival of the discrete cutting process.
struct FragmentationEvent {
    double time = 0;          // absolute arrival time
    int vertex = 0;           // selected vertex
    bool effective = false;   // lay in the surviving root component
    int alive_after = 0;      // real vertices attached to the root marker afterwards
    long long cuts_after = 0; // effective-cut counter afterwards
};

// Full record of a fragmentation run on a tree planted at its root: Poisson
// arrivals at total rate sigma*sqrt(n) with uniform vertex marks; an arrival
// is an effective cut iff its vertex still hangs from the root, in which
// case the vertex's surviving subtree is pruned.
struct FragmentationTrace {
    int n = 0;
    double sigma = 1;
    bool complete = false;  // ran until the root itself was cut
    std::vector<FragmentationEvent> events;
    std::vector<int> effective_vertices;      // cut order; last one is the root
    std::vector<std::vector<int>> fragments;  // pruned vertex sets, cut order

    int kappa() const { return static_cast<int>(effective_vertices.size()); }
    int first_cut_vertex() const { return effective_vertices.front(); }
    int last_cut_vertex() const { return effective_vertices.back(); }
    double mu_after(std::size_t event_index) const {
        return static_cast<double>(events[event_index].alive_after) / n;
    }
};

constexpr double kNoHorizon = std::numeric_limits<double>::infinity();

FragmentationTrace fragment(const RootedTree& t, double sigma, RngStream& rng,
                            double horizon = kNoHorizon);

// Event-sum mass functional and the exact time integral of the root mass.
struct MassIntegral {
    double event_sum = 0;    // (1/(sigma sqrt n)) * sum over arrivals of mu after the arrival
    double time_integral = 0;  // integral of mu dt over the whole run
};
MassIntegral mass_integral(const FragmentationTrace& trace);

// sup over time of |L(t)/(sigma sqrt n) - event-sum mass functional at t|.
double count_mass_gap(const FragmentationTrace& trace);

// Chain the pruned-subtree roots in cut order into a single tree on 1..n,
// rooted at the first cut vertex; also reports (first, last) cut vertices.
struct ChainedResult {
    RootedTree tree;
    int first = 0;  // root of the chained tree
    int last = 0;   // the original root's position in it
};
ChainedResult build_chained_tree(const FragmentationTrace& trace, const RootedTree& t);

// Monte Carlo check of the first-cut-on-the-spanned-subtree identity:
// conditional on the vertex set S of the root component just after the first
// arrival hitting the subtree spanned by the root and k uniform vertices,
// the pair (root component tree, parent of the cut vertex) is uniform over
// the |S|^|S| possibilities.  Aggregated Pearson statistic across the
// observed conditioning sets.
struct SpanCutCheck {
    long long replicates = 0;
    long long skipped = 0;  // first span hit was the root itself (empty S)
    double statistic = 0;
    long long degrees_of_freedom = 0;
    double p_value = 1;
    int groups = 0;
};
SpanCutCheck first_span_cut_check(int n, int k, RngStream& rng, long long replicates);

}  // namespace treecut
