#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "treecut/cutting.hpp"
#include "treecut/rational.hpp"
#include "treecut/rooted_tree.hpp"

namespace treecut::oracle {

// Probability map over arbitrary outcome keys with exact rational weights.
// All identities checked through this module tolerate no numerical error.
template <typename Key>
struct ExactDistribution {
    std::map<Key, Rational> p;

    void add(const Key& key, const Rational& prob) { p[key] += prob; }

    Rational total() const {
        Rational s = 0;
        for (auto& [key, prob] : p) s += prob;
        return s;
    }
    bool is_probability() const { return total() == 1; }

    Rational probability(const Key& key) const {
        auto it = p.find(key);
        return it == p.end() ? Rational(0) : it->second;
    }

    template <typename NewKey>
    ExactDistribution<NewKey> map_keys(const std::function<NewKey(const Key&)>& f) const {
        ExactDistribution<NewKey> out;
        for (auto& [key, prob] : p) out.add(f(key), prob);
        return out;
    }
};

// Half the L1 distance between two exact laws (0 means identical).
template <typename Key>
Rational tv_distance(const ExactDistribution<Key>& a, const ExactDistribution<Key>& b) {
    Rational s = 0;
    auto ia = a.p.begin();
    auto ib = b.p.begin();
    while (ia != a.p.end() || ib != b.p.end()) {
        if (ib == b.p.end() || (ia != a.p.end() && ia->first < ib->first)) {
            s += abs(ia->second);
            ++ia;
        } else if (ia == a.p.end() || ib->first < ia->first) {
            s += abs(ib->second);
            ++ib;
        } else {
            s += abs(ia->second - ib->second);
            ++ia;
            ++ib;
        }
    }
    return s / 2;
}

// --- enumeration -------------------------------------------------------------

// Validity check for an arbitrary parent array (no exceptions).
bool valid_parent_array(int root, const std::vector<int>& parent);

// All n^{n-1} rooted labelled trees on 1..n.  Guarded at n <= 7.
std::vector<RootedTree> enumerate_trees(int n);

// All n^n ordered forests on 1..n, via the tree-with-vertex bijection.
std::vector<OrderedForest> enumerate_forests(int n);

// --- pruning dynamics, exact -------------------------------------------------

// Visit every effective-vertex sequence of the pruning dynamics on t with its
// exact probability.  Guarded at n <= 5.
void for_each_dynamics_trace(
    const RootedTree& t,
    const std::function<void(const Rational&, const std::vector<int>&)>& visit);

// Joint law of (chained tree, root of the driven tree) over a uniform tree.
ExactDistribution<std::pair<std::string, int>> that_root_law(int n);

// Law of the cut-order forest over a uniform tree.
ExactDistribution<std::string> forest_law(int n);

// Joint law of (forest, attachment vector): entry i of the vector is the
// parent in the driven tree of the i-th component root, for i < kappa.
ExactDistribution<std::pair<std::string, std::vector<int>>> forest_attachment_law(int n);

// Claimed conditional law: independent uniforms over the later components.
ExactDistribution<std::vector<int>> attachment_product_law(const OrderedForest& f);

// Exact conditional law of the attachment vector given that the pruning
// dynamics on a uniform tree produced the forest f (computed from the joint
// law by conditioning; equals attachment_product_law on every forest).
ExactDistribution<std::vector<int>> attachment_conditional_law(const OrderedForest& f);

// Exact law of the number of effective cuts on a fixed tree.
ExactDistribution<int> dynamics_kappa_law(const RootedTree& t);

// Pushforward of the uniform forest law through the random reverse map.
ExactDistribution<std::string> reverse_transform_law(int n);

// --- cutting, exact ----------------------------------------------------------

// Two ways to randomize one cut.  They agree for a single marker and
// asymptotically, but differ when a component carries several markers:
//
//   edge_uniform:     a uniform edge among all edges of the marked
//                     components (the bare edge-removal rule; the canonical
//                     reordering transports exactly this law).
//   vertex_selection: a uniform (marker, component vertex) selection, the
//                     removed edge being the one above the vertex toward
//                     that marker.  This is the law under which the cut
//                     count minus k matches the spanned edge count exactly,
//                     and the law the sampling operations implement.
enum class CutWeighting { edge_uniform, vertex_selection };

// Visit every removal sequence of the planted (ordered=false) or ordered
// (ordered=true) cutting of `targets` in t, with exact probabilities.
// Guarded at n-1+k <= 9 edges.
void for_each_cut_history(
    const RootedTree& t, const std::vector<int>& targets, bool ordered, CutWeighting weighting,
    const std::function<void(const Rational&, const std::vector<PlantedEdge>&)>& visit);

ExactDistribution<std::vector<PlantedEdge>> cut_sequence_law(const RootedTree& t,
                                                             const std::vector<int>& targets,
                                                             bool ordered, CutWeighting weighting);

// Law of the total number of cuts for the planted cutting under vertex
// selection (memoized; matches the planted_cut/ordered_cut operations).
ExactDistribution<int> planted_cut_count_law(const RootedTree& t, const std::vector<int>& targets);

// Mixture of planted_cut_count_law over a uniform tree on 1..n and k
// independent uniform targets.
ExactDistribution<int> planted_cut_count_mixture(int n, int k);

// Law of the edge count of the subtree spanned by the root plus k
// independent uniform vertices of a uniform tree.
ExactDistribution<int> spanned_edges_law(int n, int k);

// --- records, exact ----------------------------------------------------------

// Record-count law over all n! labellings of a fixed tree.  Guarded n <= 7.
ExactDistribution<int> records_law(const RootedTree& t);
Rational records_mean(const RootedTree& t);

// --- serialization helpers ---------------------------------------------------

std::string forest_key(const OrderedForest& f);
std::string tree_key(const RootedTree& t);

}  // namespace treecut::oracle
