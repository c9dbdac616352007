#pragma once

#include <compare>
#include <string>
#include <vector>

namespace treecut {

// Rooted labelled tree on vertices 1..n, stored as a parent array with the
// root as its own parent.  Immutable after construction; structural edits go
// through free functions that return new trees.
class RootedTree {
public:
    // `parent` has size n+1, entry 0 unused; parent[root] == root.
    // Validates: exactly one self-parent (the root), every vertex reaches it.
    RootedTree(int root, std::vector<int> parent);

    // Single vertex tree on {1}.
    RootedTree();

    int n() const { return static_cast<int>(parent_.size()) - 1; }
    int root() const { return root_; }
    int parent(int v) const { return parent_[static_cast<std::size_t>(v)]; }

    // n+1 entries, index 0 unused (0).
    const std::vector<int>& parents() const { return parent_; }

    bool operator==(const RootedTree&) const = default;
    auto operator<=>(const RootedTree&) const = default;

private:
    int root_;
    std::vector<int> parent_;
};

// Ordered forest of rooted trees whose label sets partition {1..n}.
// Stored globally: parent[v] == v iff v is the root of some component, and
// `roots` lists the component roots in forest order.
struct OrderedForest {
    int n = 0;
    std::vector<int> parent;  // size n+1, entry 0 unused
    std::vector<int> roots;   // component roots, order significant

    int k() const { return static_cast<int>(roots.size()); }

    // Root of the component containing v.
    int component_root(int v) const;

    // Vertex lists per component (sorted ascending), aligned with `roots`.
    std::vector<std::vector<int>> components() const;

    // Throws InvalidArgument if the partition/root structure is broken.
    void validate() const;

    bool operator==(const OrderedForest&) const = default;
};

// Tree with extra marker leaves w_1..w_k attached at `attach[0..k-1]`.
// The markers carry labels n+1..n+k and are excluded from vertex counts.
struct PlantedTree {
    RootedTree base;
    std::vector<int> attach;

    int n() const { return base.n(); }
    int k() const { return static_cast<int>(attach.size()); }
    int marker_label(int i) const { return base.n() + 1 + i; }
    // Edge count of the planted tree: (n-1) real edges plus k marker edges.
    int edge_count() const { return base.n() - 1 + k(); }
};

// Subtree spanned by a vertex set: union of all paths between its elements,
// rooted at the element of the span closest to the tree root.
struct SpannedSubtree {
    std::vector<int> vertices;  // sorted ascending
    int span_root = 0;
    // parent within the span; size n+1, 0 for vertices outside the span,
    // span_root maps to itself.
    std::vector<int> parent;

    int edge_count() const { return static_cast<int>(vertices.size()) - 1; }
    bool contains(int v) const { return parent[static_cast<std::size_t>(v)] != 0; }
};

// --- queries ---------------------------------------------------------------

// children[v] sorted ascending; index 0 unused.
std::vector<std::vector<int>> children_of(const RootedTree& t);

// Number of edges from the root to each vertex; index 0 unused.
std::vector<int> depths_of(const RootedTree& t);

// Vertices of the subtree rooted at v (v and its descendants), sorted.
std::vector<int> subtree_membership(const RootedTree& t, int v);

// Unordered edge set as (min,max) pairs, sorted; for structural comparisons.
std::vector<std::pair<int, int>> edge_set(const RootedTree& t);

// --- transformations --------------------------------------------------------

// Same edge set, rerooted at v (parent pointers reversed along the old
// root-to-v path).
RootedTree reroot(const RootedTree& t, int v);

// Spanned subtree of the (distinct elements of) `sel`; throws on empty sel.
SpannedSubtree spanned_subtree(const RootedTree& t, const std::vector<int>& sel);

// Plant marker leaves at the (not necessarily distinct) vertices of `attach`.
PlantedTree plant(const RootedTree& t, const std::vector<int>& attach);

// --- canonical serialization -------------------------------------------------
//
// Tree line:   "n root p(1) p(2) ... p(n)", single spaces.
// Forest:      "k" on its own line, then one tree line per component in
//              forest order.  Component lines use the full ground set with
//              p(v) = 0 marking vertices outside the component, so labels
//              survive the round trip bit-exactly.

std::string to_line(const RootedTree& t);
RootedTree parse_tree_line(const std::string& line);

std::string to_lines(const OrderedForest& f);
OrderedForest parse_forest_lines(const std::string& text);

}  // namespace treecut
