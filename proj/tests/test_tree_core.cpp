#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <queue>
#include <set>

#include "test_support.hpp"
#include "treecut/errors.hpp"
#include "treecut/exact.hpp"
#include "treecut/rng.hpp"
#include "treecut/rooted_tree.hpp"
#include "treecut/samplers.hpp"

using namespace treecut;
using test_support::path_tree;
using test_support::star_tree;
using test_support::tree;

TEST_SUITE_BEGIN("tree_core");

TEST_CASE("construction validates the parent array") {
    CHECK_NOTHROW(tree(1, {1, 1, 2}));
    CHECK_THROWS_AS(tree(2, {1, 1}), InvalidArgument);       // root not self-parent
    CHECK_THROWS_AS(tree(1, {1, 2}), InvalidArgument);       // two self-parents
    CHECK_THROWS_AS(tree(1, {1, 3, 2}), InvalidArgument);    // 2-cycle off the root
    CHECK_THROWS_AS(tree(1, {1, 5, 2}), InvalidArgument);    // out of range
    CHECK_THROWS_AS(RootedTree(1, {0}), InvalidArgument);    // empty vertex set
}

TEST_CASE("validation accepts exactly the n^(n-1) parent arrays for n <= 4") {
    for (int n = 1; n <= 4; ++n) {
        long long expected = 1;
        for (int i = 0; i < n - 1; ++i) expected *= n;
        long long accepted = 0;
        // All n^n parent arrays, each tried with every root choice consistent
        // with its self-parent structure: an array is a tree iff it has
        // exactly one self-parent and is acyclic.
        std::vector<int> parent(static_cast<std::size_t>(n) + 1, 1);
        long long arrays = 1;
        for (int i = 0; i < n; ++i) arrays *= n;
        for (long long code = 0; code < arrays; ++code) {
            long long c = code;
            int self = 0, root = 0;
            for (int v = 1; v <= n; ++v) {
                parent[static_cast<std::size_t>(v)] = 1 + static_cast<int>(c % n);
                c /= n;
                if (parent[static_cast<std::size_t>(v)] == v) {
                    ++self;
                    root = v;
                }
            }
            if (self == 1 && oracle::valid_parent_array(root, parent)) ++accepted;
        }
        CHECK(accepted == expected);
    }
}

TEST_CASE("reroot identity and two-vertex flip") {
    auto t = path_tree(3);
    CHECK(reroot(t, t.root()) == t);
    auto two = tree(1, {1, 1});
    auto flipped = reroot(two, 2);
    CHECK(flipped.root() == 2);
    CHECK(flipped.parent(1) == 2);
    CHECK(edge_set(flipped) == edge_set(two));
    CHECK_THROWS_AS(reroot(two, 3), InvalidArgument);
}

TEST_CASE("reroot is an edge-preserving involution") {
    RngStream rng(77, 0);
    for (int rep = 0; rep < 200; ++rep) {
        auto t = sample_cayley(6, rng);
        int v = 1 + static_cast<int>(rng.below(6));
        auto back = reroot(reroot(t, v), t.root());
        CHECK(back == t);
        CHECK(edge_set(reroot(t, v)) == edge_set(t));
    }
}

TEST_CASE("spanned subtree basics") {
    auto t = path_tree(3);
    auto single = spanned_subtree(t, {t.root()});
    CHECK(single.edge_count() == 0);
    CHECK(single.span_root == t.root());

    auto whole = spanned_subtree(t, {1, 3});
    CHECK(whole.edge_count() == 2);
    CHECK(whole.vertices == std::vector<int>{1, 2, 3});

    auto star = star_tree(6);
    auto span = spanned_subtree(star, {1, 2, 3, 4});
    CHECK(span.edge_count() == 3);

    CHECK_THROWS_AS(spanned_subtree(t, {}), InvalidArgument);
    CHECK_THROWS_AS(spanned_subtree(t, {9}), InvalidArgument);
}

namespace {

// Independent oracle: union of explicit BFS paths between all selected pairs.
std::set<int> brute_force_span(const RootedTree& t, const std::vector<int>& sel) {
    int n = t.n();
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n) + 1);
    for (int v = 1; v <= n; ++v)
        if (v != t.root()) {
            adj[static_cast<std::size_t>(v)].push_back(t.parent(v));
            adj[static_cast<std::size_t>(t.parent(v))].push_back(v);
        }
    std::set<int> span;
    for (int a : sel)
        for (int b : sel) {
            std::vector<int> prev(static_cast<std::size_t>(n) + 1, 0);
            std::queue<int> q;
            q.push(a);
            prev[static_cast<std::size_t>(a)] = a;
            while (!q.empty()) {
                int v = q.front();
                q.pop();
                for (int u : adj[static_cast<std::size_t>(v)])
                    if (prev[static_cast<std::size_t>(u)] == 0) {
                        prev[static_cast<std::size_t>(u)] = v;
                        q.push(u);
                    }
            }
            for (int v = b; v != a; v = prev[static_cast<std::size_t>(v)]) span.insert(v);
            span.insert(a);
        }
    return span;
}

}  // namespace

TEST_CASE("spanned subtree agrees with a path-union oracle") {
    RngStream rng(5, 0);
    for (int rep = 0; rep < 300; ++rep) {
        int n = 2 + static_cast<int>(rng.below(7));
        auto t = sample_cayley(n, rng);
        int k = 1 + static_cast<int>(rng.below(3));
        std::vector<int> sel;
        for (int i = 0; i < k; ++i) sel.push_back(1 + static_cast<int>(rng.below(n)));
        auto span = spanned_subtree(t, sel);
        auto brute = brute_force_span(t, sel);
        CHECK(std::set<int>(span.vertices.begin(), span.vertices.end()) == brute);
        CHECK(span.edge_count() <= n - 1);
        if (span.edge_count() == n - 1) CHECK(span.vertices.size() == static_cast<std::size_t>(n));
        // Parent structure is induced; the span root is the member closest
        // to the tree root.
        auto d = depths_of(t);
        int closest = span.vertices.front();
        for (int v : span.vertices)
            if (d[static_cast<std::size_t>(v)] < d[static_cast<std::size_t>(closest)]) closest = v;
        CHECK(span.span_root == closest);
    }
}

TEST_CASE("planting counts edges and never counts markers") {
    auto one = RootedTree();
    auto p1 = plant(one, {1});
    CHECK(p1.n() == 1);
    CHECK(p1.k() == 1);
    CHECK(p1.edge_count() == 1);

    auto t = path_tree(3);
    auto p2 = plant(t, {2, 2});
    CHECK(p2.edge_count() == 4);
    CHECK(p2.marker_label(0) == 4);
    CHECK(p2.marker_label(1) == 5);

    auto p3 = plant(t, {1, 2, 3});
    CHECK(p3.n() == 3);  // node counts exclude markers
    CHECK_THROWS_AS(plant(t, {0}), InvalidArgument);
}

TEST_CASE("subtree membership matches a BFS oracle") {
    auto t = tree(1, {1, 1, 1, 2, 2});  // root 1, children 2,3; 2 has 4,5
    CHECK(subtree_membership(t, 1) == std::vector<int>{1, 2, 3, 4, 5});
    CHECK(subtree_membership(t, 2) == std::vector<int>{2, 4, 5});
    CHECK(subtree_membership(t, 3) == std::vector<int>{3});

    RngStream rng(11, 0);
    for (int rep = 0; rep < 100; ++rep) {
        auto s = sample_cayley(7, rng);
        int v = 1 + static_cast<int>(rng.below(7));
        // BFS over children as an independent route.
        auto ch = children_of(s);
        std::set<int> seen{v};
        std::queue<int> q;
        q.push(v);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int c : ch[static_cast<std::size_t>(u)]) {
                seen.insert(c);
                q.push(c);
            }
        }
        auto got = subtree_membership(s, v);
        CHECK(std::set<int>(got.begin(), got.end()) == seen);
    }
}

TEST_CASE("depths are path lengths to the root") {
    auto t = tree(2, {2, 2, 1, 3});  // 2 <- 1 <- 3 <- 4
    auto d = depths_of(t);
    CHECK(d[2] == 0);
    CHECK(d[1] == 1);
    CHECK(d[3] == 2);
    CHECK(d[4] == 3);
}

TEST_CASE("tree serialization round trips bit-exactly") {
    RngStream rng(3, 0);
    for (int rep = 0; rep < 200; ++rep) {
        int n = 1 + static_cast<int>(rng.below(9));
        auto t = sample_cayley(n, rng);
        auto line = to_line(t);
        CHECK(parse_tree_line(line) == t);
        CHECK(to_line(parse_tree_line(line)) == line);
    }
    CHECK(to_line(RootedTree()) == "1 1 1");
    CHECK_THROWS_AS(parse_tree_line("3 1 1 1"), InvalidArgument);
    CHECK_THROWS_AS(parse_tree_line("3 1 1 1 2 9"), InvalidArgument);
}

TEST_CASE("forest serialization round trips bit-exactly") {
    RngStream rng(4, 0);
    for (int rep = 0; rep < 200; ++rep) {
        int n = 1 + static_cast<int>(rng.below(8));
        auto f = sample_ordered_forest(n, rng);
        auto text = to_lines(f);
        CHECK(parse_forest_lines(text) == f);
        CHECK(to_lines(parse_forest_lines(text)) == text);
    }
}

TEST_SUITE_END();
