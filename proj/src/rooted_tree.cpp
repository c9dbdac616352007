#include "treecut/rooted_tree.hpp"

#include <algorithm>
#include <sstream>

#include "treecut/errors.hpp"

namespace treecut {

namespace {

void check_vertex(int v, int n, const char* who) {
    if (v < 1 || v > n)
        throw InvalidArgument(std::string(who) + ": vertex " + std::to_string(v) +
                              " out of range 1.." + std::to_string(n));
}

}  // namespace

RootedTree::RootedTree() : root_(1), parent_{0, 1} {}

RootedTree::RootedTree(int root, std::vector<int> parent) : root_(root), parent_(std::move(parent)) {
    int n = static_cast<int>(parent_.size()) - 1;
    if (n < 1) throw InvalidArgument("RootedTree: need at least one vertex");
    check_vertex(root_, n, "RootedTree");
    if (parent_[0] != 0) parent_[0] = 0;
    int self_parents = 0;
    for (int v = 1; v <= n; ++v) {
        int p = parent_[static_cast<std::size_t>(v)];
        check_vertex(p, n, "RootedTree(parent)");
        if (p == v) ++self_parents;
    }
    if (self_parents != 1 || parent_[static_cast<std::size_t>(root_)] != root_)
        throw InvalidArgument("RootedTree: root must be the unique self-parent");
    // Every vertex must reach the root in < n steps.
    std::vector<int> state(static_cast<std::size_t>(n) + 1, 0);  // 0 unseen, 1 ok
    std::vector<int> path;
    state[static_cast<std::size_t>(root_)] = 1;
    for (int v = 1; v <= n; ++v) {
        int u = v;
        path.clear();
        while (state[static_cast<std::size_t>(u)] == 0) {
            path.push_back(u);
            state[static_cast<std::size_t>(u)] = 2;  // on current path
            u = parent_[static_cast<std::size_t>(u)];
            if (state[static_cast<std::size_t>(u)] == 2)
                throw InvalidArgument("RootedTree: parent array contains a cycle");
        }
        for (int w : path) state[static_cast<std::size_t>(w)] = 1;
    }
}

int OrderedForest::component_root(int v) const {
    while (parent[static_cast<std::size_t>(v)] != v) v = parent[static_cast<std::size_t>(v)];
    return v;
}

std::vector<std::vector<int>> OrderedForest::components() const {
    std::vector<int> index_of_root(static_cast<std::size_t>(n) + 1, -1);
    for (std::size_t i = 0; i < roots.size(); ++i)
        index_of_root[static_cast<std::size_t>(roots[i])] = static_cast<int>(i);
    std::vector<std::vector<int>> comps(roots.size());
    for (int v = 1; v <= n; ++v) {
        int r = component_root(v);
        int idx = index_of_root[static_cast<std::size_t>(r)];
        if (idx < 0) throw InvalidArgument("OrderedForest: component root missing from roots list");
        comps[static_cast<std::size_t>(idx)].push_back(v);
    }
    return comps;
}

void OrderedForest::validate() const {
    if (n < 1 || static_cast<int>(parent.size()) != n + 1)
        throw InvalidArgument("OrderedForest: bad parent array size");
    for (int v = 1; v <= n; ++v) check_vertex(parent[static_cast<std::size_t>(v)], n, "OrderedForest");
    std::vector<char> is_root(static_cast<std::size_t>(n) + 1, 0);
    for (int r : roots) {
        check_vertex(r, n, "OrderedForest(root)");
        if (parent[static_cast<std::size_t>(r)] != r)
            throw InvalidArgument("OrderedForest: listed root is not a self-parent");
        if (is_root[static_cast<std::size_t>(r)])
            throw InvalidArgument("OrderedForest: duplicate root");
        is_root[static_cast<std::size_t>(r)] = 1;
    }
    int self = 0;
    for (int v = 1; v <= n; ++v)
        if (parent[static_cast<std::size_t>(v)] == v) {
            ++self;
            if (!is_root[static_cast<std::size_t>(v)])
                throw InvalidArgument("OrderedForest: self-parent not listed in roots");
        }
    if (self != k()) throw InvalidArgument("OrderedForest: root count mismatch");
    components();  // throws if some vertex climbs to an unlisted root or loops
}

std::vector<std::vector<int>> children_of(const RootedTree& t) {
    std::vector<std::vector<int>> ch(static_cast<std::size_t>(t.n()) + 1);
    for (int v = 1; v <= t.n(); ++v)
        if (v != t.root()) ch[static_cast<std::size_t>(t.parent(v))].push_back(v);
    return ch;
}

std::vector<int> depths_of(const RootedTree& t) {
    std::vector<int> d(static_cast<std::size_t>(t.n()) + 1, -1);
    d[static_cast<std::size_t>(t.root())] = 0;
    // Vertices reach the root, so repeated climbing terminates; memoize.
    for (int v = 1; v <= t.n(); ++v) {
        if (d[static_cast<std::size_t>(v)] >= 0) continue;
        int u = v, steps = 0;
        while (d[static_cast<std::size_t>(u)] < 0) {
            u = t.parent(u);
            ++steps;
        }
        int base = d[static_cast<std::size_t>(u)] + steps;
        u = v;
        while (d[static_cast<std::size_t>(u)] < 0) {
            d[static_cast<std::size_t>(u)] = base--;
            u = t.parent(u);
        }
    }
    return d;
}

std::vector<int> subtree_membership(const RootedTree& t, int v) {
    check_vertex(v, t.n(), "subtree_membership");
    auto ch = children_of(t);
    std::vector<int> out, stack{v};
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        out.push_back(u);
        for (int c : ch[static_cast<std::size_t>(u)]) stack.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<int, int>> edge_set(const RootedTree& t) {
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(t.n()) - 1);
    for (int v = 1; v <= t.n(); ++v)
        if (v != t.root()) edges.emplace_back(std::min(v, t.parent(v)), std::max(v, t.parent(v)));
    std::sort(edges.begin(), edges.end());
    return edges;
}

RootedTree reroot(const RootedTree& t, int v) {
    check_vertex(v, t.n(), "reroot");
    if (v == t.root()) return t;
    std::vector<int> parent = t.parents();
    int cur = v, prev = v;
    while (parent[static_cast<std::size_t>(cur)] != cur) {
        int up = parent[static_cast<std::size_t>(cur)];
        parent[static_cast<std::size_t>(cur)] = prev;
        prev = cur;
        cur = up;
    }
    parent[static_cast<std::size_t>(cur)] = prev;  // old root now points down the path
    parent[static_cast<std::size_t>(v)] = v;
    return RootedTree(v, std::move(parent));
}

SpannedSubtree spanned_subtree(const RootedTree& t, const std::vector<int>& sel) {
    if (sel.empty()) throw InvalidArgument("spanned_subtree: empty selection");
    int n = t.n();
    std::vector<char> in_sel(static_cast<std::size_t>(n) + 1, 0);
    for (int v : sel) {
        check_vertex(v, n, "spanned_subtree");
        in_sel[static_cast<std::size_t>(v)] = 1;
    }
    int m = 0;
    for (int v = 1; v <= n; ++v) m += in_sel[static_cast<std::size_t>(v)];

    auto ch = children_of(t);
    // Postorder pass: count selected vertices per subtree and how many child
    // subtrees carry at least one.
    std::vector<int> count(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> busy_children(static_cast<std::size_t>(n) + 1, 0);
    std::vector<std::pair<int, bool>> stack{{t.root(), false}};
    while (!stack.empty()) {
        auto [v, done] = stack.back();
        stack.pop_back();
        if (!done) {
            stack.emplace_back(v, true);
            for (int c : ch[static_cast<std::size_t>(v)]) stack.emplace_back(c, false);
        } else {
            int c = in_sel[static_cast<std::size_t>(v)] ? 1 : 0;
            for (int u : ch[static_cast<std::size_t>(v)]) {
                if (count[static_cast<std::size_t>(u)] > 0) {
                    c += count[static_cast<std::size_t>(u)];
                    ++busy_children[static_cast<std::size_t>(v)];
                }
            }
            count[static_cast<std::size_t>(v)] = c;
        }
    }

    SpannedSubtree span;
    span.parent.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int v = 1; v <= n; ++v) {
        int c = count[static_cast<std::size_t>(v)];
        bool in_span = in_sel[static_cast<std::size_t>(v)] || (c >= 1 && c < m) ||
                       (c == m && busy_children[static_cast<std::size_t>(v)] >= 2);
        if (in_span) span.vertices.push_back(v);
    }
    for (int v : span.vertices) span.parent[static_cast<std::size_t>(v)] = t.parent(v);
    // The span root is the unique member whose parent lies outside the span.
    for (int v : span.vertices) {
        int p = t.parent(v);
        if (p == v || span.parent[static_cast<std::size_t>(p)] == 0) {
            span.span_root = v;
            span.parent[static_cast<std::size_t>(v)] = v;
        }
    }
    return span;
}

PlantedTree plant(const RootedTree& t, const std::vector<int>& attach) {
    for (int v : attach) check_vertex(v, t.n(), "plant");
    return PlantedTree{t, attach};
}

std::string to_line(const RootedTree& t) {
    std::ostringstream os;
    os << t.n() << ' ' << t.root();
    for (int v = 1; v <= t.n(); ++v) os << ' ' << t.parent(v);
    return os.str();
}

RootedTree parse_tree_line(const std::string& line) {
    std::istringstream is(line);
    int n = 0, root = 0;
    if (!(is >> n >> root) || n < 1) throw InvalidArgument("parse_tree_line: malformed header");
    std::vector<int> parent(static_cast<std::size_t>(n) + 1, 0);
    for (int v = 1; v <= n; ++v)
        if (!(is >> parent[static_cast<std::size_t>(v)]))
            throw InvalidArgument("parse_tree_line: truncated parent list");
    std::string rest;
    if (is >> rest) throw InvalidArgument("parse_tree_line: trailing tokens");
    return RootedTree(root, std::move(parent));
}

std::string to_lines(const OrderedForest& f) {
    std::ostringstream os;
    os << f.k() << '\n';
    auto comps = f.components();
    for (std::size_t i = 0; i < comps.size(); ++i) {
        os << f.n << ' ' << f.roots[i];
        std::vector<char> member(static_cast<std::size_t>(f.n) + 1, 0);
        for (int v : comps[i]) member[static_cast<std::size_t>(v)] = 1;
        for (int v = 1; v <= f.n; ++v)
            os << ' ' << (member[static_cast<std::size_t>(v)] ? f.parent[static_cast<std::size_t>(v)] : 0);
        os << '\n';
    }
    return os.str();
}

OrderedForest parse_forest_lines(const std::string& text) {
    std::istringstream is(text);
    int k = 0;
    if (!(is >> k) || k < 1) throw InvalidArgument("parse_forest_lines: malformed header");
    OrderedForest f;
    for (int i = 0; i < k; ++i) {
        int n = 0, root = 0;
        if (!(is >> n >> root)) throw InvalidArgument("parse_forest_lines: truncated component");
        if (i == 0) {
            f.n = n;
            f.parent.assign(static_cast<std::size_t>(n) + 1, 0);
        } else if (n != f.n) {
            throw InvalidArgument("parse_forest_lines: inconsistent ground set size");
        }
        f.roots.push_back(root);
        for (int v = 1; v <= n; ++v) {
            int p = 0;
            if (!(is >> p)) throw InvalidArgument("parse_forest_lines: truncated parent list");
            if (p != 0) {
                if (f.parent[static_cast<std::size_t>(v)] != 0)
                    throw InvalidArgument("parse_forest_lines: vertex in two components");
                f.parent[static_cast<std::size_t>(v)] = p;
            }
        }
    }
    f.validate();
    return f;
}

}  // namespace treecut
