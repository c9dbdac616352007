#include "treecut/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "treecut/errors.hpp"

namespace treecut {

RootedTree ab_step(const RootedTree& t, int x_next) {
    if (x_next < 1 || x_next > t.n()) throw InvalidArgument("ab_step: vertex out of range");
    if (x_next == t.root()) return t;
    std::vector<int> parent = t.parents();
    int old_root = t.root();
    parent[static_cast<std::size_t>(x_next)] = x_next;     // cut the edge above x_next
    parent[static_cast<std::size_t>(old_root)] = x_next;   // hang the root component below it
    return RootedTree(x_next, std::move(parent));
}

namespace {

// Shared driver for the pruning dynamics.  `pick` receives the alive list
// (root component, arbitrary order) and returns the index of the vertex to
// prune; `gap` returns how many i.i.d. selections were consumed to land in
// the alive set (>= 1) given the alive count.
template <typename Pick, typename Gap>
ModifiedTrace run_modified(const RootedTree& t, Pick&& pick, Gap&& gap) {
    int n = t.n();
    auto children = children_of(t);

    std::vector<int> alive(static_cast<std::size_t>(n));
    std::vector<int> pos(static_cast<std::size_t>(n) + 1);
    std::vector<char> dead(static_cast<std::size_t>(n) + 1, 0);
    for (int v = 1; v <= n; ++v) {
        alive[static_cast<std::size_t>(v - 1)] = v;
        pos[static_cast<std::size_t>(v)] = v - 1;
    }
    auto remove_alive = [&](int v) {
        int i = pos[static_cast<std::size_t>(v)];
        int last = alive.back();
        alive[static_cast<std::size_t>(i)] = last;
        pos[static_cast<std::size_t>(last)] = i;
        alive.pop_back();
        dead[static_cast<std::size_t>(v)] = 1;
    };

    ModifiedTrace trace;
    std::vector<int> forest_parent = t.parents();
    std::vector<int> dfs;
    std::uint64_t clock = 0;

    while (!alive.empty()) {
        int count = static_cast<int>(alive.size());
        clock += gap(count);
        int v = alive[static_cast<std::size_t>(pick(alive))];
        trace.effective_times.push_back(clock);
        trace.effective_vertices.push_back(v);
        forest_parent[static_cast<std::size_t>(v)] = v;
        // Prune the subtree of v inside the surviving component.
        dfs.assign(1, v);
        while (!dfs.empty()) {
            int u = dfs.back();
            dfs.pop_back();
            remove_alive(u);
            for (int c : children[static_cast<std::size_t>(u)])
                if (!dead[static_cast<std::size_t>(c)]) dfs.push_back(c);
        }
    }

    trace.forest.n = n;
    trace.forest.parent = forest_parent;
    trace.forest.roots = trace.effective_vertices;

    std::vector<int> that_parent = std::move(forest_parent);
    for (std::size_t i = 0; i + 1 < trace.effective_vertices.size(); ++i)
        that_parent[static_cast<std::size_t>(trace.effective_vertices[i + 1])] =
            trace.effective_vertices[i];
    trace.that_tree = RootedTree(trace.effective_vertices.front(), std::move(that_parent));
    return trace;
}

}  // namespace

ModifiedTrace modified_dynamics(const RootedTree& t, RngStream& rng) {
    int n = t.n();
    auto pick = [&](const std::vector<int>& alive) {
        return static_cast<int>(rng.below(alive.size()));
    };
    auto gap = [&](int alive_count) -> std::uint64_t {
        if (alive_count == n) return 1;  // nothing pruned yet, every selection lands
        // Selections miss the root component independently with probability
        // 1 - alive/n; the consumed count is geometric on {1,2,...}.
        double p = static_cast<double>(alive_count) / n;
        double u = 1.0 - rng.uniform01();  // in (0, 1]
        double g = std::floor(std::log(u) / std::log1p(-p));
        return 1 + static_cast<std::uint64_t>(std::max(0.0, g));
    };
    return run_modified(t, pick, gap);
}

ModifiedTrace replay_modified(const RootedTree& t, const std::vector<int>& effective) {
    std::size_t at = 0;
    auto pick = [&](const std::vector<int>& alive) {
        if (at >= effective.size())
            throw InvalidArgument("replay_modified: sequence ended before the root was pruned");
        int want = effective[at++];
        for (std::size_t i = 0; i < alive.size(); ++i)
            if (alive[i] == want) return static_cast<int>(i);
        throw InvalidArgument("replay_modified: vertex " + std::to_string(want) +
                              " is not in the surviving component at step " + std::to_string(at));
    };
    auto gap = [](int) -> std::uint64_t { return 1; };
    ModifiedTrace trace = run_modified(t, pick, gap);
    if (at != effective.size())
        throw InvalidArgument("replay_modified: trailing selections after the root was pruned");
    return trace;
}

OrderedForest tree_to_forest(const RootedTree& t, int v) {
    if (v < 1 || v > t.n()) throw InvalidArgument("tree_to_forest: vertex out of range");
    // Path from v up to the root; components listed from v's end.
    OrderedForest f;
    f.n = t.n();
    f.parent = t.parents();
    int u = v;
    while (true) {
        f.roots.push_back(u);
        int p = f.parent[static_cast<std::size_t>(u)];
        f.parent[static_cast<std::size_t>(u)] = u;
        if (p == u) break;
        u = p;
    }
    return f;
}

std::pair<RootedTree, int> forest_to_tree(const OrderedForest& f) {
    f.validate();
    std::vector<int> parent = f.parent;
    for (std::size_t i = 0; i + 1 < f.roots.size(); ++i)
        parent[static_cast<std::size_t>(f.roots[i])] = f.roots[i + 1];
    return {RootedTree(f.roots.back(), std::move(parent)), f.roots.front()};
}

RootedTree reverse_transform(const OrderedForest& f, RngStream& rng) {
    f.validate();
    auto comps = f.components();
    int k = f.k();
    // Flatten component vertex lists from the last component backwards, so
    // the vertices of components i+1..k form a prefix when handling i.
    std::vector<int> flat;
    flat.reserve(static_cast<std::size_t>(f.n));
    std::vector<std::size_t> suffix_size(static_cast<std::size_t>(k) + 1, 0);
    for (int i = k - 1; i >= 0; --i) {
        for (int v : comps[static_cast<std::size_t>(i)]) flat.push_back(v);
        suffix_size[static_cast<std::size_t>(i)] = flat.size();
    }
    std::vector<int> parent = f.parent;
    for (int i = 0; i + 1 < k; ++i) {
        std::size_t pool = suffix_size[static_cast<std::size_t>(i + 1)];
        int target = flat[static_cast<std::size_t>(rng.below(pool))];
        parent[static_cast<std::size_t>(f.roots[static_cast<std::size_t>(i)])] = target;
    }
    return RootedTree(f.roots.back(), std::move(parent));
}

}  // namespace treecut
