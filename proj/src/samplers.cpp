#include "treecut/samplers.hpp"

#include <algorithm>

#include "treecut/dynamics.hpp"
#include "treecut/errors.hpp"

namespace treecut {

std::vector<std::pair<int, int>> prufer_decode(int n, const std::vector<int>& seq) {
    if (static_cast<int>(seq.size()) != std::max(n - 2, 0))
        throw InvalidArgument("prufer_decode: sequence must have length n-2");
    std::vector<std::pair<int, int>> edges;
    if (n == 1) return edges;
    edges.reserve(static_cast<std::size_t>(n) - 1);
    std::vector<int> degree(static_cast<std::size_t>(n) + 1, 1);
    for (int v : seq) ++degree[static_cast<std::size_t>(v)];
    // Linear scan over leaves: `ptr` only moves forward, `leaf` tracks the
    // current smallest leaf at or below it.
    int ptr = 1;
    while (degree[static_cast<std::size_t>(ptr)] != 1) ++ptr;
    int leaf = ptr;
    for (int v : seq) {
        edges.emplace_back(leaf, v);
        if (--degree[static_cast<std::size_t>(v)] == 1 && v < ptr) {
            leaf = v;
        } else {
            ++ptr;
            while (degree[static_cast<std::size_t>(ptr)] != 1) ++ptr;
            leaf = ptr;
        }
    }
    edges.emplace_back(leaf, n);
    return edges;
}

RootedTree sample_cayley(int n, RngStream& rng) {
    if (n < 1) throw InvalidArgument("sample_cayley: n must be >= 1");
    std::vector<int> seq(static_cast<std::size_t>(std::max(n - 2, 0)));
    for (int& v : seq) v = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    auto edges = prufer_decode(n, seq);
    int root = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    // Orient edges toward the root.
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n) + 1);
    for (auto [a, b] : edges) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    std::vector<int> parent(static_cast<std::size_t>(n) + 1, 0);
    parent[static_cast<std::size_t>(root)] = root;
    std::vector<int> stack{root};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u : adj[static_cast<std::size_t>(v)]) {
            if (parent[static_cast<std::size_t>(u)] == 0) {
                parent[static_cast<std::size_t>(u)] = v;
                stack.push_back(u);
            }
        }
    }
    return RootedTree(root, std::move(parent));
}

OrderedForest sample_ordered_forest(int n, RngStream& rng) {
    if (n < 1) throw InvalidArgument("sample_ordered_forest: n must be >= 1");
    RootedTree t = sample_cayley(n, rng);
    int v = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    return tree_to_forest(t, v);
}

std::vector<int> cycle_lemma_rotation(const std::vector<int>& offsets) {
    int n = static_cast<int>(offsets.size());
    long long sum = 0;
    for (int x : offsets) sum += x;
    if (sum != n - 1) throw InvalidArgument("cycle_lemma_rotation: offsets must sum to n-1");
    // Unique rotation starting just after the first position achieving the
    // minimum of the prefix walk sum_i (offsets_i - 1).
    long long walk = 0, best = 0;
    int cut = 0;
    for (int i = 0; i < n; ++i) {
        walk += offsets[static_cast<std::size_t>(i)] - 1;
        if (walk < best) {
            best = walk;
            cut = i + 1;
        }
    }
    std::vector<int> rotated;
    rotated.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) rotated.push_back(offsets[static_cast<std::size_t>((cut + i) % n)]);
    return rotated;
}

RootedTree tree_from_offsets(const std::vector<int>& offsets, const std::vector<int>& labels) {
    int n = static_cast<int>(offsets.size());
    if (static_cast<int>(labels.size()) != n)
        throw InvalidArgument("tree_from_offsets: need one label per vertex");
    std::vector<int> parent(static_cast<std::size_t>(n) + 1, 0);
    int root = labels[0];
    parent[static_cast<std::size_t>(root)] = root;
    // Depth-first reconstruction: stack holds (label, children still owed).
    std::vector<std::pair<int, int>> stack;
    stack.emplace_back(root, offsets[0]);
    for (int i = 1; i < n; ++i) {
        while (!stack.empty() && stack.back().second == 0) stack.pop_back();
        if (stack.empty()) throw InvalidArgument("tree_from_offsets: invalid walk");
        --stack.back().second;
        int label = labels[static_cast<std::size_t>(i)];
        parent[static_cast<std::size_t>(label)] = stack.back().first;
        stack.emplace_back(label, offsets[static_cast<std::size_t>(i)]);
    }
    return RootedTree(root, std::move(parent));
}

RootedTree sample_conditioned_gw(const OffspringLaw& law, int n, RngStream& rng) {
    if (n < 1) throw InvalidArgument("sample_conditioned_gw: n must be >= 1");
    auto offsets = cycle_lemma_rotation(law.conditioned_offsets(n, rng));
    auto labels = rng.permutation(n);
    return tree_from_offsets(offsets, labels);
}

}  // namespace treecut
