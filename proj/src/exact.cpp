#include "treecut/exact.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "treecut/dynamics.hpp"
#include "treecut/errors.hpp"

namespace treecut::oracle {

namespace {

Rational uniform_tree_weight(int n) {
    BigInt trees = 1;
    for (int i = 0; i < n - 1; ++i) trees *= n;
    return Rational(1, trees);
}

}  // namespace

std::string tree_key(const RootedTree& t) { return to_line(t); }
std::string forest_key(const OrderedForest& f) { return to_lines(f); }

bool valid_parent_array(int root, const std::vector<int>& parent) {
    int n = static_cast<int>(parent.size()) - 1;
    if (n < 1 || root < 1 || root > n) return false;
    int self = 0;
    for (int v = 1; v <= n; ++v) {
        int p = parent[static_cast<std::size_t>(v)];
        if (p < 1 || p > n) return false;
        if (p == v) ++self;
    }
    if (self != 1 || parent[static_cast<std::size_t>(root)] != root) return false;
    for (int v = 1; v <= n; ++v) {
        int u = v, steps = 0;
        while (u != root) {
            u = parent[static_cast<std::size_t>(u)];
            if (++steps > n) return false;
        }
    }
    return true;
}

std::vector<RootedTree> enumerate_trees(int n) {
    if (n < 1) throw InvalidArgument("enumerate_trees: n must be >= 1");
    if (n > 7) throw BudgetExceeded("enumerate_trees: budget is n <= 7");
    std::vector<RootedTree> trees;
    // Odometer over parent choices of the non-root vertices, for each root.
    for (int root = 1; root <= n; ++root) {
        std::vector<int> parent(static_cast<std::size_t>(n) + 1, 0);
        parent[static_cast<std::size_t>(root)] = root;
        std::vector<int> slots;
        for (int v = 1; v <= n; ++v)
            if (v != root) slots.push_back(v);
        std::vector<int> choice(slots.size(), 1);
        while (true) {
            for (std::size_t i = 0; i < slots.size(); ++i)
                parent[static_cast<std::size_t>(slots[i])] = choice[i];
            if (valid_parent_array(root, parent)) trees.emplace_back(root, parent);
            std::size_t i = 0;
            while (i < choice.size() && choice[i] == n) choice[i++] = 1;
            if (i == choice.size()) break;
            ++choice[i];
        }
        if (slots.empty()) break;  // n == 1: single tree, single root
    }
    return trees;
}

std::vector<OrderedForest> enumerate_forests(int n) {
    std::vector<OrderedForest> forests;
    for (const RootedTree& t : enumerate_trees(n))
        for (int v = 1; v <= n; ++v) forests.push_back(tree_to_forest(t, v));
    return forests;
}

void for_each_dynamics_trace(
    const RootedTree& t,
    const std::function<void(const Rational&, const std::vector<int>&)>& visit) {
    int n = t.n();
    if (n > 5) throw BudgetExceeded("for_each_dynamics_trace: budget is n <= 5");
    // Subtree bitmasks of the original tree (bit v-1 for vertex v).
    std::vector<unsigned> sub(static_cast<std::size_t>(n) + 1, 0);
    auto children = children_of(t);
    std::vector<std::pair<int, bool>> stack{{t.root(), false}};
    while (!stack.empty()) {
        auto [v, done] = stack.back();
        stack.pop_back();
        if (!done) {
            stack.emplace_back(v, true);
            for (int c : children[static_cast<std::size_t>(v)]) stack.emplace_back(c, false);
        } else {
            unsigned mask = 1u << (v - 1);
            for (int c : children[static_cast<std::size_t>(v)])
                mask |= sub[static_cast<std::size_t>(c)];
            sub[static_cast<std::size_t>(v)] = mask;
        }
    }

    std::vector<int> seq;
    std::function<void(unsigned, const Rational&)> rec = [&](unsigned alive, const Rational& prob) {
        int count = std::popcount(alive);
        Rational share = prob / count;
        for (int v = 1; v <= n; ++v) {
            if (!(alive & (1u << (v - 1)))) continue;
            seq.push_back(v);
            if (v == t.root()) {
                visit(share, seq);
            } else {
                rec(alive & ~sub[static_cast<std::size_t>(v)], share);
            }
            seq.pop_back();
        }
    };
    rec((1u << n) - 1u, Rational(1));
}

namespace {

// Forest + chained tree determined by an effective-vertex sequence.
struct TraceOutcome {
    OrderedForest forest;
    RootedTree that;
    std::vector<int> attachments;  // parent in the driven tree of roots[i], i < kappa-1
};

TraceOutcome outcome_of(const RootedTree& t, const std::vector<int>& seq) {
    TraceOutcome out;
    out.forest.n = t.n();
    out.forest.parent = t.parents();
    out.forest.roots = seq;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        out.attachments.push_back(t.parent(seq[i]));
    for (int v : seq) out.forest.parent[static_cast<std::size_t>(v)] = v;
    std::vector<int> that_parent = out.forest.parent;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        that_parent[static_cast<std::size_t>(seq[i + 1])] = seq[i];
    out.that = RootedTree(seq.front(), std::move(that_parent));
    return out;
}

}  // namespace

ExactDistribution<std::pair<std::string, int>> that_root_law(int n) {
    ExactDistribution<std::pair<std::string, int>> law;
    Rational w = uniform_tree_weight(n);
    for (const RootedTree& t : enumerate_trees(n)) {
        for_each_dynamics_trace(t, [&](const Rational& p, const std::vector<int>& seq) {
            law.add({tree_key(outcome_of(t, seq).that), t.root()}, w * p);
        });
    }
    return law;
}

ExactDistribution<std::string> forest_law(int n) {
    ExactDistribution<std::string> law;
    Rational w = uniform_tree_weight(n);
    for (const RootedTree& t : enumerate_trees(n)) {
        for_each_dynamics_trace(t, [&](const Rational& p, const std::vector<int>& seq) {
            law.add(forest_key(outcome_of(t, seq).forest), w * p);
        });
    }
    return law;
}

ExactDistribution<std::pair<std::string, std::vector<int>>> forest_attachment_law(int n) {
    ExactDistribution<std::pair<std::string, std::vector<int>>> law;
    Rational w = uniform_tree_weight(n);
    for (const RootedTree& t : enumerate_trees(n)) {
        for_each_dynamics_trace(t, [&](const Rational& p, const std::vector<int>& seq) {
            auto out = outcome_of(t, seq);
            law.add({forest_key(out.forest), out.attachments}, w * p);
        });
    }
    return law;
}

ExactDistribution<std::vector<int>> attachment_product_law(const OrderedForest& f) {
    auto comps = f.components();
    int k = f.k();
    // Suffix vertex pools: choices for component i live in components i+1..k.
    std::vector<std::vector<int>> pools(static_cast<std::size_t>(std::max(k - 1, 0)));
    std::vector<int> suffix;
    for (int i = k - 1; i >= 1; --i) {
        for (int v : comps[static_cast<std::size_t>(i)]) suffix.push_back(v);
        pools[static_cast<std::size_t>(i - 1)] = suffix;
    }
    ExactDistribution<std::vector<int>> law;
    std::vector<int> pick;
    std::function<void(int, const Rational&)> rec = [&](int i, const Rational& prob) {
        if (i == k - 1) {
            law.add(pick, prob);
            return;
        }
        const auto& pool = pools[static_cast<std::size_t>(i)];
        Rational share = prob / static_cast<int>(pool.size());
        for (int v : pool) {
            pick.push_back(v);
            rec(i + 1, share);
            pick.pop_back();
        }
    };
    rec(0, Rational(1));
    return law;
}

ExactDistribution<std::vector<int>> attachment_conditional_law(const OrderedForest& f) {
    f.validate();
    auto key = forest_key(f);
    ExactDistribution<std::vector<int>> conditional;
    Rational marginal = 0;
    auto joint = forest_attachment_law(f.n);
    for (auto& [outcome, prob] : joint.p) {
        if (outcome.first != key) continue;
        conditional.add(outcome.second, prob);
        marginal += prob;
    }
    if (marginal == 0)
        throw InvalidArgument("attachment_conditional_law: forest is outside the support");
    for (auto& [attach, prob] : conditional.p) prob /= marginal;
    return conditional;
}

ExactDistribution<int> dynamics_kappa_law(const RootedTree& t) {
    ExactDistribution<int> law;
    for_each_dynamics_trace(t, [&](const Rational& p, const std::vector<int>& seq) {
        law.add(static_cast<int>(seq.size()), p);
    });
    return law;
}

ExactDistribution<std::string> reverse_transform_law(int n) {
    ExactDistribution<std::string> law;
    BigInt pairs = 1;
    for (int i = 0; i < n; ++i) pairs *= n;
    Rational w = Rational(1, pairs);  // uniform forest weight n^{-n}
    for (const OrderedForest& f : enumerate_forests(n)) {
        auto comps = f.components();
        int k = f.k();
        std::vector<std::vector<int>> pools(static_cast<std::size_t>(std::max(k - 1, 0)));
        std::vector<int> suffix;
        for (int i = k - 1; i >= 1; --i) {
            for (int v : comps[static_cast<std::size_t>(i)]) suffix.push_back(v);
            pools[static_cast<std::size_t>(i - 1)] = suffix;
        }
        std::vector<int> parent = f.parent;
        std::function<void(int, const Rational&)> rec = [&](int i, const Rational& prob) {
            if (i == k - 1) {
                law.add(tree_key(RootedTree(f.roots.back(), parent)), prob);
                return;
            }
            const auto& pool = pools[static_cast<std::size_t>(i)];
            Rational share = prob / static_cast<int>(pool.size());
            for (int v : pool) {
                parent[static_cast<std::size_t>(f.roots[static_cast<std::size_t>(i)])] = v;
                rec(i + 1, share);
            }
            parent[static_cast<std::size_t>(f.roots[static_cast<std::size_t>(i)])] =
                f.roots[static_cast<std::size_t>(i)];
        };
        rec(0, w);
    }
    return law;
}

// --- cutting -----------------------------------------------------------------

namespace {

// Exhaustive cutting state over the planted tree, components recomputed per
// step; inputs are tiny by the edge-count budget.
struct CutEnumerator {
    int n, k, total_vertices;
    std::vector<PlantedEdge> edges;
    std::vector<std::vector<std::pair<int, int>>> adj;
    const std::function<void(const Rational&, const std::vector<PlantedEdge>&)>* visit;
    bool ordered;
    CutWeighting weighting;
    std::vector<char> cut;
    std::vector<PlantedEdge> history;

    CutEnumerator(const RootedTree& t, const std::vector<int>& targets) {
        n = t.n();
        k = static_cast<int>(targets.size());
        total_vertices = n + k;
        adj.assign(static_cast<std::size_t>(total_vertices) + 1, {});
        auto add = [&](int x, int y) {
            int id = static_cast<int>(edges.size());
            edges.emplace_back(x, y);
            adj[static_cast<std::size_t>(x)].emplace_back(y, id);
            adj[static_cast<std::size_t>(y)].emplace_back(x, id);
        };
        for (int v = 1; v <= n; ++v)
            if (v != t.root()) add(v, t.parent(v));
        for (int i = 0; i < k; ++i) add(n + 1 + i, targets[static_cast<std::size_t>(i)]);
        cut.assign(edges.size(), 0);
    }

    int marker_edge_id(int i) const { return n - 1 + i; }
    bool is_marker_edge(int id) const { return id >= n - 1; }

    std::vector<int> component_labels() const {
        std::vector<int> comp(static_cast<std::size_t>(total_vertices) + 1, 0);
        int next = 0;
        std::vector<int> stack;
        for (int v = 1; v <= total_vertices; ++v) {
            if (comp[static_cast<std::size_t>(v)] != 0) continue;
            comp[static_cast<std::size_t>(v)] = ++next;
            stack.assign(1, v);
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                for (auto [w, id] : adj[static_cast<std::size_t>(u)]) {
                    if (cut[static_cast<std::size_t>(id)]) continue;
                    if (comp[static_cast<std::size_t>(w)] == 0) {
                        comp[static_cast<std::size_t>(w)] = next;
                        stack.push_back(w);
                    }
                }
            }
        }
        return comp;
    }

    // (edge id, weight) choices at the current state, with the total weight.
    std::pair<std::vector<std::pair<int, long long>>, long long> choices() const {
        auto comp = component_labels();
        std::vector<int> active;  // markers still to isolate
        if (ordered) {
            for (int i = 0; i < k; ++i)
                if (!cut[static_cast<std::size_t>(marker_edge_id(i))]) {
                    active.push_back(i);
                    break;
                }
        } else {
            for (int i = 0; i < k; ++i)
                if (!cut[static_cast<std::size_t>(marker_edge_id(i))]) active.push_back(i);
        }
        std::vector<long long> weight(edges.size(), 0);
        long long total = 0;
        for (int i : active) {
            int c = comp[static_cast<std::size_t>(n + 1 + i)];
            if (weighting == CutWeighting::edge_uniform) {
                // All edges of the marker's component once; shared components
                // must not double count, so mark instead of add.
                for (std::size_t id = 0; id < edges.size(); ++id)
                    if (!cut[id] && comp[static_cast<std::size_t>(edges[id].first)] == c)
                        weight[id] = 1;
            } else {
                // One selection per real vertex of the component: its edges
                // toward the marker are the component's real edges plus the
                // marker's own edge.
                for (std::size_t id = 0; id < edges.size(); ++id) {
                    if (cut[id] || comp[static_cast<std::size_t>(edges[id].first)] != c) continue;
                    if (!is_marker_edge(static_cast<int>(id)) ||
                        static_cast<int>(id) == marker_edge_id(i))
                        weight[id] += 1;
                }
            }
        }
        std::vector<std::pair<int, long long>> out;
        for (std::size_t id = 0; id < edges.size(); ++id)
            if (weight[id] > 0) {
                if (weighting == CutWeighting::edge_uniform) weight[id] = 1;
                out.emplace_back(static_cast<int>(id), weight[id]);
                total += weight[id];
            }
        return {out, total};
    }

    void run(const Rational& prob) {
        auto [options, total] = choices();
        if (options.empty()) {
            (*visit)(prob, history);
            return;
        }
        for (auto [id, weight] : options) {
            cut[static_cast<std::size_t>(id)] = 1;
            history.push_back(edges[static_cast<std::size_t>(id)]);
            run(prob * Rational(weight, total));
            history.pop_back();
            cut[static_cast<std::size_t>(id)] = 0;
        }
    }
};

}  // namespace

void for_each_cut_history(
    const RootedTree& t, const std::vector<int>& targets, bool ordered, CutWeighting weighting,
    const std::function<void(const Rational&, const std::vector<PlantedEdge>&)>& visit) {
    if (targets.empty()) throw InvalidArgument("for_each_cut_history: empty target sequence");
    if (t.n() - 1 + static_cast<int>(targets.size()) > 9)
        throw BudgetExceeded("for_each_cut_history: budget is n-1+k <= 9 edges");
    CutEnumerator en(t, targets);
    en.visit = &visit;
    en.ordered = ordered;
    en.weighting = weighting;
    en.run(Rational(1));
}

ExactDistribution<std::vector<PlantedEdge>> cut_sequence_law(const RootedTree& t,
                                                             const std::vector<int>& targets,
                                                             bool ordered, CutWeighting weighting) {
    ExactDistribution<std::vector<PlantedEdge>> law;
    for_each_cut_history(t, targets, ordered, weighting,
                         [&](const Rational& p, const std::vector<PlantedEdge>& seq) {
                             law.add(seq, p);
                         });
    return law;
}

namespace {

// Memoized law of the remaining cut count from a cut-edge bitmask state,
// under vertex selection.
struct CountLawSolver {
    int n, k, total_vertices;
    std::vector<PlantedEdge> edges;
    std::vector<std::vector<std::pair<int, int>>> adj;
    std::map<unsigned, std::vector<Rational>> memo;  // mask -> pmf of remaining cuts

    CountLawSolver(const RootedTree& t, const std::vector<int>& targets) {
        n = t.n();
        k = static_cast<int>(targets.size());
        total_vertices = n + k;
        adj.assign(static_cast<std::size_t>(total_vertices) + 1, {});
        auto add = [&](int x, int y) {
            int id = static_cast<int>(edges.size());
            edges.emplace_back(x, y);
            adj[static_cast<std::size_t>(x)].emplace_back(y, id);
            adj[static_cast<std::size_t>(y)].emplace_back(x, id);
        };
        for (int v = 1; v <= n; ++v)
            if (v != t.root()) add(v, t.parent(v));
        for (int i = 0; i < k; ++i) add(n + 1 + i, targets[static_cast<std::size_t>(i)]);
    }

    // (edge, weight) choices under vertex selection: each real vertex of a
    // marker's component contributes the edge between it and that marker.
    std::pair<std::vector<std::pair<int, long long>>, long long> choices(unsigned mask) const {
        std::vector<int> comp(static_cast<std::size_t>(total_vertices) + 1, 0);
        int next = 0;
        std::vector<int> stack;
        for (int v = 1; v <= total_vertices; ++v) {
            if (comp[static_cast<std::size_t>(v)] != 0) continue;
            comp[static_cast<std::size_t>(v)] = ++next;
            stack.assign(1, v);
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                for (auto [w, id] : adj[static_cast<std::size_t>(u)]) {
                    if (mask & (1u << id)) continue;
                    if (comp[static_cast<std::size_t>(w)] == 0) {
                        comp[static_cast<std::size_t>(w)] = next;
                        stack.push_back(w);
                    }
                }
            }
        }
        std::vector<long long> weight(edges.size(), 0);
        for (int i = 0; i < k; ++i) {
            int marker_edge = n - 1 + i;
            if (mask & (1u << marker_edge)) continue;  // already isolated
            int c = comp[static_cast<std::size_t>(n + 1 + i)];
            for (std::size_t id = 0; id < edges.size(); ++id) {
                if (mask & (1u << id)) continue;
                if (comp[static_cast<std::size_t>(edges[id].first)] != c) continue;
                if (static_cast<int>(id) < n - 1 || static_cast<int>(id) == marker_edge)
                    weight[id] += 1;
            }
        }
        std::vector<std::pair<int, long long>> out;
        long long total = 0;
        for (std::size_t id = 0; id < edges.size(); ++id)
            if (weight[id] > 0) {
                out.emplace_back(static_cast<int>(id), weight[id]);
                total += weight[id];
            }
        return {out, total};
    }

    const std::vector<Rational>& solve(unsigned mask) {
        auto it = memo.find(mask);
        if (it != memo.end()) return it->second;
        auto [options, total] = choices(mask);
        std::vector<Rational> pmf;
        if (options.empty()) {
            pmf.assign(1, Rational(1));  // zero further cuts
        } else {
            for (auto [id, weight] : options) {
                const auto& sub = solve(mask | (1u << id));
                if (pmf.size() < sub.size() + 1) pmf.resize(sub.size() + 1, Rational(0));
                Rational share(weight, total);
                for (std::size_t j = 0; j < sub.size(); ++j) pmf[j + 1] += share * sub[j];
            }
        }
        return memo.emplace(mask, std::move(pmf)).first->second;
    }
};

}  // namespace

ExactDistribution<int> planted_cut_count_law(const RootedTree& t, const std::vector<int>& targets) {
    if (targets.empty()) throw InvalidArgument("planted_cut_count_law: empty target sequence");
    if (t.n() - 1 + static_cast<int>(targets.size()) > 9)
        throw BudgetExceeded("planted_cut_count_law: budget is n-1+k <= 9 edges");
    CountLawSolver solver(t, targets);
    const auto& pmf = solver.solve(0);
    ExactDistribution<int> law;
    for (std::size_t j = 0; j < pmf.size(); ++j)
        if (pmf[j] != 0) law.add(static_cast<int>(j), pmf[j]);
    return law;
}

ExactDistribution<int> planted_cut_count_mixture(int n, int k) {
    ExactDistribution<int> law;
    Rational tree_weight = uniform_tree_weight(n);
    BigInt tuples = 1;
    for (int i = 0; i < k; ++i) tuples *= n;
    Rational tuple_weight = Rational(1, tuples);
    std::vector<int> targets(static_cast<std::size_t>(k), 1);
    for (const RootedTree& t : enumerate_trees(n)) {
        // Odometer over target tuples; the count law only depends on the
        // multiset but tuples are few at this size.
        std::fill(targets.begin(), targets.end(), 1);
        while (true) {
            auto sub = planted_cut_count_law(t, targets);
            for (auto& [count, prob] : sub.p) law.add(count, tree_weight * tuple_weight * prob);
            std::size_t i = 0;
            while (i < targets.size() && targets[i] == n) targets[i++] = 1;
            if (i == targets.size()) break;
            ++targets[i];
        }
    }
    return law;
}

ExactDistribution<int> spanned_edges_law(int n, int k) {
    ExactDistribution<int> law;
    Rational tree_weight = uniform_tree_weight(n);
    BigInt tuples = 1;
    for (int i = 0; i < k; ++i) tuples *= n;
    Rational w = tree_weight / Rational(tuples);
    for (const RootedTree& t : enumerate_trees(n)) {
        std::vector<int> sel(static_cast<std::size_t>(k), 1);
        while (true) {
            std::vector<int> with_root = sel;
            with_root.push_back(t.root());
            law.add(spanned_subtree(t, with_root).edge_count(), w);
            std::size_t i = 0;
            while (i < sel.size() && sel[i] == n) sel[i++] = 1;
            if (i == sel.size()) break;
            ++sel[i];
        }
    }
    return law;
}

ExactDistribution<int> records_law(const RootedTree& t) {
    int n = t.n();
    if (n > 7) throw BudgetExceeded("records_law: budget is n <= 7");
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    BigInt factorial = 1;
    for (int i = 2; i <= n; ++i) factorial *= i;
    Rational w = Rational(1, factorial);
    ExactDistribution<int> law;
    std::vector<int> rank(static_cast<std::size_t>(n) + 1, 0);
    do {
        for (int v = 1; v <= n; ++v) rank[static_cast<std::size_t>(v)] = perm[static_cast<std::size_t>(v - 1)];
        law.add(records_count_with_ranks(t, rank), w);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return law;
}

Rational records_mean(const RootedTree& t) {
    auto law = records_law(t);
    Rational mean = 0;
    for (auto& [count, prob] : law.p) mean += count * prob;
    return mean;
}

}  // namespace treecut::oracle
