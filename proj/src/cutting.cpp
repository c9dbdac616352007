#include "treecut/cutting.hpp"

#include <algorithm>
#include <numeric>

#include "treecut/errors.hpp"

namespace treecut {

namespace {

// Incremental state of a cutting run on a planted tree.  Only the components
// containing markers are tracked; pruned portions are abandoned in place.
// Each cut costs O(size of the smaller side): a lockstep search from the cut
// edge's endpoints finds the smaller side, whose edges are then moved or
// deleted; the larger side is never traversed.
class Cutter {
public:
    Cutter(const RootedTree& t, const std::vector<int>& targets)
        : n_(t.n()), k_(static_cast<int>(targets.size())) {
        if (targets.empty()) throw InvalidArgument("cutting: empty target sequence");
        for (int v : targets)
            if (v < 1 || v > n_) throw InvalidArgument("cutting: target out of range");
        int total_vertices = n_ + k_;
        int total_edges = n_ - 1 + k_;
        adj_.assign(static_cast<std::size_t>(total_vertices) + 1, {});
        for (int v = 1; v <= n_; ++v)
            if (v != t.root()) add_edge(v, t.parent(v));
        for (int i = 0; i < k_; ++i) add_edge(n_ + 1 + i, targets[static_cast<std::size_t>(i)]);

        cut_flag_.assign(static_cast<std::size_t>(total_edges), 0);
        edge_stamp_.assign(static_cast<std::size_t>(total_edges), 0);
        visited_.assign(static_cast<std::size_t>(total_vertices) + 1, 0);

        comps_.push_back(Comp{});
        Comp& c0 = comps_.back();
        c0.edges.resize(static_cast<std::size_t>(total_edges));
        std::iota(c0.edges.begin(), c0.edges.end(), 0);
        c0.real_size = n_;
        c0.markers = k_;
        c0.alive = true;
        edge_comp_.assign(static_cast<std::size_t>(total_edges), 0);
        edge_pos_.resize(static_cast<std::size_t>(total_edges));
        std::iota(edge_pos_.begin(), edge_pos_.end(), 0);
        marker_comp_.assign(static_cast<std::size_t>(k_), 0);
        marker_isolated_.assign(static_cast<std::size_t>(k_), 0);
        isolated_count_ = 0;
    }

    int n() const { return n_; }
    int k() const { return k_; }
    bool marker_isolated(int i) const { return marker_isolated_[static_cast<std::size_t>(i)] != 0; }
    bool done() const { return isolated_count_ == k_; }
    PlantedEdge edge_pair(int e) const {
        return {ea_[static_cast<std::size_t>(e)], eb_[static_cast<std::size_t>(e)]};
    }

    int marked_real_size() const {
        int s = 0;
        for (const Comp& c : comps_)
            if (c.alive) s += c.real_size;
        return s;
    }

    // One cut selection = (marker, real vertex of its component), so each
    // marker weighs in with its component's real size.
    long long selection_total() const {
        long long s = 0;
        for (int i = 0; i < k_; ++i)
            if (!marker_isolated(i))
                s += comps_[static_cast<std::size_t>(marker_comp_[static_cast<std::size_t>(i)])]
                         .real_size;
        return s;
    }

    long long selections_for_marker(int marker) const {
        return comps_[static_cast<std::size_t>(marker_comp_[static_cast<std::size_t>(marker)])]
            .real_size;
    }

    // Edge cut by the r-th selection: pick the marker by cumulated component
    // sizes, then a uniform edge among the component's real edges plus that
    // marker's own edge (the vertex <-> edge bijection toward the marker).
    int select_edge(long long r, RngStream& rng) const {
        for (int i = 0; i < k_; ++i) {
            if (marker_isolated(i)) continue;
            long long size = selections_for_marker(i);
            if (r < size) return marker_edge_choice(i, rng);
            r -= size;
        }
        throw InvalidArgument("cutting: selection index out of range");
    }

    int marker_edge_choice(int marker, RngStream& rng) const {
        const Comp& c = comps_[static_cast<std::size_t>(marker_comp_[static_cast<std::size_t>(marker)])];
        int own = n_ - 1 + marker;
        while (true) {
            int e = c.edges[static_cast<std::size_t>(rng.below(c.edges.size()))];
            if (e < n_ - 1 || e == own) return e;  // real edge or the marker's own
        }
    }

    // Remove edge e (1-based cut index `step` stamps marker isolation times).
    void cut(int e, int step, std::vector<int>& isolation_out) {
        int comp_id = edge_comp_[static_cast<std::size_t>(e)];
        remove_edge_from_comp(comp_id, e);
        cut_flag_[static_cast<std::size_t>(e)] = 1;

        int a = ea_[static_cast<std::size_t>(e)];
        int b = eb_[static_cast<std::size_t>(e)];
        if (a > n_) {
            int marker = a - n_ - 1;
            marker_isolated_[static_cast<std::size_t>(marker)] = 1;
            isolation_out[static_cast<std::size_t>(marker)] = step;
            ++isolated_count_;
        }

        // Lockstep search: the side whose stack empties first is smaller.
        std::vector<int> stack_a{a}, stack_b{b};
        std::vector<int> seen_a{a}, seen_b{b};
        visited_[static_cast<std::size_t>(a)] = 1;
        visited_[static_cast<std::size_t>(b)] = 1;
        std::vector<int>* small_seen = nullptr;
        while (true) {
            if (stack_a.empty()) {
                small_seen = &seen_a;
                break;
            }
            if (stack_b.empty()) {
                small_seen = &seen_b;
                break;
            }
            expand_one(stack_a, seen_a);
            expand_one(stack_b, seen_b);
        }
        for (int v : seen_a) visited_[static_cast<std::size_t>(v)] = 0;
        for (int v : seen_b) visited_[static_cast<std::size_t>(v)] = 0;

        // Every uncut edge incident to a small-side vertex is internal to the
        // small side (e was the only crossing edge); stamp to list each once.
        std::vector<int> small_edges;
        for (int v : *small_seen)
            for (auto [u, id] : adj_[static_cast<std::size_t>(v)]) {
                (void)u;
                if (cut_flag_[static_cast<std::size_t>(id)] || edge_stamp_[static_cast<std::size_t>(id)])
                    continue;
                edge_stamp_[static_cast<std::size_t>(id)] = 1;
                small_edges.push_back(id);
            }
        for (int id : small_edges) edge_stamp_[static_cast<std::size_t>(id)] = 0;

        int small_markers = 0, small_real = 0;
        for (int v : *small_seen) (v > n_ ? small_markers : small_real) += 1;
        int markers_left = comps_[static_cast<std::size_t>(comp_id)].markers - small_markers;

        if (small_markers == 0) {
            // The small side leaves the marked region.
            for (int id : small_edges) remove_edge_from_comp(comp_id, id);
            comps_[static_cast<std::size_t>(comp_id)].real_size -= small_real;
            deactivate_if_empty(comp_id);
            return;
        }

        // The small side keeps at least one marker: give it a fresh component.
        comps_.push_back(Comp{});
        int fresh = static_cast<int>(comps_.size()) - 1;
        for (int id : small_edges) move_edge(id, comp_id, fresh);
        Comp& freshc = comps_[static_cast<std::size_t>(fresh)];
        Comp& oldc = comps_[static_cast<std::size_t>(comp_id)];
        freshc.real_size = small_real;
        freshc.markers = small_markers;
        freshc.alive = true;
        for (int v : *small_seen)
            if (v > n_) marker_comp_[static_cast<std::size_t>(v - n_ - 1)] = fresh;

        if (markers_left == 0) {
            // The big side has no markers: abandon it without traversal.
            oldc.alive = false;
            oldc.edges.clear();
            oldc.edges.shrink_to_fit();
        } else {
            oldc.real_size -= small_real;
            oldc.markers = markers_left;
            deactivate_if_empty(comp_id);
        }
        deactivate_if_empty(fresh);
    }

private:
    struct Comp {
        std::vector<int> edges;
        int real_size = 0;
        int markers = 0;
        bool alive = false;
    };

    void add_edge(int x, int y) {
        int id = static_cast<int>(ea_.size());
        ea_.push_back(x);
        eb_.push_back(y);
        adj_[static_cast<std::size_t>(x)].emplace_back(y, id);
        adj_[static_cast<std::size_t>(y)].emplace_back(x, id);
    }

    void expand_one(std::vector<int>& stack, std::vector<int>& seen) {
        int v = stack.back();
        stack.pop_back();
        for (auto [u, id] : adj_[static_cast<std::size_t>(v)]) {
            if (cut_flag_[static_cast<std::size_t>(id)]) continue;
            if (!visited_[static_cast<std::size_t>(u)]) {
                visited_[static_cast<std::size_t>(u)] = 1;
                seen.push_back(u);
                stack.push_back(u);
            }
        }
    }

    void remove_edge_from_comp(int comp_id, int e) {
        Comp& c = comps_[static_cast<std::size_t>(comp_id)];
        int pos = edge_pos_[static_cast<std::size_t>(e)];
        int last = c.edges.back();
        c.edges[static_cast<std::size_t>(pos)] = last;
        edge_pos_[static_cast<std::size_t>(last)] = pos;
        c.edges.pop_back();
    }

    void move_edge(int e, int from, int to) {
        remove_edge_from_comp(from, e);
        Comp& c = comps_[static_cast<std::size_t>(to)];
        edge_comp_[static_cast<std::size_t>(e)] = to;
        edge_pos_[static_cast<std::size_t>(e)] = static_cast<int>(c.edges.size());
        c.edges.push_back(e);
    }

    // A component out of edges holds only isolated markers; retire it.
    void deactivate_if_empty(int comp_id) {
        Comp& c = comps_[static_cast<std::size_t>(comp_id)];
        if (c.alive && c.edges.empty()) c.alive = false;
    }

    int n_, k_;
    std::vector<int> ea_, eb_;
    std::vector<std::vector<std::pair<int, int>>> adj_;
    std::vector<char> cut_flag_, edge_stamp_;
    std::vector<char> visited_;
    std::vector<Comp> comps_;
    std::vector<int> edge_comp_, edge_pos_;
    std::vector<int> marker_comp_;
    std::vector<char> marker_isolated_;
    int isolated_count_ = 0;
};

CutTrace run_cut(const RootedTree& t, const std::vector<int>& targets, RngStream& rng,
                 bool ordered) {
    Cutter cutter(t, targets);
    CutTrace trace;
    trace.n = t.n();
    trace.k = static_cast<int>(targets.size());
    trace.marker_isolation.assign(targets.size(), 0);
    trace.component_sizes.push_back(cutter.marked_real_size());
    int step = 0;
    auto take = [&](int e) {
        trace.removed.push_back(cutter.edge_pair(e));
        cutter.cut(e, ++step, trace.marker_isolation);
        trace.component_sizes.push_back(cutter.marked_real_size());
    };
    if (ordered) {
        for (int i = 0; i < cutter.k(); ++i)
            while (!cutter.marker_isolated(i)) take(cutter.marker_edge_choice(i, rng));
    } else {
        while (!cutter.done()) {
            auto total = static_cast<std::uint64_t>(cutter.selection_total());
            take(cutter.select_edge(static_cast<long long>(rng.below(total)), rng));
        }
    }
    trace.isolation_steps = trace.marker_isolation;
    std::sort(trace.isolation_steps.begin(), trace.isolation_steps.end());
    return trace;
}

}  // namespace

CutTrace planted_cut(const RootedTree& t, const std::vector<int>& targets, RngStream& rng) {
    return run_cut(t, targets, rng, false);
}

CutTrace ordered_cut(const RootedTree& t, const std::vector<int>& targets, RngStream& rng) {
    return run_cut(t, targets, rng, true);
}

std::vector<int> marker_isolation_steps(int n, int k, const std::vector<PlantedEdge>& seq) {
    std::vector<int> steps(static_cast<std::size_t>(k), 0);
    for (std::size_t j = 0; j < seq.size(); ++j)
        if (seq[j].first > n)
            steps[static_cast<std::size_t>(seq[j].first - n - 1)] = static_cast<int>(j) + 1;
    return steps;
}

std::pair<ReorderPlan, std::vector<PlantedEdge>> reorder(const RootedTree& t,
                                                         const std::vector<int>& targets,
                                                         const std::vector<PlantedEdge>& seq) {
    int n = t.n();
    int k = static_cast<int>(targets.size());
    if (targets.empty()) throw InvalidArgument("reorder: empty target sequence");

    // Small-input analysis; components are recomputed from scratch per step.
    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(n + k) + 1);
    std::vector<PlantedEdge> edges;
    auto add = [&](int x, int y) {
        int id = static_cast<int>(edges.size());
        edges.emplace_back(x, y);
        adj[static_cast<std::size_t>(x)].emplace_back(y, id);
        adj[static_cast<std::size_t>(y)].emplace_back(x, id);
    };
    for (int v = 1; v <= n; ++v)
        if (v != t.root()) add(v, t.parent(v));
    for (int i = 0; i < k; ++i) add(n + 1 + i, targets[static_cast<std::size_t>(i)]);

    auto edge_id = [&](const PlantedEdge& e) -> int {
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (edges[i] == e) return static_cast<int>(i);
            if (edges[i].first == e.second && edges[i].second == e.first)
                return static_cast<int>(i);
        }
        return -1;
    };
    std::vector<char> cut(edges.size(), 0);
    auto components = [&]() {
        std::vector<int> comp(static_cast<std::size_t>(n + k) + 1, 0);
        int next = 0;
        std::vector<int> stack;
        for (int v = 1; v <= n + k; ++v) {
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
    };

    int m = static_cast<int>(seq.size());
    ReorderPlan plan;
    plan.U.assign(static_cast<std::size_t>(k), {});
    for (int j = 0; j < m; ++j) {
        int id = edge_id(seq[static_cast<std::size_t>(j)]);
        if (id < 0)
            throw InvalidCutSequence("reorder: not an edge of the planted tree at index " +
                                         std::to_string(j),
                                     static_cast<std::size_t>(j));
        if (cut[static_cast<std::size_t>(id)])
            throw InvalidCutSequence("reorder: edge repeated at index " + std::to_string(j),
                                     static_cast<std::size_t>(j));
        auto comp = components();
        int where = comp[static_cast<std::size_t>(edges[static_cast<std::size_t>(id)].first)];
        bool produces_cut = false;
        for (int i = 0; i < k; ++i)
            if (comp[static_cast<std::size_t>(n + 1 + i)] == where) {
                produces_cut = true;
                plan.U[static_cast<std::size_t>(i)].push_back(j + 1);
            }
        if (!produces_cut)
            throw InvalidCutSequence(
                "reorder: cut outside the marked components at index " + std::to_string(j),
                static_cast<std::size_t>(j));
        cut[static_cast<std::size_t>(id)] = 1;
    }
    for (int i = 0; i < k; ++i)
        if (!cut[static_cast<std::size_t>(edge_id({n + 1 + i, targets[static_cast<std::size_t>(i)]}))])
            throw InvalidCutSequence(
                "reorder: marker " + std::to_string(i + 1) + " is never isolated", seq.size());

    std::vector<char> taken(static_cast<std::size_t>(m) + 1, 0);
    plan.U_star.assign(static_cast<std::size_t>(k), {});
    plan.s.assign(static_cast<std::size_t>(k), 0);
    plan.m.assign(static_cast<std::size_t>(k), 0);
    plan.a.assign(static_cast<std::size_t>(k), 0);
    plan.b.assign(static_cast<std::size_t>(k), 0);
    std::vector<PlantedEdge> out;
    out.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < k; ++i) {
        auto& u = plan.U[static_cast<std::size_t>(i)];
        auto& ustar = plan.U_star[static_cast<std::size_t>(i)];
        plan.m[static_cast<std::size_t>(i)] = static_cast<int>(u.size());
        int s_index = 0;
        for (std::size_t pos = 0; pos < u.size(); ++pos)
            if (!taken[static_cast<std::size_t>(u[pos])]) {
                ustar.push_back(u[pos]);
                if (s_index == 0) s_index = static_cast<int>(pos) + 1;
            }
        plan.s[static_cast<std::size_t>(i)] =
            s_index == 0 ? plan.m[static_cast<std::size_t>(i)] + 1 : s_index;
        plan.a[static_cast<std::size_t>(i)] = static_cast<int>(out.size()) + 1;
        for (int time : ustar) {
            out.push_back(seq[static_cast<std::size_t>(time - 1)]);
            taken[static_cast<std::size_t>(time)] = 1;
        }
        plan.b[static_cast<std::size_t>(i)] = static_cast<int>(out.size());
    }
    return {std::move(plan), std::move(out)};
}

int records_count_with_ranks(const RootedTree& t, const std::vector<int>& rank) {
    if (static_cast<int>(rank.size()) != t.n() + 1)
        throw InvalidArgument("records_count_with_ranks: need a rank for every vertex");
    auto children = children_of(t);
    int count = 0;
    // DFS carrying the smallest rank on the root path so far.
    std::vector<std::pair<int, int>> stack{{t.root(), t.n() + 1}};
    while (!stack.empty()) {
        auto [v, min_above] = stack.back();
        stack.pop_back();
        int rv = rank[static_cast<std::size_t>(v)];
        if (rv < min_above) ++count;
        int min_here = std::min(min_above, rv);
        for (int c : children[static_cast<std::size_t>(v)]) stack.emplace_back(c, min_here);
    }
    return count;
}

int records_count(const RootedTree& t, RngStream& rng) {
    auto perm = rng.permutation(t.n());
    std::vector<int> rank(static_cast<std::size_t>(t.n()) + 1, 0);
    for (int v = 1; v <= t.n(); ++v)
        rank[static_cast<std::size_t>(v)] = perm[static_cast<std::size_t>(v - 1)];
    return records_count_with_ranks(t, rank);
}

Rational expected_cut_probability(const RootedTree& t, int u) {
    if (u < 1 || u > t.n()) throw InvalidArgument("expected_cut_probability: vertex out of range");
    auto d = depths_of(t);
    return Rational(1, d[static_cast<std::size_t>(u)] + 1);
}

}  // namespace treecut
