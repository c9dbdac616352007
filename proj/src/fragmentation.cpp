#include "treecut/fragmentation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "treecut/errors.hpp"
#include "treecut/samplers.hpp"
#include "treecut/stats.hpp"

namespace treecut {

FragmentationTrace fragment(const RootedTree& t, double sigma, RngStream& rng, double horizon) {
    if (!(sigma > 0)) throw InvalidArgument("fragment: sigma must be > 0");
    int n = t.n();
    auto children = children_of(t);

    FragmentationTrace trace;
    trace.n = n;
    trace.sigma = sigma;

    std::vector<int> alive(static_cast<std::size_t>(n));
    std::vector<int> pos(static_cast<std::size_t>(n) + 1);
    std::vector<int> dead_list;
    std::vector<char> dead(static_cast<std::size_t>(n) + 1, 0);
    for (int v = 1; v <= n; ++v) {
        alive[static_cast<std::size_t>(v - 1)] = v;
        pos[static_cast<std::size_t>(v)] = v - 1;
    }
    dead_list.reserve(static_cast<std::size_t>(n));
    auto remove_alive = [&](int v) {
        int i = pos[static_cast<std::size_t>(v)];
        int last = alive.back();
        alive[static_cast<std::size_t>(i)] = last;
        pos[static_cast<std::size_t>(last)] = i;
        alive.pop_back();
        dead[static_cast<std::size_t>(v)] = 1;
        dead_list.push_back(v);
    };

    double rate = sigma * std::sqrt(static_cast<double>(n));
    double clock = 0;
    long long cuts = 0;
    std::vector<int> dfs;
    while (!alive.empty()) {
        clock += rng.exponential(rate);
        if (clock > horizon) return trace;  // complete stays false
        // One uniform mark on 1..n decides both the vertex and effectiveness.
        auto j = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n)));
        FragmentationEvent ev;
        ev.time = clock;
        if (j < alive.size()) {
            int v = alive[j];
            ev.vertex = v;
            ev.effective = true;
            ev.cuts_after = ++cuts;
            trace.effective_vertices.push_back(v);
            // Prune the surviving subtree of v; record it in cut order.
            trace.fragments.emplace_back();
            auto& frag = trace.fragments.back();
            dfs.assign(1, v);
            while (!dfs.empty()) {
                int u = dfs.back();
                dfs.pop_back();
                frag.push_back(u);
                remove_alive(u);
                for (int c : children[static_cast<std::size_t>(u)])
                    if (!dead[static_cast<std::size_t>(c)]) dfs.push_back(c);
            }
        } else {
            ev.vertex = dead_list[j - alive.size()];
            ev.effective = false;
            ev.cuts_after = cuts;
        }
        ev.alive_after = static_cast<int>(alive.size());
        trace.events.push_back(ev);
    }
    trace.complete = true;
    return trace;
}

MassIntegral mass_integral(const FragmentationTrace& trace) {
    if (!trace.complete)
        throw IncompleteTrace("mass_integral: trace was truncated by a finite horizon");
    MassIntegral out;
    double norm = trace.sigma * std::sqrt(static_cast<double>(trace.n));
    double prev_time = 0, prev_mu = 1;
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
        double mu = trace.mu_after(i);
        out.event_sum += mu;
        out.time_integral += prev_mu * (trace.events[i].time - prev_time);
        prev_time = trace.events[i].time;
        prev_mu = mu;
    }
    out.event_sum /= norm;
    return out;
}

double count_mass_gap(const FragmentationTrace& trace) {
    if (!trace.complete)
        throw IncompleteTrace("count_mass_gap: trace was truncated by a finite horizon");
    double norm = trace.sigma * std::sqrt(static_cast<double>(trace.n));
    double mass_sum = 0, gap = 0;
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
        mass_sum += trace.mu_after(i);
        double counts = static_cast<double>(trace.events[i].cuts_after);
        gap = std::max(gap, std::abs(counts - mass_sum) / norm);
    }
    return gap;
}

ChainedResult build_chained_tree(const FragmentationTrace& trace, const RootedTree& t) {
    if (!trace.complete)
        throw IncompleteTrace("build_chained_tree: trace was truncated by a finite horizon");
    std::vector<int> parent = t.parents();
    const auto& order = trace.effective_vertices;
    for (int v : order) parent[static_cast<std::size_t>(v)] = v;
    for (std::size_t i = 0; i + 1 < order.size(); ++i)
        parent[static_cast<std::size_t>(order[i + 1])] = order[i];
    return ChainedResult{RootedTree(order.front(), std::move(parent)), order.front(),
                         order.back()};
}

SpanCutCheck first_span_cut_check(int n, int k, RngStream& rng, long long replicates) {
    if (n < 1 || k < 1) throw InvalidArgument("first_span_cut_check: need n >= 1, k >= 1");
    SpanCutCheck out;
    out.replicates = replicates;
    // group key: sorted vertex set S; cell key: (tree on S, parent of cut).
    std::map<std::string, std::map<std::string, long long>> counts;
    std::map<std::string, int> group_size;

    std::vector<int> alive, posv, dfs, sel;
    std::vector<char> dead, in_span;
    for (long long rep = 0; rep < replicates; ++rep) {
        RootedTree t = sample_cayley(n, rng);
        sel.assign(1, t.root());
        for (int i = 0; i < k; ++i)
            sel.push_back(1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n))));
        auto span = spanned_subtree(t, sel);
        in_span.assign(static_cast<std::size_t>(n) + 1, 0);
        for (int v : span.vertices) in_span[static_cast<std::size_t>(v)] = 1;

        auto children = children_of(t);
        alive.resize(static_cast<std::size_t>(n));
        posv.resize(static_cast<std::size_t>(n) + 1);
        dead.assign(static_cast<std::size_t>(n) + 1, 0);
        for (int v = 1; v <= n; ++v) {
            alive[static_cast<std::size_t>(v - 1)] = v;
            posv[static_cast<std::size_t>(v)] = v - 1;
        }
        auto remove_alive = [&](int v) {
            int i = posv[static_cast<std::size_t>(v)];
            int last = alive.back();
            alive[static_cast<std::size_t>(i)] = last;
            posv[static_cast<std::size_t>(last)] = i;
            alive.pop_back();
            dead[static_cast<std::size_t>(v)] = 1;
        };
        auto prune = [&](int v) {
            dfs.assign(1, v);
            while (!dfs.empty()) {
                int u = dfs.back();
                dfs.pop_back();
                remove_alive(u);
                for (int c : children[static_cast<std::size_t>(u)])
                    if (!dead[static_cast<std::size_t>(c)]) dfs.push_back(c);
            }
        };

        // Arrival times are irrelevant to which arrival first hits the span,
        // so only the jump chain of vertex marks is simulated.
        while (true) {
            auto j = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n)));
            if (j >= alive.size()) continue;  // ineffective arrival
            int v = alive[j];
            if (!in_span[static_cast<std::size_t>(v)]) {
                prune(v);
                continue;
            }
            if (v == t.root()) {
                ++out.skipped;  // root component empties; no conditional cell
                break;
            }
            int y = t.parent(v);
            prune(v);
            // Root component = remaining alive set (ancestor closed).
            std::vector<int> members(alive.begin(), alive.end());
            std::sort(members.begin(), members.end());
            std::ostringstream gkey, ckey;
            for (int u : members) gkey << u << ',';
            ckey << t.root();
            for (int u : members) ckey << ' ' << u << ':' << t.parent(u);
            ckey << "|y=" << y;
            auto& group = counts[gkey.str()];
            group_size[gkey.str()] = static_cast<int>(members.size());
            ++group[ckey.str()];
            break;
        }
    }

    // Pearson statistic per conditioning set against the uniform law over
    // all |S|^{|S|-1} trees times |S| parent choices; unobserved cells
    // contribute their expected count.
    for (auto& [gkey, cells] : counts) {
        int s = group_size[gkey];
        double total_cells = std::pow(static_cast<double>(s), s);
        long long group_total = 0;
        for (auto& [ckey, c] : cells) group_total += c;
        double expected = static_cast<double>(group_total) / total_cells;
        double stat = 0;
        for (auto& [ckey, c] : cells) {
            double d = static_cast<double>(c) - expected;
            stat += d * d / expected;
        }
        stat += (total_cells - static_cast<double>(cells.size())) * expected;
        out.statistic += stat;
        out.degrees_of_freedom += static_cast<long long>(total_cells) - 1;
        ++out.groups;
    }
    out.p_value = out.degrees_of_freedom == 0
                      ? 1.0
                      : stats::chi_square_pvalue(out.statistic,
                                                 static_cast<double>(out.degrees_of_freedom));
    return out;
}

}  // namespace treecut
