#include "treecut/excursion.hpp"

#include <algorithm>

#include "treecut/errors.hpp"
#include "treecut/samplers.hpp"

namespace treecut {

namespace {

// Contour walk of the subtree rooted at `root` over the given children
// lists: +1 descending into a child, -1 returning.
void contour_walk(int root, const std::vector<std::vector<int>>& children,
                  std::vector<int>& steps) {
    // Stack entries: (vertex, next child position).
    std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
    while (!stack.empty()) {
        auto& [v, next] = stack.back();
        const auto& ch = children[static_cast<std::size_t>(v)];
        if (next < ch.size()) {
            steps.push_back(+1);
            stack.emplace_back(ch[next++], 0);
        } else {
            stack.pop_back();
            if (!stack.empty()) steps.push_back(-1);
        }
    }
}

}  // namespace

LatticePath encode(const RootedTree& t, LatticePath::Kind kind) {
    auto children = children_of(t);  // label-ascending by construction
    LatticePath path;
    path.kind = kind;
    if (kind == LatticePath::Kind::contour) {
        path.steps.reserve(2 * static_cast<std::size_t>(t.n() - 1));
        contour_walk(t.root(), children, path.steps);
        return path;
    }
    // Depth-first walk: offspring count minus one, in preorder.
    path.steps.reserve(static_cast<std::size_t>(t.n()));
    std::vector<int> stack{t.root()};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        const auto& ch = children[static_cast<std::size_t>(v)];
        path.steps.push_back(static_cast<int>(ch.size()) - 1);
        for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    }
    return path;
}

RootedTree decode(const LatticePath& path) {
    if (path.kind == LatticePath::Kind::lukasiewicz) {
        int n = static_cast<int>(path.steps.size());
        if (n < 1) throw InvalidArgument("decode: depth-first walk must have >= 1 step");
        long long displacement = 0;
        std::vector<int> offsets(path.steps.size());
        for (std::size_t i = 0; i < path.steps.size(); ++i) {
            offsets[i] = path.steps[i] + 1;
            if (offsets[i] < 0) throw InvalidArgument("decode: walk step below -1");
            displacement += path.steps[i];
        }
        if (displacement != -1) throw InvalidArgument("decode: walk must end at -1");
        std::vector<int> labels(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i + 1;
        return tree_from_offsets(offsets, labels);
    }
    // Contour: follow the walk, creating a child on every ascent.
    if (path.steps.size() % 2 != 0) throw InvalidArgument("decode: contour length must be even");
    int n = static_cast<int>(path.steps.size() / 2) + 1;
    std::vector<int> parent(static_cast<std::size_t>(n) + 1, 0);
    parent[1] = 1;
    int cur = 1, next_label = 1;
    for (int s : path.steps) {
        if (s == +1) {
            ++next_label;
            if (next_label > n) throw InvalidArgument("decode: contour rises too often");
            parent[static_cast<std::size_t>(next_label)] = cur;
            cur = next_label;
        } else if (s == -1) {
            if (cur == 1) throw InvalidArgument("decode: contour falls below the root");
            cur = parent[static_cast<std::size_t>(cur)];
        } else {
            throw InvalidArgument("decode: contour steps must be +1/-1");
        }
    }
    if (cur != 1) throw InvalidArgument("decode: contour does not return to the root");
    if (next_label != n) throw InvalidArgument("decode: contour visits too few vertices");
    return RootedTree(1, std::move(parent));
}

BridgePath bridge_transform(const RootedTree& t, const FragmentationTrace& trace) {
    if (!trace.complete)
        throw IncompleteTrace("bridge_transform: trace was truncated by a finite horizon");
    BridgePath out;
    out.steps.reserve(2 * static_cast<std::size_t>(t.n()));
    std::vector<std::vector<int>> children(static_cast<std::size_t>(t.n()) + 1);
    for (std::size_t i = 0; i < trace.fragments.size(); ++i) {
        const auto& frag = trace.fragments[i];
        int root = trace.effective_vertices[i];
        // Children lists restricted to the fragment, label-ascending.
        std::vector<int> sorted = frag;
        std::sort(sorted.begin(), sorted.end());
        for (int v : sorted)
            if (v != root) children[static_cast<std::size_t>(t.parent(v))].push_back(v);
        std::size_t before = out.steps.size();
        contour_walk(root, children, out.steps);
        out.excursion_lengths.push_back(static_cast<int>(out.steps.size() - before));
        for (int v : sorted)
            if (v != root) children[static_cast<std::size_t>(t.parent(v))].clear();
    }
    return out;
}

std::vector<AttachmentMark> attachment_marks(const FragmentationTrace& trace,
                                             const RootedTree& t) {
    if (!trace.complete)
        throw IncompleteTrace("attachment_marks: trace was truncated by a finite horizon");
    int kappa = trace.kappa();
    // Locate every vertex inside (fragment index, offset) and precompute the
    // suffix vertex totals.
    std::vector<int> frag_of(static_cast<std::size_t>(t.n()) + 1, -1);
    std::vector<long long> offset_in(static_cast<std::size_t>(t.n()) + 1, 0);
    std::vector<long long> suffix(static_cast<std::size_t>(kappa) + 1, 0);
    for (int i = kappa - 1; i >= 0; --i) {
        const auto& frag = trace.fragments[static_cast<std::size_t>(i)];
        suffix[static_cast<std::size_t>(i)] =
            suffix[static_cast<std::size_t>(i) + 1] + static_cast<long long>(frag.size());
        for (std::size_t j = 0; j < frag.size(); ++j) {
            frag_of[static_cast<std::size_t>(frag[j])] = i;
            offset_in[static_cast<std::size_t>(frag[j])] = static_cast<long long>(j);
        }
    }
    std::vector<AttachmentMark> marks;
    marks.reserve(static_cast<std::size_t>(std::max(kappa - 1, 0)));
    for (int i = 0; i + 1 < kappa; ++i) {
        AttachmentMark mark;
        mark.cut_index = i;
        mark.parent_vertex = t.parent(trace.effective_vertices[static_cast<std::size_t>(i)]);
        int j = frag_of[static_cast<std::size_t>(mark.parent_vertex)];
        // The parent outlives cut i, so it falls in a strictly later fragment.
        mark.pool = suffix[static_cast<std::size_t>(i) + 1];
        mark.position = (suffix[static_cast<std::size_t>(i) + 1] -
                         suffix[static_cast<std::size_t>(j)]) +
                        offset_in[static_cast<std::size_t>(mark.parent_vertex)];
        marks.push_back(mark);
    }
    return marks;
}

}  // namespace treecut
