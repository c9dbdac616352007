#pragma once

#include <vector>

#include "treecut/fragmentation.hpp"
#include "treecut/rooted_tree.hpp"

namespace treecut {

// Lattice-path encoding of a tree shape under the fixed label-ascending
// children order.  Contour paths take 2(n-1) +/-1 steps; depth-first walk
// paths take n steps of (offspring - 1) staying nonnegative until the final
// step to -1.
struct LatticePath {
    enum class Kind { lukasiewicz, contour };
    Kind kind = Kind::contour;
    std::vector<int> steps;

    bool operator==(const LatticePath&) const = default;
};

LatticePath encode(const RootedTree& t, LatticePath::Kind kind);

// Rebuild the shape; vertices are labelled 1..n in depth-first order, so
// encode(decode(p), p.kind) == p for every valid path.
RootedTree decode(const LatticePath& path);

// Concatenation of the contour excursions of the pruned subtrees, in cut
// order (earliest cut leftmost).  A pruned subtree of size m contributes an
// excursion of 2(m-1) steps; single-vertex prunes contribute an empty
// excursion, so boundaries are kept explicitly.
struct BridgePath {
    std::vector<int> steps;
    std::vector<int> excursion_lengths;  // in cut order, one per effective cut

    std::size_t excursions() const { return excursion_lengths.size(); }
};
BridgePath bridge_transform(const RootedTree& t, const FragmentationTrace& trace);

// For each effective cut except the last, the position of the cut vertex's
// parent inside the not-yet-pruned portion: pool is the total vertex count of
// the later-cut fragments and position indexes the parent inside their
// concatenation (cut order, depth-first within fragments).
struct AttachmentMark {
    int cut_index = 0;      // 0-based index into the effective cut order
    int parent_vertex = 0;  // parent of the cut vertex in the original tree
    long long position = 0;
    long long pool = 0;
};
std::vector<AttachmentMark> attachment_marks(const FragmentationTrace& trace, const RootedTree& t);

}  // namespace treecut
