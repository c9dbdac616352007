#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <numeric>

#include "test_support.hpp"
#include "treecut/cutting.hpp"
#include "treecut/errors.hpp"
#include "treecut/exact.hpp"
#include "treecut/rng.hpp"
#include "treecut/samplers.hpp"

using namespace treecut;
using test_support::path_tree;
using test_support::tree;

TEST_SUITE_BEGIN("cutting");

TEST_CASE("single-vertex planted cut removes the marker edge") {
    RngStream rng(31, 0);
    auto trace = planted_cut(RootedTree(), {1}, rng);
    CHECK(trace.total_cuts() == 1);
    CHECK(trace.removed == std::vector<PlantedEdge>{{2, 1}});
    CHECK(trace.component_sizes == std::vector<int>{1, 0});
    CHECK(trace.isolation_steps == std::vector<int>{1});
}

TEST_CASE("two-vertex path with one target: M is 1 or 2 with probability 1/2") {
    auto t = tree(1, {1, 1});
    auto law = oracle::planted_cut_count_law(t, {2});
    CHECK(law.probability(1) == Rational(1, 2));
    CHECK(law.probability(2) == Rational(1, 2));

    RngStream rng(32, 0);
    const long long draws = 100000;
    std::map<int, long long> counts;
    for (long long i = 0; i < draws; ++i) ++counts[planted_cut(t, {2}, rng).total_cuts()];
    CHECK(test_support::chi_square_vs_exact(counts, law, draws) > 1e-3);
}

TEST_CASE("trace invariants on random planted cuts") {
    RngStream rng(33, 0);
    for (int rep = 0; rep < 400; ++rep) {
        int n = 1 + static_cast<int>(rng.below(12));
        int k = 1 + static_cast<int>(rng.below(3));
        auto t = sample_cayley(n, rng);
        std::vector<int> targets;
        for (int i = 0; i < k; ++i) targets.push_back(1 + static_cast<int>(rng.below(n)));
        auto trace = planted_cut(t, targets, rng);
        // Every marker edge appears; sizes shrink to zero; M_k == M.
        CHECK(static_cast<int>(trace.component_sizes.size()) == trace.total_cuts() + 1);
        CHECK(trace.component_sizes.front() == n);
        CHECK(trace.component_sizes.back() == 0);
        for (std::size_t i = 0; i + 1 < trace.component_sizes.size(); ++i)
            CHECK(trace.component_sizes[i] >= trace.component_sizes[i + 1]);
        CHECK(static_cast<int>(trace.isolation_steps.size()) == k);
        for (int i = 0; i + 1 < k; ++i)
            CHECK(trace.isolation_steps[i] < trace.isolation_steps[i + 1]);
        CHECK(trace.isolation_steps.back() == trace.total_cuts());
        int markers_removed = 0;
        for (auto [a, b] : trace.removed) markers_removed += (a > n);
        CHECK(markers_removed == k);
        CHECK(marker_isolation_steps(n, k, trace.removed) == trace.marker_isolation);
    }
}

TEST_CASE("sampled planted cuts follow the exact sequence law") {
    RngStream rng(34, 0);
    for (int n : {3, 4}) {
        auto t = sample_cayley(n, rng);
        std::vector<int> targets{1 + static_cast<int>(rng.below(n)),
                                 1 + static_cast<int>(rng.below(n))};
        auto law = oracle::cut_sequence_law(t, targets, false, oracle::CutWeighting::vertex_selection);
        REQUIRE(law.is_probability());
        const long long draws = 100000;
        std::map<std::vector<PlantedEdge>, long long> counts;
        for (long long i = 0; i < draws; ++i) ++counts[planted_cut(t, targets, rng).removed];
        CHECK(test_support::chi_square_vs_exact(counts, law, draws) > 1e-3);
    }
}

TEST_CASE("sampled ordered cuts follow the exact sequence law") {
    RngStream rng(35, 0);
    for (int n : {3, 4}) {
        auto t = sample_cayley(n, rng);
        std::vector<int> targets{1 + static_cast<int>(rng.below(n)),
                                 1 + static_cast<int>(rng.below(n))};
        auto law = oracle::cut_sequence_law(t, targets, true, oracle::CutWeighting::vertex_selection);
        REQUIRE(law.is_probability());
        const long long draws = 100000;
        std::map<std::vector<PlantedEdge>, long long> counts;
        for (long long i = 0; i < draws; ++i) ++counts[ordered_cut(t, targets, rng).removed];
        CHECK(test_support::chi_square_vs_exact(counts, law, draws) > 1e-3);
    }
}

TEST_CASE("one target: ordered and planted cutting are the same procedure") {
    // With a single marker the two procedures and both weightings coincide.
    for (const auto& t : oracle::enumerate_trees(3)) {
        for (int v = 1; v <= 3; ++v) {
            for (auto weighting : {oracle::CutWeighting::edge_uniform,
                                   oracle::CutWeighting::vertex_selection}) {
                auto a = oracle::cut_sequence_law(t, {v}, false, weighting);
                auto b = oracle::cut_sequence_law(t, {v}, true, weighting);
                CHECK(oracle::tv_distance(a, b) == 0);
            }
            auto edge = oracle::cut_sequence_law(t, {v}, false, oracle::CutWeighting::edge_uniform);
            auto vertex =
                oracle::cut_sequence_law(t, {v}, false, oracle::CutWeighting::vertex_selection);
            CHECK(oracle::tv_distance(edge, vertex) == 0);
        }
    }
}

TEST_CASE("duplicate targets on a single vertex isolate in two steps") {
    RngStream rng(36, 0);
    for (int rep = 0; rep < 50; ++rep) {
        auto trace = ordered_cut(RootedTree(), {1, 1}, rng);
        CHECK(trace.total_cuts() == 2);
        CHECK(trace.isolation_steps == std::vector<int>{1, 2});
    }
}

TEST_CASE("count laws: per-pair equality under edge weighting, mixture equality under both") {
    // Under the bare edge-uniform rule the reordering couples the two
    // procedures run by run, so their counts agree for every (t, S).
    for (int n = 1; n <= 3; ++n) {
        for (const auto& t : oracle::enumerate_trees(n)) {
            std::vector<std::vector<int>> target_sets;
            for (int a = 1; a <= n; ++a) {
                target_sets.push_back({a});
                for (int b = 1; b <= n; ++b) target_sets.push_back({a, b});
            }
            for (const auto& targets : target_sets) {
                auto count_of = [&](bool ordered, oracle::CutWeighting weighting) {
                    oracle::ExactDistribution<int> law;
                    oracle::for_each_cut_history(
                        t, targets, ordered, weighting,
                        [&](const Rational& p, const std::vector<PlantedEdge>& seq) {
                            law.add(static_cast<int>(seq.size()), p);
                        });
                    return law;
                };
                CHECK(oracle::tv_distance(count_of(false, oracle::CutWeighting::edge_uniform),
                                          count_of(true, oracle::CutWeighting::edge_uniform)) == 0);
                // Vertex selection: the memoized solver agrees with the
                // history enumeration of the planted procedure.
                CHECK(oracle::tv_distance(count_of(false, oracle::CutWeighting::vertex_selection),
                                          oracle::planted_cut_count_law(t, targets)) == 0);
            }
        }
    }
    // Under vertex selection the two procedures agree in the mixture over a
    // uniform tree and uniform targets (both equal the spanned-edge law plus
    // k), though not for every fixed (t, S).
    for (int n = 2; n <= 3; ++n) {
        const int k = 2;
        BigInt denom = 1;
        for (int i = 0; i < n - 1 + k; ++i) denom *= n;
        Rational w(1, denom);
        oracle::ExactDistribution<int> ordered_mix;
        for (const auto& t : oracle::enumerate_trees(n))
            for (int a = 1; a <= n; ++a)
                for (int b = 1; b <= n; ++b)
                    oracle::for_each_cut_history(
                        t, {a, b}, true, oracle::CutWeighting::vertex_selection,
                        [&](const Rational& p, const std::vector<PlantedEdge>& seq) {
                            ordered_mix.add(static_cast<int>(seq.size()) - k, w * p);
                        });
        CHECK(oracle::tv_distance(ordered_mix, oracle::spanned_edges_law(n, k)) == 0);
    }
}

TEST_CASE("reorder: single target is the identity") {
    RngStream rng(38, 0);
    auto t = sample_cayley(5, rng);
    for (int rep = 0; rep < 100; ++rep) {
        auto trace = planted_cut(t, {1 + static_cast<int>(rng.below(5))}, rng);
        auto [plan, reordered] = reorder(t, {trace.removed.back().second}, trace.removed);
        // Single marker: one block spanning everything, in arrival order.
        CHECK(reordered == trace.removed);
        CHECK(plan.a[0] == 1);
        CHECK(plan.b[0] == trace.total_cuts());
    }
}

TEST_CASE("reorder: pinned hand example on the 3-path planted at both leaves") {
    // Tree 1 - 2 - 3 rooted at 2; targets (1, 3); markers w1=4, w2=5.
    auto t = tree(2, {2, 2, 2});
    std::vector<PlantedEdge> seq{{3, 2}, {1, 2}, {4, 1}, {5, 3}};
    auto [plan, reordered] = reorder(t, {1, 3}, seq);
    CHECK(plan.U[0] == std::vector<int>{1, 2, 3});
    CHECK(plan.U[1] == std::vector<int>{1, 4});
    CHECK(plan.U_star[0] == std::vector<int>{1, 2, 3});
    CHECK(plan.U_star[1] == std::vector<int>{4});
    CHECK(plan.s[0] == 1);
    CHECK(plan.s[1] == 2);
    CHECK(plan.m[0] == 3);
    CHECK(plan.m[1] == 2);
    CHECK(plan.a[0] == 1);
    CHECK(plan.b[0] == 3);
    CHECK(plan.a[1] == 4);
    CHECK(plan.b[1] == 4);
    CHECK(reordered == seq);  // already in canonical order
}

TEST_CASE("reorder rejects impossible sequences with the offending index") {
    auto t = tree(2, {2, 2, 2});
    // Cutting (1,2) first strands marker edge (5,3)?  No: w2 over 3 is still
    // marked; instead make step 2 fall in an unmarked component.
    std::vector<PlantedEdge> bad{{4, 1}, {1, 2}, {3, 2}, {5, 3}};
    // After removing the marker edge (4,1) and edge (1,2), component {1} has
    // no marker, so cutting inside it is not allowed... but (1,2) itself is
    // still in w's component when removed.  Build a genuinely bad sequence:
    // cut (4,1) then (1,2) leaves {1} unmarked; a third cut cannot target it.
    try {
        auto [plan, reordered] = reorder(t, {1, 3}, bad);
        // The above sequence is actually possible; now check a truly bad one.
    } catch (const InvalidCutSequence&) {
        FAIL("sequence was possible");
    }
    std::vector<PlantedEdge> repeated{{3, 2}, {3, 2}, {4, 1}, {5, 3}};
    CHECK_THROWS_AS(reorder(t, {1, 3}, repeated), InvalidCutSequence);
    std::vector<PlantedEdge> not_an_edge{{3, 1}};
    CHECK_THROWS_AS(reorder(t, {1, 3}, not_an_edge), InvalidCutSequence);
    std::vector<PlantedEdge> never_isolates{{3, 2}, {5, 3}, {1, 2}};
    CHECK_THROWS_AS(reorder(t, {1, 3}, never_isolates), InvalidCutSequence);
    try {
        reorder(t, {1, 3}, never_isolates);
    } catch (const InvalidCutSequence& e) {
        CHECK(e.offending_index == 3);  // sequence ended with w1 still attached
    }
    // Cutting an edge in a component that no longer holds any marker.
    std::vector<PlantedEdge> dead_zone{{4, 1}, {5, 3}, {1, 2}};
    try {
        reorder(t, {1, 3}, dead_zone);
        FAIL("expected InvalidCutSequence");
    } catch (const InvalidCutSequence& e) {
        CHECK(e.offending_index == 2);
    }
}

TEST_CASE("reorder is idempotent on its own output over all small cases") {
    RngStream rng(39, 0);
    for (int n = 1; n <= 3; ++n) {
        for (const auto& t : oracle::enumerate_trees(n)) {
            for (int a = 1; a <= n; ++a) {
                for (int b = 1; b <= n; ++b) {
                    std::vector<int> targets{a, b};
                    oracle::for_each_cut_history(
                        t, targets, false, oracle::CutWeighting::edge_uniform,
                        [&](const Rational&, const std::vector<PlantedEdge>& seq) {
                            auto [plan1, once] = reorder(t, targets, seq);
                            auto [plan2, twice] = reorder(t, targets, once);
                            CHECK(once == twice);
                        });
                }
            }
        }
    }
}

TEST_CASE("reorder pushforward of the planted law equals the ordered law (spot)") {
    // Full n<=4 sweep is an acceptance criterion; spot-check n=3 here.
    for (const auto& t : oracle::enumerate_trees(3)) {
        for (int a = 1; a <= 3; ++a)
            for (int b = 1; b <= 3; ++b) {
                std::vector<int> targets{a, b};
                oracle::ExactDistribution<std::vector<PlantedEdge>> pushed;
                oracle::for_each_cut_history(
                    t, targets, false, oracle::CutWeighting::edge_uniform,
                    [&](const Rational& p, const std::vector<PlantedEdge>& seq) {
                        pushed.add(reorder(t, targets, seq).second, p);
                    });
                auto ordered =
                    oracle::cut_sequence_law(t, targets, true, oracle::CutWeighting::edge_uniform);
                CHECK(oracle::tv_distance(pushed, ordered) == 0);
            }
    }
}

TEST_CASE("records: single vertex and fixed ranks") {
    RngStream rng(40, 0);
    CHECK(records_count(RootedTree(), rng) == 1);
    auto t = path_tree(4);
    // Ranks along the path 1,2,3,4: only the root is a record.
    CHECK(records_count_with_ranks(t, {0, 1, 2, 3, 4}) == 1);
    // Decreasing ranks: every vertex is a record.
    CHECK(records_count_with_ranks(t, {0, 4, 3, 2, 1}) == 4);
}

TEST_CASE("records on a path equal prefix minima of a uniform permutation") {
    // Independent oracle: enumerate permutations directly and count prefix
    // minima; compare with the library's own permutation enumeration.
    for (int n = 2; n <= 7; ++n) {
        auto t = path_tree(n);
        auto law = oracle::records_law(t);
        std::vector<int> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 1);
        std::map<int, long long> direct;
        long long total = 0;
        do {
            int minima = 0, best = n + 1;
            for (int x : perm)
                if (x < best) {
                    best = x;
                    ++minima;
                }
            ++direct[minima];
            ++total;
        } while (std::next_permutation(perm.begin(), perm.end()));
        for (auto& [value, count] : direct)
            CHECK(law.probability(value) == Rational(count, total));
    }
}

TEST_CASE("record count mean equals the sum of inverse root-path lengths") {
    RngStream rng(41, 0);
    for (int rep = 0; rep < 30; ++rep) {
        int n = 1 + static_cast<int>(rng.below(6));
        auto t = sample_cayley(n, rng);
        Rational expected = 0;
        for (int v = 1; v <= n; ++v) expected += expected_cut_probability(t, v);
        CHECK(oracle::records_mean(t) == expected);
    }
}

TEST_CASE("cut probability formula: pinned depth values") {
    auto t = path_tree(4);
    CHECK(expected_cut_probability(t, 1) == Rational(1));
    CHECK(expected_cut_probability(t, 2) == Rational(1, 2));
    CHECK(expected_cut_probability(t, 4) == Rational(1, 4));
    CHECK_THROWS_AS(expected_cut_probability(t, 5), InvalidArgument);
}

TEST_CASE("records law equals the dynamics effective-cut law at n<=4") {
    for (int n = 1; n <= 4; ++n)
        for (const auto& t : oracle::enumerate_trees(n))
            CHECK(oracle::tv_distance(oracle::records_law(t), oracle::dynamics_kappa_law(t)) == 0);
}

TEST_CASE("sampled records follow the exact law") {
    RngStream rng(42, 0);
    auto t = sample_cayley(6, rng);
    auto law = oracle::records_law(t);
    const long long draws = 200000;
    std::map<int, long long> counts;
    for (long long i = 0; i < draws; ++i) ++counts[records_count(t, rng)];
    CHECK(test_support::chi_square_vs_exact(counts, law, draws) > 1e-3);
}

TEST_CASE("block preimage count: interleavings of two independent sub-runs") {
    // When the first cut separates the marked components, the number of
    // possible cutting sequences that reorder to a fixed output is the
    // binomial interleaving count C(m-1, m1), m1 = cuts on the first marker's
    // side after the split.  On the 3-path planted at both leaves with first
    // cut (1,2): side {1,w1} always takes m1 = 1 further cut, so a reordered
    // output of length m must have exactly m-1 preimages.
    auto t = tree(2, {2, 2, 2});
    std::vector<int> targets{1, 3};
    std::map<std::vector<PlantedEdge>, int> preimages;
    oracle::for_each_cut_history(t, targets, false, oracle::CutWeighting::edge_uniform,
                                 [&](const Rational&, const std::vector<PlantedEdge>& seq) {
                                     if (seq.front() == PlantedEdge{1, 2})
                                         ++preimages[reorder(t, targets, seq).second];
                                 });
    CHECK(preimages.size() == 2);  // lengths 3 and 4
    for (auto& [out, count] : preimages) CHECK(count == static_cast<int>(out.size()) - 1);
}

TEST_SUITE_END();
