#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "test_support.hpp"
#include "treecut/dynamics.hpp"
#include "treecut/errors.hpp"
#include "treecut/exact.hpp"
#include "treecut/rng.hpp"
#include "treecut/samplers.hpp"

using namespace treecut;
using test_support::path_tree;
using test_support::tree;

TEST_SUITE_BEGIN("dynamics");

TEST_CASE("rewiring step: identity at the root, flip on the two-path") {
    auto two = tree(1, {1, 1});
    CHECK(ab_step(two, 1) == two);
    auto flipped = ab_step(two, 2);
    CHECK(flipped.root() == 2);
    CHECK(flipped.parent(1) == 2);
}

TEST_CASE("rewiring step preserves the edge count") {
    RngStream rng(21, 0);
    auto t = sample_cayley(8, rng);
    for (int step = 0; step < 100; ++step) {
        int x = 1 + static_cast<int>(rng.below(8));
        t = ab_step(t, x);
        CHECK(t.root() == x);
        int edges = 0;
        for (int v = 1; v <= 8; ++v) edges += (v != t.root());
        CHECK(edges == 7);
    }
}

TEST_CASE("rewiring step matches the subtree-splice description") {
    // 1 <- 2 <- 3, root 1; select 3: subtree {3} keeps its shape, the rest
    // hangs below it via the old root.
    auto t = path_tree(3);
    auto s = ab_step(t, 3);
    CHECK(s.root() == 3);
    CHECK(s.parent(1) == 3);
    CHECK(s.parent(2) == 1);
}

TEST_CASE("pruning dynamics on a single vertex") {
    RngStream rng(22, 0);
    auto trace = modified_dynamics(RootedTree(), rng);
    CHECK(trace.kappa() == 1);
    CHECK(trace.effective_times == std::vector<std::uint64_t>{1});
    CHECK(trace.forest.k() == 1);
    CHECK(trace.that_tree == RootedTree());
}

TEST_CASE("trace invariants hold on random runs") {
    RngStream rng(23, 0);
    for (int rep = 0; rep < 300; ++rep) {
        int n = 1 + static_cast<int>(rng.below(10));
        auto t = sample_cayley(n, rng);
        auto trace = modified_dynamics(t, rng);
        // First selection is always effective; the last prunes the root.
        CHECK(trace.effective_times.front() == 1);
        CHECK(trace.effective_vertices.back() == t.root());
        for (std::size_t i = 0; i + 1 < trace.effective_times.size(); ++i)
            CHECK(trace.effective_times[i] < trace.effective_times[i + 1]);
        // Chained tree: valid, n-1 edges by construction, rooted at the
        // first pruned vertex, and kappa equals the vertex count of the path
        // from its root down to the original root.
        CHECK(trace.that_tree.n() == n);
        CHECK(trace.that_tree.root() == trace.effective_vertices.front());
        int steps = 1, v = t.root();
        while (v != trace.that_tree.root()) {
            v = trace.that_tree.parent(v);
            ++steps;
        }
        CHECK(steps == trace.kappa());
        trace.forest.validate();
        CHECK(trace.forest.roots == trace.effective_vertices);
    }
}

TEST_CASE("n=2: exact joint law of (chained tree, root) is uniform 1/4") {
    RngStream rng(24, 0);
    const long long draws = 100000;
    std::map<std::pair<std::string, int>, long long> counts;
    for (long long i = 0; i < draws; ++i) {
        auto t = sample_cayley(2, rng);
        auto trace = modified_dynamics(t, rng);
        ++counts[{to_line(trace.that_tree), t.root()}];
    }
    auto law = oracle::that_root_law(2);
    REQUIRE(law.is_probability());
    for (auto& [key, prob] : law.p) CHECK(prob == Rational(1, 4));
    CHECK(test_support::chi_square_vs_exact(counts, law, draws) > 1e-3);
}

TEST_CASE("n=3: exact pushforward of (chained tree, root) is uniform on 9 x 3") {
    auto law = oracle::that_root_law(3);
    REQUIRE(law.is_probability());
    CHECK(law.p.size() == 27);
    for (auto& [key, prob] : law.p) CHECK(prob == Rational(1, 27));
}

TEST_CASE("alive-list sampling agrees with literal skip-over-pruned sampling") {
    // Literal variant: draw uniformly from 1..n, skipping pruned vertices.
    auto literal = [](const RootedTree& t, RngStream& rng) {
        int n = t.n();
        auto children = children_of(t);
        std::vector<char> dead(static_cast<std::size_t>(n) + 1, 0);
        std::vector<int> seq, stack;
        int alive = n;
        while (alive > 0) {
            int x = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
            if (dead[static_cast<std::size_t>(x)]) continue;
            seq.push_back(x);
            stack.assign(1, x);
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                dead[static_cast<std::size_t>(u)] = 1;
                --alive;
                for (int c : children[static_cast<std::size_t>(u)])
                    if (!dead[static_cast<std::size_t>(c)]) stack.push_back(c);
            }
        }
        return seq;
    };
    auto t = test_support::tree(1, {1, 1, 1});  // star on 3
    RngStream rng(25, 0);
    const long long draws = 200000;
    std::map<std::string, long long> fast_counts, literal_counts;
    auto key_of = [](const std::vector<int>& seq) {
        std::string key;
        for (int v : seq) key += static_cast<char>('0' + v);
        return key;
    };
    for (long long i = 0; i < draws; ++i) {
        fast_counts[key_of(modified_dynamics(t, rng).effective_vertices)]++;
        literal_counts[key_of(literal(t, rng))]++;
    }
    // Two-sample chi-square over the union of outcomes.
    std::set<std::string> keys;
    for (auto& [key, c] : fast_counts) keys.insert(key);
    for (auto& [key, c] : literal_counts) keys.insert(key);
    double stat = 0;
    for (const auto& key : keys) {
        double a = static_cast<double>(fast_counts[key]);
        double b = static_cast<double>(literal_counts[key]);
        double e = (a + b) / 2;
        REQUIRE(e > 0);
        stat += (a - e) * (a - e) / e + (b - e) * (b - e) / e;
    }
    CHECK(stats::chi_square_pvalue(stat, static_cast<double>(keys.size()) - 1) > 1e-3);
}

TEST_CASE("replay validates its sequence") {
    auto t = path_tree(3);
    CHECK_NOTHROW(replay_modified(t, {3, 2, 1}));
    CHECK_NOTHROW(replay_modified(t, {2, 1}));  // pruning 2 removes 3 as well
    CHECK_THROWS_AS(replay_modified(t, {2, 3}), InvalidArgument);   // 3 already pruned
    CHECK_THROWS_AS(replay_modified(t, {3, 2}), InvalidArgument);   // root never pruned
    CHECK_THROWS_AS(replay_modified(t, {1, 2}), InvalidArgument);   // trailing entries
}

TEST_CASE("tree_to_forest: pinned examples and orientation") {
    auto two = tree(1, {1, 1});
    // v = root: the forest is the tree itself.
    auto whole = tree_to_forest(two, 1);
    CHECK(whole.k() == 1);
    CHECK(whole.roots == std::vector<int>{1});
    // v = 2: two singletons, the root's component last.
    auto split = tree_to_forest(two, 2);
    CHECK(split.roots == std::vector<int>{2, 1});
    auto comps = split.components();
    CHECK(comps[0] == std::vector<int>{2});
    CHECK(comps[1] == std::vector<int>{1});
}

TEST_CASE("tree_to_forest round trips through its inverse on all (t, v), n<=4") {
    for (int n = 1; n <= 4; ++n) {
        for (const auto& t : oracle::enumerate_trees(n)) {
            for (int v = 1; v <= n; ++v) {
                auto f = tree_to_forest(t, v);
                auto [back, marked] = forest_to_tree(f);
                CHECK(back == t);
                CHECK(marked == v);
            }
        }
    }
}

TEST_CASE("reverse transform pinned examples") {
    RngStream rng(26, 0);
    // Single-tree forest: unchanged.
    auto t = path_tree(4);
    auto f = tree_to_forest(t, t.root());
    CHECK(reverse_transform(f, rng) == t);
    // Two singletons ({1},{2}): the only choice gives 1 -> 2 rooted at 2.
    OrderedForest two;
    two.n = 2;
    two.parent = {0, 1, 2};
    two.roots = {1, 2};
    auto joined = reverse_transform(two, rng);
    CHECK(joined.root() == 2);
    CHECK(joined.parent(1) == 2);
}

TEST_CASE("reverse transform pushforward of uniform forests is uniform on trees, n<=3") {
    for (int n = 1; n <= 3; ++n) {
        auto law = oracle::reverse_transform_law(n);
        REQUIRE(law.is_probability());
        BigInt trees = 1;
        for (int i = 0; i < n - 1; ++i) trees *= n;
        CHECK(law.p.size() == static_cast<std::size_t>(trees));
        for (auto& [key, prob] : law.p) CHECK(prob == Rational(1, trees));
    }
}

TEST_CASE("reverse transform of sampled forests looks like the cayley sampler at n=200") {
    RngStream rng(27, 0);
    const long long draws = 30000;
    const int n = 200;
    std::map<int, long long> deg_a, deg_b, h1_a, h1_b;
    for (long long i = 0; i < draws; ++i) {
        auto via_forest = reverse_transform(sample_ordered_forest(n, rng), rng);
        auto direct = sample_cayley(n, rng);
        auto cap = [](int x) { return std::min(x, 8); };
        ++deg_a[cap(static_cast<int>(children_of(via_forest)[static_cast<std::size_t>(
            via_forest.root())].size()))];
        ++deg_b[cap(static_cast<int>(
            children_of(direct)[static_cast<std::size_t>(direct.root())].size()))];
        auto da = depths_of(via_forest);
        auto db = depths_of(direct);
        auto bucket = [](int h) { return std::min(h / 5, 12); };
        ++h1_a[bucket(da[1])];
        ++h1_b[bucket(db[1])];
    }
    auto two_sample = [](std::map<int, long long>& a, std::map<int, long long>& b) {
        std::set<int> keys;
        for (auto& [k, c] : a) keys.insert(k);
        for (auto& [k, c] : b) keys.insert(k);
        double stat = 0;
        int used = 0;
        for (int k : keys) {
            double x = static_cast<double>(a[k]), y = static_cast<double>(b[k]);
            if (x + y < 10) continue;  // merge-tiny guard: skip sparse cells
            double e = (x + y) / 2;
            stat += (x - e) * (x - e) / e + (y - e) * (y - e) / e;
            ++used;
        }
        return stats::chi_square_pvalue(stat, std::max(used - 1, 1));
    };
    CHECK(two_sample(deg_a, deg_b) > 1e-3);
    CHECK(two_sample(h1_a, h1_b) > 1e-3);
}

TEST_CASE("forest law from the dynamics is exactly uniform at n<=3") {
    for (int n = 1; n <= 3; ++n) {
        auto law = oracle::forest_law(n);
        REQUIRE(law.is_probability());
        BigInt forests = 1;
        for (int i = 0; i < n; ++i) forests *= n;
        CHECK(law.p.size() == static_cast<std::size_t>(forests));
        for (auto& [key, prob] : law.p) CHECK(prob == Rational(1, forests));
    }
}

TEST_CASE("attachment law given the forest is the product of later-pool uniforms at n=3") {
    auto joint = oracle::forest_attachment_law(3);
    REQUIRE(joint.is_probability());
    // Group by forest and compare each conditional against the product law.
    std::map<std::string, oracle::ExactDistribution<std::vector<int>>> conditional;
    std::map<std::string, Rational> marginal;
    for (auto& [key, prob] : joint.p) {
        conditional[key.first].add(key.second, prob);
        marginal[key.first] += prob;
    }
    for (auto& f : oracle::enumerate_forests(3)) {
        auto key = oracle::forest_key(f);
        REQUIRE(marginal.count(key) == 1);
        auto& cond = conditional[key];
        for (auto& [attach, prob] : cond.p) cond.p[attach] = prob / marginal[key];
        auto product = oracle::attachment_product_law(f);
        CHECK(oracle::tv_distance(cond, product) == 0);
        CHECK(oracle::tv_distance(oracle::attachment_conditional_law(f), product) == 0);
    }
    // Pinned two-vertex case: forest ({2},{1}) forces the first root's
    // parent to be vertex 1.
    OrderedForest two;
    two.n = 2;
    two.parent = {0, 1, 2};
    two.roots = {2, 1};
    auto pinned = oracle::attachment_conditional_law(two);
    CHECK(pinned.probability({1}) == 1);
}

TEST_SUITE_END();
