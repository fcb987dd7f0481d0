#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "binquest/monothetic.hpp"

#include "oracles.hpp"
#include "support.hpp"

using namespace binquest;
using bqtest::make_matrix;

namespace {

// Rows as 4-bit codes: 16 distinct rows over 4 perfectly separating columns.
ResponseMatrix four_bit_matrix() {
    std::vector<std::vector<int>> rows;
    for (int v = 0; v < 16; ++v) {
        rows.push_back({(v >> 3) & 1, (v >> 2) & 1, (v >> 1) & 1, v & 1});
    }
    return make_matrix(rows);
}

void compare_with_oracle(const MonotheticNode& node, const bqtest::OracleNode& oracle) {
    CHECK(node.split_col == oracle.split_col);
    CHECK(node.objective == oracle.objective);  // same single-division formula, bit for bit
    CHECK(node.members.size() == oracle.members.size());
    if (node.split_col >= 0) {
        REQUIRE(node.child0);
        REQUIRE(node.child1);
        REQUIRE(oracle.children.size() == 2);
        compare_with_oracle(*node.child0, oracle.children[0]);
        compare_with_oracle(*node.child1, oracle.children[1]);
    }
}

double leaf_objective_total(const MonotheticNode& node) {
    if (node.is_leaf()) return node.objective;
    return leaf_objective_total(*node.child0) + leaf_objective_total(*node.child1);
}

}  // namespace

TEST_CASE("depth-1 split picks the variance-minimizing column") {
    // c0 = (0,0,0,1,1,1), c1 = (0,0,1,1,1,1): splitting on c0 leaves total
    // objective 2/3, splitting on c1 leaves 3/4.
    const ResponseMatrix m = make_matrix(
        {{0, 0}, {0, 0}, {0, 1}, {1, 1}, {1, 1}, {1, 1}});
    const MonotheticTree tree = monothetic_fit(m, 1);
    REQUIRE_FALSE(tree.root->is_leaf());
    CHECK(tree.root->split_code == "Q1");
    CHECK(tree.leaf_count == 2);
    CHECK(leaf_objective_total(*tree.root) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("identical rows collapse to a single leaf") {
    const ResponseMatrix m = make_matrix({{1, 0}, {1, 0}, {1, 0}});
    const MonotheticTree tree = monothetic_fit(m, 3);
    CHECK(tree.root->is_leaf());
    CHECK(tree.leaf_count == 1);
    CHECK(tree.root->objective == 0.0);
}

TEST_CASE("four separating bits yield sixteen pure leaves at depth 4") {
    const MonotheticTree tree = monothetic_fit(four_bit_matrix(), 4);
    CHECK(tree.leaf_count == 16);
    CHECK(leaf_objective_total(*tree.root) == 0.0);
    // Every leaf holds exactly one row.
    std::function<void(const MonotheticNode&)> walk = [&](const MonotheticNode& node) {
        if (node.is_leaf()) {
            CHECK(node.members.size() == 1);
        } else {
            walk(*node.child0);
            walk(*node.child1);
        }
    };
    walk(*tree.root);
}

TEST_CASE("assign returns the training leaf for member rows") {
    SplitMix64 rng(8);
    const ResponseMatrix m = bqtest::random_matrix(rng, 24, 5);
    const MonotheticTree tree = monothetic_fit(m, 3);
    std::function<void(const MonotheticNode&)> walk = [&](const MonotheticNode& node) {
        if (node.is_leaf()) {
            for (int i : node.members) {
                std::vector<std::uint8_t> row(m.row(static_cast<std::size_t>(i)),
                                              m.row(static_cast<std::size_t>(i)) + m.n_cols());
                CHECK(monothetic_assign(tree, row) == node.leaf_id);
            }
        } else {
            walk(*node.child0);
            walk(*node.child1);
        }
    };
    walk(*tree.root);
}

TEST_CASE("assign follows bit patterns on the four-bit tree") {
    const ResponseMatrix m = four_bit_matrix();
    const MonotheticTree tree = monothetic_fit(m, 4);
    // Each distinct row lands in its own leaf; rows equal to training rows
    // must map to the same leaves, and all sixteen leaves are hit.
    std::vector<bool> seen(16, false);
    for (std::size_t i = 0; i < m.n_rows(); ++i) {
        std::vector<std::uint8_t> row(m.row(i), m.row(i) + m.n_cols());
        const int leaf = monothetic_assign(tree, row);
        CHECK_FALSE(seen[static_cast<std::size_t>(leaf)]);
        seen[static_cast<std::size_t>(leaf)] = true;
    }
}

TEST_CASE("assign sends the 1-branch to the second child") {
    const ResponseMatrix m = make_matrix({{0}, {0}, {1}, {1}});
    const MonotheticTree tree = monothetic_fit(m, 1);
    REQUIRE(tree.leaf_count == 2);
    CHECK(monothetic_assign(tree, std::vector<std::uint8_t>{1}) == 1);
    CHECK(monothetic_assign(tree, std::vector<std::uint8_t>{0}) == 0);
}

TEST_CASE("assign rejects short rows") {
    const ResponseMatrix m = make_matrix({{0, 1}, {1, 0}});
    const MonotheticTree tree = monothetic_fit(m, 1);
    if (!tree.root->is_leaf() && tree.root->split_col == 1) {
        CHECK_THROWS_AS(monothetic_assign(tree, std::vector<std::uint8_t>{0}),
                        std::invalid_argument);
    }
}

TEST_CASE("objective never increases with depth") {
    SplitMix64 rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        const ResponseMatrix m = bqtest::random_matrix(rng, 10 + rng.below(14), 5);
        double previous = std::numeric_limits<double>::infinity();
        for (int depth = 1; depth <= 4; ++depth) {
            const MonotheticTree tree = monothetic_fit(m, depth);
            const double total = leaf_objective_total(*tree.root);
            CHECK(total <= previous + 1e-12);
            previous = total;
        }
    }
}

TEST_CASE("constant columns are never chosen over a positive-gain split") {
    // Q1 is constant; Q2 separates.
    const ResponseMatrix m = make_matrix({{1, 0}, {1, 0}, {1, 1}, {1, 1}});
    const MonotheticTree tree = monothetic_fit(m, 1);
    REQUIRE_FALSE(tree.root->is_leaf());
    CHECK(tree.root->split_code == "Q2");
}

TEST_CASE("fit equals the greedy brute-force oracle on random small matrices") {
    SplitMix64 rng(104729);
    for (int trial = 0; trial < 120; ++trial) {
        const std::size_t n = 2 + rng.below(7);   // n <= 8
        const std::size_t mcols = 1 + rng.below(4);  // M <= 4
        const ResponseMatrix m = bqtest::random_matrix(rng, n, mcols);
        const MonotheticTree tree = monothetic_fit(m, 2);
        std::vector<int> members(m.n_rows());
        for (std::size_t i = 0; i < members.size(); ++i) members[i] = static_cast<int>(i);
        const bqtest::OracleNode oracle = bqtest::oracle_monothetic(m, members, 2);
        compare_with_oracle(*tree.root, oracle);
    }
}

TEST_CASE("fit validates inputs") {
    ResponseMatrix empty;
    CHECK_THROWS_AS(monothetic_fit(empty, 1), std::invalid_argument);
    const ResponseMatrix m = make_matrix({{0}, {1}});
    CHECK_THROWS_AS(monothetic_fit(m, 0), std::invalid_argument);
}

TEST_CASE("tree serializes to JSON and indented text") {
    const ResponseMatrix m = make_matrix({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    const MonotheticTree tree = monothetic_fit(m, 2);
    const std::string json = monothetic_to_json(tree);
    CHECK(json.find("\"depth\": 2") != std::string::npos);
    CHECK(json.find("\"split\"") != std::string::npos);
    const std::string text = monothetic_to_text(tree);
    CHECK(text.find("split Q1") != std::string::npos);
    CHECK(text.find("leaf") != std::string::npos);
    CHECK(text.find("objective=") != std::string::npos);
}
