#include "forrelation/classical.h"

#include <gtest/gtest.h>

#include <cmath>

#include "forrelation/errors.h"
#include "forrelation/fourier.h"
#include "forrelation/quantum_sim.h"
#include "oracles.h"

using namespace forr;
using namespace forr::testing;

namespace {

// Walks every root-to-leaf path, fixing the queried bits, and writes the leaf
// value into every table entry consistent with that path.
void fill_paths(const DecisionTree &t, int node, std::uint64_t fixed_mask, std::uint64_t fixed_bits,
                std::size_t m, std::vector<double> &table) {
    const TreeNode &nd = t.nodes()[node];
    if (nd.is_leaf()) {
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x) {
            if ((x & fixed_mask) == fixed_bits) {
                table[x] = nd.value;
            }
        }
        return;
    }
    const std::uint64_t bit = std::uint64_t{1} << nd.query;
    fill_paths(t, nd.plus, fixed_mask | bit, fixed_bits, m, table);
    fill_paths(t, nd.minus, fixed_mask | bit, fixed_bits | bit, m, table);
}

std::vector<double> path_oracle(const DecisionTree &t, std::size_t m) {
    std::vector<double> table(std::size_t{1} << m, -1.0);
    fill_paths(t, 0, 0, 0, m, table);
    return table;
}

std::vector<TreeNode> two_level_nodes() {
    // x0 == +1 ? (x1 == +1 ? 1 : 0) : 0.25
    return {{0, 1, 2, 0.0}, {-1, -1, -1, 0.25}, {1, 3, 4, 0.0}, {-1, -1, -1, 0.0}, {-1, -1, -1, 1.0}};
}

}  // namespace

TEST(classical, single_query_tree) {
    const DecisionTree t = DecisionTree::single_query(3, 1);
    EXPECT_EQ(t.depth(), 1);
    EXPECT_EQ(t.queried_variables(), (std::vector<std::size_t>{1}));
    EXPECT_EQ(t.evaluate(std::vector<double>{-1, 1, -1}), 1.0);
    EXPECT_EQ(t.evaluate(std::vector<double>{1, -1, 1}), 0.0);
    EXPECT_EQ(tree_accept_function(t, 3), (std::vector<double>{1, 1, 0, 0, 1, 1, 0, 0}));
}

TEST(classical, depth_zero_tree) {
    const DecisionTree t = DecisionTree::leaf(4, 0.3);
    EXPECT_EQ(t.depth(), 0);
    EXPECT_TRUE(t.queried_variables().empty());
    for (double v : tree_accept_function(t, 4)) {
        EXPECT_EQ(v, 0.3);
    }
}

TEST(classical, evaluate_follows_branches) {
    const DecisionTree t(2, two_level_nodes());
    EXPECT_EQ(t.depth(), 2);
    EXPECT_EQ(t.evaluate(std::vector<double>{1, 1}), 1.0);
    EXPECT_EQ(t.evaluate(std::vector<double>{1, -1}), 0.0);
    EXPECT_EQ(t.evaluate(std::vector<double>{-1, 1}), 0.25);
    EXPECT_EQ(t.evaluate(std::vector<double>{-1, 0.5}), 0.25);
    EXPECT_THROW(t.evaluate(std::vector<double>{0.5, 1}), InvalidInput);
}

TEST(classical, truth_table_matches_path_oracle) {
    Rng rng(50);
    for (int rep = 0; rep < 50; ++rep) {
        const DecisionTree t = random_tree(rng, 8, 3, rep % 2 == 0);
        ASSERT_EQ(t.depth(), 3);
        ASSERT_EQ(tree_accept_function(t, 8), path_oracle(t, 8));
    }
}

TEST(classical, randomized_tree_is_weighted_average) {
    Rng rng(51);
    const DecisionTree a = random_tree(rng, 6, 2);
    const DecisionTree b = random_tree(rng, 6, 3);
    const RandomizedTree r({0.3, 0.7}, {a, b});
    EXPECT_EQ(r.depth(), 3);
    const auto ta = tree_accept_function(a, 6);
    const auto tb = tree_accept_function(b, 6);
    const auto tr = tree_accept_function(r, 6);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        EXPECT_NEAR(tr[i], 0.3 * ta[i] + 0.7 * tb[i], 1e-15);
    }
    EXPECT_THROW(RandomizedTree({0.5, 0.6}, {a, b}), InvalidTree);
    EXPECT_THROW(RandomizedTree({-0.5, 1.5}, {a, b}), InvalidTree);
    EXPECT_THROW(RandomizedTree({0.5, 0.5}, {a, DecisionTree::leaf(3, 0.0)}), InvalidTree);
}

TEST(classical, single_query_fourier) {
    const auto table = tree_accept_function(DecisionTree::single_query(1, 0), 1);
    const FourierTable f = transform(table);
    EXPECT_NEAR(f.coeffs[0], 0.5, 1e-15);
    EXPECT_NEAR(f.coeffs[1], 0.5, 1e-15);
}

TEST(classical, fourier_degree_at_most_depth) {
    Rng rng(52);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t m = 6 + rep % 7;
        const int d = 1 + rep % 4;
        const auto table = tree_accept_function(random_tree(rng, m, d), m);
        const FourierTable f = transform(table);
        for (std::uint64_t s = 0; s < f.coeffs.size(); ++s) {
            if (std::popcount(s) > d) {
                ASSERT_LE(std::abs(f.coeffs[s]), 1e-12);
            }
        }
        double energy = 0.0;
        for (double v : table) {
            energy += v * v;
        }
        ASSERT_NEAR(squared_mass(f), energy / static_cast<double>(table.size()), 1e-12);
    }
}

TEST(classical, invalid_trees) {
    // Child index out of range.
    EXPECT_THROW(DecisionTree(2, {{0, 1, 5, 0.0}, {-1, -1, -1, 0.0}}), InvalidTree);
    // Cycle back to the root.
    EXPECT_THROW(DecisionTree(2, {{0, 1, 0, 0.0}, {-1, -1, -1, 0.0}}), InvalidTree);
    // Shared child.
    EXPECT_THROW(DecisionTree(2, {{0, 1, 1, 0.0}, {-1, -1, -1, 0.0}}), InvalidTree);
    // Unreachable node.
    EXPECT_THROW(DecisionTree(2, {{0, 1, 2, 0.0}, {-1, -1, -1, 0.0}, {-1, -1, -1, 0.0}, {-1, -1, -1, 0.0}}),
                 InvalidTree);
    // Repeated variable on a path.
    EXPECT_THROW(DecisionTree(2, {{0, 1, 2, 0.0}, {-1, -1, -1, 0.0}, {0, 3, 4, 0.0}, {-1, -1, -1, 0.0},
                                  {-1, -1, -1, 1.0}}),
                 InvalidTree);
    // Leaf value out of range.
    EXPECT_THROW(DecisionTree(1, {{-1, -1, -1, 1.5}}), InvalidTree);
    // Query beyond num_vars.
    EXPECT_THROW(DecisionTree(1, {{1, 1, 2, 0.0}, {-1, -1, -1, 0.0}, {-1, -1, -1, 1.0}}), InvalidTree);
    EXPECT_THROW(DecisionTree(1, {}), InvalidTree);
}

TEST(classical, truth_table_guards) {
    EXPECT_THROW(tree_accept_function(DecisionTree::leaf(30, 0.0), 25), ResourceLimit);
    EXPECT_THROW(tree_accept_function(DecisionTree::single_query(10, 7), 4), InvalidTree);
}

TEST(classical, json_round_trip) {
    const DecisionTree t(2, two_level_nodes());
    const RandomizedTree back = tree_from_json(tree_to_json(t));
    ASSERT_EQ(back.trees().size(), 1u);
    EXPECT_EQ(back.trees()[0], t);

    Rng rng(53);
    const RandomizedTree mix({0.25, 0.75}, {random_tree(rng, 5, 2), random_tree(rng, 5, 1)});
    const RandomizedTree mix_back = tree_from_json(tree_to_json(mix));
    EXPECT_EQ(mix_back.weights(), mix.weights());
    EXPECT_EQ(mix_back.trees(), mix.trees());
}

TEST(classical, json_malformed) {
    EXPECT_THROW(tree_from_json("not json"), InvalidTree);
    EXPECT_THROW(tree_from_json("{}"), InvalidTree);
    EXPECT_THROW(tree_from_json(R"({"num_vars": 2, "nodes": [{"query": 0, "minus": 1}]})"), InvalidTree);
    EXPECT_THROW(tree_from_json(R"({"num_vars": 2, "nodes": [{"value": 2.0}]})"), InvalidTree);
    EXPECT_THROW(tree_from_json(R"({"num_vars": 2, "mixture": [{"weight": 0.5, "nodes": [{"value": 1}]}]})"),
                 InvalidTree);
    EXPECT_NO_THROW(tree_from_json(R"({"num_vars": 2, "nodes": [{"value": 1}]})"));
}

TEST(classical, tuple_estimator_is_unbiased_exhaustively) {
    Rng rng(54);
    for (int n : {1, 2}) {
        for (int k : {2, 3}) {
            const std::size_t N = std::size_t{1} << n;
            const Dense h = dense_hadamard(n);
            for (int rep = 0; rep < 5; ++rep) {
                const BlockVector z = random_signs(rng, k, N);
                EXPECT_NEAR(exhaustive_tuple_average(z, h), forr_value(z), 1e-12);
            }
        }
    }
}

TEST(classical, tuple_estimator_samples) {
    const ForrelationParams p = ForrelationParams::make(1, 2);
    const OrthogonalMatrix h = OrthogonalMatrix::hadamard(2);
    const BlockVector z(2, 2, 1.0);
    Rng rng(55);
    {
        // Single samples are N^{k-1} * (±1/sqrt2) = ±sqrt2.
        QueryOracle o(z);
        const TupleEstimate e = tuple_sampling_estimator(o, p, h, 1, rng);
        EXPECT_NEAR(std::abs(e.estimate), std::sqrt(2.0), 1e-12);
        EXPECT_LE(e.queries_used, 2u);
        EXPECT_EQ(o.queries(), e.queries_used);
    }
    MeanAccumulator acc;
    for (int rep = 0; rep < 40000; ++rep) {
        QueryOracle o(z);
        acc.add(tuple_sampling_estimator(o, p, h, 1, rng).estimate);
    }
    EXPECT_NEAR(acc.mean(), std::sqrt(2.0) / 2.0, 4.0 * acc.standard_error());

    QueryOracle o(z);
    EXPECT_THROW(tuple_sampling_estimator(o, p, h, 0, rng), InvalidParameter);
}

TEST(classical, tuple_estimator_variance_shrinks) {
    const ForrelationParams p = ForrelationParams::make(3, 3);
    const OrthogonalMatrix h = OrthogonalMatrix::hadamard(8);
    Rng rng(56);
    const BlockVector z = random_signs(rng, 3, 8);
    MeanAccumulator small;
    MeanAccumulator large;
    for (int rep = 0; rep < 2000; ++rep) {
        QueryOracle a(z);
        small.add(tuple_sampling_estimator(a, p, h, 4, rng).estimate);
        QueryOracle b(z);
        const TupleEstimate e = tuple_sampling_estimator(b, p, h, 64, rng);
        EXPECT_LE(e.queries_used, 3u * 64u);
        large.add(e.estimate);
    }
    EXPECT_LT(large.variance(), small.variance() / 4.0);
    EXPECT_NEAR(large.mean(), forr_value(z), 4.0 * large.standard_error());
}

TEST(classical, constant_algorithm_has_no_advantage) {
    const ForrelationParams p = ForrelationParams::make(6, 2);
    const NamedAlgorithm constant{"constant", 0, [](const BlockVector &, Rng &) { return 0.5; }};
    const AdvantageResult r = measure_advantage(constant, p, OrthogonalMatrix::hadamard(p.N), 3000, 7);
    EXPECT_EQ(r.advantage, 0.0);
    EXPECT_LE(r.ci_low, 0.0);
    EXPECT_GE(r.ci_high, 0.0);
}

TEST(classical, quantum_advantage_and_worker_invariance) {
    const ForrelationParams p = ForrelationParams::make(8, 2);
    const OrthogonalMatrix h = OrthogonalMatrix::hadamard(p.N);
    const NamedAlgorithm quantum{"quantum", 1, [&](const BlockVector &z, Rng &) {
                                     return accept_probability(z, p, h).accept_probability;
                                 }};
    const NamedAlgorithm tree{"tree", 1, [&](const BlockVector &z, Rng &) {
                                  return evaluate_tree(DecisionTree::single_query(z.size(), 0), z.flat());
                              }};
    const auto one = measure_advantages({quantum, tree}, p, h, 20000, 9, 1);
    const auto three = measure_advantages({quantum, tree}, p, h, 20000, 9, 3);
    ASSERT_EQ(one.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(one[i].mean_p1, three[i].mean_p1);
        EXPECT_EQ(one[i].mean_p0, three[i].mean_p0);
    }
    const double expected = 0.5 * p1_mean_exact(h, 2);
    EXPECT_NEAR(one[0].advantage, expected, kCiWidth * one[0].standard_error);
    EXPECT_LE(one[1].ci_low, 0.0);
    EXPECT_GE(one[1].ci_high, 0.0);
}
