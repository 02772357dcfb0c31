// Copyright 2026 The Forrelation Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "forrelation/forrelation.h"
#include "forrelation/monte_carlo.h"
#include "forrelation/orthogonal.h"

namespace forr {

/// Internal nodes have query >= 0 and two children; leaves have query == -1
/// and an accept value in [0, 1].
struct TreeNode {
    int query = -1;
    int minus = -1;  // child followed when x[query] == -1
    int plus = -1;   // child followed when x[query] == +1
    double value = 0.0;

    bool is_leaf() const { return query < 0; }
    bool operator==(const TreeNode &) const = default;
};

/// Deterministic decision tree over m boolean variables. Node 0 is the root.
///
/// The constructor checks that children are in range, that every node is
/// reachable exactly once from the root, that no path queries a variable twice
/// and that leaf values lie in [0, 1]. Violations throw InvalidTree.
class DecisionTree {
   public:
    DecisionTree(std::size_t num_vars, std::vector<TreeNode> nodes);

    static DecisionTree leaf(std::size_t num_vars, double value);
    /// Accept iff x[var] == +1.
    static DecisionTree single_query(std::size_t num_vars, std::size_t var);

    std::size_t num_vars() const { return num_vars_; }
    const std::vector<TreeNode> &nodes() const { return nodes_; }
    int depth() const { return depth_; }
    /// Sorted, distinct.
    std::vector<std::size_t> queried_variables() const;

    /// x must hold ±1 entries at every queried position.
    double evaluate(std::span<const double> x) const;

    bool operator==(const DecisionTree &) const = default;

   private:
    std::size_t num_vars_;
    std::vector<TreeNode> nodes_;
    int depth_ = 0;
};

/// A finite mixture of deterministic trees. Weights are >= 0 and sum to 1
/// within 1e-12; all trees share num_vars.
class RandomizedTree {
   public:
    explicit RandomizedTree(DecisionTree tree);
    RandomizedTree(std::vector<double> weights, std::vector<DecisionTree> trees);

    std::size_t num_vars() const { return trees_.front().num_vars(); }
    int depth() const;
    const std::vector<double> &weights() const { return weights_; }
    const std::vector<DecisionTree> &trees() const { return trees_; }
    std::vector<std::size_t> queried_variables() const;

    double evaluate(std::span<const double> x) const;

   private:
    std::vector<double> weights_;
    std::vector<DecisionTree> trees_;
};

double evaluate_tree(const DecisionTree &tree, std::span<const double> x);
double evaluate_tree(const RandomizedTree &tree, std::span<const double> x);

/// Truth table of length 2^m. Bit i of the table index set means x_i = -1.
/// Throws ResourceLimit for m > 24 and InvalidTree if the tree queries a
/// variable >= m.
std::vector<double> tree_accept_function(const DecisionTree &tree, std::size_t m);
std::vector<double> tree_accept_function(const RandomizedTree &tree, std::size_t m);

/// Complete tree of the given depth with distinct queries along every path
/// drawn uniformly from [num_vars] and leaf values uniform in [0, 1]
/// (or in {0, 1} when boolean_leaves).
DecisionTree random_tree(Rng &rng, std::size_t num_vars, int depth, bool boolean_leaves = false);

std::string tree_to_json(const DecisionTree &tree);
std::string tree_to_json(const RandomizedTree &tree);
/// Accepts either {"num_vars", "nodes"} or {"num_vars", "mixture": [{"weight", "nodes"}]}.
/// Throws InvalidTree on malformed input.
RandomizedTree tree_from_json(const std::string &text);

/// Counts every index read through it.
class QueryOracle {
   public:
    explicit QueryOracle(const BlockVector &z) : z_(z) {}
    double operator()(std::size_t index) {
        ++queries_;
        return z_[index];
    }
    std::size_t queries() const { return queries_; }

   private:
    const BlockVector &z_;
    std::size_t queries_ = 0;
};

struct TupleEstimate {
    double estimate = 0.0;
    std::size_t queries_used = 0;
};

/// Averages N^{k-1} z_1(i_1) M_{i_1 i_2} z_2(i_2) ... M_{i_{k-1} i_k} z_k(i_k)
/// over uniform tuples in [N]^k. Unbiased for forr_value(z).
TupleEstimate tuple_sampling_estimator(QueryOracle &oracle, const ForrelationParams &params,
                                       const OrthogonalMatrix &matrix, std::size_t samples, Rng &rng);

/// Accept probability of a classical or quantum procedure on one input.
using AcceptFunctional = std::function<double(const BlockVector &z, Rng &rng)>;

struct NamedAlgorithm {
    std::string name;
    std::size_t queries = 0;
    AcceptFunctional accept;
};

struct AdvantageResult {
    std::string name;
    std::size_t queries = 0;
    double mean_p1 = 0.0;
    double mean_p0 = 0.0;
    double advantage = 0.0;
    double standard_error = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

/// Confidence intervals span 3 standard errors.
inline constexpr double kCiWidth = 3.0;

/// Runs every algorithm on the same `budget` samples from p_1 and from p_0.
///
/// Samples are drawn in fixed batches with per-batch streams, so results do
/// not depend on `workers`. Standard errors are binomial, sqrt(p(1-p)/n) per
/// mean, which bounds the variance of any [0, 1]-valued statistic.
std::vector<AdvantageResult> measure_advantages(const std::vector<NamedAlgorithm> &algorithms,
                                                const ForrelationParams &params, const OrthogonalMatrix &matrix,
                                                std::size_t budget, std::uint64_t seed, int workers = 1);

AdvantageResult measure_advantage(const NamedAlgorithm &algorithm, const ForrelationParams &params,
                                  const OrthogonalMatrix &matrix, std::size_t budget, std::uint64_t seed,
                                  int workers = 1);

}  // namespace forr
