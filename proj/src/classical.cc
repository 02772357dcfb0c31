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

#include "forrelation/classical.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "forrelation/errors.h"
#include "forrelation/sampler.h"
#include "json.hpp"

namespace forr {

namespace {

using json = nlohmann::json;

constexpr std::size_t kMaxTableBits = 24;

int follow(const std::vector<TreeNode> &nodes, std::span<const double> x) {
    int at = 0;
    while (!nodes[at].is_leaf()) {
        const auto q = static_cast<std::size_t>(nodes[at].query);
        if (q >= x.size()) {
            throw InvalidTree("query index " + std::to_string(q) + " outside input of length " +
                              std::to_string(x.size()));
        }
        if (x[q] == 1.0) {
            at = nodes[at].plus;
        } else if (x[q] == -1.0) {
            at = nodes[at].minus;
        } else {
            throw InvalidInput("decision trees read ±1 entries only");
        }
    }
    return at;
}

double evaluate_bits(const std::vector<TreeNode> &nodes, std::uint64_t bits) {
    int at = 0;
    while (!nodes[at].is_leaf()) {
        at = (bits >> nodes[at].query) & 1u ? nodes[at].minus : nodes[at].plus;
    }
    return nodes[at].value;
}

void build_random(Rng &rng, std::size_t num_vars, int remaining, bool boolean_leaves,
                  std::vector<std::size_t> &path, std::vector<TreeNode> &nodes, int at) {
    if (remaining == 0) {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double u = unif(rng);
        nodes[at] = TreeNode{-1, -1, -1, boolean_leaves ? (u < 0.5 ? 0.0 : 1.0) : u};
        return;
    }
    std::uniform_int_distribution<std::size_t> pick(0, num_vars - 1);
    std::size_t q;
    do {
        q = pick(rng);
    } while (std::find(path.begin(), path.end(), q) != path.end());
    const int minus = static_cast<int>(nodes.size());
    const int plus = minus + 1;
    nodes.resize(nodes.size() + 2);
    nodes[at] = TreeNode{static_cast<int>(q), minus, plus, 0.0};
    path.push_back(q);
    build_random(rng, num_vars, remaining - 1, boolean_leaves, path, nodes, minus);
    build_random(rng, num_vars, remaining - 1, boolean_leaves, path, nodes, plus);
    path.pop_back();
}

json nodes_to_json(const std::vector<TreeNode> &nodes) {
    json out = json::array();
    for (const auto &node : nodes) {
        if (node.is_leaf()) {
            out.push_back({{"value", node.value}});
        } else {
            out.push_back({{"query", node.query}, {"minus", node.minus}, {"plus", node.plus}});
        }
    }
    return out;
}

std::vector<TreeNode> nodes_from_json(const json &arr) {
    if (!arr.is_array()) {
        throw InvalidTree("\"nodes\" must be an array");
    }
    std::vector<TreeNode> nodes;
    for (const auto &item : arr) {
        if (!item.is_object()) {
            throw InvalidTree("tree node must be an object");
        }
        TreeNode node;
        if (item.contains("query")) {
            node.query = item.at("query").get<int>();
            node.minus = item.at("minus").get<int>();
            node.plus = item.at("plus").get<int>();
            if (node.query < 0) {
                throw InvalidTree("negative query index");
            }
        } else if (item.contains("value")) {
            node.value = item.at("value").get<double>();
        } else {
            throw InvalidTree("tree node needs \"query\" or \"value\"");
        }
        nodes.push_back(node);
    }
    return nodes;
}

}  // namespace

DecisionTree::DecisionTree(std::size_t num_vars, std::vector<TreeNode> nodes)
    : num_vars_(num_vars), nodes_(std::move(nodes)) {
    if (nodes_.empty()) {
        throw InvalidTree("tree has no nodes");
    }
    const int count = static_cast<int>(nodes_.size());
    std::vector<int> visits(nodes_.size(), 0);
    std::vector<std::size_t> path;
    // Iterative DFS carrying the queried variables of the current path.
    struct Frame {
        int node;
        int stage;
    };
    std::vector<Frame> stack{{0, 0}};
    visits[0] = 1;
    while (!stack.empty()) {
        Frame &f = stack.back();
        const TreeNode &node = nodes_[f.node];
        if (node.is_leaf()) {
            if (!(node.value >= 0.0 && node.value <= 1.0)) {
                throw InvalidTree("leaf value outside [0, 1]");
            }
            stack.pop_back();
            continue;
        }
        if (f.stage == 0) {
            const auto q = static_cast<std::size_t>(node.query);
            if (q >= num_vars_) {
                throw InvalidTree("query index " + std::to_string(q) + " out of range for " +
                                  std::to_string(num_vars_) + " variables");
            }
            if (std::find(path.begin(), path.end(), q) != path.end()) {
                throw InvalidTree("variable " + std::to_string(q) + " queried twice on one path");
            }
            path.push_back(q);
            depth_ = std::max(depth_, static_cast<int>(path.size()));
        }
        if (f.stage == 2) {
            path.pop_back();
            stack.pop_back();
            continue;
        }
        const int child = f.stage == 0 ? node.minus : node.plus;
        ++f.stage;
        if (child <= 0 || child >= count) {
            throw InvalidTree("child index " + std::to_string(child) + " out of range");
        }
        if (visits[child]++) {
            throw InvalidTree("node " + std::to_string(child) + " reached twice");
        }
        stack.push_back({child, 0});
    }
    for (int i = 0; i < count; ++i) {
        if (!visits[i]) {
            throw InvalidTree("node " + std::to_string(i) + " unreachable from the root");
        }
    }
}

DecisionTree DecisionTree::leaf(std::size_t num_vars, double value) {
    return DecisionTree(num_vars, {TreeNode{-1, -1, -1, value}});
}

DecisionTree DecisionTree::single_query(std::size_t num_vars, std::size_t var) {
    return DecisionTree(num_vars, {TreeNode{static_cast<int>(var), 1, 2, 0.0}, TreeNode{-1, -1, -1, 0.0},
                                   TreeNode{-1, -1, -1, 1.0}});
}

std::vector<std::size_t> DecisionTree::queried_variables() const {
    std::set<std::size_t> vars;
    for (const auto &node : nodes_) {
        if (!node.is_leaf()) {
            vars.insert(static_cast<std::size_t>(node.query));
        }
    }
    return {vars.begin(), vars.end()};
}

double DecisionTree::evaluate(std::span<const double> x) const { return nodes_[follow(nodes_, x)].value; }

RandomizedTree::RandomizedTree(DecisionTree tree) : weights_{1.0}, trees_{std::move(tree)} {}

RandomizedTree::RandomizedTree(std::vector<double> weights, std::vector<DecisionTree> trees)
    : weights_(std::move(weights)), trees_(std::move(trees)) {
    if (trees_.empty() || weights_.size() != trees_.size()) {
        throw InvalidTree("mixture needs one weight per tree and at least one tree");
    }
    double total = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0)) {
            throw InvalidTree("mixture weights must be non-negative");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw InvalidTree("mixture weights sum to " + std::to_string(total));
    }
    for (const auto &t : trees_) {
        if (t.num_vars() != trees_.front().num_vars()) {
            throw InvalidTree("mixture trees disagree on num_vars");
        }
    }
}

int RandomizedTree::depth() const {
    int d = 0;
    for (const auto &t : trees_) {
        d = std::max(d, t.depth());
    }
    return d;
}

std::vector<std::size_t> RandomizedTree::queried_variables() const {
    std::set<std::size_t> vars;
    for (const auto &t : trees_) {
        for (auto v : t.queried_variables()) {
            vars.insert(v);
        }
    }
    return {vars.begin(), vars.end()};
}

double RandomizedTree::evaluate(std::span<const double> x) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < trees_.size(); ++i) {
        acc += weights_[i] * trees_[i].evaluate(x);
    }
    return acc;
}

double evaluate_tree(const DecisionTree &tree, std::span<const double> x) { return tree.evaluate(x); }
double evaluate_tree(const RandomizedTree &tree, std::span<const double> x) { return tree.evaluate(x); }

std::vector<double> tree_accept_function(const RandomizedTree &tree, std::size_t m) {
    if (m > kMaxTableBits) {
        throw ResourceLimit("truth tables are limited to 24 variables, got " + std::to_string(m));
    }
    const auto vars = tree.queried_variables();
    if (!vars.empty() && vars.back() >= m) {
        throw InvalidTree("tree queries variable " + std::to_string(vars.back()) + " beyond m = " +
                          std::to_string(m));
    }
    const std::uint64_t size = std::uint64_t{1} << m;
    std::vector<double> table(size, 0.0);
    for (std::size_t t = 0; t < tree.trees().size(); ++t) {
        const auto &nodes = tree.trees()[t].nodes();
        const double w = tree.weights()[t];
        for (std::uint64_t x = 0; x < size; ++x) {
            table[x] += w * evaluate_bits(nodes, x);
        }
    }
    return table;
}

std::vector<double> tree_accept_function(const DecisionTree &tree, std::size_t m) {
    return tree_accept_function(RandomizedTree(tree), m);
}

DecisionTree random_tree(Rng &rng, std::size_t num_vars, int depth, bool boolean_leaves) {
    if (depth < 0 || static_cast<std::size_t>(depth) > num_vars) {
        throw InvalidParameter("tree depth must lie in [0, num_vars]");
    }
    std::vector<TreeNode> nodes(1);
    std::vector<std::size_t> path;
    build_random(rng, num_vars, depth, boolean_leaves, path, nodes, 0);
    return DecisionTree(num_vars, std::move(nodes));
}

std::string tree_to_json(const DecisionTree &tree) {
    json out = {{"num_vars", tree.num_vars()}, {"nodes", nodes_to_json(tree.nodes())}};
    return out.dump(2);
}

std::string tree_to_json(const RandomizedTree &tree) {
    if (tree.trees().size() == 1) {
        return tree_to_json(tree.trees().front());
    }
    json mixture = json::array();
    for (std::size_t i = 0; i < tree.trees().size(); ++i) {
        mixture.push_back({{"weight", tree.weights()[i]}, {"nodes", nodes_to_json(tree.trees()[i].nodes())}});
    }
    json out = {{"num_vars", tree.num_vars()}, {"mixture", mixture}};
    return out.dump(2);
}

RandomizedTree tree_from_json(const std::string &text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception &e) {
        throw InvalidTree(std::string("tree file is not valid JSON: ") + e.what());
    }
    try {
        if (!doc.is_object() || !doc.contains("num_vars")) {
            throw InvalidTree("tree file needs a \"num_vars\" field");
        }
        const auto num_vars = doc.at("num_vars").get<std::size_t>();
        if (doc.contains("nodes")) {
            return RandomizedTree(DecisionTree(num_vars, nodes_from_json(doc.at("nodes"))));
        }
        if (!doc.contains("mixture") || !doc.at("mixture").is_array()) {
            throw InvalidTree("tree file needs \"nodes\" or \"mixture\"");
        }
        std::vector<double> weights;
        std::vector<DecisionTree> trees;
        for (const auto &part : doc.at("mixture")) {
            weights.push_back(part.at("weight").get<double>());
            trees.emplace_back(num_vars, nodes_from_json(part.at("nodes")));
        }
        return RandomizedTree(std::move(weights), std::move(trees));
    } catch (const json::exception &e) {
        throw InvalidTree(std::string("malformed tree file: ") + e.what());
    }
}

TupleEstimate tuple_sampling_estimator(QueryOracle &oracle, const ForrelationParams &params,
                                       const OrthogonalMatrix &matrix, std::size_t samples, Rng &rng) {
    if (samples == 0) {
        throw InvalidParameter("tuple estimator needs at least one sample");
    }
    if (matrix.size() != params.N) {
        throw InvalidShape("matrix size does not match N");
    }
    const std::size_t before = oracle.queries();
    const double scale = std::pow(static_cast<double>(params.N), params.k - 1);
    std::uniform_int_distribution<std::size_t> pick(0, params.N - 1);
    double total = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        std::size_t prev = pick(rng);
        double term = oracle(prev);
        for (int b = 1; b < params.k; ++b) {
            const std::size_t next = pick(rng);
            term *= matrix.entry(prev, next) * oracle(static_cast<std::size_t>(b) * params.N + next);
            prev = next;
        }
        total += scale * term;
    }
    return {total / static_cast<double>(samples), oracle.queries() - before};
}

std::vector<AdvantageResult> measure_advantages(const std::vector<NamedAlgorithm> &algorithms,
                                                const ForrelationParams &params, const OrthogonalMatrix &matrix,
                                                std::size_t budget, std::uint64_t seed, int workers) {
    if (budget == 0) {
        throw InvalidParameter("advantage measurement needs a positive budget");
    }
    const std::size_t A = algorithms.size();
    using Sums = std::vector<std::pair<MeanAccumulator, MeanAccumulator>>;
    auto batches = run_batched(budget, workers, [&](std::size_t b, std::size_t, std::size_t count) {
        Sums sums(A);
        Rng bits = make_stream(seed, StreamPurpose::P0Bits, b);
        Rng gauss = make_stream(seed, StreamPurpose::Gaussian, b);
        Rng round = make_stream(seed, StreamPurpose::Rounding, b);
        std::vector<Rng> alg;
        alg.reserve(A);
        for (std::size_t a = 0; a < A; ++a) {
            alg.push_back(make_stream(seed, StreamPurpose::Algorithm, (b << 16) | a));
        }
        for (std::size_t s = 0; s < count; ++s) {
            const BlockVector z1 = sample_p1(gauss, round, params, matrix).Z;
            const BlockVector z0 = sample_p0(bits, params);
            for (std::size_t a = 0; a < A; ++a) {
                sums[a].first.add(algorithms[a].accept(z1, alg[a]));
                sums[a].second.add(algorithms[a].accept(z0, alg[a]));
            }
        }
        return sums;
    });
    Sums total(A);
    for (const auto &batch : batches) {
        for (std::size_t a = 0; a < A; ++a) {
            total[a].first.merge(batch[a].first);
            total[a].second.merge(batch[a].second);
        }
    }
    std::vector<AdvantageResult> out;
    for (std::size_t a = 0; a < A; ++a) {
        AdvantageResult r;
        r.name = algorithms[a].name;
        r.queries = algorithms[a].queries;
        r.mean_p1 = total[a].first.mean();
        r.mean_p0 = total[a].second.mean();
        r.advantage = r.mean_p1 - r.mean_p0;
        const double se1 = binomial_standard_error(r.mean_p1, budget);
        const double se0 = binomial_standard_error(r.mean_p0, budget);
        r.standard_error = std::sqrt(se1 * se1 + se0 * se0);
        r.ci_low = r.advantage - kCiWidth * r.standard_error;
        r.ci_high = r.advantage + kCiWidth * r.standard_error;
        out.push_back(std::move(r));
    }
    return out;
}

AdvantageResult measure_advantage(const NamedAlgorithm &algorithm, const ForrelationParams &params,
                                  const OrthogonalMatrix &matrix, std::size_t budget, std::uint64_t seed,
                                  int workers) {
    return measure_advantages({algorithm}, params, matrix, budget, seed, workers).front();
}

}  // namespace forr
