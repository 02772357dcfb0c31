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

#include "forrelation/quadrature.h"

#include <cmath>
#include <map>
#include <mutex>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "forrelation/errors.h"

namespace forr {

double integrate(const std::function<double(double)> &f, double a, double b, double rel_tol) {
    if (a == b) {
        return 0.0;
    }
    if (b < a) {
        return -integrate(f, b, a, rel_tol);
    }
    // Boost compares an error estimate in [-1, 1] units against a tolerance in
    // user units, which never converges on short intervals. Map to [-1, 1].
    using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    return half * Rule::integrate([&](double t) { return f(mid + half * t); }, -1.0, 1.0, 15, rel_tol);
}

namespace {

HermiteRule build_hermite_rule(std::size_t points) {
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(points), static_cast<Eigen::Index>(points));
    for (std::size_t i = 1; i < points; ++i) {
        const double off = std::sqrt(static_cast<double>(i));
        jacobi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = off;
        jacobi(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(i)) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    HermiteRule rule;
    rule.nodes.resize(points);
    rule.weights.resize(points);
    double total = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        rule.nodes[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
        const double v0 = solver.eigenvectors()(0, static_cast<Eigen::Index>(i));
        rule.weights[i] = v0 * v0;
        total += rule.weights[i];
    }
    for (double &w : rule.weights) {
        w /= total;
    }
    // Symmetrize: the exact rule is symmetric about 0.
    for (std::size_t i = 0; i < points / 2; ++i) {
        const std::size_t j = points - 1 - i;
        const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.nodes[i] = -x;
        rule.nodes[j] = x;
        rule.weights[i] = rule.weights[j] = w;
    }
    if (points % 2 == 1) {
        rule.nodes[points / 2] = 0.0;
    }
    return rule;
}

}  // namespace

const HermiteRule &HermiteRule::get(std::size_t points) {
    static std::mutex mu;
    static std::map<std::size_t, HermiteRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(points);
    if (it == cache.end()) {
        if (points == 0 || points > 400) {
            throw InvalidParameter("Gauss-Hermite point count must be in [1, 400]");
        }
        it = cache.emplace(points, build_hermite_rule(points)).first;
    }
    return it->second;
}

double gaussian_expectation(const std::function<double(std::span<const double>)> &f, std::span<const double> cov,
                            std::size_t d, std::size_t points) {
    if (cov.size() != d * d) {
        throw InvalidShape("covariance size does not match dimension");
    }
    if (d > 4) {
        throw ResourceLimit("tensor Gauss-Hermite limited to 4 dimensions");
    }
    const auto D = static_cast<Eigen::Index>(d);
    Eigen::MatrixXd c(D, D);
    for (Eigen::Index i = 0; i < D; ++i) {
        for (Eigen::Index j = 0; j < D; ++j) {
            c(i, j) = cov[static_cast<std::size_t>(i * D + j)];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(c);
    const double scale = std::max(1.0, solver.eigenvalues().cwiseAbs().maxCoeff());
    std::vector<Eigen::VectorXd> factors;
    for (Eigen::Index i = 0; i < D; ++i) {
        const double lambda = solver.eigenvalues()(i);
        if (lambda < -1e-10 * scale) {
            throw InvalidMatrix("covariance is not positive semidefinite");
        }
        if (lambda > 1e-13 * scale) {
            factors.push_back(solver.eigenvectors().col(i) * std::sqrt(lambda));
        }
    }

    const HermiteRule &rule = HermiteRule::get(points);
    const std::size_t r = factors.size();
    std::vector<double> x(d, 0.0);
    if (r == 0) {
        return f(x);
    }
    std::vector<std::size_t> idx(r, 0);
    double total = 0.0;
    while (true) {
        double w = 1.0;
        std::fill(x.begin(), x.end(), 0.0);
        for (std::size_t a = 0; a < r; ++a) {
            w *= rule.weights[idx[a]];
            const double g = rule.nodes[idx[a]];
            for (std::size_t i = 0; i < d; ++i) {
                x[i] += factors[a](static_cast<Eigen::Index>(i)) * g;
            }
        }
        total += w * f(x);
        std::size_t a = 0;
        while (a < r && ++idx[a] == points) {
            idx[a] = 0;
            ++a;
        }
        if (a == r) {
            break;
        }
    }
    return total;
}

}  // namespace forr
