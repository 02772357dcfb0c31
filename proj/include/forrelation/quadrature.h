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
#include <functional>
#include <span>
#include <vector>

namespace forr {

/// Adaptive Gauss-Kronrod (G15/K31) integral of f over [a, b]; b < a flips the sign.
double integrate(const std::function<double(double)> &f, double a, double b, double rel_tol = 1e-13);

/// Gauss-Hermite rule for E[f(X)], X ~ N(0, 1): sum_i weights[i] f(nodes[i]).
struct HermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    /// Golub-Welsch on the probabilists' Hermite Jacobi matrix. Cached per size.
    static const HermiteRule &get(std::size_t points);
};

/// Expectation of f(X) for X ~ N(0, cov), cov a d x d symmetric PSD matrix (row-major).
///
/// Integrates over the reduced coordinates of an eigen-factorization cov = L L^T,
/// so singular directions are dropped rather than inverted. Uses a tensor
/// Gauss-Hermite rule with `points` nodes per retained dimension.
double gaussian_expectation(const std::function<double(std::span<const double>)> &f, std::span<const double> cov,
                            std::size_t d, std::size_t points = 64);

}  // namespace forr
