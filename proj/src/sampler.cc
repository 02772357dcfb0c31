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

#include "forrelation/sampler.h"

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "forrelation/errors.h"
#include "forrelation/special.h"

namespace forr {

BlockVector sample_p0(Rng &rng, const ForrelationParams &params) {
    BlockVector z(params.k, params.N);
    auto flat = z.flat();
    std::size_t i = 0;
    while (i < flat.size()) {
        std::uint64_t word = rng();
        for (int b = 0; b < 64 && i < flat.size(); ++b, ++i) {
            flat[i] = (word >> b) & 1u ? -1.0 : 1.0;
        }
    }
    return z;
}

GaussianPairs sample_gaussian_pairs(Rng &rng, const ForrelationParams &params, const OrthogonalMatrix &matrix) {
    if (matrix.size() != params.N) {
        throw InvalidShape("matrix size does not match N");
    }
    const int pairs = params.k - 1;
    GaussianPairs out{BlockVector(pairs, params.N), BlockVector(pairs, params.N)};
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int kappa = 0; kappa < pairs; ++kappa) {
        auto u = out.U.block(kappa);
        for (double &x : u) {
            x = normal(rng);
        }
        auto v = out.V.block(kappa);
        std::copy(u.begin(), u.end(), v.begin());
        matrix.apply_transpose_inplace(v);
    }
    return out;
}

BlockVector truncated_means(const GaussianPairs &pairs) {
    BlockVector x(pairs.U.blocks(), pairs.U.block_len(), truncate_phi(pairs.U.flat()));
    BlockVector y(pairs.V.blocks(), pairs.V.block_len(), truncate_phi(pairs.V.flat()));
    return block_shifted_product(x, y);
}

BlockVector round_to_signs(const BlockVector &means, Rng &rng) {
    if (!means.within(-1.0, 1.0)) {
        throw InvalidInput("rounding means must lie in [-1, 1]");
    }
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    BlockVector z(means.blocks(), means.block_len());
    for (std::size_t i = 0; i < means.size(); ++i) {
        z[i] = unif(rng) < 0.5 * (1.0 + means[i]) ? 1.0 : -1.0;
    }
    return z;
}

P1Sample sample_p1(Rng &gaussian_rng, Rng &rounding_rng, const ForrelationParams &params,
                   const OrthogonalMatrix &matrix) {
    GaussianPairs pairs = sample_gaussian_pairs(gaussian_rng, params, matrix);
    BlockVector w = truncated_means(pairs);
    BlockVector z = round_to_signs(w, rounding_rng);
    return P1Sample{std::move(z), std::move(w), std::move(pairs)};
}

double conditional_mean_forr(const GaussianPairs &pairs, const OrthogonalMatrix &matrix) {
    return forr_value(truncated_means(pairs), matrix);
}

OrthogonalMatrix haar_orthogonal(Rng &rng, std::size_t N) {
    if (N == 0) {
        throw InvalidDimension("Haar matrix needs N >= 1");
    }
    const auto n = static_cast<Eigen::Index>(N);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            g(i, j) = normal(rng);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd &r = qr.matrixQR();
    std::vector<double> data(N * N);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double sign = r(j, j) < 0.0 ? -1.0 : 1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            data[static_cast<std::size_t>(i * n + j)] = sign * q(i, j);
        }
    }
    return OrthogonalMatrix::dense(N, std::move(data), 1e-10);
}

double entry_magnitude_statistic(const OrthogonalMatrix &matrix) {
    const std::size_t N = matrix.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            worst = std::max(worst, std::abs(matrix.entry(i, j)));
        }
    }
    const double n = static_cast<double>(N);
    return N > 1 ? worst * std::sqrt(n / std::log(n)) : worst;
}

}  // namespace forr
