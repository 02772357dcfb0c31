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
#include <span>

#include "forrelation/forrelation.h"
#include "forrelation/monte_carlo.h"
#include "forrelation/orthogonal.h"

namespace forr {

/// The k-1 Gaussian pairs (U_κ, V_κ) with V_κ = M^T U_κ, so Cov(U_κ, V_κ) = M.
struct GaussianPairs {
    BlockVector U;  // k-1 blocks
    BlockVector V;  // k-1 blocks
};

struct P1Sample {
    BlockVector Z;  // ±1, k blocks
    BlockVector W;  // φ(U) ⋄ φ(V), entries in [-1/2, 1/2]
    GaussianPairs pairs;
};

/// Uniform ±1 bits over all k*N coordinates.
BlockVector sample_p0(Rng &rng, const ForrelationParams &params);

/// U_κ ~ N(0, I_N) independently per κ, V_κ = M^T U_κ.
///
/// Σ = [[I, M], [M^T, I]] has eigenvalues {0, 2}, so this degenerate draw is the
/// exact joint law rather than an approximation.
GaussianPairs sample_gaussian_pairs(Rng &rng, const ForrelationParams &params, const OrthogonalMatrix &matrix);

/// W = φ(U) ⋄ φ(V).
BlockVector truncated_means(const GaussianPairs &pairs);

/// Rounds each coordinate independently: +1 with probability (1 + W(i)) / 2.
BlockVector round_to_signs(const BlockVector &means, Rng &rng);

/// Gaussian and rounding randomness come from separate generators so a fixed
/// (U, V) can be re-rounded.
P1Sample sample_p1(Rng &gaussian_rng, Rng &rounding_rng, const ForrelationParams &params,
                   const OrthogonalMatrix &matrix);

/// E[forr_k(Z) | U, V] = forr_k(φ(U) ⋄ φ(V)).
double conditional_mean_forr(const GaussianPairs &pairs, const OrthogonalMatrix &matrix);

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with R's diagonal made positive.
OrthogonalMatrix haar_orthogonal(Rng &rng, std::size_t N);

/// max_ij |M_ij| * sqrt(N / log N); an O(1) statistic for Haar matrices (report only).
double entry_magnitude_statistic(const OrthogonalMatrix &matrix);

}  // namespace forr
