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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "forrelation/orthogonal.h"

namespace forr {

/// One (delta, k)-Forrelation instance: N = 2^n, k blocks, promise gap delta.
struct ForrelationParams {
    int n = 1;
    std::size_t N = 2;
    int k = 2;
    double delta = 1.0 / 1024.0;

    /// Default gap 2^{-5k}.
    static double default_delta(int k);

    /// Throws InvalidParameter for k < 2, delta outside (0,1) or n out of range.
    static ForrelationParams make(int n, int k, std::optional<double> delta = std::nullopt);
};

/// A vector of length k*N viewed as k consecutive blocks of length N.
class BlockVector {
   public:
    BlockVector() = default;
    BlockVector(int blocks, std::size_t block_len, double fill = 0.0);
    BlockVector(int blocks, std::size_t block_len, std::vector<double> data);

    int blocks() const { return blocks_; }
    std::size_t block_len() const { return block_len_; }
    std::size_t size() const { return data_.size(); }

    /// Zero-based block index.
    std::span<double> block(int b);
    std::span<const double> block(int b) const;

    std::span<double> flat() { return data_; }
    std::span<const double> flat() const { return data_; }
    double operator[](std::size_t i) const { return data_[i]; }
    double &operator[](std::size_t i) { return data_[i]; }

    bool is_boolean() const;
    bool within(double lo, double hi) const;

    bool operator==(const BlockVector &) const = default;

   private:
    int blocks_ = 0;
    std::size_t block_len_ = 0;
    std::vector<double> data_;
};

enum class PartialLabel { One, Zero, OutsidePromise };

std::string_view to_string(PartialLabel label);

/// x ⋄ y = (x_1, y_1⊙x_2, ..., y_{k-2}⊙x_{k-1}, y_{k-1}) for (k-1)-block inputs.
BlockVector block_shifted_product(const BlockVector &x, const BlockVector &y);

/// forr_k(z) = (1/N) z_1^T (M Z_2 M ... Z_{k-1} M) z_k.
///
/// Evaluated right to left as k-1 transform passes interleaved with diagonal
/// multiplies, so the Hadamard path costs O(k N log N).
double forr_value(const BlockVector &z, const OrthogonalMatrix &matrix);
double forr_value(const BlockVector &z);

/// Thresholds a forr value against the promise: One iff value >= delta,
/// Zero iff |value| <= delta/2, OutsidePromise otherwise.
PartialLabel classify(double value, double delta);

/// Requires ±1 entries (InvalidInput otherwise) and k*N shape matching params.
PartialLabel forr_label(const BlockVector &z, const ForrelationParams &params);
PartialLabel forr_label(const BlockVector &z, const ForrelationParams &params, const OrthogonalMatrix &matrix);

/// Mean of forr_k under p_1 for an arbitrary orthogonal M.
///
/// Equals (1/N) 1^T A^{k-1} 1 with A_ij = M_ij * c(M_ij), c(r) the truncated
/// correlation of a standard Gaussian pair with correlation r. For the
/// Hadamard matrix this is (sqrt(N) arctan(1/sqrt(4N-1)) / (2 pi))^{k-1}.
double p1_mean_exact(const OrthogonalMatrix &matrix, int k);
double p1_mean_hadamard_closed_form(std::size_t N, int k);

}  // namespace forr
