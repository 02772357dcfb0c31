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

#include "forrelation/forrelation.h"

#include <cmath>
#include <numbers>
#include <string>

#include "forrelation/errors.h"
#include "forrelation/special.h"
#include "forrelation/wht.h"

namespace forr {

double ForrelationParams::default_delta(int k) { return std::ldexp(1.0, -5 * k); }

ForrelationParams ForrelationParams::make(int n, int k, std::optional<double> delta) {
    if (n < 0 || n > 30) {
        throw InvalidParameter("n must lie in [0, 30], got " + std::to_string(n));
    }
    if (k < 2) {
        throw InvalidParameter("k must be >= 2, got " + std::to_string(k));
    }
    const double d = delta.value_or(default_delta(k));
    if (!(d > 0.0 && d < 1.0)) {
        throw InvalidParameter("delta must lie in (0, 1)");
    }
    return ForrelationParams{n, std::size_t{1} << n, k, d};
}

BlockVector::BlockVector(int blocks, std::size_t block_len, double fill)
    : blocks_(blocks), block_len_(block_len) {
    if (blocks < 0) {
        throw InvalidShape("negative block count");
    }
    data_.assign(static_cast<std::size_t>(blocks) * block_len, fill);
}

BlockVector::BlockVector(int blocks, std::size_t block_len, std::vector<double> data)
    : blocks_(blocks), block_len_(block_len), data_(std::move(data)) {
    if (blocks < 0 || data_.size() != static_cast<std::size_t>(blocks) * block_len) {
        throw InvalidShape("block data has " + std::to_string(data_.size()) + " entries, expected " +
                           std::to_string(blocks) + "x" + std::to_string(block_len));
    }
}

std::span<double> BlockVector::block(int b) {
    if (b < 0 || b >= blocks_) {
        throw InvalidIndex("block index " + std::to_string(b) + " out of range");
    }
    return std::span<double>(data_).subspan(static_cast<std::size_t>(b) * block_len_, block_len_);
}

std::span<const double> BlockVector::block(int b) const {
    if (b < 0 || b >= blocks_) {
        throw InvalidIndex("block index " + std::to_string(b) + " out of range");
    }
    return std::span<const double>(data_).subspan(static_cast<std::size_t>(b) * block_len_, block_len_);
}

bool BlockVector::is_boolean() const {
    for (double x : data_) {
        if (x != 1.0 && x != -1.0) {
            return false;
        }
    }
    return true;
}

bool BlockVector::within(double lo, double hi) const {
    for (double x : data_) {
        if (!(x >= lo && x <= hi)) {
            return false;
        }
    }
    return true;
}

std::string_view to_string(PartialLabel label) {
    switch (label) {
        case PartialLabel::One:
            return "One";
        case PartialLabel::Zero:
            return "Zero";
        case PartialLabel::OutsidePromise:
            return "OutsidePromise";
    }
    return "?";
}

BlockVector block_shifted_product(const BlockVector &x, const BlockVector &y) {
    if (x.blocks() != y.blocks() || x.block_len() != y.block_len()) {
        throw InvalidShape("block_shifted_product: operands differ in shape");
    }
    if (x.blocks() < 1) {
        throw InvalidShape("block_shifted_product: need at least one block");
    }
    const int km1 = x.blocks();
    BlockVector out(km1 + 1, x.block_len(), 1.0);
    for (int b = 0; b < km1; ++b) {
        auto xb = x.block(b);
        auto dst = out.block(b);
        for (std::size_t i = 0; i < xb.size(); ++i) {
            dst[i] *= xb[i];
        }
        auto yb = y.block(b);
        auto dst_next = out.block(b + 1);
        for (std::size_t i = 0; i < yb.size(); ++i) {
            dst_next[i] *= yb[i];
        }
    }
    return out;
}

double forr_value(const BlockVector &z, const OrthogonalMatrix &matrix) {
    const int k = z.blocks();
    if (k < 2) {
        throw InvalidShape("forr_value needs at least two blocks");
    }
    if (z.block_len() != matrix.size()) {
        throw InvalidShape("block length " + std::to_string(z.block_len()) + " does not match matrix size " +
                           std::to_string(matrix.size()));
    }
    auto last = z.block(k - 1);
    std::vector<double> v(last.begin(), last.end());
    for (int b = k - 2; b >= 1; --b) {
        matrix.apply_inplace(v);
        auto zb = z.block(b);
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] *= zb[i];
        }
    }
    matrix.apply_inplace(v);
    auto first = z.block(0);
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        acc += first[i] * v[i];
    }
    return acc / static_cast<double>(z.block_len());
}

double forr_value(const BlockVector &z) {
    HadamardDim::from_length(z.block_len());
    return forr_value(z, OrthogonalMatrix::hadamard(z.block_len()));
}

PartialLabel classify(double value, double delta) {
    if (value >= delta) {
        return PartialLabel::One;
    }
    if (std::abs(value) <= delta / 2.0) {
        return PartialLabel::Zero;
    }
    return PartialLabel::OutsidePromise;
}

PartialLabel forr_label(const BlockVector &z, const ForrelationParams &params, const OrthogonalMatrix &matrix) {
    if (z.blocks() != params.k || z.block_len() != params.N) {
        throw InvalidShape("input shape does not match (k, N) = (" + std::to_string(params.k) + ", " +
                           std::to_string(params.N) + ")");
    }
    if (!z.is_boolean()) {
        throw InvalidInput("forr_label requires ±1 entries");
    }
    return classify(forr_value(z, matrix), params.delta);
}

PartialLabel forr_label(const BlockVector &z, const ForrelationParams &params) {
    return forr_label(z, params, OrthogonalMatrix::hadamard(params.N));
}

double p1_mean_exact(const OrthogonalMatrix &matrix, int k) {
    if (k < 2) {
        throw InvalidParameter("k must be >= 2");
    }
    const std::size_t N = matrix.size();
    std::vector<double> a(N * N);
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            const double m = matrix.entry(i, j);
            a[i * N + j] = m * truncated_correlation_closed_form(m);
        }
    }
    // w <- A^{k-1} 1, then (1/N) 1^T w.
    std::vector<double> w(N, 1.0), next(N);
    for (int step = 0; step < k - 1; ++step) {
        for (std::size_t i = 0; i < N; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < N; ++j) {
                acc += a[i * N + j] * w[j];
            }
            next[i] = acc;
        }
        w.swap(next);
    }
    double total = 0.0;
    for (double x : w) {
        total += x;
    }
    return total / static_cast<double>(N);
}

double p1_mean_hadamard_closed_form(std::size_t N, int k) {
    const double n = static_cast<double>(N);
    const double base = std::sqrt(n) * std::atan(1.0 / std::sqrt(4.0 * n - 1.0)) / (2.0 * std::numbers::pi);
    return std::pow(base, k - 1);
}

}  // namespace forr
