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
#include <span>
#include <vector>

namespace forr {

/// Exponent/size pair for a Sylvester Hadamard matrix H_N, N = 2^n.
struct HadamardDim {
    int n = 0;
    std::size_t N = 1;

    /// Throws InvalidDimension unless `length` is a power of two.
    static HadamardDim from_length(std::size_t length);
    static HadamardDim from_exponent(int n);
};

bool is_power_of_two(std::size_t x);

/// In-place butterfly without any scaling: v <- (sqrt(N) H_N) v.
void fwht_unnormalized_inplace(std::span<double> v);

/// In-place orthonormal transform v <- H_N v (Sylvester ordering).
///
/// A single 1/sqrt(N) pass is applied after the butterflies. The transform is
/// its own inverse; round-off stays below 1e-12 for N up to 2^16.
void fwht_normalized_inplace(std::span<double> v);

std::vector<double> fwht_normalized(std::span<const double> v);

/// Entry (i, j) of the orthonormal Hadamard matrix: (-1)^{popcount(i & j)} / sqrt(2^n).
double hadamard_entry(std::uint64_t i, std::uint64_t j, int n);

}  // namespace forr
