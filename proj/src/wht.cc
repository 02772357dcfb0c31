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

#include "forrelation/wht.h"

#include <bit>
#include <cmath>
#include <string>

#include "forrelation/errors.h"

namespace forr {

bool is_power_of_two(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

HadamardDim HadamardDim::from_length(std::size_t length) {
    if (!is_power_of_two(length)) {
        throw InvalidDimension("length " + std::to_string(length) + " is not a power of two");
    }
    return {static_cast<int>(std::countr_zero(length)), length};
}

HadamardDim HadamardDim::from_exponent(int n) {
    if (n < 0 || n > 40) {
        throw InvalidDimension("Hadamard exponent out of range: " + std::to_string(n));
    }
    return {n, std::size_t{1} << n};
}

void fwht_unnormalized_inplace(std::span<double> v) {
    const std::size_t len = v.size();
    if (!is_power_of_two(len)) {
        throw InvalidDimension("length " + std::to_string(len) + " is not a power of two");
    }
    for (std::size_t h = 1; h < len; h <<= 1) {
        for (std::size_t base = 0; base < len; base += h << 1) {
            double *lo = v.data() + base;
            double *hi = lo + h;
            for (std::size_t j = 0; j < h; ++j) {
                const double a = lo[j];
                const double b = hi[j];
                lo[j] = a + b;
                hi[j] = a - b;
            }
        }
    }
}

void fwht_normalized_inplace(std::span<double> v) {
    fwht_unnormalized_inplace(v);
    const double scale = 1.0 / std::sqrt(static_cast<double>(v.size()));
    for (double &x : v) {
        x *= scale;
    }
}

std::vector<double> fwht_normalized(std::span<const double> v) {
    std::vector<double> out(v.begin(), v.end());
    fwht_normalized_inplace(out);
    return out;
}

double hadamard_entry(std::uint64_t i, std::uint64_t j, int n) {
    const HadamardDim dim = HadamardDim::from_exponent(n);
    if (i >= dim.N || j >= dim.N) {
        throw InvalidIndex("Hadamard index (" + std::to_string(i) + ", " + std::to_string(j) +
                           ") out of range for N=" + std::to_string(dim.N));
    }
    const double mag = 1.0 / std::sqrt(static_cast<double>(dim.N));
    return (std::popcount(i & j) & 1) ? -mag : mag;
}

}  // namespace forr
