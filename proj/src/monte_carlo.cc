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

#include "forrelation/monte_carlo.h"

namespace forr {

Rng make_stream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t index) {
    const auto p = static_cast<std::uint64_t>(purpose);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(p),    static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    return Rng(seq);
}

double MeanAccumulator::variance() const {
    if (count < 2) {
        return 0.0;
    }
    const double n = static_cast<double>(count);
    const double m = sum / n;
    return std::max(0.0, (sum_sq - n * m * m) / (n - 1.0));
}

double MeanAccumulator::standard_error() const {
    return count ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
}

double binomial_standard_error(double p, std::size_t n) {
    if (n == 0) {
        return 0.0;
    }
    const double q = std::clamp(p, 0.0, 1.0);
    return std::sqrt(q * (1.0 - q) / static_cast<double>(n));
}

}  // namespace forr
