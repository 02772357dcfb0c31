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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <type_traits>
#include <vector>

namespace forr {

using Rng = std::mt19937_64;

/// Stream identifiers; each Monte Carlo purpose draws from its own family of streams.
enum class StreamPurpose : std::uint64_t {
    P0Bits = 1,
    Gaussian = 2,
    Rounding = 3,
    Algorithm = 4,
    Trees = 5,
    Matrix = 6,
    Misc = 7,
};

/// Independent generator for (seed, purpose, index), seeded through std::seed_seq.
Rng make_stream(std::uint64_t seed, StreamPurpose purpose, std::uint64_t index);

/// Running sums for a sample mean with a normal-approximation standard error.
struct MeanAccumulator {
    std::size_t count = 0;
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(double x) {
        ++count;
        sum += x;
        sum_sq += x * x;
    }
    void merge(const MeanAccumulator &o) {
        count += o.count;
        sum += o.sum;
        sum_sq += o.sum_sq;
    }
    double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
    /// Unbiased sample variance.
    double variance() const;
    double standard_error() const;
};

/// Standard error of a Bernoulli mean sqrt(p(1-p)/n).
double binomial_standard_error(double p, std::size_t n);

/// Number of samples per batch. Batches, not workers, own random streams, so
/// aggregate statistics do not depend on the worker count.
inline constexpr std::size_t kBatchSize = 1000;

/// Runs fn(batch_index, first_sample, sample_count) for every batch on a pool of
/// `workers` threads and returns the per-batch results in batch order.
template <typename Fn>
auto run_batched(std::size_t total, int workers, Fn fn)
    -> std::vector<std::invoke_result_t<Fn, std::size_t, std::size_t, std::size_t>> {
    using R = std::invoke_result_t<Fn, std::size_t, std::size_t, std::size_t>;
    const std::size_t batches = (total + kBatchSize - 1) / kBatchSize;
    std::vector<R> results(batches);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto work = [&] {
        while (true) {
            const std::size_t b = next.fetch_add(1);
            if (b >= batches) {
                return;
            }
            const std::size_t first = b * kBatchSize;
            const std::size_t count = std::min(kBatchSize, total - first);
            try {
                results[b] = fn(b, first, count);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mu);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    const std::size_t pool = std::min<std::size_t>(std::max(1, workers), std::max<std::size_t>(batches, 1));
    if (pool <= 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(pool);
        for (std::size_t t = 0; t < pool; ++t) {
            threads.emplace_back(work);
        }
        for (auto &t : threads) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return results;
}

}  // namespace forr
