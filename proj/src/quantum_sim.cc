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

#include "forrelation/quantum_sim.h"

#include <cmath>
#include <string>
#include <vector>

#include "forrelation/errors.h"

namespace forr {

namespace {

double norm_deviation(const std::vector<double> &state) {
    double sq = 0.0;
    for (double a : state) {
        sq += a * a;
    }
    return std::abs(std::sqrt(sq) - 1.0);
}

}  // namespace

int query_count(int k) { return (k + 1) / 2; }

QuantumRunReport accept_probability(const BlockVector &z, const ForrelationParams &params,
                                    const OrthogonalMatrix &matrix) {
    if (z.blocks() != params.k || z.block_len() != params.N || matrix.size() != params.N) {
        throw InvalidShape("input shape does not match parameters");
    }
    if (!z.is_boolean()) {
        throw InvalidInput("quantum oracle requires ±1 entries");
    }
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(params.N));
    auto last = z.block(params.k - 1);
    std::vector<double> state(params.N);
    for (std::size_t i = 0; i < params.N; ++i) {
        state[i] = last[i] * inv_sqrt_n;
    }
    QuantumRunReport report;
    report.max_norm_deviation = norm_deviation(state);
    for (int b = params.k - 2; b >= 1; --b) {
        matrix.apply_inplace(state);
        report.max_norm_deviation = std::max(report.max_norm_deviation, norm_deviation(state));
        auto phase = z.block(b);
        for (std::size_t i = 0; i < params.N; ++i) {
            state[i] *= phase[i];
        }
        report.max_norm_deviation = std::max(report.max_norm_deviation, norm_deviation(state));
    }
    matrix.apply_inplace(state);
    report.max_norm_deviation = std::max(report.max_norm_deviation, norm_deviation(state));
    auto first = z.block(0);
    double amp = 0.0;
    for (std::size_t i = 0; i < params.N; ++i) {
        amp += first[i] * inv_sqrt_n * state[i];
    }
    report.amplitude = amp;
    report.accept_probability = std::clamp(0.5 * (1.0 + amp), 0.0, 1.0);
    report.queries = query_count(params.k);
    report.gate_estimate = static_cast<std::int64_t>(params.k + 1) * params.n;
    return report;
}

QuantumRunReport accept_probability(const BlockVector &z, const ForrelationParams &params) {
    return accept_probability(z, params, OrthogonalMatrix::hadamard(params.N));
}

double majority_amplify(double p, int reps) {
    if (reps < 1 || reps % 2 == 0) {
        throw InvalidParameter("majority vote needs an odd positive repetition count, got " + std::to_string(reps));
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidParameter("probability must lie in [0, 1]");
    }
    if (p == 0.0) {
        return 0.0;
    }
    if (p == 1.0) {
        return 1.0;
    }
    const int need = (reps + 1) / 2;
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    double total = 0.0;
    for (int j = need; j <= reps; ++j) {
        const double log_choose = std::lgamma(reps + 1.0) - std::lgamma(j + 1.0) - std::lgamma(reps - j + 1.0);
        total += std::exp(log_choose + j * lp + (reps - j) * lq);
    }
    return std::min(total, 1.0);
}

}  // namespace forr
