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

#include <cstdint>

#include "forrelation/forrelation.h"
#include "forrelation/orthogonal.h"

namespace forr {

struct QuantumRunReport {
    double accept_probability = 0.0;
    /// ceil(k/2): the phase queries diag(z_2..z_{k-1}) plus state preparation and
    /// measurement on z_1, z_k, grouped two blocks per query.
    int queries = 0;
    /// (k + 1) * n single-qubit Hadamards: k - 1 transforms plus preparation and
    /// un-preparation layers. A count only; no circuit is synthesized.
    std::int64_t gate_estimate = 0;
    double amplitude = 0.0;
    /// max | ||state||_2 - 1 | over every intermediate state.
    double max_norm_deviation = 0.0;
};

/// Acceptance probability (1 + forr_k(z)) / 2 of the ceil(k/2)-query algorithm.
///
/// Runs the amplitude pipeline: |ψ> = z_k / sqrt(N), then alternately M and
/// diag(z_b) for b = k-1..2, a final M, and the overlap with z_1 / sqrt(N).
/// Throws InvalidInput for non-±1 entries.
QuantumRunReport accept_probability(const BlockVector &z, const ForrelationParams &params);
QuantumRunReport accept_probability(const BlockVector &z, const ForrelationParams &params,
                                    const OrthogonalMatrix &matrix);

int query_count(int k);

/// Pr[at least (reps + 1) / 2 of `reps` independent runs accept], each run
/// accepting with probability p. reps must be odd.
double majority_amplify(double p, int reps);

}  // namespace forr
