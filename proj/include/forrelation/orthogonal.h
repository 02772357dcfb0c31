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
#include <vector>

namespace forr {

/// The N x N orthogonal matrix sandwiched between the diagonal blocks of forr_k.
///
/// Either the Sylvester Hadamard matrix (applied with the FWHT, never stored) or
/// an explicitly stored dense orthogonal matrix (row-major), e.g. a Haar sample
/// for the Rorrelation variant.
class OrthogonalMatrix {
   public:
    enum class Kind { Hadamard, Dense };

    static OrthogonalMatrix hadamard(std::size_t N);

    /// Validates ||M^T M - I||_max <= tolerance, else throws InvalidMatrix.
    static OrthogonalMatrix dense(std::size_t N, std::vector<double> row_major, double tolerance = 1e-8);

    Kind kind() const { return kind_; }
    std::size_t size() const { return N_; }
    double entry(std::size_t i, std::size_t j) const;

    /// v <- M v
    void apply_inplace(std::span<double> v) const;
    /// v <- M^T v
    void apply_transpose_inplace(std::span<double> v) const;

    /// Dense row-major copy (materializes H for the Hadamard kind).
    std::vector<double> to_dense() const;

   private:
    OrthogonalMatrix(Kind kind, std::size_t N, std::vector<double> data)
        : kind_(kind), N_(N), data_(std::move(data)) {}

    Kind kind_;
    std::size_t N_;
    std::vector<double> data_;
};

}  // namespace forr
