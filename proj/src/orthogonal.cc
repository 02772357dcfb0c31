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

#include "forrelation/orthogonal.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "forrelation/errors.h"
#include "forrelation/wht.h"

namespace forr {

OrthogonalMatrix OrthogonalMatrix::hadamard(std::size_t N) {
    HadamardDim::from_length(N);
    return OrthogonalMatrix(Kind::Hadamard, N, {});
}

OrthogonalMatrix OrthogonalMatrix::dense(std::size_t N, std::vector<double> row_major, double tolerance) {
    if (N == 0) {
        throw InvalidDimension("dense orthogonal matrix must have N >= 1");
    }
    if (row_major.size() != N * N) {
        throw InvalidShape("dense matrix data has " + std::to_string(row_major.size()) + " entries, expected " +
                           std::to_string(N * N));
    }
    double worst = 0.0;
    for (std::size_t a = 0; a < N; ++a) {
        for (std::size_t b = a; b < N; ++b) {
            double dot = 0.0;
            for (std::size_t r = 0; r < N; ++r) {
                dot += row_major[r * N + a] * row_major[r * N + b];
            }
            worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
        }
    }
    if (!(worst <= tolerance)) {
        throw InvalidMatrix("matrix is not orthogonal: max |M^T M - I| = " + std::to_string(worst));
    }
    return OrthogonalMatrix(Kind::Dense, N, std::move(row_major));
}

double OrthogonalMatrix::entry(std::size_t i, std::size_t j) const {
    if (i >= N_ || j >= N_) {
        throw InvalidIndex("matrix index out of range");
    }
    if (kind_ == Kind::Hadamard) {
        return hadamard_entry(i, j, std::countr_zero(N_));
    }
    return data_[i * N_ + j];
}

void OrthogonalMatrix::apply_inplace(std::span<double> v) const {
    if (v.size() != N_) {
        throw InvalidShape("vector length " + std::to_string(v.size()) + " does not match N=" + std::to_string(N_));
    }
    if (kind_ == Kind::Hadamard) {
        fwht_normalized_inplace(v);
        return;
    }
    std::vector<double> out(N_, 0.0);
    for (std::size_t i = 0; i < N_; ++i) {
        const double *row = data_.data() + i * N_;
        double acc = 0.0;
        for (std::size_t j = 0; j < N_; ++j) {
            acc += row[j] * v[j];
        }
        out[i] = acc;
    }
    std::copy(out.begin(), out.end(), v.begin());
}

void OrthogonalMatrix::apply_transpose_inplace(std::span<double> v) const {
    if (v.size() != N_) {
        throw InvalidShape("vector length " + std::to_string(v.size()) + " does not match N=" + std::to_string(N_));
    }
    if (kind_ == Kind::Hadamard) {
        fwht_normalized_inplace(v);
        return;
    }
    std::vector<double> out(N_, 0.0);
    for (std::size_t i = 0; i < N_; ++i) {
        const double *row = data_.data() + i * N_;
        const double vi = v[i];
        for (std::size_t j = 0; j < N_; ++j) {
            out[j] += row[j] * vi;
        }
    }
    std::copy(out.begin(), out.end(), v.begin());
}

std::vector<double> OrthogonalMatrix::to_dense() const {
    if (kind_ == Kind::Dense) {
        return data_;
    }
    std::vector<double> out(N_ * N_);
    for (std::size_t i = 0; i < N_; ++i) {
        for (std::size_t j = 0; j < N_; ++j) {
            out[i * N_ + j] = entry(i, j);
        }
    }
    return out;
}

}  // namespace forr
