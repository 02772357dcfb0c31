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

#include "forrelation/classical.h"

namespace forr {

/// Per-coordinate means of a biased product measure, |μ_i| <= 1/2.
class BiasVector {
   public:
    BiasVector() = default;
    explicit BiasVector(std::vector<double> mu);
    static BiasVector uniform(std::size_t m) { return BiasVector(std::vector<double>(m, 0.0)); }

    std::size_t size() const { return mu_.size(); }
    double mu(std::size_t i) const { return mu_[i]; }
    double sigma(std::size_t i) const { return sigma_[i]; }
    const std::vector<double> &mus() const { return mu_; }
    bool is_uniform() const;

    /// φ^μ_i(x) = (x - μ_i) / σ_i.
    double character(std::size_t i, double x) const { return (x - mu_[i]) / sigma_[i]; }

    bool operator==(const BiasVector &o) const { return mu_ == o.mu_; }

   private:
    std::vector<double> mu_;
    std::vector<double> sigma_;
};

/// Coefficients f̂(S) indexed by subset bitmask, in the basis {φ^μ_S}. A bias
/// of all zeros is the uniform basis χ_S.
///
/// Value tables use the same bit convention as tree_accept_function: bit i of
/// the index set means x_i = -1.
struct FourierTable {
    std::size_t m = 0;
    std::vector<double> coeffs;
    BiasVector bias;
};

/// Throws ResourceLimit for m > 24 and InvalidShape if values.size() != 2^m
/// or bias.size() != m.
FourierTable transform(std::span<const double> values, const BiasVector &bias);
FourierTable transform(std::span<const double> values);
std::vector<double> inverse_transform(const FourierTable &table);

/// E_{p_μ}[f].
double expectation(std::span<const double> values, const BiasVector &bias);

double level_weight(const FourierTable &table, std::size_t level);
double squared_mass(const FourierTable &table);

/// Multilinear extension Σ f̂(S) Π_{i∈S} φ^μ_i(x_i) at a point of R^m.
double harmonic_extend(const FourierTable &table, std::span<const double> x);

/// Σ_y w_x(y) f(y) with w_x(y) = Π (1 + x_i y_i) / 2, for x in [-1, 1]^m. O(4^m).
double interpolation_weight_extend(std::span<const double> values, std::span<const double> x);

/// ∂_A: coefficient of S∖A moves to S for S ⊇ A; others vanish. Same basis.
FourierTable discrete_derivative(const FourierTable &table, std::uint64_t subset);

/// Restriction entries: +1, -1, or 0 for a free coordinate.
using Restriction = std::vector<int>;

/// Restricted table over free(ρ), free coordinates renumbered in order. The
/// result keeps the bias of the free coordinates.
FourierTable restrict(const FourierTable &table, const Restriction &rho);
std::vector<double> restrict_values(std::span<const double> values, const Restriction &rho);

struct IdentityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

/// E_ρ[f̂_ρ(S)] via the closed form Σ_{T⊇S} f̂(T) 2^{-|S|} σ_S² μ_{T∖S} against
/// 2^{-|S|} σ_S f̂^μ(S), where ρ_i = ⋆ w.p. σ_i²/2, ±1 w.p. (1 ± μ_i)²/4.
/// `uniform` must be a uniform-basis table with m <= 10.
IdentityCheck check_restriction_identity(const FourierTable &uniform, const BiasVector &mu, std::uint64_t S,
                                         double tol = 1e-10);

/// E_ρ[f̂_ρ(S)] by enumerating all 3^m restrictions; m <= 8.
double restriction_expectation_enumerated(const FourierTable &uniform, const BiasVector &mu, std::uint64_t S);

struct WeightTransferCheck {
    double biased_weight = 0.0;
    double max_restricted_weight = 0.0;
    double bound = 0.0;
    bool pass = false;
};

/// wt^μ_ℓ(f) <= 4^ℓ max_ρ wt_ℓ(f_ρ) for the tree's acceptance function.
/// Restrictions range over the tree's queried variables, 3^{|queried|} of them.
/// Requires num_vars <= 10.
WeightTransferCheck check_weight_transfer(const RandomizedTree &tree, const BiasVector &mu, std::size_t level);

/// wt_ℓ(f) / (sqrt(C(d, ℓ)) (ln m)^{(ℓ-1)/2}): calibrates the unspecified
/// constant in the level-ℓ weight bound for depth-d trees.
double level_weight_shape_ratio(const FourierTable &uniform, int depth, std::size_t level);

/// E_{p_μ}[φ^μ_S φ^μ_T] computed exactly by summing over all 2^m points.
double character_inner_product(const BiasVector &mu, std::uint64_t S, std::uint64_t T);

/// Σ_{ℓ=k}^{k(k-1)} N^{-ℓ(1-1/k)/2} (8k)^{14ℓ} wt^μ_ℓ(f) maximized over the
/// given μ samples. A lower estimate of the supremum over the cube.
double level_bound_sampled(std::span<const double> values, int k, std::size_t N,
                           const std::vector<BiasVector> &mu_samples);

}  // namespace forr
