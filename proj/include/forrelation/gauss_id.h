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
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "forrelation/polynomial.h"

namespace forr {

/// Symmetric PSD covariance matrix (possibly singular), row-major.
class Covariance {
   public:
    /// Throws InvalidMatrix unless exactly symmetric with eigenvalues >= -1e-10.
    Covariance(std::size_t dim, std::vector<double> row_major);

    static Covariance zero(std::size_t dim);

    std::size_t dim() const { return dim_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
    std::span<const double> data() const { return data_; }

    /// t * this + (1 - t) * other, the covariance of sqrt(t) G + sqrt(1-t) B for independent G, B.
    Covariance interpolate(const Covariance &other, double t) const;

   private:
    std::size_t dim_;
    std::vector<double> data_;
};

/// Exact centered Gaussian moment E[prod_i G_i^{e_i}] by summing over perfect matchings.
///
/// Odd total degree gives 0. Total degree above 12 throws ResourceLimit.
double wick_expectation(std::span<const int> exponents, const Covariance &cov);

/// E[p(G)] by linearity over the terms of p.
double wick_expectation(const Polynomial &p, const Covariance &cov);

/// (E[p(G_t)], d/dt E[p(G_t)]) where Cov(G_t) = cov + t * slope, differentiated
/// exactly through the matching products.
std::pair<double, double> wick_expectation_with_slope(const Polynomial &p, const Covariance &cov,
                                                      std::span<const double> slope);

/// One side-by-side comparison inside an identity check.
struct IdentityPoint {
    std::string label;
    double lhs = 0.0;
    double rhs = 0.0;
    double error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct IdentityReport {
    std::vector<IdentityPoint> points;

    bool pass() const;
    double max_error() const;
    void add(std::string label, double lhs, double rhs, double tolerance);
};

/// Smooth test function with an explicit gradient, for the quadrature-based checks.
struct SmoothFunction {
    std::size_t vars = 0;
    std::function<double(std::span<const double>)> value;
    std::vector<std::function<double(std::span<const double>)>> gradient;

    static SmoothFunction constant(std::size_t vars, double c);
    static SmoothFunction coordinate(std::size_t vars, std::size_t i);
    /// x -> phi(x_i)
    static SmoothFunction truncated_coordinate(std::size_t vars, std::size_t i);
    static SmoothFunction from_polynomial(const Polynomial &p);
    /// x -> prod_i phi(x_i)
    static SmoothFunction truncated_product(std::size_t vars);
};

/// zeta(t) = E[f(sqrt(t) G + sqrt(1-t) B)]; compares the exact derivative
/// against (1/2) sum_ij (E[G_i G_j] - E[B_i B_j]) E[d_ij f(G(t))] at each t,
/// and the integrated form E[f(G)] - E[f(B)] against the t-integral of the right side.
/// Tolerances are relative to max(1, |lhs|, |rhs|).
IdentityReport check_gaussian_interpolation(const Polynomial &f, const Covariance &cov_g, const Covariance &cov_b,
                                            std::span<const double> t_grid, double tolerance = 1e-10);

/// E[B f(G)] = sum_i E[B G_i] E[d_i f(G)]; cov is over (B, G_1, ..., G_m) with B first.
IdentityReport check_gaussian_ibp(const Polynomial &f, const Covariance &cov, double tolerance = 1e-10);

/// E[phi(B) h(G)] = sum_i E[B G_i] E[Psi_sigma(B) d_i h(G)] with sigma^2 = E[B^2] in (0, 1].
///
/// cov is over (B, G_1, ..., G_m), m <= 2. `psi_scale` multiplies Psi_sigma and
/// exists only to inject a deliberate error (negative control).
IdentityReport check_phi_ibp(const SmoothFunction &h, const Covariance &cov, double psi_scale = 1.0,
                             double tolerance = 1e-6);

/// Derivative identity for zeta(t) = E[f(phi(sqrt(t) U), phi(sqrt(t) V))], (U, V) ~ N(0, [[I, M], [M^T, I]]).
///
/// f is multilinear in (x_1..x_n, y_1..y_n), M is n x n orthogonal (row-major), n <= 2.
/// zeta'(t) comes from a five-point central difference of quadrature values.
IdentityReport check_phi_interpolation(const Polynomial &f, std::span<const double> matrix, std::size_t n,
                                       std::span<const double> t_grid, double tolerance = 1e-5);

/// E[phi(B) phi(G)] for correlation rho in (-1, 1); InvalidParameter otherwise.
double truncated_correlation(double rho);

struct CorrelationCheck {
    double closed_form = 0.0;
    double quadrature = 0.0;
    double bound_lhs = 0.0;  // rho * E[phi(B) phi(G)]
    double bound_rhs = 0.0;  // rho^2 / 32
    bool agree = false;
    bool bound_holds = false;
};

/// Closed form vs two-dimensional Gauss-Hermite quadrature plus the rho^2/32 lower bound.
CorrelationCheck check_truncated_correlation(double rho, double tolerance = 1e-8);

}  // namespace forr
