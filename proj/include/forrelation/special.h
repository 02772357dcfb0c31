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

#include <span>
#include <vector>

namespace forr {

/// Standard normal density gamma(s).
double gaussian_density(double s);

/// Standard normal CDF, erfc-backed.
double gaussian_cdf(double a);

/// 1/2 + gamma(a) * sum_{j<terms} a^{2j+1} / (2j+1)!!
double gaussian_cdf_series(double a, int terms);

/// Truncation map phi(s) = Phi(s) - 1/2, an odd increasing map onto (-1/2, 1/2).
double truncate_phi(double s);
std::vector<double> truncate_phi(std::span<const double> v);

/// Probabilists' Hermite polynomial h_n(s) by the three-term recurrence.
double hermite(int n, double s);

/// n-th derivative of the Gaussian density: (-1)^n h_n(s) gamma(s).
double gamma_derivative(int n, double s);

/// Psi_sigma(s) = (1/sqrt(2 pi)) int_0^1 exp(-s^2 y^2 / 2) / (1 + sigma^2 y^2) dy.
///
/// Throws InvalidParameter unless sigma lies in (0, 1].
double psi_sigma(double s, double sigma);

/// The auxiliary series phi_j(s) = (-1)^j gamma(s) sum_k (2j-1)!!/(2k+2j+1)!! s^{2k+1}; phi_0 = phi.
double phi_j(int j, double s);

/// phi_j(s) / s, well defined at s = 0.
double phi_j_over_s(int j, double s);

/// Truncated series (1/s) sum_{j <= j_max} sigma^{2j} phi_j(s). The s = 0
/// point uses the limit arctan(sigma) / (sqrt(2 pi) sigma).
double psi_series(double s, double sigma, int j_max);

enum class OwenForm { Double, Single };

/// Owen's T function T(h, sigma).
///
/// Double: (1/2pi)(arctan sigma - int_0^h int_0^{sigma x} e^{-(x^2+y^2)/2} dy dx),
/// both integrals done numerically. Single: (1/2pi) int_0^sigma e^{-h^2(1+x^2)/2}/(1+x^2) dx.
double owen_t(double h, double sigma, OwenForm form = OwenForm::Single);

/// E[phi(B) phi(G)] for a standard Gaussian pair with correlation rho:
/// (1/2pi) arctan(rho / sqrt(4 - rho^2)). Defined for |rho| <= 1.
double truncated_correlation_closed_form(double rho);

}  // namespace forr
