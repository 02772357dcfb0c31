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

#include "forrelation/special.h"

#include <cmath>
#include <numbers>
#include <string>

#include "forrelation/errors.h"
#include "forrelation/quadrature.h"

namespace forr {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343818684758586311649346576659258296;
}  // namespace

double gaussian_density(double s) { return kInvSqrt2Pi * std::exp(-0.5 * s * s); }

double gaussian_cdf(double a) { return 0.5 * std::erfc(-a / std::numbers::sqrt2); }

double gaussian_cdf_series(double a, int terms) {
    if (terms < 1) {
        throw InvalidParameter("series needs at least one term");
    }
    double term = a;  // a^{2j+1} / (2j+1)!!
    double sum = 0.0;
    for (int j = 0; j < terms; ++j) {
        sum += term;
        term *= a * a / (2.0 * j + 3.0);
    }
    return 0.5 + gaussian_density(a) * sum;
}

double truncate_phi(double s) { return 0.5 * std::erf(s / std::numbers::sqrt2); }

std::vector<double> truncate_phi(std::span<const double> v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = truncate_phi(v[i]);
    }
    return out;
}

double hermite(int n, double s) {
    if (n < 0) {
        throw InvalidParameter("Hermite degree must be non-negative");
    }
    double prev = 1.0;
    if (n == 0) {
        return prev;
    }
    double cur = s;
    for (int m = 1; m < n; ++m) {
        const double next = s * cur - m * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double gamma_derivative(int n, double s) {
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return sign * hermite(n, s) * gaussian_density(s);
}

double psi_sigma(double s, double sigma) {
    if (!(sigma > 0.0 && sigma <= 1.0)) {
        throw InvalidParameter("psi_sigma requires sigma in (0, 1], got " + std::to_string(sigma));
    }
    const double s2 = s * s;
    const double sig2 = sigma * sigma;
    const double integral =
        integrate([&](double y) { return std::exp(-0.5 * s2 * y * y) / (1.0 + sig2 * y * y); }, 0.0, 1.0, 1e-14);
    return kInvSqrt2Pi * integral;
}

double phi_j_over_s(int j, double s) {
    if (j < 0) {
        throw InvalidParameter("phi_j index must be non-negative");
    }
    const double s2 = s * s;
    double term = 1.0 / (2.0 * j + 1.0);
    double sum = 0.0;
    for (int k = 0; k < 100000; ++k) {
        sum += term;
        const double ratio = s2 / (2.0 * k + 2.0 * j + 3.0);
        term *= ratio;
        if (ratio < 1.0 && term < 1e-18 * sum) {
            break;
        }
    }
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    return sign * gaussian_density(s) * sum;
}

double phi_j(int j, double s) { return s * phi_j_over_s(j, s); }

double psi_series(double s, double sigma, int j_max) {
    if (!(sigma > 0.0 && sigma <= 1.0)) {
        throw InvalidParameter("psi_series requires sigma in (0, 1]");
    }
    if (j_max < 0) {
        throw InvalidParameter("j_max must be non-negative");
    }
    if (s == 0.0) {
        return kInvSqrt2Pi * std::atan(sigma) / sigma;
    }
    const double sig2 = sigma * sigma;
    double weight = 1.0;
    double sum = 0.0;
    for (int j = 0; j <= j_max; ++j) {
        sum += weight * phi_j_over_s(j, s);
        weight *= sig2;
        if (weight < 1e-300) {
            break;
        }
    }
    return sum;
}

double owen_t(double h, double sigma, OwenForm form) {
    constexpr double inv2pi = 1.0 / (2.0 * std::numbers::pi);
    if (form == OwenForm::Single) {
        const double h2 = h * h;
        return inv2pi * integrate([&](double x) { return std::exp(-0.5 * h2 * (1.0 + x * x)) / (1.0 + x * x); }, 0.0,
                                  sigma, 1e-14);
    }
    const double area = integrate(
        [&](double x) {
            const double ex = std::exp(-0.5 * x * x);
            return integrate([&](double y) { return ex * std::exp(-0.5 * y * y); }, 0.0, sigma * x, 1e-14);
        },
        0.0, h, 1e-14);
    return inv2pi * (std::atan(sigma) - area);
}

double truncated_correlation_closed_form(double rho) {
    if (!(std::abs(rho) <= 1.0)) {
        throw InvalidParameter("correlation must lie in [-1, 1]");
    }
    return std::atan(rho / std::sqrt(4.0 - rho * rho)) / (2.0 * std::numbers::pi);
}

}  // namespace forr
