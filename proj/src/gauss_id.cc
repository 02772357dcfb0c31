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

#include "forrelation/gauss_id.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "forrelation/errors.h"
#include "forrelation/quadrature.h"
#include "forrelation/special.h"

namespace forr {

Covariance::Covariance(std::size_t dim, std::vector<double> row_major) : dim_(dim), data_(std::move(row_major)) {
    if (data_.size() != dim_ * dim_) {
        throw InvalidShape("covariance data does not match dimension");
    }
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = i + 1; j < dim_; ++j) {
            if (data_[i * dim_ + j] != data_[j * dim_ + i]) {
                throw InvalidMatrix("covariance is not symmetric");
            }
        }
    }
    if (dim_ > 0) {
        const auto D = static_cast<Eigen::Index>(dim_);
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(data_.data(), D, D);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Eigen::MatrixXd(m), Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().minCoeff() < -1e-10) {
            throw InvalidMatrix("covariance has a negative eigenvalue");
        }
    }
}

Covariance Covariance::zero(std::size_t dim) { return Covariance(dim, std::vector<double>(dim * dim, 0.0)); }

Covariance Covariance::interpolate(const Covariance &other, double t) const {
    if (other.dim_ != dim_) {
        throw InvalidShape("covariances differ in dimension");
    }
    std::vector<double> out(data_.size());
    for (std::size_t i = 0; i < data_.size(); ++i) {
        out[i] = t * data_[i] + (1.0 - t) * other.data_[i];
    }
    // Restore exact symmetry lost to rounding order.
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = i + 1; j < dim_; ++j) {
            out[j * dim_ + i] = out[i * dim_ + j];
        }
    }
    return Covariance(dim_, std::move(out));
}

namespace {

constexpr int kMaxWickDegree = 12;

// Value plus first-order sensitivity; products follow the Leibniz rule.
struct Dual {
    double v = 0.0;
    double d = 0.0;
    static Dual one() { return {1.0, 0.0}; }
    Dual operator*(const Dual &o) const { return {v * o.v, v * o.d + d * o.v}; }
    Dual &operator+=(const Dual &o) {
        v += o.v;
        d += o.d;
        return *this;
    }
};

std::vector<std::size_t> expand_indices(std::span<const int> exponents) {
    std::vector<std::size_t> idx;
    int total = 0;
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        if (exponents[i] < 0) {
            throw InvalidParameter("negative exponent");
        }
        total += exponents[i];
        if (total > kMaxWickDegree) {
            throw ResourceLimit("Wick pairing limited to total degree " + std::to_string(kMaxWickDegree));
        }
        for (int r = 0; r < exponents[i]; ++r) {
            idx.push_back(i);
        }
    }
    return idx;
}

// Sum over perfect matchings of `live`: pair the first entry with each other one.
template <typename T, typename Entry>
T sum_matchings(const std::vector<std::size_t> &live, const Entry &entry) {
    if (live.empty()) {
        return T::one();
    }
    T total{};
    std::vector<std::size_t> rest;
    rest.reserve(live.size() - 2);
    for (std::size_t j = 1; j < live.size(); ++j) {
        rest.clear();
        for (std::size_t r = 1; r < live.size(); ++r) {
            if (r != j) {
                rest.push_back(live[r]);
            }
        }
        total += entry(live[0], live[j]) * sum_matchings<T>(rest, entry);
    }
    return total;
}

template <typename T, typename Entry>
T wick_generic(std::span<const int> exponents, const Entry &entry) {
    const std::vector<std::size_t> idx = expand_indices(exponents);
    if (idx.size() % 2 == 1) {
        return T{};
    }
    return sum_matchings<T>(idx, entry);
}

double relative_scale(double a, double b) { return std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

double wick_expectation(std::span<const int> exponents, const Covariance &cov) {
    if (exponents.size() != cov.dim()) {
        throw InvalidShape("monomial and covariance dimensions differ");
    }
    return wick_generic<Dual>(exponents, [&](std::size_t i, std::size_t j) { return Dual{cov(i, j), 0.0}; }).v;
}

double wick_expectation(const Polynomial &p, const Covariance &cov) {
    double total = 0.0;
    for (const auto &[e, c] : p.terms()) {
        total += c * wick_expectation(e, cov);
    }
    return total;
}

std::pair<double, double> wick_expectation_with_slope(const Polynomial &p, const Covariance &cov,
                                                      std::span<const double> slope) {
    if (slope.size() != cov.dim() * cov.dim() || p.vars() != cov.dim()) {
        throw InvalidShape("slope/polynomial dimensions differ from covariance");
    }
    const std::size_t d = cov.dim();
    auto entry = [&](std::size_t i, std::size_t j) { return Dual{cov(i, j), slope[i * d + j]}; };
    double value = 0.0, deriv = 0.0;
    for (const auto &[e, c] : p.terms()) {
        const Dual term = wick_generic<Dual>(e, entry);
        value += c * term.v;
        deriv += c * term.d;
    }
    return {value, deriv};
}

bool IdentityReport::pass() const {
    return std::all_of(points.begin(), points.end(), [](const IdentityPoint &p) { return p.pass; });
}

double IdentityReport::max_error() const {
    double worst = 0.0;
    for (const auto &p : points) {
        worst = std::max(worst, p.error);
    }
    return worst;
}

void IdentityReport::add(std::string label, double lhs, double rhs, double tolerance) {
    const double err = std::abs(lhs - rhs);
    points.push_back({std::move(label), lhs, rhs, err, tolerance, err <= tolerance});
}

SmoothFunction SmoothFunction::constant(std::size_t vars, double c) {
    SmoothFunction f;
    f.vars = vars;
    f.value = [c](std::span<const double>) { return c; };
    for (std::size_t i = 0; i < vars; ++i) {
        f.gradient.push_back([](std::span<const double>) { return 0.0; });
    }
    return f;
}

SmoothFunction SmoothFunction::coordinate(std::size_t vars, std::size_t i) {
    if (i >= vars) {
        throw InvalidIndex("coordinate out of range");
    }
    SmoothFunction f;
    f.vars = vars;
    f.value = [i](std::span<const double> x) { return x[i]; };
    for (std::size_t j = 0; j < vars; ++j) {
        const double g = (j == i) ? 1.0 : 0.0;
        f.gradient.push_back([g](std::span<const double>) { return g; });
    }
    return f;
}

SmoothFunction SmoothFunction::truncated_coordinate(std::size_t vars, std::size_t i) {
    if (i >= vars) {
        throw InvalidIndex("coordinate out of range");
    }
    SmoothFunction f;
    f.vars = vars;
    f.value = [i](std::span<const double> x) { return truncate_phi(x[i]); };
    for (std::size_t j = 0; j < vars; ++j) {
        if (j == i) {
            f.gradient.push_back([i](std::span<const double> x) { return gaussian_density(x[i]); });
        } else {
            f.gradient.push_back([](std::span<const double>) { return 0.0; });
        }
    }
    return f;
}

SmoothFunction SmoothFunction::from_polynomial(const Polynomial &p) {
    SmoothFunction f;
    f.vars = p.vars();
    f.value = [p](std::span<const double> x) { return p.evaluate(x); };
    for (std::size_t i = 0; i < p.vars(); ++i) {
        Polynomial d = p.derivative(i);
        f.gradient.push_back([d](std::span<const double> x) { return d.evaluate(x); });
    }
    return f;
}

SmoothFunction SmoothFunction::truncated_product(std::size_t vars) {
    SmoothFunction f;
    f.vars = vars;
    f.value = [vars](std::span<const double> x) {
        double v = 1.0;
        for (std::size_t i = 0; i < vars; ++i) {
            v *= truncate_phi(x[i]);
        }
        return v;
    };
    for (std::size_t i = 0; i < vars; ++i) {
        f.gradient.push_back([vars, i](std::span<const double> x) {
            double v = gaussian_density(x[i]);
            for (std::size_t j = 0; j < vars; ++j) {
                if (j != i) {
                    v *= truncate_phi(x[j]);
                }
            }
            return v;
        });
    }
    return f;
}

IdentityReport check_gaussian_interpolation(const Polynomial &f, const Covariance &cov_g, const Covariance &cov_b,
                                            std::span<const double> t_grid, double tolerance) {
    const std::size_t m = f.vars();
    if (cov_g.dim() != m || cov_b.dim() != m) {
        throw InvalidShape("covariance dimension must match polynomial variables");
    }
    std::vector<double> slope(m * m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            slope[i * m + j] = cov_g(i, j) - cov_b(i, j);
        }
    }
    std::vector<std::vector<Polynomial>> hessian(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Polynomial di = f.derivative(i);
        for (std::size_t j = 0; j < m; ++j) {
            hessian[i].push_back(di.derivative(j));
        }
    }
    auto rhs_at = [&](double t) {
        const Covariance ct = cov_g.interpolate(cov_b, t);
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                if (slope[i * m + j] != 0.0) {
                    acc += slope[i * m + j] * wick_expectation(hessian[i][j], ct);
                }
            }
        }
        return 0.5 * acc;
    };

    IdentityReport report;
    for (double t : t_grid) {
        const Covariance ct = cov_g.interpolate(cov_b, t);
        const double lhs = wick_expectation_with_slope(f, ct, slope).second;
        const double rhs = rhs_at(t);
        report.add("zeta'(" + std::to_string(t) + ")", lhs, rhs, tolerance * relative_scale(lhs, rhs));
    }
    const double lhs = wick_expectation(f, cov_g) - wick_expectation(f, cov_b);
    const double rhs = integrate(rhs_at, 0.0, 1.0, 1e-14);
    report.add("integrated", lhs, rhs, tolerance * relative_scale(lhs, rhs));
    return report;
}

IdentityReport check_gaussian_ibp(const Polynomial &f, const Covariance &cov, double tolerance) {
    const std::size_t m = f.vars();
    if (cov.dim() != m + 1) {
        throw InvalidShape("covariance must cover (B, G_1..G_m)");
    }
    // Lift f to m+1 variables with B as variable 0.
    double lhs = 0.0;
    for (const auto &[e, c] : f.terms()) {
        std::vector<int> lifted(m + 1, 0);
        lifted[0] = 1;
        std::copy(e.begin(), e.end(), lifted.begin() + 1);
        lhs += c * wick_expectation(lifted, cov);
    }
    std::vector<double> g_block((m) * (m));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            g_block[i * m + j] = cov(i + 1, j + 1);
        }
    }
    const Covariance cov_gg(m, g_block);
    double rhs = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        rhs += cov(0, i + 1) * wick_expectation(f.derivative(i), cov_gg);
    }
    IdentityReport report;
    report.add("E[B f(G)]", lhs, rhs, tolerance * relative_scale(lhs, rhs));
    return report;
}

IdentityReport check_phi_ibp(const SmoothFunction &h, const Covariance &cov, double psi_scale, double tolerance) {
    const std::size_t m = h.vars;
    if (cov.dim() != m + 1 || h.gradient.size() != m) {
        throw InvalidShape("covariance must cover (B, G_1..G_m) and h must supply m partials");
    }
    if (m < 1 || m > 2) {
        throw ResourceLimit("phi integration-by-parts check supports m in {1, 2}");
    }
    const double var_b = cov(0, 0);
    const double sigma = std::sqrt(var_b);
    if (!(sigma > 0.0 && sigma <= 1.0)) {
        throw InvalidParameter("E[B^2] must lie in (0, 1]");
    }
    // Condition on B = sigma g0: G = (c / sigma) g0 + R, Cov(R) = C_GG - c c^T / sigma^2.
    std::vector<double> c(m), residual(m * m);
    for (std::size_t i = 0; i < m; ++i) {
        c[i] = cov(0, i + 1);
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            residual[i * m + j] = cov(i + 1, j + 1) - c[i] * c[j] / var_b;
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            residual[j * m + i] = residual[i * m + j];
        }
    }

    const HermiteRule &rule = HermiteRule::get(64);
    double lhs = 0.0;
    std::vector<double> rhs_terms(m, 0.0);
    std::vector<double> shifted(m);
    for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
        const double g0 = rule.nodes[a];
        const double b = sigma * g0;
        auto shifted_call = [&](const std::function<double(std::span<const double>)> &fn) {
            return gaussian_expectation(
                [&](std::span<const double> r) {
                    for (std::size_t i = 0; i < m; ++i) {
                        shifted[i] = c[i] / sigma * g0 + r[i];
                    }
                    return fn(shifted);
                },
                residual, m, 64);
        };
        lhs += rule.weights[a] * truncate_phi(b) * shifted_call(h.value);
        const double psi = psi_scale * psi_sigma(b, sigma);
        for (std::size_t i = 0; i < m; ++i) {
            if (c[i] != 0.0) {
                rhs_terms[i] += rule.weights[a] * psi * shifted_call(h.gradient[i]);
            }
        }
    }
    double rhs = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        rhs += c[i] * rhs_terms[i];
    }
    IdentityReport report;
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    report.add("E[phi(B) h(G)]", lhs, rhs, tolerance * scale + 1e-12);
    return report;
}

IdentityReport check_phi_interpolation(const Polynomial &f, std::span<const double> matrix, std::size_t n,
                                       std::span<const double> t_grid, double tolerance) {
    if (n < 1 || n > 2) {
        throw ResourceLimit("phi interpolation check supports n in {1, 2}");
    }
    if (f.vars() != 2 * n || matrix.size() != n * n) {
        throw InvalidShape("f must have 2n variables and M must be n x n");
    }
    if (!f.is_multilinear()) {
        throw InvalidParameter("phi interpolation requires a multilinear f");
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            double dot = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                dot += matrix[r * n + a] * matrix[r * n + b];
            }
            if (std::abs(dot - (a == b ? 1.0 : 0.0)) > 1e-10) {
                throw InvalidMatrix("M must be orthogonal");
            }
        }
    }
    std::vector<std::vector<Polynomial>> mixed(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Polynomial di = f.derivative(i);
        for (std::size_t j = 0; j < n; ++j) {
            mixed[i].push_back(di.derivative(n + j));
        }
    }
    std::vector<double> identity(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        identity[i * n + i] = 1.0;
    }
    // V = M^T U is a deterministic function of U, so integrate over U only.
    auto expect = [&](double t, const std::function<double(std::span<const double>, std::span<const double>)> &g) {
        const double rt = std::sqrt(t);
        std::vector<double> u(n), v(n);
        return gaussian_expectation(
            [&](std::span<const double> x) {
                for (std::size_t i = 0; i < n; ++i) {
                    u[i] = rt * x[i];
                }
                for (std::size_t j = 0; j < n; ++j) {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        acc += matrix[i * n + j] * x[i];
                    }
                    v[j] = rt * acc;
                }
                return g(u, v);
            },
            identity, n, 64);
    };
    std::vector<double> point(2 * n);
    auto zeta = [&](double t) {
        return expect(t, [&](std::span<const double> u, std::span<const double> v) {
            for (std::size_t i = 0; i < n; ++i) {
                point[i] = truncate_phi(u[i]);
                point[n + i] = truncate_phi(v[i]);
            }
            return f.evaluate(point);
        });
    };

    IdentityReport report;
    constexpr double h = 1e-3;
    for (double t : t_grid) {
        if (!(t > 2 * h && t < 1.0 - 2 * h)) {
            throw InvalidParameter("interpolation times must lie inside (0, 1)");
        }
        const double lhs = (-zeta(t + 2 * h) + 8.0 * zeta(t + h) - 8.0 * zeta(t - h) + zeta(t - 2 * h)) / (12.0 * h);
        double rhs = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double mij = matrix[i * n + j];
                if (mij == 0.0 || mixed[i][j].terms().empty()) {
                    continue;
                }
                rhs += mij * expect(t, [&](std::span<const double> u, std::span<const double> v) {
                           for (std::size_t r = 0; r < n; ++r) {
                               point[r] = truncate_phi(u[r]);
                               point[n + r] = truncate_phi(v[r]);
                           }
                           return mixed[i][j].evaluate(point) * gaussian_density(u[i]) * gaussian_density(v[j]);
                       });
            }
        }
        rhs /= (1.0 + t);
        const double scale = std::max(std::abs(lhs), std::abs(rhs));
        report.add("zeta'(" + std::to_string(t) + ")", lhs, rhs, tolerance * scale + 1e-10);
    }
    return report;
}

double truncated_correlation(double rho) {
    if (!(std::abs(rho) < 1.0)) {
        throw InvalidParameter("truncated_correlation requires rho in (-1, 1)");
    }
    return truncated_correlation_closed_form(rho);
}

CorrelationCheck check_truncated_correlation(double rho, double tolerance) {
    CorrelationCheck out;
    out.closed_form = truncated_correlation(rho);
    const std::vector<double> cov{1.0, rho, rho, 1.0};
    out.quadrature = gaussian_expectation(
        [](std::span<const double> x) { return truncate_phi(x[0]) * truncate_phi(x[1]); }, cov, 2, 64);
    out.bound_lhs = rho * out.closed_form;
    out.bound_rhs = rho * rho / 32.0;
    out.agree = std::abs(out.closed_form - out.quadrature) <= tolerance;
    out.bound_holds = out.bound_lhs >= out.bound_rhs;
    return out;
}

}  // namespace forr
