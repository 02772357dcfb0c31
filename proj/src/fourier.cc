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

#include "forrelation/fourier.h"

#include <bit>
#include <cmath>
#include <string>

#include "forrelation/errors.h"
#include "forrelation/wht.h"

namespace forr {

namespace {

constexpr std::size_t kMaxBits = 24;

void check_size(std::size_t length, std::size_t m) {
    if (m > kMaxBits) {
        throw ResourceLimit("Fourier tables are limited to 24 variables, got " + std::to_string(m));
    }
    if (length != (std::size_t{1} << m)) {
        throw InvalidShape("table length " + std::to_string(length) + " is not 2^" + std::to_string(m));
    }
}

std::size_t bits_for(std::size_t length) {
    if (!is_power_of_two(length)) {
        throw InvalidShape("table length " + std::to_string(length) + " is not a power of two");
    }
    return static_cast<std::size_t>(std::countr_zero(length));
}

std::size_t popcount(std::uint64_t x) { return static_cast<std::size_t>(std::popcount(x)); }

std::vector<std::size_t> free_positions(const Restriction &rho) {
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (rho[i] == 0) {
            free.push_back(i);
        } else if (rho[i] != 1 && rho[i] != -1) {
            throw InvalidInput("restriction entries must be +1, -1 or 0 (free)");
        }
    }
    return free;
}

/// Maps a mask over the full coordinates to a mask over the free coordinates.
std::uint64_t compress(std::uint64_t mask, const std::vector<std::size_t> &free) {
    std::uint64_t out = 0;
    for (std::size_t j = 0; j < free.size(); ++j) {
        if ((mask >> free[j]) & 1u) {
            out |= std::uint64_t{1} << j;
        }
    }
    return out;
}

double binomial(int n, int r) {
    double c = 1.0;
    for (int i = 1; i <= r; ++i) {
        c = c * (n - r + i) / i;
    }
    return c;
}

}  // namespace

BiasVector::BiasVector(std::vector<double> mu) : mu_(std::move(mu)) {
    sigma_.reserve(mu_.size());
    for (double m : mu_) {
        if (!(std::abs(m) <= 0.5)) {
            throw InvalidParameter("bias entries must lie in [-1/2, 1/2]");
        }
        sigma_.push_back(std::sqrt(1.0 - m * m));
    }
}

bool BiasVector::is_uniform() const {
    for (double m : mu_) {
        if (m != 0.0) {
            return false;
        }
    }
    return true;
}

FourierTable transform(std::span<const double> values, const BiasVector &bias) {
    const std::size_t m = bias.size();
    check_size(values.size(), m);
    FourierTable table{m, std::vector<double>(values.begin(), values.end()), bias};
    auto &c = table.coeffs;
    if (bias.is_uniform()) {
        fwht_unnormalized_inplace(c);
        const double scale = std::ldexp(1.0, -static_cast<int>(m));
        for (double &x : c) {
            x *= scale;
        }
        return table;
    }
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t h = std::size_t{1} << i;
        const double p = 0.5 * (1.0 + bias.mu(i));
        const double q = 0.5 * (1.0 - bias.mu(i));
        const double s = 0.5 * bias.sigma(i);
        for (std::size_t base = 0; base < c.size(); base += 2 * h) {
            for (std::size_t j = base; j < base + h; ++j) {
                const double a = c[j];
                const double b = c[j + h];
                c[j] = p * a + q * b;
                c[j + h] = s * (a - b);
            }
        }
    }
    return table;
}

FourierTable transform(std::span<const double> values) {
    return transform(values, BiasVector::uniform(bits_for(values.size())));
}

std::vector<double> inverse_transform(const FourierTable &table) {
    check_size(table.coeffs.size(), table.m);
    std::vector<double> v = table.coeffs;
    if (table.bias.is_uniform()) {
        fwht_unnormalized_inplace(v);
        return v;
    }
    for (std::size_t i = 0; i < table.m; ++i) {
        const std::size_t h = std::size_t{1} << i;
        const double up = (1.0 - table.bias.mu(i)) / table.bias.sigma(i);
        const double down = (1.0 + table.bias.mu(i)) / table.bias.sigma(i);
        for (std::size_t base = 0; base < v.size(); base += 2 * h) {
            for (std::size_t j = base; j < base + h; ++j) {
                const double c0 = v[j];
                const double c1 = v[j + h];
                v[j] = c0 + c1 * up;
                v[j + h] = c0 - c1 * down;
            }
        }
    }
    return v;
}

double expectation(std::span<const double> values, const BiasVector &bias) {
    check_size(values.size(), bias.size());
    double total = 0.0;
    for (std::size_t x = 0; x < values.size(); ++x) {
        double p = 1.0;
        for (std::size_t i = 0; i < bias.size(); ++i) {
            p *= 0.5 * ((x >> i) & 1u ? 1.0 - bias.mu(i) : 1.0 + bias.mu(i));
        }
        total += p * values[x];
    }
    return total;
}

double level_weight(const FourierTable &table, std::size_t level) {
    double w = 0.0;
    for (std::uint64_t S = 0; S < table.coeffs.size(); ++S) {
        if (popcount(S) == level) {
            w += std::abs(table.coeffs[S]);
        }
    }
    return w;
}

double squared_mass(const FourierTable &table) {
    double w = 0.0;
    for (double c : table.coeffs) {
        w += c * c;
    }
    return w;
}

double harmonic_extend(const FourierTable &table, std::span<const double> x) {
    if (x.size() != table.m) {
        throw InvalidShape("point dimension does not match the table");
    }
    std::vector<double> c = table.coeffs;
    std::size_t len = c.size();
    for (std::size_t i = 0; i < table.m; ++i) {
        const double phi = table.bias.character(i, x[i]);
        len /= 2;
        for (std::size_t j = 0; j < len; ++j) {
            c[j] = c[2 * j] + phi * c[2 * j + 1];
        }
    }
    return c[0];
}

double interpolation_weight_extend(std::span<const double> values, std::span<const double> x) {
    const std::size_t m = bits_for(values.size());
    if (x.size() != m) {
        throw InvalidShape("point dimension does not match the table");
    }
    double total = 0.0;
    for (std::size_t y = 0; y < values.size(); ++y) {
        double w = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double yi = (y >> i) & 1u ? -1.0 : 1.0;
            w *= 0.5 * (1.0 + x[i] * yi);
        }
        total += w * values[y];
    }
    return total;
}

FourierTable discrete_derivative(const FourierTable &table, std::uint64_t subset) {
    if (subset >= table.coeffs.size()) {
        throw InvalidIndex("derivative subset outside the table's variables");
    }
    FourierTable out{table.m, std::vector<double>(table.coeffs.size(), 0.0), table.bias};
    for (std::uint64_t T = 0; T < table.coeffs.size(); ++T) {
        if ((T & subset) == 0) {
            out.coeffs[T] = table.coeffs[T | subset];
        }
    }
    return out;
}

FourierTable restrict(const FourierTable &table, const Restriction &rho) {
    if (rho.size() != table.m) {
        throw InvalidShape("restriction length does not match the table");
    }
    const auto free = free_positions(rho);
    std::vector<double> mus;
    for (auto i : free) {
        mus.push_back(table.bias.mu(i));
    }
    FourierTable out{free.size(), std::vector<double>(std::size_t{1} << free.size(), 0.0), BiasVector(mus)};
    std::uint64_t free_mask = 0;
    for (auto i : free) {
        free_mask |= std::uint64_t{1} << i;
    }
    for (std::uint64_t T = 0; T < table.coeffs.size(); ++T) {
        if (table.coeffs[T] == 0.0) {
            continue;
        }
        double w = table.coeffs[T];
        const std::uint64_t fixed = T & ~free_mask;
        for (std::size_t i = 0; i < table.m; ++i) {
            if ((fixed >> i) & 1u) {
                w *= table.bias.character(i, static_cast<double>(rho[i]));
            }
        }
        out.coeffs[compress(T & free_mask, free)] += w;
    }
    return out;
}

std::vector<double> restrict_values(std::span<const double> values, const Restriction &rho) {
    const std::size_t m = bits_for(values.size());
    if (rho.size() != m) {
        throw InvalidShape("restriction length does not match the table");
    }
    const auto free = free_positions(rho);
    std::uint64_t fixed_bits = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (rho[i] == -1) {
            fixed_bits |= std::uint64_t{1} << i;
        }
    }
    std::vector<double> out(std::size_t{1} << free.size());
    for (std::uint64_t y = 0; y < out.size(); ++y) {
        std::uint64_t x = fixed_bits;
        for (std::size_t j = 0; j < free.size(); ++j) {
            if ((y >> j) & 1u) {
                x |= std::uint64_t{1} << free[j];
            }
        }
        out[y] = values[x];
    }
    return out;
}

IdentityCheck check_restriction_identity(const FourierTable &uniform, const BiasVector &mu, std::uint64_t S,
                                         double tol) {
    if (uniform.m > 10) {
        throw ResourceLimit("restriction identity check is limited to m <= 10");
    }
    if (!uniform.bias.is_uniform()) {
        throw InvalidParameter("restriction identity needs uniform-basis coefficients");
    }
    if (mu.size() != uniform.m || S >= uniform.coeffs.size()) {
        throw InvalidShape("bias or subset does not match the table");
    }
    double scale_lhs = 1.0;
    double scale_rhs = 1.0;
    for (std::size_t i = 0; i < uniform.m; ++i) {
        if ((S >> i) & 1u) {
            scale_lhs *= 0.5 * mu.sigma(i) * mu.sigma(i);
            scale_rhs *= 0.5 * mu.sigma(i);
        }
    }
    double lhs = 0.0;
    for (std::uint64_t T = 0; T < uniform.coeffs.size(); ++T) {
        if ((T & S) != S) {
            continue;
        }
        double w = uniform.coeffs[T];
        for (std::size_t i = 0; i < uniform.m; ++i) {
            if (((T & ~S) >> i) & 1u) {
                w *= mu.mu(i);
            }
        }
        lhs += w;
    }
    lhs *= scale_lhs;
    const FourierTable biased = transform(inverse_transform(uniform), mu);
    const double rhs = scale_rhs * biased.coeffs[S];
    return {lhs, rhs, std::abs(lhs - rhs) <= tol};
}

double restriction_expectation_enumerated(const FourierTable &uniform, const BiasVector &mu, std::uint64_t S) {
    const std::size_t m = uniform.m;
    if (m > 8) {
        throw ResourceLimit("3^m restriction enumeration is limited to m <= 8");
    }
    if (mu.size() != m || S >= uniform.coeffs.size()) {
        throw InvalidShape("bias or subset does not match the table");
    }
    Restriction rho(m, 0);
    std::size_t total = 1;
    for (std::size_t i = 0; i < m; ++i) {
        total *= 3;
    }
    double acc = 0.0;
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        double p = 1.0;
        bool s_free = true;
        for (std::size_t i = 0; i < m; ++i, c /= 3) {
            const double u = mu.mu(i);
            switch (c % 3) {
                case 0:
                    rho[i] = 0;
                    p *= 0.5 * mu.sigma(i) * mu.sigma(i);
                    break;
                case 1:
                    rho[i] = 1;
                    p *= 0.25 * (1.0 + u) * (1.0 + u);
                    break;
                default:
                    rho[i] = -1;
                    p *= 0.25 * (1.0 - u) * (1.0 - u);
                    break;
            }
            if (((S >> i) & 1u) && rho[i] != 0) {
                s_free = false;
            }
        }
        if (!s_free) {
            continue;
        }
        const FourierTable r = restrict(uniform, rho);
        acc += p * r.coeffs[compress(S, free_positions(rho))];
    }
    return acc;
}

WeightTransferCheck check_weight_transfer(const RandomizedTree &tree, const BiasVector &mu, std::size_t level) {
    const std::size_t m = tree.num_vars();
    if (m > 10) {
        throw ResourceLimit("weight transfer check is limited to m <= 10");
    }
    if (mu.size() != m) {
        throw InvalidShape("bias length does not match the tree");
    }
    const auto values = tree_accept_function(tree, m);
    const FourierTable uniform = transform(values);
    WeightTransferCheck out;
    out.biased_weight = level_weight(transform(values, mu), level);
    const auto queried = tree.queried_variables();
    std::size_t total = 1;
    for (std::size_t i = 0; i < queried.size(); ++i) {
        total *= 3;
    }
    Restriction rho(m, 0);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (std::size_t j = 0; j < queried.size(); ++j, c /= 3) {
            rho[queried[j]] = static_cast<int>(c % 3) - 1;
        }
        out.max_restricted_weight = std::max(out.max_restricted_weight, level_weight(restrict(uniform, rho), level));
    }
    out.bound = std::ldexp(out.max_restricted_weight, 2 * static_cast<int>(level));
    out.pass = out.biased_weight <= out.bound + 1e-12;
    return out;
}

double level_weight_shape_ratio(const FourierTable &uniform, int depth, std::size_t level) {
    if (level < 1 || static_cast<int>(level) > depth || uniform.m < 2) {
        throw InvalidParameter("shape ratio needs 1 <= level <= depth and m >= 2");
    }
    const double denom = std::sqrt(binomial(depth, static_cast<int>(level))) *
                         std::pow(std::log(static_cast<double>(uniform.m)), 0.5 * (static_cast<double>(level) - 1.0));
    return level_weight(uniform, level) / denom;
}

double character_inner_product(const BiasVector &mu, std::uint64_t S, std::uint64_t T) {
    const std::size_t m = mu.size();
    if (m > kMaxBits || S >> m || T >> m) {
        throw InvalidShape("subsets outside the bias vector's coordinates");
    }
    double total = 0.0;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x) {
        double p = 1.0;
        double prod = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double xi = (x >> i) & 1u ? -1.0 : 1.0;
            p *= 0.5 * (1.0 + mu.mu(i) * xi);
            if ((S >> i) & 1u) {
                prod *= mu.character(i, xi);
            }
            if ((T >> i) & 1u) {
                prod *= mu.character(i, xi);
            }
        }
        total += p * prod;
    }
    return total;
}

double level_bound_sampled(std::span<const double> values, int k, std::size_t N,
                           const std::vector<BiasVector> &mu_samples) {
    const std::size_t m = bits_for(values.size());
    if (m != static_cast<std::size_t>(k) * N) {
        throw InvalidShape("level bound needs a table over kN variables");
    }
    double best = 0.0;
    for (const auto &mu : mu_samples) {
        const FourierTable t = transform(values, mu);
        double sum = 0.0;
        for (int l = k; l <= k * (k - 1); ++l) {
            const double decay = std::pow(static_cast<double>(N), -0.5 * l * (1.0 - 1.0 / k));
            sum += decay * std::pow(8.0 * k, 14.0 * l) * level_weight(t, static_cast<std::size_t>(l));
        }
        best = std::max(best, sum);
    }
    return best;
}

}  // namespace forr
