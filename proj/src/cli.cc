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

#include "forrelation/cli.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "forrelation/errors.h"
#include "forrelation/fourier.h"
#include "forrelation/gauss_id.h"
#include "forrelation/monte_carlo.h"
#include "forrelation/quadrature.h"
#include "forrelation/quantum_sim.h"
#include "forrelation/sampler.h"
#include "forrelation/special.h"
#include "json.hpp"

namespace forr {

namespace {

using ojson = nlohmann::ordered_json;

constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343818684758586311649346576659258296;

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string_view to_string(MatrixKind kind) { return kind == MatrixKind::Haar ? "haar" : "hadamard"; }
std::string_view to_string(CheckKind kind) { return kind == CheckKind::Hard ? "hard" : "report"; }

std::vector<double> linspace(double a, double b, int count) {
    std::vector<double> out;
    for (int i = 0; i < count; ++i) {
        out.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
    }
    return out;
}

/// Tracks the worst absolute deviation of a family of comparisons.
struct MaxError {
    double worst = 0.0;
    void add(double a, double b) { worst = std::max(worst, std::abs(a - b)); }
};

// ---------------------------------------------------------------------------
// Random test objects for the Wick suites.

Covariance random_covariance(Rng &rng, std::size_t dim, bool singular) {
    std::normal_distribution<double> normal;
    std::vector<double> a(dim * dim);
    for (double &x : a) {
        x = normal(rng);
    }
    if (singular && dim > 1) {
        for (std::size_t i = 0; i < dim; ++i) {
            a[i * dim + dim - 1] = 0.0;
        }
    }
    std::vector<double> c(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double acc = 0.0;
            for (std::size_t r = 0; r < dim; ++r) {
                acc += a[i * dim + r] * a[j * dim + r];
            }
            c[i * dim + j] = c[j * dim + i] = acc / static_cast<double>(dim);
        }
    }
    return Covariance(dim, std::move(c));
}

Polynomial random_polynomial(Rng &rng, std::size_t vars, int max_degree, bool multilinear) {
    std::normal_distribution<double> normal;
    std::uniform_int_distribution<int> terms_dist(2, 5);
    std::uniform_int_distribution<std::size_t> var_dist(0, vars - 1);
    std::uniform_int_distribution<int> deg_dist(0, max_degree);
    Polynomial p(vars);
    const int terms = terms_dist(rng);
    for (int t = 0; t < terms; ++t) {
        std::vector<int> e(vars, 0);
        const int deg = deg_dist(rng);
        for (int d = 0; d < deg; ++d) {
            const std::size_t v = var_dist(rng);
            if (multilinear) {
                e[v] = 1;
            } else {
                ++e[v];
            }
        }
        p.add_term(e, normal(rng));
    }
    return p;
}

/// Covariance over (B, G_1..G_m) with E[B^2] uniform in [0.2, 1].
Covariance random_phi_covariance(Rng &rng, std::size_t m) {
    const Covariance base = random_covariance(rng, m + 1, false);
    std::uniform_real_distribution<double> var_dist(0.2, 1.0);
    const double scale = std::sqrt(var_dist(rng) / base(0, 0));
    std::vector<double> c(base.data().begin(), base.data().end());
    const std::size_t d = m + 1;
    for (std::size_t i = 0; i < d; ++i) {
        c[i] *= scale;
        c[i * d] *= scale;
    }
    c[0] = base(0, 0) * scale * scale;
    return Covariance(d, std::move(c));
}

/// x -> phi(x_0) cos(x_{m-1}); odd under x -> -x, so E[phi(B) h(G)] != 0.
SmoothFunction phi_cos(std::size_t m) {
    SmoothFunction f;
    f.vars = m;
    const std::size_t last = m - 1;
    f.value = [last](std::span<const double> x) { return truncate_phi(x[0]) * std::cos(x[last]); };
    for (std::size_t i = 0; i < m; ++i) {
        f.gradient.push_back([i, last](std::span<const double> x) {
            double d = 0.0;
            if (i == 0) {
                d += gaussian_density(x[0]) * std::cos(x[last]);
            }
            if (i == last) {
                d -= truncate_phi(x[0]) * std::sin(x[last]);
            }
            return d;
        });
    }
    return f;
}

// ---------------------------------------------------------------------------
// Input-distribution statistics, accumulated per batch.

struct InputDistStats {
    MeanAccumulator conditional_mean;  // forr(W) under p_1
    MeanAccumulator p1_forr;           // forr(Z) under p_1
    MeanAccumulator p1_one;            // 1{forr(Z) >= delta} under p_1
    MeanAccumulator p0_square;         // forr(Z)^2 under p_0
    MeanAccumulator p0_outside;        // 1{|forr(Z)| > delta/2} under p_0

    void merge(const InputDistStats &o) {
        conditional_mean.merge(o.conditional_mean);
        p1_forr.merge(o.p1_forr);
        p1_one.merge(o.p1_one);
        p0_square.merge(o.p0_square);
        p0_outside.merge(o.p0_outside);
    }
};

void write_output(const RunConfig &config, const std::string &text, std::ostream &out) {
    if (config.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(config.out);
    if (!file) {
        throw InvalidInput("cannot open output file " + config.out);
    }
    file << text;
}

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ojson config_json(const RunConfig &config) {
    ojson c;
    c["command"] = config.command;
    c["n"] = config.n;
    c["k"] = config.k;
    if (config.command != "fourier" && config.command != "verify-identities") {
        c["delta"] = config.params().delta;
    }
    c["matrix"] = std::string(to_string(config.matrix));
    c["samples"] = config.samples;
    c["seed"] = config.seed;
    c["workers"] = config.workers;
    return c;
}

}  // namespace

// ---------------------------------------------------------------------------

bool VerificationReport::pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const Check &c) { return c.kind == CheckKind::Report || c.pass; });
}

void VerificationReport::hard(std::string id, double value, double expected, double tol, bool ok) {
    checks.push_back({std::move(id), value, expected, tol, ok, CheckKind::Hard});
}

void VerificationReport::near(std::string id, double value, double expected, double tol) {
    hard(std::move(id), value, expected, tol, std::abs(value - expected) <= tol);
}

void VerificationReport::report(std::string id, double value, double expected, double tol) {
    checks.push_back({std::move(id), value, expected, tol, true, CheckKind::Report});
}

OrthogonalMatrix make_matrix(const RunConfig &config) {
    const std::size_t N = std::size_t{1} << config.n;
    if (config.matrix == MatrixKind::Hadamard) {
        return OrthogonalMatrix::hadamard(N);
    }
    if (config.n > 12) {
        throw ResourceLimit("Haar matrices are stored densely; n <= 12");
    }
    Rng rng = make_stream(config.seed, StreamPurpose::Matrix, 0);
    return haar_orthogonal(rng, N);
}

std::vector<double> parse_sign_vector(const std::string &text, std::size_t expected) {
    std::istringstream in(text);
    std::vector<double> out;
    std::string token;
    while (in >> token) {
        if (token == "1" || token == "+1") {
            out.push_back(1.0);
        } else if (token == "-1") {
            out.push_back(-1.0);
        } else {
            throw InvalidInput("token " + std::to_string(out.size() + 1) + " is '" + token + "', expected +1 or -1");
        }
    }
    if (out.size() != expected) {
        throw InvalidInput("expected " + std::to_string(expected) + " entries, found " + std::to_string(out.size()));
    }
    return out;
}

EvalResult run_eval(const RunConfig &config, const std::string &input_text) {
    const ForrelationParams params = config.params();
    const OrthogonalMatrix matrix = make_matrix(config);
    BlockVector z(params.k, params.N, parse_sign_vector(input_text, static_cast<std::size_t>(params.k) * params.N));
    EvalResult r;
    r.value = forr_value(z, matrix);
    r.label = classify(r.value, params.delta);
    const QuantumRunReport q = accept_probability(z, params, matrix);
    r.accept_probability = q.accept_probability;
    r.queries = q.queries;
    return r;
}

VerificationReport run_verify_input_dist(const RunConfig &config) {
    const ForrelationParams params = config.params();
    const OrthogonalMatrix matrix = make_matrix(config);
    const double delta = params.delta;
    const double N = static_cast<double>(params.N);

    auto batches = run_batched(config.samples, config.workers, [&](std::size_t b, std::size_t, std::size_t count) {
        InputDistStats s;
        Rng gauss = make_stream(config.seed, StreamPurpose::Gaussian, b);
        Rng round = make_stream(config.seed, StreamPurpose::Rounding, b);
        Rng bits = make_stream(config.seed, StreamPurpose::P0Bits, b);
        for (std::size_t i = 0; i < count; ++i) {
            const GaussianPairs pairs = sample_gaussian_pairs(gauss, params, matrix);
            const BlockVector w = truncated_means(pairs);
            s.conditional_mean.add(forr_value(w, matrix));
            const double f1 = forr_value(round_to_signs(w, round), matrix);
            s.p1_forr.add(f1);
            s.p1_one.add(f1 >= delta ? 1.0 : 0.0);
            const double f0 = forr_value(sample_p0(bits, params), matrix);
            s.p0_square.add(f0 * f0);
            s.p0_outside.add(std::abs(f0) > 0.5 * delta ? 1.0 : 0.0);
        }
        return s;
    });
    InputDistStats s;
    for (const auto &b : batches) {
        s.merge(b);
    }

    VerificationReport rep;
    const double expected = p1_mean_exact(matrix, params.k);
    const double bound = std::pow(1.0 / 32.0, params.k - 1);
    if (matrix.kind() == OrthogonalMatrix::Kind::Hadamard) {
        rep.near("p1.closed_form_consistency", expected, p1_mean_hadamard_closed_form(params.N, params.k), 1e-12);
    }
    rep.hard("p1.closed_form_exceeds_bound", expected, bound, 0.0, expected > bound);

    const double cm = s.conditional_mean.mean();
    const double cm_se = s.conditional_mean.standard_error();
    rep.near("p1.conditional_mean", cm, expected, kCiWidth * cm_se);
    rep.hard("p1.conditional_mean_exceeds_bound", cm - kCiWidth * cm_se, bound, kCiWidth * cm_se,
             cm - kCiWidth * cm_se > bound);
    if (kCiWidth * cm_se > (expected - bound) / 5.0) {
        rep.warnings.push_back("sample budget too small: the closed form sits fewer than 5 standard errors above the "
                               "(1/32)^(k-1) bound");
    }
    rep.report("p1.rounded_mean", s.p1_forr.mean(), expected, kCiWidth * s.p1_forr.standard_error());

    const double sq = s.p0_square.mean();
    const double sq_se = s.p0_square.standard_error();
    rep.near("p0.second_moment", sq, 1.0 / N, kCiWidth * sq_se);
    rep.hard("p0.second_moment_upper", sq + kCiWidth * sq_se, 1.1 / N, 0.0, sq + kCiWidth * sq_se <= 1.1 / N);

    // Promise masses at the configured delta.
    const double alpha = s.p1_one.mean();
    const double alpha_se = binomial_standard_error(alpha, s.p1_one.count);
    const double markov = (expected - delta) / (1.0 - delta);
    rep.hard("p1.mass_vs_mean", alpha + kCiWidth * alpha_se, markov, kCiWidth * alpha_se,
             alpha + kCiWidth * alpha_se >= markov);
    const double six_delta = 6.0 * delta;
    if (delta <= std::ldexp(1.0, -10)) {
        rep.hard("p1.mass_6delta", alpha, six_delta, kCiWidth * alpha_se, alpha + kCiWidth * alpha_se >= six_delta);
    } else {
        rep.report("p1.mass_6delta", alpha, six_delta, kCiWidth * alpha_se);
    }
    const double beta = s.p0_outside.mean();
    const double beta_se = binomial_standard_error(beta, s.p0_outside.count);
    const double chebyshev = 4.0 / (delta * delta * N);
    if (chebyshev < 1.0) {
        rep.hard("p0.outside_mass", beta, chebyshev, kCiWidth * beta_se, beta - kCiWidth * beta_se <= chebyshev);
    } else {
        rep.report("p0.outside_mass", beta, chebyshev, kCiWidth * beta_se);
    }
    return rep;
}

VerificationReport run_verify_identities(const RunConfig &config, double psi_scale) {
    VerificationReport rep;
    Rng rng = make_stream(config.seed, StreamPurpose::Misc, 0);

    // Gaussian CDF and density derivatives.
    rep.near("cdf.at_zero", gaussian_cdf(0.0), 0.5, 1e-15);
    {
        MaxError e;
        for (double a : linspace(-4.0, 4.0, 81)) {
            e.add(gaussian_cdf_series(a, 60), gaussian_cdf(a));
        }
        rep.near("cdf.series_vs_erf", e.worst, 0.0, 1e-12);
    }
    {
        double worst = -1.0;
        for (double a : linspace(0.05, 6.0, 120)) {
            worst = std::max(worst, (1.0 - gaussian_cdf(a)) - 0.5 * std::exp(-0.5 * a * a));
        }
        rep.hard("cdf.tail_bound", worst, 0.0, 0.0, worst <= 0.0);
    }
    rep.near("gamma.first_derivative_at_1", gamma_derivative(1, 1.0), -0.241971, 1e-6);
    rep.near("gamma.second_derivative_at_0", gamma_derivative(2, 0.0), -kInvSqrt2Pi, 1e-12);
    {
        double worst = -1e300;
        for (int n = 0; n <= 10; ++n) {
            for (double s : linspace(-10.0, 10.0, 401)) {
                worst = std::max(worst, std::abs(gamma_derivative(n, s)) - std::pow(n, 0.5 * n));
            }
        }
        rep.hard("gamma.derivative_bound", worst, 0.0, 0.0, worst <= 0.0);
    }

    // Psi_sigma.
    const std::vector<double> sigmas = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    rep.near("psi.at_zero_sigma_one", psi_sigma(0.0, 1.0), 0.313329, 1e-6);
    {
        double lo = 1e300;
        double hi = -1e300;
        for (double sigma : sigmas) {
            for (double s : linspace(-6.0, 6.0, 49)) {
                const double v = psi_sigma(s, sigma);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        rep.hard("psi.range_min", lo, 0.0, 0.0, lo >= 0.0);
        rep.hard("psi.range_max", hi, kInvSqrt2Pi, 0.0, hi <= kInvSqrt2Pi);
    }
    {
        MaxError e;
        for (double sigma : {0.3, 0.5, 0.7, 0.9, 1.0}) {
            for (double s : linspace(-2.0, 2.0, 17)) {
                const double via_owen = std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * s * s / (sigma * sigma)) /
                                        sigma * owen_t(s / sigma, sigma);
                e.add(psi_sigma(s, sigma), via_owen);
            }
        }
        rep.near("psi.owen_relation", e.worst, 0.0, 1e-8);
    }
    {
        MaxError e;
        for (double sigma : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
            for (double s : linspace(-3.0, 3.0, 13)) {
                e.add(psi_series(s, sigma, 400), psi_sigma(s, sigma));
            }
        }
        rep.near("psi.series_vs_quadrature", e.worst, 0.0, 1e-8);
    }
    rep.near("psi.small_sigma_limit", psi_series(1.0, 1e-4, 400), truncate_phi(1.0), 1e-6);
    rep.near("psi.series_at_zero", psi_series(0.0, 0.5, 400), std::atan(0.5) / (0.5 * std::sqrt(2.0 * std::numbers::pi)),
             1e-15);
    {
        // Central differences of order n with step 0.05.
        constexpr double h = 0.05;
        const std::vector<std::vector<double>> stencils = {
            {-0.5, 0.0, 0.5}, {1.0, -2.0, 1.0}, {-0.5, 1.0, 0.0, -1.0, 0.5}, {1.0, -4.0, 6.0, -4.0, 1.0}};
        double worst = -1e300;
        for (int n = 1; n <= 4; ++n) {
            const auto &w = stencils[n - 1];
            const int half = static_cast<int>(w.size() / 2);
            for (double sigma : {0.25, 0.5, 0.75, 1.0}) {
                for (double s : linspace(-4.0, 4.0, 33)) {
                    double d = 0.0;
                    for (int i = 0; i < static_cast<int>(w.size()); ++i) {
                        if (w[i] != 0.0) {
                            d += w[i] * psi_sigma(s + (i - half) * h, sigma);
                        }
                    }
                    d /= std::pow(h, n);
                    worst = std::max(worst, std::abs(d) - std::pow(n, 0.5 * n));
                }
            }
        }
        rep.hard("psi.derivative_bound", worst, 0.0, 0.0, worst <= 0.0);
    }

    // Owen's T.
    rep.near("owen.t0_sigma1_single", owen_t(0.0, 1.0, OwenForm::Single), 0.125, 1e-12);
    rep.near("owen.t0_sigma1_double", owen_t(0.0, 1.0, OwenForm::Double), 0.125, 1e-12);
    {
        MaxError e;
        for (double h : linspace(0.0, 4.0, 9)) {
            for (double sigma : linspace(0.0, 1.0, 5)) {
                e.add(owen_t(-h, sigma), owen_t(h, sigma));
                e.add(owen_t(h, -sigma), -owen_t(h, sigma));
            }
        }
        rep.near("owen.symmetry", e.worst, 0.0, 1e-14);
    }
    {
        MaxError e;
        for (double h : linspace(0.0, 4.0, 20)) {
            for (double sigma : linspace(0.0, 1.0, 10)) {
                e.add(owen_t(h, sigma, OwenForm::Double), owen_t(h, sigma, OwenForm::Single));
            }
        }
        rep.near("owen.forms_agree", e.worst, 0.0, 1e-10);
    }

    // Truncated correlation.
    {
        MaxError e;
        double slack = 1e300;
        for (int i = 1; i <= 19; ++i) {
            for (double sign : {-1.0, 1.0}) {
                const CorrelationCheck c = check_truncated_correlation(sign * 0.05 * i);
                e.add(c.closed_form, c.quadrature);
                slack = std::min(slack, c.bound_lhs - c.bound_rhs);
            }
        }
        rep.near("corr.closed_vs_quadrature", e.worst, 0.0, 1e-8);
        rep.hard("corr.lower_bound", slack, 0.0, 0.0, slack >= 0.0);
        const double self = gaussian_expectation(
            [](std::span<const double> x) {
                const double p = truncate_phi(x[0]);
                return p * p;
            },
            std::vector<double>{1.0}, 1, 200);
        rep.near("corr.rho_one_closed_form", truncated_correlation_closed_form(1.0), 1.0 / 12.0, 1e-8);
        rep.near("corr.rho_one_quadrature", self, 1.0 / 12.0, 1e-8);
    }

    // Wick oracle and classic Gaussian identities.
    {
        const Covariance c = random_covariance(rng, 4, false);
        const double isserlis = c(0, 1) * c(2, 3) + c(0, 2) * c(1, 3) + c(0, 3) * c(1, 2);
        const std::vector<int> e = {1, 1, 1, 1};
        rep.near("wick.isserlis", wick_expectation(e, c), isserlis, 1e-14);
        const std::vector<int> odd = {2, 1, 0, 0};
        rep.near("wick.odd_moment", wick_expectation(odd, c), 0.0, 0.0);
    }
    {
        const std::vector<double> t_grid = {0.25, 0.5, 0.75};
        bool ok = true;
        double worst = 0.0;
        std::uniform_int_distribution<std::size_t> dim(1, 4);
        for (int i = 0; i < 50; ++i) {
            const std::size_t m = dim(rng);
            const Polynomial f = random_polynomial(rng, m, 4, false);
            const Covariance g = random_covariance(rng, m, i % 3 == 0);
            const Covariance b = random_covariance(rng, m, i % 5 == 0);
            const IdentityReport r = check_gaussian_interpolation(f, g, b, t_grid, 1e-10);
            ok = ok && r.pass();
            worst = std::max(worst, r.max_error());
        }
        rep.hard("wick.interpolation", worst, 0.0, 1e-10, ok);
    }
    {
        bool ok = true;
        double worst = 0.0;
        std::uniform_int_distribution<std::size_t> dim(1, 4);
        for (int i = 0; i < 50; ++i) {
            const std::size_t m = dim(rng);
            const Polynomial f = random_polynomial(rng, m, 5, false);
            const Covariance c = random_covariance(rng, m + 1, i % 4 == 0);
            const IdentityReport r = check_gaussian_ibp(f, c, 1e-10);
            ok = ok && r.pass();
            worst = std::max(worst, r.max_error());
        }
        rep.hard("wick.integration_by_parts", worst, 0.0, 1e-10, ok);
    }

    // Truncated (phi) variants, by quadrature.
    {
        bool ok = true;
        double worst = 0.0;
        for (int i = 0; i < 8; ++i) {
            const std::size_t m = 1 + static_cast<std::size_t>(i % 2);
            const Covariance c = random_phi_covariance(rng, m);
            SmoothFunction h;
            switch (i / 2) {
                case 0:
                    h = SmoothFunction::coordinate(m, m - 1);
                    break;
                case 1:
                    h = SmoothFunction::truncated_coordinate(m, 0);
                    break;
                case 2:
                    h = phi_cos(m);
                    break;
                default:
                    h = SmoothFunction::from_polynomial(random_polynomial(rng, m, 3, false));
                    break;
            }
            const IdentityReport r = check_phi_ibp(h, c, psi_scale, 1e-6);
            ok = ok && r.pass();
            for (const auto &p : r.points) {
                worst = std::max(worst, p.error / std::max(std::abs(p.lhs), std::abs(p.rhs)));
            }
        }
        rep.hard("phi.integration_by_parts", worst, 0.0, 1e-6, ok);
    }
    {
        const double r = std::numbers::sqrt2 / 2.0;
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        const double th = angle(rng);
        const std::vector<std::vector<double>> matrices = {
            {1.0}, {-1.0}, {r, r, r, -r}, {std::cos(th), -std::sin(th), std::sin(th), std::cos(th)}};
        const std::vector<double> t_grid = {0.2, 0.5, 0.8};
        bool ok = true;
        double worst = 0.0;
        for (const auto &mat : matrices) {
            const std::size_t n = mat.size() == 1 ? 1 : 2;
            for (int rep_i = 0; rep_i < 2; ++rep_i) {
                Polynomial f = random_polynomial(rng, 2 * n, static_cast<int>(2 * n), true);
                // Ensure a cross term so the identity is not trivially 0 = 0.
                std::vector<int> cross(2 * n, 0);
                cross[0] = 1;
                cross[n] = 1;
                f.add_term(cross, 1.0);
                const IdentityReport rr = check_phi_interpolation(f, mat, n, t_grid, 1e-5);
                ok = ok && rr.pass();
                for (const auto &p : rr.points) {
                    worst = std::max(worst, p.error / std::max({std::abs(p.lhs), std::abs(p.rhs), 1e-300}));
                }
            }
        }
        rep.hard("phi.interpolation", worst, 0.0, 1e-5, ok);
    }
    return rep;
}

VerificationReport run_fourier(const RunConfig &config, const std::optional<RandomizedTree> &tree,
                               const FourierOptions &options) {
    VerificationReport rep;
    std::uniform_real_distribution<double> bias(-0.5, 0.5);
    auto random_bias = [&](Rng &rng, std::size_t m) {
        std::vector<double> mu(m);
        for (double &x : mu) {
            x = bias(rng);
        }
        return BiasVector(mu);
    };

    if (tree) {
        const std::size_t m = tree->num_vars();
        const int depth = tree->depth();
        const auto values = tree_accept_function(*tree, m);
        const FourierTable t = transform(values);
        for (int l = 0; l <= std::min<int>(depth, static_cast<int>(m)); ++l) {
            rep.report("weight.level" + std::to_string(l), level_weight(t, static_cast<std::size_t>(l)));
        }
        double mean_sq = 0.0;
        for (double v : values) {
            mean_sq += v * v;
        }
        mean_sq /= static_cast<double>(values.size());
        rep.near("fourier.parseval", squared_mass(t), mean_sq, 1e-12);
        double above = 0.0;
        for (std::uint64_t S = 0; S < t.coeffs.size(); ++S) {
            if (std::popcount(S) > depth) {
                above = std::max(above, std::abs(t.coeffs[S]));
            }
        }
        rep.near("fourier.degree_bound", above, 0.0, 1e-12);
        if (options.restriction_checks) {
            if (m > 10) {
                throw ResourceLimit("restriction checks need m <= 10 (got " + std::to_string(m) +
                                    "); pass --no-restriction to skip them");
            }
            Rng rng = make_stream(config.seed, StreamPurpose::Trees, 0);
            double worst = 0.0;
            bool ok = true;
            double slack = 1e300;
            for (int draw = 0; draw < 3; ++draw) {
                const BiasVector mu = random_bias(rng, m);
                for (std::uint64_t S = 0; S < t.coeffs.size(); ++S) {
                    const IdentityCheck c = check_restriction_identity(t, mu, S);
                    worst = std::max(worst, std::abs(c.lhs - c.rhs));
                    ok = ok && c.pass;
                }
                for (int l = 1; l <= std::min<int>(depth, static_cast<int>(m)); ++l) {
                    const WeightTransferCheck w = check_weight_transfer(*tree, mu, static_cast<std::size_t>(l));
                    slack = std::min(slack, w.bound - w.biased_weight);
                    ok = ok && w.pass;
                }
            }
            rep.hard("fourier.restriction_identity", worst, 0.0, 1e-10, worst <= 1e-10);
            rep.hard("fourier.weight_transfer", slack, 0.0, 0.0, slack >= -1e-12);
        }
        return rep;
    }

    // Random-tree mode.
    const std::size_t m = options.m;
    const int depth = options.depth;
    if (options.restriction_checks && m > 10) {
        throw ResourceLimit("restriction checks need m <= 10 (got " + std::to_string(m) +
                            "); pass --no-restriction to skip them");
    }
    double parseval = 0.0;
    double parseval_biased = 0.0;
    double degree = 0.0;
    double restriction = 0.0;
    double transfer_slack = 1e300;
    double binomial_slack = 1e300;
    std::vector<double> shape(static_cast<std::size_t>(depth) + 1, 0.0);
    for (std::size_t i = 0; i < options.count; ++i) {
        Rng rng = make_stream(config.seed, StreamPurpose::Trees, i);
        const RandomizedTree tr(random_tree(rng, m, depth));
        const auto values = tree_accept_function(tr, m);
        const FourierTable t = transform(values);
        const BiasVector mu = random_bias(rng, m);
        const FourierTable tb = transform(values, mu);
        double sq = 0.0;
        std::vector<double> squares(values.size());
        for (std::size_t x = 0; x < values.size(); ++x) {
            squares[x] = values[x] * values[x];
            sq += squares[x];
        }
        parseval = std::max(parseval, std::abs(squared_mass(t) - sq / static_cast<double>(values.size())));
        parseval_biased = std::max(parseval_biased, std::abs(squared_mass(tb) - expectation(squares, mu)));
        for (std::uint64_t S = 0; S < t.coeffs.size(); ++S) {
            if (std::popcount(S) > depth) {
                degree = std::max(degree, std::abs(t.coeffs[S]));
            }
        }
        for (int l = 0; l <= depth; ++l) {
            const double c = std::tgamma(depth + 1.0) / (std::tgamma(l + 1.0) * std::tgamma(depth - l + 1.0));
            binomial_slack = std::min(binomial_slack, c - level_weight(t, static_cast<std::size_t>(l)));
            if (l >= 1) {
                shape[l] = std::max(shape[l], level_weight_shape_ratio(t, depth, static_cast<std::size_t>(l)));
            }
        }
        if (options.restriction_checks) {
            std::uniform_int_distribution<std::uint64_t> subset(0, t.coeffs.size() - 1);
            const IdentityCheck c = check_restriction_identity(t, mu, subset(rng));
            restriction = std::max(restriction, std::abs(c.lhs - c.rhs));
            for (int l = 1; l <= depth; ++l) {
                const WeightTransferCheck w = check_weight_transfer(tr, mu, static_cast<std::size_t>(l));
                transfer_slack = std::min(transfer_slack, w.bound - w.biased_weight);
            }
        }
    }
    rep.near("fourier.parseval", parseval, 0.0, 1e-12);
    rep.near("fourier.parseval_biased", parseval_biased, 0.0, 1e-12);
    rep.near("fourier.degree_bound", degree, 0.0, 1e-12);
    rep.hard("fourier.binomial_weight_bound", binomial_slack, 0.0, 1e-12, binomial_slack >= -1e-12);
    {
        const std::size_t mo = std::min<std::size_t>(m, 8);
        Rng rng = make_stream(config.seed, StreamPurpose::Misc, 1);
        const BiasVector mu = random_bias(rng, mo);
        double worst = 0.0;
        for (std::uint64_t S = 0; S < (std::uint64_t{1} << mo); ++S) {
            for (std::uint64_t T = S; T < (std::uint64_t{1} << mo); ++T) {
                worst = std::max(worst, std::abs(character_inner_product(mu, S, T) - (S == T ? 1.0 : 0.0)));
            }
        }
        rep.near("fourier.biased_orthonormality", worst, 0.0, 1e-12);
    }
    if (options.restriction_checks) {
        rep.near("fourier.restriction_identity", restriction, 0.0, 1e-10);
        rep.hard("fourier.weight_transfer", transfer_slack, 0.0, 0.0, transfer_slack >= -1e-12);
    }
    for (int l = 1; l <= depth; ++l) {
        rep.report("fourier.level_shape_ratio_l" + std::to_string(l), shape[l]);
    }

    if (options.level_experiment) {
        // Both sides of the level bound at N = 2, k = 2 for one random depth-2 tree.
        const ForrelationParams p = ForrelationParams::make(1, 2);
        const std::size_t vars = static_cast<std::size_t>(p.k) * p.N;
        Rng rng = make_stream(config.seed, StreamPurpose::Trees, options.count);
        const RandomizedTree tr(random_tree(rng, vars, 2));
        const auto values = tree_accept_function(tr, vars);
        const FourierTable t = transform(values);
        const OrthogonalMatrix h = OrthogonalMatrix::hadamard(p.N);
        MeanAccumulator p1;
        for (std::size_t s = 0; s < config.samples; ++s) {
            const BlockVector w = truncated_means(sample_gaussian_pairs(rng, p, h));
            p1.add(harmonic_extend(t, w.flat()));
        }
        std::vector<BiasVector> mus;
        for (int s = 0; s < 200; ++s) {
            mus.push_back(random_bias(rng, vars));
        }
        rep.report("level.advantage", p1.mean() - t.coeffs[0], 0.0, kCiWidth * p1.standard_error());
        rep.report("level.sampled_bound", level_bound_sampled(values, p.k, p.N, mus));
    }
    return rep;
}

VerificationReport run_separation(const RunConfig &config, const SeparationOptions &options) {
    const ForrelationParams params = config.params();
    const OrthogonalMatrix matrix = make_matrix(config);
    const std::size_t vars = static_cast<std::size_t>(params.k) * params.N;

    std::vector<NamedAlgorithm> algs;
    algs.push_back({"quantum", static_cast<std::size_t>(query_count(params.k)),
                    [&](const BlockVector &z, Rng &) { return accept_probability(z, params, matrix).accept_probability; }});
    algs.push_back({"constant", 0, [](const BlockVector &, Rng &) { return 0.5; }});
    for (std::size_t s : options.tuple_budgets) {
        algs.push_back({"tuple-" + std::to_string(s), static_cast<std::size_t>(params.k) * s,
                        [&, s](const BlockVector &z, Rng &rng) {
                            QueryOracle oracle(z);
                            const TupleEstimate e = tuple_sampling_estimator(oracle, params, matrix, s, rng);
                            return std::clamp(0.5 * (1.0 + e.estimate), 0.0, 1.0);
                        }});
    }
    if (params.k == 2) {
        // Accept iff z_1(0) z_2(0) sign(M_00) = +1.
        const double s = matrix.entry(0, 0) >= 0.0 ? 1.0 : -1.0;
        const int q2 = static_cast<int>(params.N);
        const double agree = s > 0 ? 1.0 : 0.0;
        const DecisionTree pair(vars, {TreeNode{0, 1, 2, 0.0}, TreeNode{q2, 3, 4, 0.0}, TreeNode{q2, 5, 6, 0.0},
                                       TreeNode{-1, -1, -1, agree}, TreeNode{-1, -1, -1, 1.0 - agree},
                                       TreeNode{-1, -1, -1, 1.0 - agree}, TreeNode{-1, -1, -1, agree}});
        algs.push_back({"pair-tree", 2, [pair](const BlockVector &z, Rng &) { return pair.evaluate(z.flat()); }});
    }
    for (int d : options.tree_depths) {
        Rng rng = make_stream(config.seed, StreamPurpose::Trees, static_cast<std::uint64_t>(d));
        const DecisionTree t = random_tree(rng, vars, d);
        algs.push_back({"tree-depth" + std::to_string(d), static_cast<std::size_t>(d),
                        [t](const BlockVector &z, Rng &) { return t.evaluate(z.flat()); }});
    }

    VerificationReport rep;
    if (config.samples < 10000) {
        rep.warnings.push_back("separation budgets below 10^4 samples cannot resolve the quantum advantage");
    }
    rep.rows = measure_advantages(algs, params, matrix, config.samples, config.seed, config.workers);
    const AdvantageResult &q = rep.rows.front();
    double best_classical = -1e300;
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        best_classical = std::max(best_classical, rep.rows[i].ci_high);
    }
    const double expected = 0.5 * p1_mean_exact(matrix, params.k);
    rep.near("separation.quantum_advantage", q.advantage, expected, kCiWidth * q.standard_error);
    rep.hard("separation.quantum_beats_classical", q.advantage, best_classical, 0.0, q.advantage > best_classical);
    const AdvantageResult &c = rep.rows[1];
    rep.hard("separation.constant_ci_contains_zero", c.advantage, 0.0, kCiWidth * c.standard_error,
             c.ci_low <= 0.0 && c.ci_high >= 0.0);
    for (const auto &row : rep.rows) {
        if (row.name.rfind("tuple-", 0) == 0) {
            rep.report("separation." + row.name + "_advantage", row.advantage, 0.0, kCiWidth * row.standard_error);
        }
    }
    return rep;
}

std::string render_report(const RunConfig &config, const VerificationReport &report) {
    if (config.format == OutputFormat::Csv) {
        std::ostringstream out;
        out << "id,value,expected,tol,pass,kind\n";
        for (const auto &c : report.checks) {
            out << c.id << ',' << fmt_double(c.value) << ',' << fmt_double(c.expected) << ',' << fmt_double(c.tol)
                << ',' << (c.pass ? "true" : "false") << ',' << to_string(c.kind) << '\n';
        }
        if (!report.rows.empty()) {
            out << "\nalgorithm,queries,mean_p1,mean_p0,advantage,se,ci_low,ci_high\n";
            for (const auto &r : report.rows) {
                out << r.name << ',' << r.queries << ',' << fmt_double(r.mean_p1) << ',' << fmt_double(r.mean_p0)
                    << ',' << fmt_double(r.advantage) << ',' << fmt_double(r.standard_error) << ','
                    << fmt_double(r.ci_low) << ',' << fmt_double(r.ci_high) << '\n';
            }
        }
        out << "overall," << (report.pass() ? "pass" : "fail") << '\n';
        return out.str();
    }
    ojson doc;
    doc["schema"] = kReportSchema;
    doc["config"] = config_json(config);
    ojson checks = ojson::array();
    for (const auto &c : report.checks) {
        ojson j;
        j["id"] = c.id;
        j["value"] = c.value;
        j["expected"] = c.expected;
        j["tol"] = c.tol;
        j["pass"] = c.pass;
        j["kind"] = std::string(to_string(c.kind));
        checks.push_back(std::move(j));
    }
    doc["checks"] = std::move(checks);
    if (!report.rows.empty()) {
        ojson rows = ojson::array();
        for (const auto &r : report.rows) {
            ojson j;
            j["algorithm"] = r.name;
            j["queries"] = r.queries;
            j["mean_p1"] = r.mean_p1;
            j["mean_p0"] = r.mean_p0;
            j["advantage"] = r.advantage;
            j["se"] = r.standard_error;
            j["ci_low"] = r.ci_low;
            j["ci_high"] = r.ci_high;
            rows.push_back(std::move(j));
        }
        doc["rows"] = std::move(rows);
    }
    if (!report.warnings.empty()) {
        doc["warnings"] = report.warnings;
    }
    doc["pass"] = report.pass();
    return doc.dump(2) + "\n";
}

std::string render_eval(const RunConfig &config, const EvalResult &result) {
    if (config.format == OutputFormat::Csv) {
        return "value,label,accept_probability,queries\n" + fmt_double(result.value) + ',' +
               std::string(to_string(result.label)) + ',' + fmt_double(result.accept_probability) + ',' +
               std::to_string(result.queries) + '\n';
    }
    ojson doc;
    doc["schema"] = kReportSchema;
    doc["config"] = config_json(config);
    doc["value"] = result.value;
    doc["label"] = std::string(to_string(result.label));
    doc["accept_probability"] = result.accept_probability;
    doc["queries"] = result.queries;
    return doc.dump(2) + "\n";
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Forrelation toolkit: evaluation, input distributions, identity checks and separation demos"};
    app.require_subcommand(1);

    RunConfig cfg;
    double delta = 0.0;
    std::string input_path;
    std::string tree_path;
    double perturb_psi = 1.0;
    FourierOptions fopts;
    bool no_restriction = false;

    const std::map<std::string, MatrixKind> matrix_map{{"hadamard", MatrixKind::Hadamard}, {"haar", MatrixKind::Haar}};
    const std::map<std::string, OutputFormat> format_map{{"json", OutputFormat::Json}, {"csv", OutputFormat::Csv}};

    auto add_common = [&](CLI::App *sub, bool sampling) {
        sub->add_option("--n", cfg.n, "log2 of the block length N")->check(CLI::Range(0, 30));
        sub->add_option("--k", cfg.k, "number of blocks")->check(CLI::Range(2, 64));
        sub->add_option("--delta", delta, "promise gap (default 2^-5k)");
        sub->add_option("--matrix", cfg.matrix, "hadamard or haar")
            ->transform(CLI::CheckedTransformer(matrix_map, CLI::ignore_case));
        sub->add_option("--samples", cfg.samples, "Monte Carlo budget")->check(CLI::PositiveNumber);
        auto *seed = sub->add_option("--seed", cfg.seed, "random seed");
        if (sampling) {
            seed->required();
        }
        sub->add_option("--workers", cfg.workers, "worker threads")->check(CLI::Range(1, 256));
        sub->add_option("--format", cfg.format, "json or csv")
            ->transform(CLI::CheckedTransformer(format_map, CLI::ignore_case));
        sub->add_option("--out", cfg.out, "output path (default stdout)");
    };

    auto *eval = app.add_subcommand("eval", "evaluate forr_k on a ±1 input file");
    add_common(eval, false);
    eval->add_option("input", input_path, "whitespace-separated ±1 tokens, kN of them")->required();

    auto *input = app.add_subcommand("verify-input-dist", "Monte Carlo checks of the hard input distributions");
    add_common(input, true);

    auto *ident = app.add_subcommand("verify-identities", "Gaussian identity and special-function suite");
    add_common(ident, false);
    ident->add_option("--perturb-psi", perturb_psi)->group("");

    auto *four = app.add_subcommand("fourier", "Fourier checks on a tree file or on random trees");
    add_common(four, false);
    four->add_option("--tree", tree_path, "decision tree JSON file");
    four->add_option("--m", fopts.m, "variables per random tree")->check(CLI::Range(1, 24));
    four->add_option("--depth", fopts.depth, "random tree depth")->check(CLI::Range(0, 24));
    four->add_option("--count", fopts.count, "number of random trees");
    four->add_flag("--no-restriction", no_restriction, "skip restriction and weight-transfer checks");
    four->add_flag("--level-experiment", fopts.level_experiment, "report both sides of the level bound at N=2");

    auto *sep = app.add_subcommand("separation", "quantum vs classical advantage table");
    add_common(sep, true);

    if (argc >= 2 && std::string(argv[1]) == "separation") {
        cfg.n = 12;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    CLI::App *chosen = app.get_subcommands().front();
    cfg.command = chosen->get_name();
    if (chosen->count("--delta")) {
        cfg.delta = delta;
    }

    try {
        if (chosen == eval) {
            const EvalResult r = run_eval(cfg, read_file(input_path));
            write_output(cfg, render_eval(cfg, r), out);
            return 0;
        }
        VerificationReport rep;
        if (chosen == input) {
            rep = run_verify_input_dist(cfg);
        } else if (chosen == ident) {
            rep = run_verify_identities(cfg, perturb_psi);
        } else if (chosen == four) {
            fopts.restriction_checks = !no_restriction;
            std::optional<RandomizedTree> tree;
            if (!tree_path.empty()) {
                tree = tree_from_json(read_file(tree_path));
            } else if (!four->count("--seed")) {
                err << "fourier: --seed is required in random-tree mode\n";
                return 2;
            }
            rep = run_fourier(cfg, tree, fopts);
        } else {
            rep = run_separation(cfg);
        }
        for (const auto &w : rep.warnings) {
            err << "warning: " << w << '\n';
        }
        write_output(cfg, render_report(cfg, rep), out);
        return rep.pass() ? 0 : 1;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::length_error &e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range &e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace forr
