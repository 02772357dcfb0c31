#include "forrelation/special.h"

#include <gtest/gtest.h>

#include <boost/math/special_functions/owens_t.hpp>
#include <cmath>
#include <numbers>

#include "forrelation/errors.h"
#include "forrelation/quadrature.h"

using namespace forr;

TEST(special, density_and_cdf) {
    EXPECT_NEAR(gaussian_density(0.0), 0.3989422804014327, 1e-16);
    EXPECT_NEAR(gaussian_cdf(0.0), 0.5, 1e-16);
    EXPECT_NEAR(gaussian_cdf(1.0), 0.8413447460685429, 1e-15);
    EXPECT_NEAR(gaussian_cdf(-2.0), 0.022750131948179195, 1e-16);
    for (double a : {-3.0, -1.0, 0.2, 1.5, 3.0}) {
        EXPECT_NEAR(gaussian_cdf_series(a, 80), gaussian_cdf(a), 1e-14) << a;
        EXPECT_NEAR(truncate_phi(a), gaussian_cdf(a) - 0.5, 1e-15);
        EXPECT_NEAR(truncate_phi(-a), -truncate_phi(a), 1e-16);
    }
    EXPECT_LT(truncate_phi(40.0), 0.5 + 1e-16);
    EXPECT_THROW(gaussian_cdf_series(1.0, 0), InvalidParameter);
}

TEST(special, cdf_derivative_is_density) {
    const double h = 1e-5;
    for (double s : {-2.0, -0.3, 0.0, 0.9, 2.5}) {
        EXPECT_NEAR((gaussian_cdf(s + h) - gaussian_cdf(s - h)) / (2 * h), gaussian_density(s), 1e-9);
    }
}

TEST(special, hermite_and_density_derivatives) {
    for (double s : {-1.7, 0.0, 0.4, 2.2}) {
        EXPECT_EQ(hermite(0, s), 1.0);
        EXPECT_NEAR(hermite(3, s), s * s * s - 3 * s, 1e-13);
        EXPECT_NEAR(hermite(4, s), s * s * s * s - 6 * s * s + 3, 1e-13);
        const double h = 1e-4;
        for (int n = 0; n < 4; ++n) {
            const double fd = (gamma_derivative(n, s + h) - gamma_derivative(n, s - h)) / (2 * h);
            EXPECT_NEAR(fd, gamma_derivative(n + 1, s), 1e-7) << n << " " << s;
        }
    }
    EXPECT_NEAR(gamma_derivative(1, 1.0), -0.241971, 1e-6);
    for (int n = 1; n <= 4; ++n) {
        for (double s = -6.0; s <= 6.0; s += 0.01) {
            ASSERT_LE(std::abs(gamma_derivative(n, s)), std::pow(n, 0.5 * n));
        }
    }
    EXPECT_THROW(hermite(-1, 0.0), InvalidParameter);
}

TEST(special, psi_values_and_range) {
    EXPECT_NEAR(psi_sigma(0.0, 1.0), 0.313329, 1e-6);
    EXPECT_NEAR(psi_sigma(0.0, 1.0), std::atan(1.0) / std::sqrt(2 * std::numbers::pi), 1e-13);
    for (double sigma : {0.05, 0.3, 0.7, 1.0}) {
        for (double s = -8.0; s <= 8.0; s += 0.25) {
            const double v = psi_sigma(s, sigma);
            ASSERT_GE(v, 0.0);
            ASSERT_LE(v, 0.398942);
        }
    }
    EXPECT_THROW(psi_sigma(0.0, 0.0), InvalidParameter);
    EXPECT_THROW(psi_sigma(0.0, 1.2), InvalidParameter);
}

TEST(special, psi_series_matches_quadrature) {
    for (double sigma : {0.1, 0.5, 0.9}) {
        for (double s : {-3.0, -0.5, 0.0, 0.8, 2.0, 4.0}) {
            EXPECT_NEAR(psi_series(s, sigma, 400), psi_sigma(s, sigma), 1e-8) << s << " " << sigma;
        }
    }
    EXPECT_THROW(psi_series(1.0, 0.5, -1), InvalidParameter);
}

TEST(special, psi_owen_relation) {
    // Psi = sqrt(2 pi) e^{s^2/(2 sigma^2)} T(s/sigma, sigma) / sigma.
    for (double sigma : {0.2, 0.6, 1.0}) {
        for (double s : {0.0, 0.5, 1.3}) {
            const double rhs = std::sqrt(2 * std::numbers::pi) * std::exp(s * s / (2 * sigma * sigma)) *
                               boost::math::owens_t(s / sigma, sigma) / sigma;
            EXPECT_NEAR(psi_sigma(s, sigma), rhs, 1e-12);
        }
    }
}

TEST(special, phi_j_family) {
    for (double s : {-1.5, 0.3, 2.0}) {
        EXPECT_NEAR(phi_j(0, s), truncate_phi(s), 1e-14);
    }
    // d/ds (phi_j(s) / s) = phi_{j+1}(s).
    const double h = 1e-5;
    for (int j = 0; j < 4; ++j) {
        for (double s : {-1.2, 0.4, 0.7, 2.5}) {
            const double fd = (phi_j_over_s(j, s + h) - phi_j_over_s(j, s - h)) / (2 * h);
            EXPECT_NEAR(fd, phi_j(j + 1, s), 1e-8) << j << " " << s;
        }
    }
    EXPECT_NEAR(phi_j_over_s(0, 0.0), gaussian_density(0.0), 1e-15);
    EXPECT_THROW(phi_j(-1, 0.0), InvalidParameter);
}

TEST(special, owen_t_forms) {
    EXPECT_NEAR(owen_t(0.0, 1.0, OwenForm::Single), 0.125, 1e-12);
    EXPECT_NEAR(owen_t(0.0, 1.0, OwenForm::Double), 0.125, 1e-12);
    for (int i = 0; i < 20; ++i) {
        const double h = 4.0 * i / 19.0;
        for (int j = 0; j < 10; ++j) {
            const double a = j / 9.0;
            const double single = owen_t(h, a, OwenForm::Single);
            ASSERT_NEAR(single, owen_t(h, a, OwenForm::Double), 1e-10) << h << " " << a;
            ASSERT_NEAR(single, boost::math::owens_t(h, a), 1e-12) << h << " " << a;
        }
    }
    EXPECT_NEAR(owen_t(-1.1, 0.4), owen_t(1.1, 0.4), 1e-15);
}

TEST(special, truncated_correlation_closed_form) {
    EXPECT_NEAR(truncated_correlation_closed_form(1.0), 1.0 / 12.0, 1e-15);
    EXPECT_NEAR(truncated_correlation_closed_form(0.0), 0.0, 1e-16);
    EXPECT_NEAR(truncated_correlation_closed_form(-0.3), -truncated_correlation_closed_form(0.3), 1e-16);
    EXPECT_THROW(truncated_correlation_closed_form(1.01), InvalidParameter);
}

TEST(special, quadrature_helpers) {
    EXPECT_NEAR(integrate([](double x) { return x * x; }, 0.0, 3.0), 9.0, 1e-12);
    EXPECT_NEAR(integrate([](double x) { return std::exp(x); }, 1.0, 0.0), 1.0 - std::numbers::e, 1e-13);
    EXPECT_EQ(integrate([](double) { return 1.0; }, 2.0, 2.0), 0.0);
    EXPECT_NEAR(integrate([](double x) { return std::cos(x); }, 0.0, 1e-6), std::sin(1e-6), 1e-20);

    const HermiteRule &r = HermiteRule::get(20);
    double m0 = 0.0;
    double m2 = 0.0;
    double m4 = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        m0 += r.weights[i];
        m2 += r.weights[i] * std::pow(r.nodes[i], 2);
        m4 += r.weights[i] * std::pow(r.nodes[i], 4);
    }
    EXPECT_NEAR(m0, 1.0, 1e-13);
    EXPECT_NEAR(m2, 1.0, 1e-13);
    EXPECT_NEAR(m4, 3.0, 1e-12);

    // E[X Y] for a singular covariance.
    const std::vector<double> cov = {1.0, 1.0, 1.0, 1.0};
    EXPECT_NEAR(gaussian_expectation([](std::span<const double> x) { return x[0] * x[1]; }, cov, 2), 1.0, 1e-12);
    EXPECT_THROW(HermiteRule::get(0), InvalidParameter);
}
