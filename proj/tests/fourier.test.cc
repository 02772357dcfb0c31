#include "forrelation/fourier.h"

#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "forrelation/errors.h"
#include "oracles.h"

using namespace forr;
using namespace forr::testing;

namespace {

double point_probability(std::uint64_t x, const BiasVector &mu) {
    double p = 1.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        p *= 0.5 * (1.0 + mu.mu(i) * bit_value(x, i));
    }
    return p;
}

double character_value(std::uint64_t S, std::uint64_t x, const BiasVector &mu) {
    double c = 1.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if ((S >> i) & 1u) {
            c *= mu.character(i, bit_value(x, i));
        }
    }
    return c;
}

// f̂^μ(S) = E_{p_μ}[f φ^μ_S] by direct summation.
std::vector<double> brute_transform(const std::vector<double> &f, const BiasVector &mu) {
    const std::size_t size = f.size();
    std::vector<double> c(size, 0.0);
    for (std::uint64_t S = 0; S < size; ++S) {
        for (std::uint64_t x = 0; x < size; ++x) {
            c[S] += point_probability(x, mu) * f[x] * character_value(S, x, mu);
        }
    }
    return c;
}

std::vector<double> random_table(Rng &rng, std::size_t m) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> f(std::size_t{1} << m);
    for (double &v : f) {
        v = unif(rng);
    }
    return f;
}

BiasVector random_bias(Rng &rng, std::size_t m) {
    std::uniform_real_distribution<double> unif(-0.5, 0.5);
    std::vector<double> mu(m);
    for (double &v : mu) {
        v = unif(rng);
    }
    return BiasVector(mu);
}

Restriction random_restriction(Rng &rng, std::size_t m) {
    std::uniform_int_distribution<int> pick(-1, 1);
    Restriction rho(m);
    for (int &r : rho) {
        r = pick(rng);
    }
    return rho;
}

}  // namespace

TEST(fourier, constant_function_any_basis) {
    Rng rng(60);
    const std::vector<double> one(8, 1.0);
    for (const BiasVector &mu : {BiasVector::uniform(3), random_bias(rng, 3)}) {
        const FourierTable t = transform(one, mu);
        EXPECT_NEAR(t.coeffs[0], 1.0, 1e-15);
        for (std::size_t s = 1; s < 8; ++s) {
            EXPECT_NEAR(t.coeffs[s], 0.0, 1e-15);
        }
    }
}

TEST(fourier, dictator_in_biased_basis) {
    const std::vector<double> x1 = {1.0, -1.0};
    const FourierTable t = transform(x1, BiasVector({0.5}));
    EXPECT_NEAR(t.coeffs[0], 0.5, 1e-15);
    EXPECT_NEAR(t.coeffs[1], std::sqrt(0.75), 1e-15);
    EXPECT_NEAR(t.coeffs[1], 0.86603, 1e-5);
}

TEST(fourier, transforms_match_definition) {
    Rng rng(61);
    for (std::size_t m : {1u, 3u, 6u}) {
        const auto f = random_table(rng, m);
        for (const BiasVector &mu : {BiasVector::uniform(m), random_bias(rng, m)}) {
            const FourierTable t = transform(f, mu);
            const auto expect = brute_transform(f, mu);
            for (std::size_t s = 0; s < f.size(); ++s) {
                ASSERT_NEAR(t.coeffs[s], expect[s], 1e-12);
            }
        }
    }
}

TEST(fourier, reconstruction_at_m10) {
    Rng rng(62);
    const auto f = random_table(rng, 10);
    for (const BiasVector &mu : {BiasVector::uniform(10), random_bias(rng, 10)}) {
        const auto back = inverse_transform(transform(f, mu));
        for (std::size_t i = 0; i < f.size(); ++i) {
            ASSERT_NEAR(back[i], f[i], 1e-12);
        }
    }
}

TEST(fourier, parseval_both_bases) {
    Rng rng(63);
    for (std::size_t m : {2u, 8u, 12u}) {
        const auto f = random_table(rng, m);
        for (const BiasVector &mu : {BiasVector::uniform(m), random_bias(rng, m)}) {
            std::vector<double> sq(f.size());
            for (std::size_t i = 0; i < f.size(); ++i) {
                sq[i] = f[i] * f[i];
            }
            ASSERT_NEAR(squared_mass(transform(f, mu)), expectation(sq, mu), 1e-12) << m;
        }
    }
}

TEST(fourier, biased_orthonormality) {
    Rng rng(64);
    for (std::size_t m : {1u, 4u, 8u}) {
        const BiasVector mu = random_bias(rng, m);
        std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t{1} << m) - 1);
        for (int rep = 0; rep < 40; ++rep) {
            const std::uint64_t S = pick(rng);
            const std::uint64_t T = rep % 2 ? S : pick(rng);
            ASSERT_NEAR(character_inner_product(mu, S, T), S == T ? 1.0 : 0.0, 1e-12);
        }
    }
}

TEST(fourier, level_weights) {
    // x1 x2: bit set means -1, so the table is the product of signs.
    std::vector<double> f(4);
    for (std::uint64_t x = 0; x < 4; ++x) {
        f[x] = bit_value(x, 0) * bit_value(x, 1);
    }
    const FourierTable t = transform(f);
    EXPECT_NEAR(level_weight(t, 0), 0.0, 1e-15);
    EXPECT_NEAR(level_weight(t, 1), 0.0, 1e-15);
    EXPECT_NEAR(level_weight(t, 2), 1.0, 1e-15);

    const std::vector<double> q = {1.0, 0.0};
    const FourierTable tq = transform(q);
    EXPECT_NEAR(level_weight(tq, 0), 0.5, 1e-15);
    EXPECT_NEAR(level_weight(tq, 1), 0.5, 1e-15);
}

TEST(fourier, depth3_binomial_weight_bound) {
    Rng rng(65);
    const double binom[] = {1, 3, 3, 1};
    for (int rep = 0; rep < 50; ++rep) {
        const FourierTable t = transform(tree_accept_function(random_tree(rng, 8, 3), 8));
        for (std::size_t l = 0; l <= 3; ++l) {
            ASSERT_LE(level_weight(t, l), binom[l] + 1e-12);
        }
        for (std::size_t l = 4; l <= 8; ++l) {
            ASSERT_LE(level_weight(t, l), 1e-12);
        }
    }
}

TEST(fourier, harmonic_extension) {
    Rng rng(66);
    const std::size_t m = 6;
    const auto f = random_table(rng, m);
    const FourierTable t = transform(f);
    for (std::uint64_t x = 0; x < f.size(); ++x) {
        std::vector<double> pt(m);
        for (std::size_t i = 0; i < m; ++i) {
            pt[i] = bit_value(x, i);
        }
        ASSERT_NEAR(harmonic_extend(t, pt), f[x], 1e-12);
    }
    EXPECT_NEAR(harmonic_extend(t, std::vector<double>(m, 0.0)), t.coeffs[0], 1e-15);

    double fmax = 0.0;
    for (double v : f) {
        fmax = std::max(fmax, std::abs(v));
    }
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> pt(m);
        for (double &v : pt) {
            v = unif(rng);
        }
        const double h = harmonic_extend(t, pt);
        ASSERT_NEAR(h, interpolation_weight_extend(f, pt), 1e-12);
        ASSERT_LE(std::abs(h), fmax + 1e-12);
    }
}

TEST(fourier, discrete_derivatives) {
    std::vector<double> f(4);
    for (std::uint64_t x = 0; x < 4; ++x) {
        f[x] = bit_value(x, 0) * bit_value(x, 1);
    }
    const FourierTable t = transform(f);
    EXPECT_EQ(discrete_derivative(t, 0).coeffs, t.coeffs);
    const FourierTable d = discrete_derivative(t, 0b01);
    EXPECT_NEAR(d.coeffs[0b10], 1.0, 1e-15);
    EXPECT_NEAR(d.coeffs[0b11], 0.0, 1e-15);
    EXPECT_NEAR(d.coeffs[0b00], 0.0, 1e-15);

    Rng rng(67);
    const std::size_t m = 5;
    const auto g = random_table(rng, m);
    const BiasVector mu = random_bias(rng, m);
    const FourierTable tb = transform(g, mu);
    const FourierTable tu = transform(g);
    for (std::uint64_t S = 0; S < g.size(); ++S) {
        ASSERT_NEAR(harmonic_extend(discrete_derivative(tb, S), mu.mus()), tb.coeffs[S], 1e-12);
        ASSERT_NEAR(harmonic_extend(discrete_derivative(tu, S), std::vector<double>(m, 0.0)), tu.coeffs[S], 1e-12);
    }
}

TEST(fourier, restrict_trivial_cases) {
    Rng rng(68);
    const auto f = random_table(rng, 4);
    const FourierTable t = transform(f);
    const FourierTable all_free = restrict(t, Restriction(4, 0));
    for (std::size_t s = 0; s < f.size(); ++s) {
        EXPECT_NEAR(all_free.coeffs[s], t.coeffs[s], 1e-15);
    }
    const Restriction fixed = {1, -1, -1, 1};
    const FourierTable c = restrict(t, fixed);
    EXPECT_EQ(c.m, 0u);
    ASSERT_EQ(c.coeffs.size(), 1u);
    EXPECT_NEAR(c.coeffs[0], f[0b0110], 1e-12);
}

TEST(fourier, restrict_two_paths) {
    Rng rng(69);
    const std::size_t m = 6;
    for (int rep = 0; rep < 30; ++rep) {
        const auto f = random_table(rng, m);
        const Restriction rho = random_restriction(rng, m);
        const FourierTable direct = transform(restrict_values(f, rho));
        const FourierTable via = restrict(transform(f), rho);
        ASSERT_EQ(direct.m, via.m);
        for (std::size_t s = 0; s < direct.coeffs.size(); ++s) {
            ASSERT_NEAR(direct.coeffs[s], via.coeffs[s], 1e-12);
        }

        // Biased restrictions keep the free coordinates' bias.
        const BiasVector mu = random_bias(rng, m);
        std::vector<double> free_mu;
        for (std::size_t i = 0; i < m; ++i) {
            if (rho[i] == 0) {
                free_mu.push_back(mu.mu(i));
            }
        }
        const FourierTable vb = restrict(transform(f, mu), rho);
        const FourierTable db = transform(restrict_values(f, rho), BiasVector(free_mu));
        EXPECT_EQ(vb.bias, db.bias);
        for (std::size_t s = 0; s < db.coeffs.size(); ++s) {
            ASSERT_NEAR(db.coeffs[s], vb.coeffs[s], 1e-12);
        }
    }
}

TEST(fourier, restriction_identity_examples) {
    const FourierTable x = transform(std::vector<double>{1.0, -1.0});
    const IdentityCheck c = check_restriction_identity(x, BiasVector({0.5}), 1);
    EXPECT_NEAR(c.lhs, 0.375, 1e-15);
    EXPECT_NEAR(c.rhs, 0.375, 1e-15);
    EXPECT_TRUE(c.pass);

    Rng rng(70);
    const auto f = random_table(rng, 5);
    const BiasVector mu = random_bias(rng, 5);
    const IdentityCheck e = check_restriction_identity(transform(f), mu, 0);
    EXPECT_NEAR(e.lhs, expectation(f, mu), 1e-12);
    EXPECT_TRUE(e.pass);
}

TEST(fourier, restriction_identity_random_m8) {
    Rng rng(71);
    std::uniform_int_distribution<std::uint64_t> pick(0, 255);
    for (int rep = 0; rep < 100; ++rep) {
        const FourierTable t = transform(random_table(rng, 8));
        const IdentityCheck c = check_restriction_identity(t, random_bias(rng, 8), pick(rng));
        ASSERT_TRUE(c.pass) << c.lhs << " vs " << c.rhs;
        ASSERT_LE(std::abs(c.lhs - c.rhs), 1e-10);
    }
}

TEST(fourier, restriction_identity_cross_enumeration) {
    Rng rng(72);
    for (std::size_t m = 1; m <= 6; ++m) {
        for (int rep = 0; rep < 5; ++rep) {
            const FourierTable t = transform(random_table(rng, m));
            const BiasVector mu = random_bias(rng, m);
            for (std::uint64_t S = 0; S < t.coeffs.size(); ++S) {
                const IdentityCheck c = check_restriction_identity(t, mu, S);
                ASSERT_NEAR(restriction_expectation_enumerated(t, mu, S), c.lhs, 1e-12);
            }
        }
    }
}

TEST(fourier, weight_transfer_examples) {
    const RandomizedTree single(DecisionTree::single_query(1, 0));
    const BiasVector mu({0.3});
    const WeightTransferCheck c = check_weight_transfer(single, mu, 1);
    EXPECT_NEAR(c.biased_weight, 0.5 * mu.sigma(0), 1e-15);
    EXPECT_NEAR(c.bound, 2.0, 1e-15);
    EXPECT_TRUE(c.pass);

    Rng rng(73);
    const RandomizedTree t(random_tree(rng, 6, 3));
    for (std::size_t l = 0; l <= 3; ++l) {
        const WeightTransferCheck u = check_weight_transfer(t, BiasVector::uniform(6), l);
        EXPECT_NEAR(u.biased_weight, level_weight(transform(tree_accept_function(t, 6)), l), 1e-12);
        EXPECT_TRUE(u.pass);
    }
}

TEST(fourier, weight_transfer_random_trees) {
    Rng rng(74);
    for (int rep = 0; rep < 100; ++rep) {
        const RandomizedTree t(random_tree(rng, 8, 3));
        const BiasVector mu = random_bias(rng, 8);
        for (std::size_t l = 0; l <= 3; ++l) {
            const WeightTransferCheck c = check_weight_transfer(t, mu, l);
            ASSERT_TRUE(c.pass) << c.biased_weight << " > " << c.bound;
        }
    }
}

TEST(fourier, guards) {
    EXPECT_THROW(BiasVector({0.6}), InvalidParameter);
    EXPECT_THROW(transform(std::vector<double>(6, 0.0)), InvalidShape);
    EXPECT_THROW(transform(std::vector<double>(4, 0.0), BiasVector::uniform(3)), InvalidShape);
    const FourierTable big = transform(std::vector<double>(std::size_t{1} << 11, 0.0));
    EXPECT_THROW(check_restriction_identity(big, BiasVector::uniform(11), 0), ResourceLimit);
    const RandomizedTree wide(DecisionTree::single_query(11, 0));
    EXPECT_THROW(check_weight_transfer(wide, BiasVector::uniform(11), 1), ResourceLimit);
}

TEST(fourier, shape_ratio_is_finite) {
    Rng rng(75);
    const FourierTable t = transform(tree_accept_function(random_tree(rng, 10, 3), 10));
    for (std::size_t l = 1; l <= 3; ++l) {
        const double r = level_weight_shape_ratio(t, 3, l);
        EXPECT_TRUE(std::isfinite(r));
        EXPECT_GE(r, 0.0);
    }
}
