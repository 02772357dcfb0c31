#include "forrelation/forrelation.h"

#include <gtest/gtest.h>

#include <cmath>

#include "forrelation/errors.h"
#include "forrelation/gauss_id.h"
#include "oracles.h"

using namespace forr;
using namespace forr::testing;

TEST(forrelation, fast_chain_matches_dense_chain) {
    Rng rng(10);
    for (int rep = 0; rep < 100; ++rep) {
        const int n = 1 + rep % 6;
        const int k = 2 + rep % 3;
        const std::size_t N = std::size_t{1} << n;
        const Dense h = dense_hadamard(n);
        const BlockVector z = rep % 2 ? random_signs(rng, k, N) : random_cube(rng, k, N);
        ASSERT_NEAR(forr_value(z), dense_forr(z, h), 1e-10) << "n=" << n << " k=" << k;
    }
}

TEST(forrelation, dense_matrix_path_matches_hadamard_path) {
    Rng rng(11);
    const OrthogonalMatrix dense = OrthogonalMatrix::dense(16, OrthogonalMatrix::hadamard(16).to_dense());
    for (int rep = 0; rep < 10; ++rep) {
        const BlockVector z = random_cube(rng, 3, 16);
        EXPECT_NEAR(forr_value(z, dense), forr_value(z), 1e-12);
    }
}

TEST(forrelation, bounded_on_cube) {
    Rng rng(12);
    for (int rep = 0; rep < 1000; ++rep) {
        const int k = 2 + rep % 3;
        const BlockVector z = random_cube(rng, k, 32);
        ASSERT_LE(std::abs(forr_value(z)), 1.0 + 1e-10);
    }
}

TEST(forrelation, all_ones_values) {
    EXPECT_EQ(forr_value(BlockVector(3, 4, 1.0)), 1.0);
    EXPECT_EQ(forr_value(BlockVector(3, 64, 1.0)), 1.0);
    for (std::size_t N : {4u, 16u, 64u}) {
        EXPECT_EQ(forr_value(BlockVector(2, N, 1.0)), 1.0 / std::sqrt(static_cast<double>(N)));
    }
    EXPECT_EQ(forr_value(BlockVector(2, 4, 1.0)), 0.5);
}

TEST(forrelation, multilinear_in_each_block) {
    Rng rng(13);
    const BlockVector a = random_cube(rng, 3, 8);
    BlockVector b = a;
    BlockVector mix = a;
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (std::size_t i = 0; i < 8; ++i) {
        b.block(1)[i] = unif(rng);
        mix.block(1)[i] = 0.25 * a.block(1)[i] + 0.75 * b.block(1)[i];
    }
    EXPECT_NEAR(forr_value(mix), 0.25 * forr_value(a) + 0.75 * forr_value(b), 1e-14);
}

TEST(forrelation, classify_thresholds) {
    const double d = 0.1;
    EXPECT_EQ(classify(0.1, d), PartialLabel::One);
    EXPECT_EQ(classify(0.5, d), PartialLabel::One);
    EXPECT_EQ(classify(0.05, d), PartialLabel::Zero);
    EXPECT_EQ(classify(-0.05, d), PartialLabel::Zero);
    EXPECT_EQ(classify(0.07, d), PartialLabel::OutsidePromise);
    EXPECT_EQ(classify(-0.5, d), PartialLabel::OutsidePromise);
    EXPECT_EQ(to_string(PartialLabel::One), "One");
}

TEST(forrelation, exhaustive_label_witnesses_at_n2) {
    // All 2^8 boolean inputs at N = 4, k = 2 with delta = 0.4; values are multiples of 1/4.
    const ForrelationParams p = ForrelationParams::make(2, 2, 0.4);
    int seen[3] = {0, 0, 0};
    for (unsigned x = 0; x < 256; ++x) {
        BlockVector z(2, 4);
        for (std::size_t i = 0; i < 8; ++i) {
            z[i] = bit_value(x, i);
        }
        const PartialLabel l = forr_label(z, p);
        EXPECT_EQ(l, classify(dense_forr(z, dense_hadamard(2)), 0.4));
        ++seen[static_cast<int>(l)];
    }
    EXPECT_GT(seen[static_cast<int>(PartialLabel::One)], 0);
    EXPECT_GT(seen[static_cast<int>(PartialLabel::Zero)], 0);
    EXPECT_GT(seen[static_cast<int>(PartialLabel::OutsidePromise)], 0);
}

TEST(forrelation, label_input_errors) {
    const ForrelationParams p = ForrelationParams::make(2, 2);
    BlockVector z(2, 4, 1.0);
    z[3] = 0.5;
    EXPECT_THROW(forr_label(z, p), InvalidInput);
    EXPECT_THROW(forr_label(BlockVector(3, 4, 1.0), p), InvalidShape);
    EXPECT_THROW(forr_value(BlockVector(2, 6, 1.0)), InvalidDimension);
}

TEST(forrelation, params_validation) {
    const ForrelationParams p = ForrelationParams::make(8, 3);
    EXPECT_EQ(p.N, 256u);
    EXPECT_EQ(p.delta, std::ldexp(1.0, -15));
    EXPECT_EQ(ForrelationParams::default_delta(2), 1.0 / 1024.0);
    EXPECT_THROW(ForrelationParams::make(8, 1), InvalidParameter);
    EXPECT_THROW(ForrelationParams::make(8, 2, 0.0), InvalidParameter);
    EXPECT_THROW(ForrelationParams::make(8, 2, 1.5), InvalidParameter);
    EXPECT_THROW(ForrelationParams::make(-1, 2), InvalidParameter);
}

TEST(forrelation, block_shifted_product) {
    BlockVector x(2, 2, std::vector<double>{1, 2, 3, 4});
    BlockVector y(2, 2, std::vector<double>{5, 6, 7, 8});
    const BlockVector w = block_shifted_product(x, y);
    EXPECT_EQ(w, BlockVector(3, 2, std::vector<double>{1, 2, 15, 24, 7, 8}));
    EXPECT_THROW(block_shifted_product(x, BlockVector(1, 2)), InvalidShape);
}

TEST(forrelation, block_vector_accessors) {
    BlockVector z(3, 4, 1.0);
    EXPECT_TRUE(z.is_boolean());
    EXPECT_TRUE(z.within(-1.0, 1.0));
    z.block(2)[1] = -0.25;
    EXPECT_FALSE(z.is_boolean());
    EXPECT_EQ(z[9], -0.25);
    EXPECT_THROW(z.block(3), InvalidIndex);
    EXPECT_THROW(BlockVector(2, 3, std::vector<double>(5)), InvalidShape);
}

TEST(forrelation, p1_mean_closed_form_values) {
    EXPECT_NEAR(p1_mean_hadamard_closed_form(256, 2), 0.07959, 5e-6);
    EXPECT_NEAR(p1_mean_hadamard_closed_form(256, 3), 0.006335, 5e-7);
    const OrthogonalMatrix h = OrthogonalMatrix::hadamard(256);
    EXPECT_NEAR(p1_mean_exact(h, 2), p1_mean_hadamard_closed_form(256, 2), 1e-13);
    EXPECT_NEAR(p1_mean_exact(h, 3), p1_mean_hadamard_closed_form(256, 3), 1e-13);
    EXPECT_GT(p1_mean_exact(h, 2), 1.0 / 32.0);
    EXPECT_GT(p1_mean_exact(h, 3), 1.0 / 1024.0);
}

TEST(forrelation, p1_mean_matches_tuple_sum_oracle) {
    // (1/N) sum over tuples of prod_k M c(M) with c from two-dimensional quadrature.
    const Dense h = dense_hadamard(2);
    for (int k : {2, 3}) {
        double total = 0.0;
        const std::size_t N = 4;
        std::vector<std::size_t> idx(k, 0);
        while (true) {
            double term = 1.0;
            for (int b = 1; b < k; ++b) {
                const double m = h[idx[b - 1]][idx[b]];
                term *= m * check_truncated_correlation(m).quadrature;
            }
            total += term;
            int pos = 0;
            while (pos < k && ++idx[pos] == N) {
                idx[pos++] = 0;
            }
            if (pos == k) {
                break;
            }
        }
        EXPECT_NEAR(p1_mean_exact(OrthogonalMatrix::hadamard(4), k), total / N, 1e-12);
    }
}

TEST(forrelation, orthogonal_matrix_validation) {
    EXPECT_THROW(OrthogonalMatrix::dense(2, {1.0, 1.0, 0.0, 1.0}), InvalidMatrix);
    EXPECT_THROW(OrthogonalMatrix::dense(2, {1.0, 0.0, 0.0}), InvalidShape);
    const double c = std::cos(0.3);
    const double s = std::sin(0.3);
    const OrthogonalMatrix r = OrthogonalMatrix::dense(2, {c, -s, s, c});
    std::vector<double> v = {1.0, 0.0};
    r.apply_inplace(v);
    EXPECT_NEAR(v[0], c, 1e-15);
    EXPECT_NEAR(v[1], s, 1e-15);
    r.apply_transpose_inplace(v);
    EXPECT_NEAR(v[0], 1.0, 1e-15);
    EXPECT_NEAR(v[1], 0.0, 1e-15);
}
