#include "forrelation/polynomial.h"

#include <gtest/gtest.h>

#include "forrelation/errors.h"

using namespace forr;

namespace {

// 3 x0^2 x1 - 2 x1 + 0.5
Polynomial sample() {
    Polynomial p(2);
    p.add_term({2, 1}, 3.0);
    p.add_term({0, 1}, -2.0);
    p.add_term({0, 0}, 0.5);
    return p;
}

}  // namespace

TEST(polynomial, evaluate_and_degree) {
    const Polynomial p = sample();
    EXPECT_EQ(p.degree(), 3);
    EXPECT_FALSE(p.is_multilinear());
    EXPECT_DOUBLE_EQ(p.evaluate(std::vector<double>{2.0, -1.0}), -12.0 + 2.0 + 0.5);
    EXPECT_EQ(Polynomial(3).degree(), 0);
    EXPECT_TRUE(Polynomial::variable(3, 2).is_multilinear());
}

TEST(polynomial, derivative) {
    const Polynomial d0 = sample().derivative(0);
    const Polynomial d1 = sample().derivative(1);
    const std::vector<double> x = {1.5, 0.7};
    EXPECT_DOUBLE_EQ(d0.evaluate(x), 6.0 * 1.5 * 0.7);
    EXPECT_DOUBLE_EQ(d1.evaluate(x), 3.0 * 1.5 * 1.5 - 2.0);
    EXPECT_THROW(sample().derivative(2), InvalidIndex);
}

TEST(polynomial, arithmetic) {
    const Polynomial p = sample();
    const Polynomial q = Polynomial::variable(2, 0) + Polynomial::constant(2, 1.0);
    const std::vector<double> x = {-0.3, 1.1};
    EXPECT_NEAR((p * q).evaluate(x), p.evaluate(x) * q.evaluate(x), 1e-14);
    EXPECT_NEAR((p + q).evaluate(x), p.evaluate(x) + q.evaluate(x), 1e-14);
    EXPECT_NEAR((p * 2.5).evaluate(x), 2.5 * p.evaluate(x), 1e-14);
    EXPECT_TRUE((p + p * -1.0).terms().empty());
    EXPECT_THROW(p + Polynomial(3), InvalidShape);
}

TEST(polynomial, term_guards) {
    Polynomial p(2);
    p.add_term({1, 0}, 0.0);
    EXPECT_TRUE(p.terms().empty());
    EXPECT_THROW(p.add_term({1}, 1.0), InvalidShape);
    EXPECT_THROW(p.add_term({-1, 0}, 1.0), InvalidParameter);
    EXPECT_THROW(p.evaluate(std::vector<double>{1.0}), InvalidShape);
    EXPECT_FALSE(sample().to_string().empty());
}
