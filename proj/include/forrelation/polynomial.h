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
#include <map>
#include <span>
#include <string>
#include <vector>

namespace forr {

/// Sparse real polynomial in a fixed number of variables; terms keyed by exponent vectors.
class Polynomial {
   public:
    using Exponents = std::vector<int>;

    explicit Polynomial(std::size_t vars = 0) : vars_(vars) {}

    static Polynomial constant(std::size_t vars, double c);
    static Polynomial variable(std::size_t vars, std::size_t i);

    std::size_t vars() const { return vars_; }
    const std::map<Exponents, double> &terms() const { return terms_; }

    /// Adds c * prod_i x_i^{e_i}; exact zero coefficients are dropped.
    void add_term(const Exponents &e, double c);

    int degree() const;
    bool is_multilinear() const;

    Polynomial derivative(std::size_t i) const;
    double evaluate(std::span<const double> x) const;

    Polynomial operator+(const Polynomial &other) const;
    Polynomial operator*(const Polynomial &other) const;
    Polynomial operator*(double c) const;

    std::string to_string() const;

   private:
    std::size_t vars_;
    std::map<Exponents, double> terms_;
};

}  // namespace forr
