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

#include "forrelation/polynomial.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "forrelation/errors.h"

namespace forr {

Polynomial Polynomial::constant(std::size_t vars, double c) {
    Polynomial p(vars);
    p.add_term(Exponents(vars, 0), c);
    return p;
}

Polynomial Polynomial::variable(std::size_t vars, std::size_t i) {
    if (i >= vars) {
        throw InvalidIndex("variable index out of range");
    }
    Polynomial p(vars);
    Exponents e(vars, 0);
    e[i] = 1;
    p.add_term(e, 1.0);
    return p;
}

void Polynomial::add_term(const Exponents &e, double c) {
    if (e.size() != vars_) {
        throw InvalidShape("exponent vector has wrong length");
    }
    for (int x : e) {
        if (x < 0) {
            throw InvalidParameter("negative exponent");
        }
    }
    double &slot = terms_[e];
    slot += c;
    if (slot == 0.0) {
        terms_.erase(e);
    }
}

int Polynomial::degree() const {
    int best = 0;
    for (const auto &[e, c] : terms_) {
        int d = 0;
        for (int x : e) {
            d += x;
        }
        best = std::max(best, d);
    }
    return best;
}

bool Polynomial::is_multilinear() const {
    for (const auto &[e, c] : terms_) {
        for (int x : e) {
            if (x > 1) {
                return false;
            }
        }
    }
    return true;
}

Polynomial Polynomial::derivative(std::size_t i) const {
    if (i >= vars_) {
        throw InvalidIndex("variable index out of range");
    }
    Polynomial out(vars_);
    for (const auto &[e, c] : terms_) {
        if (e[i] == 0) {
            continue;
        }
        Exponents d = e;
        d[i] -= 1;
        out.add_term(d, c * e[i]);
    }
    return out;
}

double Polynomial::evaluate(std::span<const double> x) const {
    if (x.size() != vars_) {
        throw InvalidShape("point has wrong dimension");
    }
    double total = 0.0;
    for (const auto &[e, c] : terms_) {
        double term = c;
        for (std::size_t i = 0; i < vars_; ++i) {
            for (int p = 0; p < e[i]; ++p) {
                term *= x[i];
            }
        }
        total += term;
    }
    return total;
}

Polynomial Polynomial::operator+(const Polynomial &other) const {
    if (other.vars_ != vars_) {
        throw InvalidShape("polynomials over different variable counts");
    }
    Polynomial out = *this;
    for (const auto &[e, c] : other.terms_) {
        out.add_term(e, c);
    }
    return out;
}

Polynomial Polynomial::operator*(const Polynomial &other) const {
    if (other.vars_ != vars_) {
        throw InvalidShape("polynomials over different variable counts");
    }
    Polynomial out(vars_);
    for (const auto &[ea, ca] : terms_) {
        for (const auto &[eb, cb] : other.terms_) {
            Exponents e(vars_);
            for (std::size_t i = 0; i < vars_; ++i) {
                e[i] = ea[i] + eb[i];
            }
            out.add_term(e, ca * cb);
        }
    }
    return out;
}

Polynomial Polynomial::operator*(double c) const {
    Polynomial out(vars_);
    for (const auto &[e, v] : terms_) {
        out.add_term(e, v * c);
    }
    return out;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (const auto &[e, c] : terms_) {
        if (!first) {
            os << " + ";
        }
        first = false;
        os << c;
        for (std::size_t i = 0; i < vars_; ++i) {
            if (e[i] == 1) {
                os << "*x" << i;
            } else if (e[i] > 1) {
                os << "*x" << i << "^" << e[i];
            }
        }
    }
    return os.str();
}

}  // namespace forr
