#include "tetraverify/rational.hpp"

#include <stdexcept>

namespace tetraverify {

Rational::Rational(long num, long den) {
    if (den == 0) {
        throw std::invalid_argument("Rational: zero denominator");
    }
    value_ = mpq_class(num, den);
    value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
    const std::string s(text);
    if (s.empty()) {
        throw std::invalid_argument("Rational::parse: empty string");
    }
    mpq_class q;
    if (q.set_str(s, 10) != 0) {
        throw std::invalid_argument("Rational::parse: not a rational: '" + s + "'");
    }
    if (sgn(q.get_den()) == 0) {
        throw std::invalid_argument("Rational::parse: zero denominator: '" + s + "'");
    }
    return Rational(std::move(q));
}

std::size_t Rational::bit_size() const {
    return mpz_sizeinbase(value_.get_num_mpz_t(), 2) + mpz_sizeinbase(value_.get_den_mpz_t(), 2);
}

std::string Rational::to_string() const {
    return value_.get_str(10);
}

Rational& Rational::operator/=(const Rational& rhs) {
    if (rhs.is_zero()) {
        throw std::domain_error("Rational: division by zero");
    }
    value_ /= rhs.value_;
    return *this;
}

}  // namespace tetraverify
