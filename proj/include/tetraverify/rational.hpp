#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>
#include <Eigen/Core>

namespace tetraverify {

/// Exact arbitrary-precision rational, always in canonical form.
///
/// Thin value wrapper over mpq_class. Every operator returns a Rational
/// rather than a gmpxx expression template, which is what Eigen's generic
/// kernels expect of a scalar type.
class Rational {
public:
    Rational() = default;
    Rational(int value) : value_(value) {}            // NOLINT(google-explicit-constructor)
    Rational(long value) : value_(value) {}           // NOLINT(google-explicit-constructor)
    Rational(long long value) : value_(static_cast<long>(value)) {}  // NOLINT
    Rational(long num, long den);
    explicit Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

    /// Parses "p", "p/q" or "-p/q". Throws std::invalid_argument on bad input
    /// or a zero denominator.
    static Rational parse(std::string_view text);

    const mpq_class& gmp() const { return value_; }
    mpz_class numerator() const { return value_.get_num(); }
    mpz_class denominator() const { return value_.get_den(); }

    bool is_zero() const { return sgn(value_) == 0; }
    int sign() const { return sgn(value_); }
    double to_double() const { return value_.get_d(); }

    /// Combined bit length of numerator and denominator.
    std::size_t bit_size() const;

    /// "p/q", or "p" when the denominator is 1.
    std::string to_string() const;

    Rational& operator+=(const Rational& rhs) { value_ += rhs.value_; return *this; }
    Rational& operator-=(const Rational& rhs) { value_ -= rhs.value_; return *this; }
    Rational& operator*=(const Rational& rhs) { value_ *= rhs.value_; return *this; }
    Rational& operator/=(const Rational& rhs);

    friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
    friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
    friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
    friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
    friend Rational operator-(const Rational& x) { return Rational(mpq_class(-x.value_)); }
    friend Rational operator+(const Rational& x) { return x; }

    friend bool operator==(const Rational& lhs, const Rational& rhs) { return lhs.value_ == rhs.value_; }
    friend std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) {
        const int c = cmp(lhs.value_, rhs.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& x) { return os << x.to_string(); }

private:
    mpq_class value_{0};
};

inline Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }
inline Rational abs2(const Rational& x) { return x * x; }
inline const Rational& conj(const Rational& x) { return x; }
inline const Rational& real(const Rational& x) { return x; }
inline Rational imag(const Rational&) { return Rational(0); }

}  // namespace tetraverify

namespace Eigen {

template <>
struct NumTraits<tetraverify::Rational> : GenericNumTraits<tetraverify::Rational> {
    using Real = tetraverify::Rational;
    using NonInteger = tetraverify::Rational;
    using Nested = tetraverify::Rational;
    using Literal = tetraverify::Rational;

    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 4,
        AddCost = 16,
        MulCost = 32
    };

    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
    static inline int max_digits10() { return 0; }
};

}  // namespace Eigen
