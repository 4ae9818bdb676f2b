#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "tetraverify/linalg.hpp"
#include "tetraverify/rational.hpp"

namespace tetraverify {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A point on the unit circle parametrized by its tangent half-angle t:
/// sin = 2t/(1+t^2), cos = (1-t^2)/(1+t^2). Both are exact rationals.
struct RationalAngle {
    Rational t;

    Rational sin() const;
    Rational cos() const;
    /// tan = 2t/(1-t^2). Throws ConfigError at t = +-1, where cos = 0.
    Rational tan() const;
    double radians() const;

    friend bool operator==(const RationalAngle&, const RationalAngle&) = default;
};

/// Per-line spectral parameters and the elliptic modulus, one
/// specialization per scalar mode.
template <class Scalar>
class SpectralConfig;

/// Approx mode: real spectral parameters lambda_i and modulus k in [0, 1).
template <>
class SpectralConfig<double> {
public:
    SpectralConfig(double k, std::vector<double> lambdas);

    double modulus() const { return k_; }
    std::size_t line_count() const { return lambdas_.size(); }
    /// 1-based line label.
    double lambda(int line) const;
    double tangent(int line) const;
    const std::vector<double>& lambdas() const { return lambdas_; }

private:
    double k_;
    std::vector<double> lambdas_;
};

/// Exact mode: rational unit-circle points. The modulus is always 0.
template <>
class SpectralConfig<Rational> {
public:
    explicit SpectralConfig(std::vector<RationalAngle> angles, double k = 0.0);

    double modulus() const { return 0.0; }
    std::size_t line_count() const { return angles_.size(); }
    const RationalAngle& angle(int line) const;
    Rational tangent(int line) const;
    const std::vector<RationalAngle>& angles() const { return angles_; }

private:
    std::vector<RationalAngle> angles_;
};

using ApproxConfig = SpectralConfig<double>;
using ExactConfig = SpectralConfig<Rational>;

/// Ordered line pair i < j, 1-based.
struct LinePair {
    int i = 1;
    int j = 2;
    friend bool operator==(const LinePair&, const LinePair&) = default;
};

enum class RSign { Symmetric = 0, Twisted = 1 };

template <class Scalar>
struct REntries {
    Scalar a;
    Scalar b;
    Scalar c;
    Scalar d;
};

/// Two-line operator on V_i (x) V_j. The sign-1 minus signs are baked into
/// `body`; `entries` holds the unsigned a', b', c', d'.
template <class Scalar>
struct RMatrix {
    LinePair pair;
    RSign sign = RSign::Symmetric;
    REntries<Scalar> entries;
    Matrix<Scalar> body;
};

/// (cn w, sn w dn w, dn w, k sn w cn w) with w = li - lj (sign 0) or li + lj (sign 1).
REntries<double> r_entries(double li, double lj, double k, RSign sign);

/// k = 0 entries from exact angle addition: (cos w, sin w, 1, 0).
REntries<Rational> r_entries_exact(const RationalAngle& ai, const RationalAngle& aj, RSign sign);

/// Lays the entries out with the checkerboard pattern of the sign.
template <class Scalar>
Matrix<Scalar> r_body(const REntries<Scalar>& e, RSign sign) {
    Matrix<Scalar> m = Matrix<Scalar>::Zero(4, 4);
    if (sign == RSign::Symmetric) {
        m(0, 0) = e.a; m(0, 3) = e.d;
        m(1, 1) = e.b; m(1, 2) = e.c;
        m(2, 1) = e.c; m(2, 2) = e.b;
        m(3, 0) = e.d; m(3, 3) = e.a;
    } else {
        m(0, 0) = -e.a; m(0, 3) = e.d;
        m(1, 1) = -e.b; m(1, 2) = e.c;
        m(2, 1) = -e.c; m(2, 2) = e.b;
        m(3, 0) = -e.d; m(3, 3) = e.a;
    }
    return m;
}

void check_pair(LinePair pair, std::size_t line_count);

RMatrix<double> r_matrix(LinePair pair, RSign sign, const ApproxConfig& config);
RMatrix<Rational> r_matrix_exact(LinePair pair, RSign sign, const ExactConfig& config);

inline RMatrix<Rational> r_matrix(LinePair pair, RSign sign, const ExactConfig& config) {
    return r_matrix_exact(pair, sign, config);
}

/// The body placed at sites (pair.i, pair.j) of an n-line register.
template <class Scalar>
Matrix<Scalar> embed_r(const RMatrix<Scalar>& rm, int n_lines) {
    const int sites[] = {rm.pair.i, rm.pair.j};
    return embed_sites(rm.body, std::span<const int>(sites), n_lines);
}

/// The body placed at explicit sites, for local registers that relabel lines.
template <class Scalar>
Matrix<Scalar> embed_r(const RMatrix<Scalar>& rm, int site_i, int site_j, int n_lines) {
    const int sites[] = {site_i, site_j};
    return embed_sites(rm.body, std::span<const int>(sites), n_lines);
}

}  // namespace tetraverify
