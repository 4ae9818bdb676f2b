#include "tetraverify/rmatrix.hpp"

#include <cmath>

#include "tetraverify/elliptic.hpp"

namespace tetraverify {

Rational RationalAngle::sin() const {
    return Rational(2) * t / (Rational(1) + t * t);
}

Rational RationalAngle::cos() const {
    const Rational t2 = t * t;
    return (Rational(1) - t2) / (Rational(1) + t2);
}

Rational RationalAngle::tan() const {
    const Rational denom = Rational(1) - t * t;
    if (denom.is_zero()) {
        throw ConfigError("RationalAngle::tan: cos vanishes at t = " + t.to_string());
    }
    return Rational(2) * t / denom;
}

double RationalAngle::radians() const {
    return 2.0 * std::atan(t.to_double());
}

SpectralConfig<double>::SpectralConfig(double k, std::vector<double> lambdas) : k_(k), lambdas_(std::move(lambdas)) {
    if (!(k >= 0.0 && k < 1.0)) {
        throw ConfigError("modulus k = " + std::to_string(k) + " outside [0, 1)");
    }
    for (double l : lambdas_) {
        if (!std::isfinite(l)) throw ConfigError("spectral parameter is not finite");
    }
}

double SpectralConfig<double>::lambda(int line) const {
    if (line < 1 || static_cast<std::size_t>(line) > lambdas_.size()) {
        throw std::out_of_range("line " + std::to_string(line) + " not in config");
    }
    return lambdas_[static_cast<std::size_t>(line - 1)];
}

double SpectralConfig<double>::tangent(int line) const {
    return std::tan(lambda(line));
}

SpectralConfig<Rational>::SpectralConfig(std::vector<RationalAngle> angles, double k) : angles_(std::move(angles)) {
    if (k != 0.0) {
        throw ConfigError("exact mode requires k = 0 (got " + std::to_string(k) + ")");
    }
}

const RationalAngle& SpectralConfig<Rational>::angle(int line) const {
    if (line < 1 || static_cast<std::size_t>(line) > angles_.size()) {
        throw std::out_of_range("line " + std::to_string(line) + " not in config");
    }
    return angles_[static_cast<std::size_t>(line - 1)];
}

Rational SpectralConfig<Rational>::tangent(int line) const {
    return angle(line).tan();
}

REntries<double> r_entries(double li, double lj, double k, RSign sign) {
    const double w = sign == RSign::Symmetric ? li - lj : li + lj;
    const EllipticTriple e = jacobi(w, k);
    return {e.cn, e.sn * e.dn, e.dn, k * e.sn * e.cn};
}

REntries<Rational> r_entries_exact(const RationalAngle& ai, const RationalAngle& aj, RSign sign) {
    const Rational si = ai.sin();
    const Rational ci = ai.cos();
    const Rational sj = aj.sin();
    const Rational cj = aj.cos();
    if (sign == RSign::Symmetric) {
        return {ci * cj + si * sj, si * cj - ci * sj, Rational(1), Rational(0)};
    }
    return {ci * cj - si * sj, si * cj + ci * sj, Rational(1), Rational(0)};
}

void check_pair(LinePair pair, std::size_t line_count) {
    if (pair.i >= pair.j) {
        throw std::invalid_argument("R-matrix pair (" + std::to_string(pair.i) + "," + std::to_string(pair.j) +
                                    ") must have i < j");
    }
    if (pair.i < 1 || static_cast<std::size_t>(pair.j) > line_count) {
        throw std::out_of_range("R-matrix pair (" + std::to_string(pair.i) + "," + std::to_string(pair.j) +
                                ") outside lines 1.." + std::to_string(line_count));
    }
}

RMatrix<double> r_matrix(LinePair pair, RSign sign, const ApproxConfig& config) {
    check_pair(pair, config.line_count());
    RMatrix<double> rm;
    rm.pair = pair;
    rm.sign = sign;
    rm.entries = r_entries(config.lambda(pair.i), config.lambda(pair.j), config.modulus(), sign);
    rm.body = r_body(rm.entries, sign);
    return rm;
}

RMatrix<Rational> r_matrix_exact(LinePair pair, RSign sign, const ExactConfig& config) {
    check_pair(pair, config.line_count());
    RMatrix<Rational> rm;
    rm.pair = pair;
    rm.sign = sign;
    rm.entries = r_entries_exact(config.angle(pair.i), config.angle(pair.j), sign);
    rm.body = r_body(rm.entries, sign);
    return rm;
}

}  // namespace tetraverify
