#include "tetraverify/elliptic.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tetraverify {

namespace {

constexpr int kMaxLandenSteps = 32;

void check_modulus(double k, const char* who) {
    if (!(k >= 0.0 && k < 1.0)) {
        throw std::domain_error(std::string(who) + ": modulus " + std::to_string(k) + " outside [0, 1)");
    }
}

}  // namespace

EllipticTriple jacobi(double u, double k) {
    check_modulus(k, "jacobi");
    if (!std::isfinite(u)) {
        throw std::domain_error("jacobi: argument is not finite");
    }
    EllipticTriple out;
    out.u = u;
    out.k = k;
    if (k == 0.0) {
        out.sn = std::sin(u);
        out.cn = std::cos(u);
        out.dn = 1.0;
        return out;
    }

    // AGM sequence a_n, c_n with a_0 = 1, b_0 = k', c_0 = k.
    std::array<double, kMaxLandenSteps + 1> a{};
    std::array<double, kMaxLandenSteps + 1> c{};
    a[0] = 1.0;
    double b = std::sqrt((1.0 - k) * (1.0 + k));
    c[0] = k;
    int n = 0;
    while (std::abs(c[n]) > std::numeric_limits<double>::epsilon() * a[n]) {
        if (n == kMaxLandenSteps) {
            throw std::runtime_error("jacobi: AGM did not converge");
        }
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = std::sqrt(a[n] * b);
        ++n;
    }

    // Backward recurrence for the amplitude.
    double phi = std::ldexp(a[n] * u, n);
    for (int i = n; i > 0; --i) {
        phi = 0.5 * (phi + std::asin(c[i] / a[i] * std::sin(phi)));
    }
    out.sn = std::sin(phi);
    out.cn = std::cos(phi);
    out.dn = std::sqrt(1.0 - k * k * out.sn * out.sn);
    return out;
}

double quarter_period(double k) {
    check_modulus(k, "quarter_period");
    double a = 1.0;
    double b = std::sqrt((1.0 - k) * (1.0 + k));
    for (int i = 0; i < kMaxLandenSteps && std::abs(a - b) > std::numeric_limits<double>::epsilon() * a; ++i) {
        const double next = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = next;
    }
    return std::numbers::pi / (a + b);
}

}  // namespace tetraverify
