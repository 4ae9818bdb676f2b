#include <doctest.h>

#include <cmath>
#include <random>

#include "tetraverify/oracles.hpp"
#include "tetraverify/rmatrix.hpp"
#include "tetraverify/sampling.hpp"

using namespace tetraverify;

namespace {

// 1-based positions allowed to be nonzero.
bool in_pattern(Eigen::Index r, Eigen::Index c) {
    return r == c || r + c == 3;
}

Eigen::Matrix4d swap_pattern() {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 0) = 1;
    m(1, 2) = 1;
    m(2, 1) = 1;
    m(3, 3) = 1;
    return m;
}

}  // namespace

TEST_CASE("r_entries") {
    SUBCASE("equal parameters, sign 0") {
        for (double k : {0.0, 0.4, 0.8}) {
            const REntries<double> e = r_entries(0.6, 0.6, k, RSign::Symmetric);
            CHECK(e.a == 1.0);
            CHECK(e.b == 0.0);
            CHECK(e.c == 1.0);
            CHECK(e.d == 0.0);
        }
    }
    SUBCASE("k = 0 gives (cos w, sin w, 1, 0)") {
        const REntries<double> e0 = r_entries(0.9, 0.2, 0.0, RSign::Symmetric);
        CHECK(e0.a == doctest::Approx(std::cos(0.7)).epsilon(1e-15));
        CHECK(e0.b == doctest::Approx(std::sin(0.7)).epsilon(1e-15));
        CHECK(e0.c == 1.0);
        CHECK(e0.d == 0.0);
        const REntries<double> e1 = r_entries(0.9, 0.2, 0.0, RSign::Twisted);
        CHECK(e1.a == doctest::Approx(std::cos(1.1)).epsilon(1e-15));
        CHECK(e1.b == doctest::Approx(std::sin(1.1)).epsilon(1e-15));
    }
    SUBCASE("free-fermion identity at k = 0.5") {
        const REntries<double> e = r_entries(0.3, 0.1, 0.5, RSign::Symmetric);
        CHECK(std::abs(e.a * e.a + e.b * e.b - e.c * e.c - e.d * e.d) <= 1e-14);
    }
    SUBCASE("invalid modulus") {
        CHECK_THROWS(r_entries(0.3, 0.1, 1.2, RSign::Symmetric));
    }
}

TEST_CASE("r_matrix") {
    SUBCASE("sign 0 at equal parameters is the swap pattern for any k") {
        for (double k : {0.0, 0.35, 0.9}) {
            const ApproxConfig config(k, {0.4, 0.4, -0.2});
            CHECK(r_matrix({1, 2}, RSign::Symmetric, config).body == Eigen::MatrixXd(swap_pattern()));
        }
    }
    SUBCASE("sign 1 at zero sum, k = 0") {
        const ApproxConfig config(0.0, {0.4, -0.4});
        const Eigen::MatrixXd body = r_matrix({1, 2}, RSign::Twisted, config).body;
        Eigen::Matrix4d expected = Eigen::Matrix4d::Zero();
        expected(0, 0) = -1;
        expected(1, 2) = 1;
        expected(2, 1) = -1;
        expected(3, 3) = 1;
        CHECK(body == Eigen::MatrixXd(expected));
    }
    SUBCASE("displayed sign layout") {
        const ApproxConfig config(0.6, {0.5, -0.1});
        const RMatrix<double> r1 = r_matrix({1, 2}, RSign::Twisted, config);
        const REntries<double>& e = r1.entries;
        CHECK(r1.body(0, 0) == -e.a);
        CHECK(r1.body(0, 3) == e.d);
        CHECK(r1.body(1, 1) == -e.b);
        CHECK(r1.body(1, 2) == e.c);
        CHECK(r1.body(2, 1) == -e.c);
        CHECK(r1.body(2, 2) == e.b);
        CHECK(r1.body(3, 0) == -e.d);
        CHECK(r1.body(3, 3) == e.a);
    }
    SUBCASE("errors") {
        const ApproxConfig config(0.3, {0.1, 0.2, 0.3});
        CHECK_THROWS_AS(r_matrix({2, 2}, RSign::Symmetric, config), std::invalid_argument);
        CHECK_THROWS_AS(r_matrix({3, 1}, RSign::Symmetric, config), std::invalid_argument);
        CHECK_THROWS_AS(r_matrix({2, 4}, RSign::Symmetric, config), std::out_of_range);
        CHECK_THROWS_AS(ApproxConfig(1.0, {0.1}), ConfigError);
        CHECK_THROWS_AS(ExactConfig({{Rational(1, 2)}}, 0.3), ConfigError);
    }
}

TEST_CASE("r_matrix_exact") {
    SUBCASE("zero angles give the swap pattern") {
        const ExactConfig config({{Rational(0)}, {Rational(0)}});
        const ExactMatrix body = r_matrix_exact({1, 2}, RSign::Symmetric, config).body;
        CHECK(body == swap_pattern().cast<double>().unaryExpr([](double x) { return Rational(static_cast<int>(x)); }));
    }
    SUBCASE("Pythagorean point 3/5, 4/5") {
        const ExactConfig config({{Rational(1, 2)}, {Rational(0)}});
        const RMatrix<Rational> r = r_matrix_exact({1, 2}, RSign::Symmetric, config);
        CHECK(r.entries.a == Rational(3, 5));
        CHECK(r.entries.b == Rational(4, 5));
        CHECK(r.entries.c == Rational(1));
        CHECK(r.entries.d == Rational(0));
    }
    SUBCASE("matches the floating-point construction at matching angles") {
        const ExactConfig exact({{Rational(1, 2)}, {Rational(1, 3)}});
        const ApproxConfig approx(0.0, {std::atan(4.0 / 3.0), std::atan(3.0 / 4.0)});
        for (RSign sign : {RSign::Symmetric, RSign::Twisted}) {
            const ExactMatrix e = r_matrix_exact({1, 2}, sign, exact).body;
            const Eigen::MatrixXd a = r_matrix({1, 2}, sign, approx).body;
            for (Eigen::Index r = 0; r < 4; ++r)
                for (Eigen::Index c = 0; c < 4; ++c) CHECK(std::abs(e(r, c).to_double() - a(r, c)) <= 1e-15);
        }
    }
    SUBCASE("tan is undefined at t = +-1") {
        CHECK_THROWS_AS(RationalAngle{Rational(1)}.tan(), ConfigError);
        CHECK_THROWS_AS(RationalAngle{Rational(-1)}.tan(), ConfigError);
        CHECK(RationalAngle{Rational(1, 2)}.tan() == Rational(4, 3));
    }
}

TEST_CASE("embed_r") {
    const ApproxConfig config(0.4, {0.3, -0.6, 1.0});
    const RMatrix<double> r12 = r_matrix({1, 2}, RSign::Twisted, config);
    const RMatrix<double> r23 = r_matrix({2, 3}, RSign::Symmetric, config);
    const RMatrix<double> r13 = r_matrix({1, 3}, RSign::Twisted, config);
    CHECK(embed_r(r12, 3) == kron(r12.body, Eigen::MatrixXd::Identity(2, 2)));
    CHECK(embed_r(r23, 3) == kron(Eigen::MatrixXd::Identity(2, 2), r23.body));
    CHECK(embed_r(r13, 3) == oracle::embed_by_interleaving(r13.body, std::vector<int>{1, 3}, 3));
}

TEST_CASE("structural invariants over random parameters (property, 200 cases)") {
    std::mt19937_64 rng = trial_rng(99, 0);
    std::uniform_real_distribution<double> lambda(-2.0, 2.0);
    std::uniform_real_distribution<double> modulus(0.0, 0.95);
    std::uniform_int_distribution<long> num(-40, 40);
    std::uniform_int_distribution<long> den(1, 40);
    int pattern_failures = 0;
    int symmetry_failures = 0;
    int fermion_failures = 0;
    int cross_mode_failures = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const ApproxConfig config(modulus(rng), {lambda(rng), lambda(rng)});
        for (RSign sign : {RSign::Symmetric, RSign::Twisted}) {
            const RMatrix<double> r = r_matrix({1, 2}, sign, config);
            for (Eigen::Index i = 0; i < 4; ++i)
                for (Eigen::Index j = 0; j < 4; ++j)
                    if (!in_pattern(i, j) && r.body(i, j) != 0.0) ++pattern_failures;
            const REntries<double>& e = r.entries;
            if (std::abs(e.a * e.a + e.b * e.b - e.c * e.c - e.d * e.d) > 1e-13) ++fermion_failures;
            if (sign == RSign::Symmetric && r.body != r.body.transpose()) ++symmetry_failures;
        }

        const ExactConfig exact({{Rational(num(rng), den(rng))}, {Rational(num(rng), den(rng))}});
        const ApproxConfig shadow(0.0, {exact.angle(1).radians(), exact.angle(2).radians()});
        for (RSign sign : {RSign::Symmetric, RSign::Twisted}) {
            const RMatrix<Rational> r = r_matrix_exact({1, 2}, sign, exact);
            const REntries<Rational>& e = r.entries;
            if (e.a * e.a + e.b * e.b != e.c * e.c + e.d * e.d) ++fermion_failures;
            for (Eigen::Index i = 0; i < 4; ++i)
                for (Eigen::Index j = 0; j < 4; ++j)
                    if (!in_pattern(i, j) && !r.body(i, j).is_zero()) ++pattern_failures;
            if (sign == RSign::Symmetric && r.body != ExactMatrix(r.body.transpose())) ++symmetry_failures;
            const Eigen::MatrixXd approx = r_matrix({1, 2}, sign, shadow).body;
            for (Eigen::Index i = 0; i < 4; ++i)
                for (Eigen::Index j = 0; j < 4; ++j)
                    if (std::abs(r.body(i, j).to_double() - approx(i, j)) > 1e-14) ++cross_mode_failures;
        }
    }
    CHECK(pattern_failures == 0);
    CHECK(symmetry_failures == 0);
    CHECK(fermion_failures == 0);
    CHECK(cross_mode_failures == 0);
}
