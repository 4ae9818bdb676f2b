#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "tetraverify/linalg.hpp"
#include "tetraverify/oracles.hpp"
#include "tetraverify/sampling.hpp"
#include "test_support.hpp"

using namespace tetraverify;
using tetraverify::testing::naive_product;
using tetraverify::testing::random_exact;
using tetraverify::testing::random_real;

namespace {

ExactMatrix identity(Eigen::Index n) { return ExactMatrix::Identity(n, n); }

ExactMatrix swap_gate() {
    ExactMatrix p = ExactMatrix::Zero(4, 4);
    p(0, 0) = 1;
    p(1, 2) = 1;
    p(2, 1) = 1;
    p(3, 3) = 1;
    return p;
}

}  // namespace

TEST_CASE("rational parsing and printing") {
    CHECK(Rational::parse("6/4") == Rational(3, 2));
    CHECK(Rational::parse("-7") == Rational(-7));
    CHECK(Rational(3, -6).to_string() == "-1/2");
    CHECK(Rational(4, 2).to_string() == "2");
    CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("abc"), std::invalid_argument);
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("mat_mul") {
    std::mt19937_64 rng(11);

    SUBCASE("identity cases") {
        CHECK(mat_mul(identity(2), identity(2)) == identity(2));
        const ExactMatrix a = random_exact(rng, 8, 8);
        CHECK(mat_mul(a, identity(8)) == a);
    }

    SUBCASE("64x64 exact product against the naive triple loop") {
        const ExactMatrix a = random_exact(rng, 64, 64);
        const ExactMatrix b = random_exact(rng, 64, 64);
        const ExactMatrix c = mat_mul(a, b);
        const ExactMatrix a4 = a.topLeftCorner(4, 64);
        const ExactMatrix b4 = b.topLeftCorner(64, 4);
        CHECK(c.topLeftCorner(4, 4) == naive_product(a4, b4));
        CHECK(c == naive_product(a, b));
    }

    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(mat_mul(identity(2), identity(3)), DimensionError);
    }
}

TEST_CASE("kron") {
    CHECK(kron(identity(2), identity(2)) == identity(4));

    ExactMatrix a(2, 2);
    a << 1, 2, 0, 1;
    ExactMatrix b(2, 2);
    b << 1, 0, 3, 1;
    const ExactMatrix k = kron(a, b);
    CHECK(k(1, 3) == Rational(2));
    for (Eigen::Index ra = 0; ra < 2; ++ra)
        for (Eigen::Index ca = 0; ca < 2; ++ca)
            for (Eigen::Index rb = 0; rb < 2; ++rb)
                for (Eigen::Index cb = 0; cb < 2; ++cb) CHECK(k(ra * 2 + rb, ca * 2 + cb) == a(ra, ca) * b(rb, cb));

    const int prefix[] = {1, 2};
    CHECK(kron(swap_gate(), identity(2)) == embed_sites(swap_gate(), std::span<const int>(prefix), 3));
}

TEST_CASE("kron is associative (property)") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 25; ++i) {
        const ExactMatrix a = random_exact(rng, 2, 3);
        const ExactMatrix b = random_exact(rng, 3, 2);
        const ExactMatrix c = random_exact(rng, 2, 2);
        CHECK(kron(kron(a, b), c) == kron(a, kron(b, c)));
    }
}

TEST_CASE("embed_sites") {
    std::mt19937_64 rng(13);
    const ExactMatrix m = random_exact(rng, 4, 4);

    CHECK(embed_sites(m, {1, 2}, 3) == kron(m, identity(2)));
    CHECK(embed_sites(m, {2, 3}, 3) == kron(identity(2), m));
    CHECK(embed_sites(m, {1, 3}, 3) == oracle::embed_by_interleaving(m, std::vector<int>{1, 3}, 3));

    SUBCASE("matches the interleaving oracle on every site subset of a 5-site register") {
        for (int mask = 1; mask < 32; ++mask) {
            std::vector<int> sites;
            for (int s = 1; s <= 5; ++s)
                if (mask & (1 << (5 - s))) sites.push_back(s);
            if (sites.size() > 3) continue;
            const Eigen::Index dim = Eigen::Index{1} << sites.size();
            const ExactMatrix op = random_exact(rng, dim, dim);
            CHECK(embed_sites(op, std::span<const int>(sites), 5) == oracle::embed_by_interleaving(op, sites, 5));
        }
    }

    SUBCASE("errors") {
        CHECK_THROWS_AS(embed_sites(m, {0, 2}, 3), std::out_of_range);
        CHECK_THROWS_AS(embed_sites(m, {2, 4}, 3), std::out_of_range);
        CHECK_THROWS_AS(embed_sites(m, {2, 2}, 3), std::invalid_argument);
        CHECK_THROWS_AS(embed_sites(m, {1, 2, 3}, 3), DimensionError);
    }
}

TEST_CASE("apply_sites_left agrees with embed then multiply") {
    std::mt19937_64 rng(14);
    for (const std::vector<int>& sites : std::vector<std::vector<int>>{{1, 2, 4}, {1, 3, 5}, {2, 3, 6}, {4, 5, 6}}) {
        const ExactMatrix op = random_exact(rng, 8, 8);
        ExactMatrix target = random_exact(rng, 64, 5);
        const ExactMatrix expected = embed_sites(op, std::span<const int>(sites), 6) * target;
        apply_sites_left(op, std::span<const int>(sites), 6, target);
        CHECK(target == expected);
    }
}

TEST_CASE("operators on disjoint sites commute (property, 200 cases)") {
    std::mt19937_64 rng(15);
    std::uniform_int_distribution<int> pick(0, 5);
    std::uniform_int_distribution<int> entry(-3, 3);
    // Small integers keep the double products exact.
    const auto random_int = [&](Eigen::Index dim) {
        return Eigen::MatrixXd(Eigen::MatrixXd::NullaryExpr(dim, dim, [&] { return double(entry(rng)); }));
    };
    int failures = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> slots{1, 2, 3, 4, 5, 6};
        std::shuffle(slots.begin(), slots.end(), rng);
        std::vector<int> first(slots.begin(), slots.begin() + 3);
        std::vector<int> second(slots.begin() + 3, slots.end());
        std::sort(first.begin(), first.end());
        std::sort(second.begin(), second.end());
        if (pick(rng) == 0) second.pop_back();  // mix in 2-site operators
        const Eigen::MatrixXd a = embed_sites(random_int(8), std::span<const int>(first), 6);
        const Eigen::MatrixXd b = embed_sites(random_int(Eigen::Index{1} << second.size()), std::span<const int>(second), 6);
        if (a * b != b * a) ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("exact solve") {
    std::mt19937_64 rng(16);

    SUBCASE("identity gives the right-hand side back") {
        const ExactVector b = random_exact(rng, 8, 1);
        const SolveOutcome<Rational> out = solve(identity(8), b);
        CHECK(out.kind == SolveKind::Unique);
        CHECK(out.solution == b);
    }

    SUBCASE("repeated column is underdetermined with rank 7") {
        ExactMatrix a = random_exact(rng, 8, 8);
        a.col(5) = a.col(2);
        const ExactVector b = a * random_exact(rng, 8, 1);
        const SolveOutcome<Rational> out = solve(a, b);
        CHECK(out.kind == SolveKind::Underdetermined);
        CHECK(out.rank == 7);
        CHECK(a * out.solution == b);
    }

    SUBCASE("random 64x8 full-rank system reproduces its right-hand side exactly") {
        const ExactMatrix a = random_exact(rng, 64, 8);
        const ExactVector x = random_exact(rng, 8, 1);
        const ExactVector b = a * x;
        const SolveOutcome<Rational> out = solve(a, b);
        REQUIRE(out.kind == SolveKind::Unique);
        CHECK(out.solution == x);
        CHECK(a * out.solution - b == ExactVector::Zero(64));
        CHECK(out.residual_norm == 0.0);
    }

    SUBCASE("inconsistent overdetermined system") {
        const ExactMatrix a = random_exact(rng, 10, 3);
        ExactVector b = a * random_exact(rng, 3, 1);
        b(0) += Rational(1);
        const SolveOutcome<Rational> out = solve(a, b);
        CHECK(out.kind == SolveKind::Inconsistent);
        CHECK(out.residual_norm > 0.0);
    }

    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(solve(identity(4), ExactVector::Zero(3)), DimensionError);
    }
}

TEST_CASE("approx solve") {
    std::mt19937_64 rng(17);
    const Eigen::MatrixXd a = random_real(rng, 64, 8);
    const Eigen::VectorXd x = random_real(rng, 8, 1);
    const SolveOutcome<double> out = solve(a, Eigen::VectorXd(a * x));
    CHECK(out.kind == SolveKind::Unique);
    CHECK((out.solution - x).cwiseAbs().maxCoeff() < 1e-12);

    Eigen::MatrixXd deficient = a;
    deficient.col(7) = deficient.col(0) + deficient.col(1);
    const SolveOutcome<double> under = solve(deficient, Eigen::VectorXd(deficient * x));
    CHECK(under.kind == SolveKind::Underdetermined);
    CHECK(under.rank == 7);
    CHECK(under.residual_norm < 1e-12);

    Eigen::VectorXd b = a * x;
    b(3) += 1.0;
    CHECK(solve(a, b).kind == SolveKind::Inconsistent);
}

TEST_CASE("rank") {
    CHECK(rank(identity(8)) == 8);
    CHECK(rank(ExactMatrix(ExactMatrix::Zero(5, 4))) == 0);
    CHECK(rank(Eigen::MatrixXd(Eigen::MatrixXd::Identity(8, 8))) == 8);
    CHECK(rank(Eigen::MatrixXd(Eigen::MatrixXd::Zero(6, 6))) == 0);
}

TEST_CASE("exact rank is invariant under row permutation and nonzero row scaling (property)") {
    std::mt19937_64 rng(18);
    std::uniform_int_distribution<int> cols_dist(2, 7);
    std::uniform_int_distribution<long> scale(1, 9);
    for (int trial = 0; trial < 40; ++trial) {
        const Eigen::Index cols = cols_dist(rng);
        ExactMatrix a = random_exact(rng, 8, cols, -2, 2);
        if (trial % 2 == 0) a.col(0) = a.col(cols - 1) * Rational(3);
        const Eigen::Index r = rank(a);

        std::vector<Eigen::Index> perm(8);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        ExactMatrix b(8, cols);
        for (Eigen::Index i = 0; i < 8; ++i) {
            const Rational s(scale(rng) * (i % 2 == 0 ? 1 : -1), scale(rng));
            b.row(i) = a.row(perm[static_cast<std::size_t>(i)]) * s;
        }
        CHECK(rank(b) == r);
    }
}
