#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tetraverify/rational.hpp"

namespace tetraverify {

enum class ScalarMode { Exact, Approx };

std::string to_string(ScalarMode mode);

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using ExactMatrix = Matrix<Rational>;
using ExactVector = Vector<Rational>;

template <class Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr ScalarMode mode = ScalarMode::Exact;
    static double magnitude(const Rational& x) { return std::abs(x.to_double()); }
};

template <>
struct ScalarTraits<double> {
    static constexpr ScalarMode mode = ScalarMode::Approx;
    static double magnitude(double x) { return std::abs(x); }
};

/// Relative tolerance for Approx-mode rank and consistency decisions.
struct Tolerance {
    double relative = 1e-9;
};

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Dimension-checked product. Mixed scalar modes do not compile.
template <class DA, class DB>
Matrix<typename DA::Scalar> mat_mul(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
    static_assert(std::is_same_v<typename DA::Scalar, typename DB::Scalar>, "scalar mode mismatch");
    if (a.cols() != b.rows()) {
        throw DimensionError("mat_mul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                             " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
    return a * b;
}

/// Kronecker product: entry (ra*rows_b + rb, ca*cols_b + cb) = a(ra,ca) * b(rb,cb).
template <class DA, class DB>
Matrix<typename DA::Scalar> kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
    static_assert(std::is_same_v<typename DA::Scalar, typename DB::Scalar>, "scalar mode mismatch");
    using Scalar = typename DA::Scalar;
    const Eigen::Index br = b.rows();
    const Eigen::Index bc = b.cols();
    Matrix<Scalar> out = Matrix<Scalar>::Zero(a.rows() * br, a.cols() * bc);
    for (Eigen::Index ra = 0; ra < a.rows(); ++ra) {
        for (Eigen::Index ca = 0; ca < a.cols(); ++ca) {
            const Scalar& x = a(ra, ca);
            if (x == Scalar(0)) continue;
            out.block(ra * br, ca * bc, br, bc) = x * b;
        }
    }
    return out;
}

namespace detail {

/// Bit masks for placing m local qubit-like sites at global positions of an
/// n-site register. Site 1 is the most significant bit.
struct SiteLayout {
    int n = 0;
    std::vector<std::uint32_t> masks;  // global mask per local site, local site 0 first
    std::uint32_t target_mask = 0;

    std::uint32_t scatter(std::uint32_t local) const {
        const auto m = static_cast<int>(masks.size());
        std::uint32_t out = 0;
        for (int s = 0; s < m; ++s) {
            if ((local >> (m - 1 - s)) & 1U) out |= masks[s];
        }
        return out;
    }
    std::uint32_t gather(std::uint32_t global) const {
        std::uint32_t out = 0;
        for (std::uint32_t mask : masks) out = (out << 1) | ((global & mask) ? 1U : 0U);
        return out;
    }
};

SiteLayout make_layout(std::span<const int> sites, int n, Eigen::Index op_dim);

}  // namespace detail

/// Places an operator acting on 2^m dimensions at the given (strictly
/// increasing, 1-based) sites of an n-site register of two-dimensional spaces.
template <class D>
Matrix<typename D::Scalar> embed_sites(const Eigen::MatrixBase<D>& op, std::span<const int> sites, int n) {
    using Scalar = typename D::Scalar;
    const detail::SiteLayout layout = detail::make_layout(sites, n, op.rows());
    const std::uint32_t dim = 1U << n;
    Matrix<Scalar> out = Matrix<Scalar>::Zero(dim, dim);
    const std::uint32_t local_dim = static_cast<std::uint32_t>(op.rows());
    for (std::uint32_t rest = 0; rest < dim; ++rest) {
        if (rest & layout.target_mask) continue;
        for (std::uint32_t x = 0; x < local_dim; ++x) {
            for (std::uint32_t y = 0; y < local_dim; ++y) {
                const Scalar& v = op(x, y);
                if (v == Scalar(0)) continue;
                out(rest | layout.scatter(x), rest | layout.scatter(y)) = v;
            }
        }
    }
    return out;
}

template <class D>
Matrix<typename D::Scalar> embed_sites(const Eigen::MatrixBase<D>& op, std::initializer_list<int> sites, int n) {
    return embed_sites(op, std::span<const int>(sites.begin(), sites.size()), n);
}

/// target <- embed_sites(op, sites, n) * target without forming the embedded
/// operator. Zero entries of op are skipped.
template <class D, class Scalar>
void apply_sites_left(const Eigen::MatrixBase<D>& op, std::span<const int> sites, int n, Matrix<Scalar>& target) {
    static_assert(std::is_same_v<typename D::Scalar, Scalar>, "scalar mode mismatch");
    const detail::SiteLayout layout = detail::make_layout(sites, n, op.rows());
    const std::uint32_t dim = 1U << n;
    if (target.rows() != static_cast<Eigen::Index>(dim)) {
        throw DimensionError("apply_sites_left: target has " + std::to_string(target.rows()) + " rows, expected " +
                             std::to_string(dim));
    }
    const std::uint32_t local_dim = static_cast<std::uint32_t>(op.rows());
    Matrix<Scalar> out = Matrix<Scalar>::Zero(target.rows(), target.cols());
    for (std::uint32_t rest = 0; rest < dim; ++rest) {
        if (rest & layout.target_mask) continue;
        for (std::uint32_t x = 0; x < local_dim; ++x) {
            const std::uint32_t gx = rest | layout.scatter(x);
            for (std::uint32_t y = 0; y < local_dim; ++y) {
                const Scalar& v = op(x, y);
                if (v == Scalar(0)) continue;
                out.row(gx) += v * target.row(rest | layout.scatter(y));
            }
        }
    }
    target = std::move(out);
}

enum class SolveKind { Unique, Underdetermined, Inconsistent };

std::string to_string(SolveKind kind);

/// Outcome of a linear solve. `solution` holds the unique solution, one
/// particular solution (Underdetermined), or the least-squares/minimum-norm
/// attempt (Inconsistent, Approx only).
template <class Scalar>
struct SolveOutcome {
    SolveKind kind = SolveKind::Inconsistent;
    Vector<Scalar> solution;
    Eigen::Index rank = 0;
    double residual_norm = 0.0;
};

/// Exact rational solve by Gaussian elimination. Never rounds.
SolveOutcome<Rational> solve(const ExactMatrix& a, const ExactVector& b);

/// SVD-based minimum-norm solve; singular values below
/// tol.relative * sigma_max count as zero.
SolveOutcome<double> solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, Tolerance tol = {});

Eigen::Index rank(const ExactMatrix& a);
Eigen::Index rank(const Eigen::MatrixXd& a, Tolerance tol = {});

/// Largest absolute entry, as a double (0 for an empty matrix).
template <class D>
double max_abs(const Eigen::MatrixBase<D>& m) {
    double best = 0.0;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            best = std::max(best, ScalarTraits<typename D::Scalar>::magnitude(m(r, c)));
        }
    }
    return best;
}

}  // namespace tetraverify
