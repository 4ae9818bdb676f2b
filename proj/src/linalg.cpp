#include "tetraverify/linalg.hpp"

#include <numeric>

namespace tetraverify {

std::string to_string(ScalarMode mode) {
    return mode == ScalarMode::Exact ? "exact" : "approx";
}

std::string to_string(SolveKind kind) {
    switch (kind) {
        case SolveKind::Unique: return "unique";
        case SolveKind::Underdetermined: return "underdetermined";
        case SolveKind::Inconsistent: return "inconsistent";
    }
    return "unknown";
}

namespace detail {

SiteLayout make_layout(std::span<const int> sites, int n, Eigen::Index op_dim) {
    if (n < 1 || n > 20) {
        throw std::invalid_argument("embed_sites: register size " + std::to_string(n) + " out of range");
    }
    if (sites.empty() || op_dim != (Eigen::Index{1} << sites.size())) {
        throw DimensionError("embed_sites: operator dimension " + std::to_string(op_dim) + " does not match " +
                             std::to_string(sites.size()) + " sites");
    }
    SiteLayout layout;
    layout.n = n;
    int previous = 0;
    for (int site : sites) {
        if (site < 1 || site > n) {
            throw std::out_of_range("embed_sites: site " + std::to_string(site) + " outside 1.." + std::to_string(n));
        }
        if (site <= previous) {
            throw std::invalid_argument("embed_sites: sites must be strictly increasing (duplicate or unordered site " +
                                        std::to_string(site) + ")");
        }
        previous = site;
        const std::uint32_t mask = 1U << (n - site);
        layout.masks.push_back(mask);
        layout.target_mask |= mask;
    }
    return layout;
}

}  // namespace detail

namespace {

struct Echelon {
    ExactMatrix reduced;               // [A | b] in reduced row echelon form
    std::vector<Eigen::Index> pivots;  // pivot column per nonzero row
};

// Gauss-Jordan over the rationals. The pivot in each column is the candidate
// with the smallest bit size, which keeps intermediate growth down.
Echelon reduce(ExactMatrix m, Eigen::Index pivot_cols) {
    Echelon out;
    Eigen::Index row = 0;
    for (Eigen::Index col = 0; col < pivot_cols && row < m.rows(); ++col) {
        Eigen::Index best = -1;
        std::size_t best_size = 0;
        for (Eigen::Index r = row; r < m.rows(); ++r) {
            if (m(r, col).is_zero()) continue;
            const std::size_t size = m(r, col).bit_size();
            if (best < 0 || size < best_size) {
                best = r;
                best_size = size;
            }
        }
        if (best < 0) continue;
        if (best != row) m.row(best).swap(m.row(row));
        const Rational inv = Rational(1) / m(row, col);
        for (Eigen::Index c = col; c < m.cols(); ++c) {
            if (!m(row, c).is_zero()) m(row, c) *= inv;
        }
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, col).is_zero()) continue;
            const Rational factor = m(r, col);
            for (Eigen::Index c = col; c < m.cols(); ++c) {
                if (!m(row, c).is_zero()) m(r, c) -= factor * m(row, c);
            }
        }
        out.pivots.push_back(col);
        ++row;
    }
    out.reduced = std::move(m);
    return out;
}

double residual_norm(const ExactMatrix& a, const ExactVector& x, const ExactVector& b) {
    const ExactVector r = a * x - b;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
        const double v = r(i).to_double();
        sum += v * v;
    }
    return std::sqrt(sum);
}

}  // namespace

SolveOutcome<Rational> solve(const ExactMatrix& a, const ExactVector& b) {
    if (a.rows() != b.size()) {
        throw DimensionError("solve: matrix has " + std::to_string(a.rows()) + " rows but right-hand side has " +
                             std::to_string(b.size()) + " entries");
    }
    const Eigen::Index n = a.cols();
    ExactMatrix augmented(a.rows(), n + 1);
    augmented.leftCols(n) = a;
    augmented.col(n) = b;
    const Echelon ech = reduce(std::move(augmented), n);

    SolveOutcome<Rational> out;
    out.rank = static_cast<Eigen::Index>(ech.pivots.size());
    out.solution = ExactVector::Zero(n);
    for (std::size_t i = 0; i < ech.pivots.size(); ++i) {
        out.solution(ech.pivots[i]) = ech.reduced(static_cast<Eigen::Index>(i), n);
    }
    bool consistent = true;
    for (Eigen::Index r = out.rank; r < ech.reduced.rows(); ++r) {
        if (!ech.reduced(r, n).is_zero()) {
            consistent = false;
            break;
        }
    }
    if (!consistent) {
        out.kind = SolveKind::Inconsistent;
        out.residual_norm = residual_norm(a, out.solution, b);
    } else {
        out.kind = out.rank == n ? SolveKind::Unique : SolveKind::Underdetermined;
        out.residual_norm = 0.0;
    }
    return out;
}

SolveOutcome<double> solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, Tolerance tol) {
    if (a.rows() != b.size()) {
        throw DimensionError("solve: matrix has " + std::to_string(a.rows()) + " rows but right-hand side has " +
                             std::to_string(b.size()) + " entries");
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(tol.relative);

    SolveOutcome<double> out;
    out.rank = svd.rank();
    out.solution = svd.solve(b);
    out.residual_norm = (a * out.solution - b).norm();
    const double sigma_max = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
    const double scale = sigma_max * out.solution.norm() + b.norm();
    if (out.residual_norm > tol.relative * scale) {
        out.kind = SolveKind::Inconsistent;
    } else {
        out.kind = out.rank == a.cols() ? SolveKind::Unique : SolveKind::Underdetermined;
    }
    return out;
}

Eigen::Index rank(const ExactMatrix& a) {
    return static_cast<Eigen::Index>(reduce(a, a.cols()).pivots.size());
}

Eigen::Index rank(const Eigen::MatrixXd& a, Tolerance tol) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    svd.setThreshold(tol.relative);
    return svd.rank();
}

}  // namespace tetraverify
