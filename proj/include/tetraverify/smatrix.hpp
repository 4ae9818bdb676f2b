#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "tetraverify/linalg.hpp"
#include "tetraverify/rmatrix.hpp"

namespace tetraverify {

/// Line labels i < j < k, 1-based.
struct Triple {
    int i = 1;
    int j = 2;
    int k = 3;
    friend bool operator==(const Triple&, const Triple&) = default;
};

std::string to_string(Triple t);
void check_triple(Triple t, std::size_t line_count);

/// Row/column index of a bit triple: 4a + 2b + c.
constexpr int pack_bits(int a, int b, int c) { return 4 * a + 2 * b + c; }
constexpr int parity(int packed) { return ((packed >> 2) ^ (packed >> 1) ^ packed) & 1; }

/// 8x8 operator on E_ij (x) E_ik (x) E_jk. Rows are indexed by the
/// superscript bits (a,b,c), columns by the subscript bits (d,e,f).
template <class Scalar>
struct SMatrix {
    Triple triple;
    Matrix<Scalar> body = Matrix<Scalar>::Zero(8, 8);

    const Scalar& operator()(int upper, int lower) const { return body(upper, lower); }
    Scalar& operator()(int upper, int lower) { return body(upper, lower); }
};

/// Raised when the coupling function is evaluated at rho + sigma = 0.
class PoleError : public std::domain_error {
public:
    PoleError(std::string rho, std::string sigma);
    const std::string& rho() const { return rho_; }
    const std::string& sigma() const { return sigma_; }

private:
    std::string rho_;
    std::string sigma_;
};

/// (1 + rho sigma) / (rho + sigma).
template <class Scalar>
Scalar f_coupling(const Scalar& rho, const Scalar& sigma);

/// Closed-form k = 0 S-matrix from the tangents of the triple's lines.
/// The middle tangent enters through its reciprocal and must be nonzero.
template <class Scalar>
SMatrix<Scalar> s_closed_form(Triple triple, const Scalar& tau_first, const Scalar& tau_mid, const Scalar& tau_last);

/// Closed form with the triple's tangents substituted from the config.
template <class Scalar>
SMatrix<Scalar> s_for_triple(Triple triple, const SpectralConfig<Scalar>& config);

/// The linear system behind the tetrahedral algebra relation for one triple:
/// lhs[abc] = R_ij^a R_ik^b R_jk^c and rhs[def] = R_jk^f R_ik^e R_ij^d, all
/// embedded in the local three-line register.
template <class Scalar>
struct AlgebraSystem {
    std::array<Matrix<Scalar>, 8> lhs;
    std::array<Matrix<Scalar>, 8> rhs;
    /// 64x8, column def is rhs[def] flattened column-major.
    Matrix<Scalar> columns;
    /// Largest absolute entry over every product.
    double scale = 0.0;
};

template <class Scalar>
AlgebraSystem<Scalar> algebra_system(Triple triple, const SpectralConfig<Scalar>& config);

struct SolveDiagnostics {
    Eigen::Index column_rank = 0;
    std::array<SolveKind, 8> row_kinds{};
    std::array<double, 8> row_residuals{};

    bool all_unique() const;
    bool any_inconsistent() const;
};

template <class Scalar>
struct SolvedS {
    SMatrix<Scalar> s;
    SolveDiagnostics diagnostics;
};

/// Derives S by solving the 64x8 system row by row. Inconsistent rows are
/// reported in the diagnostics rather than thrown. In Approx mode entries at
/// or below tol.relative * max(1, |S|max) are zeroed.
template <class Scalar>
SolvedS<Scalar> solve_s(Triple triple, const SpectralConfig<Scalar>& config, Tolerance tol = {});

struct AlgebraResidual {
    bool exact_zero = false;
    double max_abs = 0.0;
    double scale = 0.0;
    /// max_abs divided by the largest product entry (or 1 if that is smaller).
    double relative() const { return max_abs / std::max(1.0, scale); }
};

/// Max entry of lhs[abc] - sum_def S(abc, def) rhs[def] over all eight rows.
template <class Scalar>
AlgebraResidual verify_algebra(Triple triple, const SpectralConfig<Scalar>& config, const SMatrix<Scalar>& s);

template <class Scalar>
AlgebraResidual verify_algebra(const AlgebraSystem<Scalar>& system, const SMatrix<Scalar>& s);

/// Max-entry distance between the solved S at the config's modulus and the
/// closed form at the same spectral parameters.
double closed_form_distance(Triple triple, const ApproxConfig& config, Tolerance tol = {});

}  // namespace tetraverify
