#include "tetraverify/smatrix.hpp"

#include <sstream>

namespace tetraverify {

namespace {

std::string scalar_text(const Rational& x) { return x.to_string(); }
std::string scalar_text(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

bool is_zero(const Rational& x) { return x.is_zero(); }
bool is_zero(double x) { return x == 0.0; }

template <class Scalar>
Matrix<Scalar> flatten(const Matrix<Scalar>& m) {
    return m.reshaped();
}

}  // namespace

std::string to_string(Triple t) {
    return "(" + std::to_string(t.i) + "," + std::to_string(t.j) + "," + std::to_string(t.k) + ")";
}

void check_triple(Triple t, std::size_t line_count) {
    if (!(t.i < t.j && t.j < t.k)) {
        throw std::invalid_argument("triple " + to_string(t) + " must be strictly increasing");
    }
    if (t.i < 1 || static_cast<std::size_t>(t.k) > line_count) {
        throw std::out_of_range("triple " + to_string(t) + " outside lines 1.." + std::to_string(line_count));
    }
}

PoleError::PoleError(std::string rho, std::string sigma)
    : std::domain_error("f_coupling pole: rho + sigma = 0 at rho = " + rho + ", sigma = " + sigma),
      rho_(std::move(rho)),
      sigma_(std::move(sigma)) {}

template <class Scalar>
Scalar f_coupling(const Scalar& rho, const Scalar& sigma) {
    const Scalar denom = rho + sigma;
    if (is_zero(denom)) {
        throw PoleError(scalar_text(rho), scalar_text(sigma));
    }
    return (Scalar(1) + rho * sigma) / denom;
}

template <class Scalar>
SMatrix<Scalar> s_closed_form(Triple triple, const Scalar& t1, const Scalar& t2, const Scalar& t3) {
    if (is_zero(t2)) {
        throw std::domain_error("s_closed_form: middle tangent is zero for triple " + to_string(triple));
    }
    const Scalar inv2 = Scalar(1) / t2;
    const auto f = [](const Scalar& r, const Scalar& s) { return f_coupling<Scalar>(r, s); };

    const Scalar f_1_3 = f(t1, t3);
    const Scalar f_1_m3 = f(t1, -t3);
    const Scalar f_1_i2 = f(t1, inv2);
    const Scalar f_1_mi2 = f(t1, -inv2);
    const Scalar f_i2_3 = f(inv2, t3);
    const Scalar f_i2_m3 = f(inv2, -t3);

    SMatrix<Scalar> s;
    s.triple = triple;
    for (int p : {0b000, 0b011, 0b101, 0b110}) s(p, p) = Scalar(1);

    s(0b001, 0b010) = f_1_3 * f_i2_3;
    s(0b001, 0b100) = f_1_mi2 * f_i2_3;
    s(0b001, 0b111) = f_1_mi2 * f_1_3;

    s(0b010, 0b001) = f_i2_m3 * f_1_m3;
    s(0b010, 0b100) = f_1_mi2 * f_1_m3;
    s(0b010, 0b111) = f_1_mi2 * f_i2_m3;

    s(0b100, 0b001) = -(f_i2_m3 * f_1_i2);
    s(0b100, 0b010) = f_1_3 * f_1_i2;
    s(0b100, 0b111) = -(f_1_3 * f_i2_m3);

    s(0b111, 0b001) = f_1_i2 * f_1_m3;
    s(0b111, 0b010) = -(f_1_i2 * f_i2_3);
    s(0b111, 0b100) = -(f_1_m3 * f_i2_3);
    return s;
}

template <class Scalar>
SMatrix<Scalar> s_for_triple(Triple triple, const SpectralConfig<Scalar>& config) {
    check_triple(triple, config.line_count());
    return s_closed_form<Scalar>(triple, config.tangent(triple.i), config.tangent(triple.j),
                                 config.tangent(triple.k));
}

template <class Scalar>
AlgebraSystem<Scalar> algebra_system(Triple triple, const SpectralConfig<Scalar>& config) {
    check_triple(triple, config.line_count());
    // R_ij, R_ik, R_jk at local sites (1,2), (1,3), (2,3); index 0/1 is the sign.
    std::array<Matrix<Scalar>, 2> r_ij;
    std::array<Matrix<Scalar>, 2> r_ik;
    std::array<Matrix<Scalar>, 2> r_jk;
    for (int sign = 0; sign < 2; ++sign) {
        const auto rs = static_cast<RSign>(sign);
        r_ij[sign] = embed_r(r_matrix(LinePair{triple.i, triple.j}, rs, config), 1, 2, 3);
        r_ik[sign] = embed_r(r_matrix(LinePair{triple.i, triple.k}, rs, config), 1, 3, 3);
        r_jk[sign] = embed_r(r_matrix(LinePair{triple.j, triple.k}, rs, config), 2, 3, 3);
    }

    AlgebraSystem<Scalar> sys;
    sys.columns = Matrix<Scalar>::Zero(64, 8);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            for (int c = 0; c < 2; ++c) {
                const int p = pack_bits(a, b, c);
                sys.lhs[p] = r_ij[a] * r_ik[b] * r_jk[c];
                // Reversed product, superscripts read as (d, e, f) = (a, b, c).
                sys.rhs[p] = r_jk[c] * r_ik[b] * r_ij[a];
                sys.columns.col(p) = flatten(sys.rhs[p]);
                sys.scale = std::max({sys.scale, max_abs(sys.lhs[p]), max_abs(sys.rhs[p])});
            }
        }
    }
    return sys;
}

bool SolveDiagnostics::all_unique() const {
    for (SolveKind k : row_kinds) {
        if (k != SolveKind::Unique) return false;
    }
    return true;
}

bool SolveDiagnostics::any_inconsistent() const {
    for (SolveKind k : row_kinds) {
        if (k == SolveKind::Inconsistent) return true;
    }
    return false;
}

namespace {

SolveOutcome<Rational> solve_row(const ExactMatrix& a, const ExactVector& b, Tolerance) { return solve(a, b); }
SolveOutcome<double> solve_row(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, Tolerance tol) {
    return solve(a, b, tol);
}

Eigen::Index column_rank(const ExactMatrix& a, Tolerance) { return rank(a); }
Eigen::Index column_rank(const Eigen::MatrixXd& a, Tolerance tol) { return rank(a, tol); }

void zero_small_entries(Matrix<Rational>&, Tolerance) {}
void zero_small_entries(Eigen::MatrixXd& body, Tolerance tol) {
    const double cutoff = tol.relative * std::max(1.0, body.cwiseAbs().maxCoeff());
    body = body.unaryExpr([cutoff](double x) { return std::abs(x) <= cutoff ? 0.0 : x; });
}

}  // namespace

template <class Scalar>
SolvedS<Scalar> solve_s(Triple triple, const SpectralConfig<Scalar>& config, Tolerance tol) {
    const AlgebraSystem<Scalar> sys = algebra_system(triple, config);
    SolvedS<Scalar> out;
    out.s.triple = triple;
    out.diagnostics.column_rank = column_rank(sys.columns, tol);
    for (int p = 0; p < 8; ++p) {
        const Vector<Scalar> target = flatten(sys.lhs[p]);
        const SolveOutcome<Scalar> row = solve_row(sys.columns, target, tol);
        out.diagnostics.row_kinds[p] = row.kind;
        out.diagnostics.row_residuals[p] = row.residual_norm;
        out.s.body.row(p) = row.solution.transpose();
    }
    zero_small_entries(out.s.body, tol);
    return out;
}

template <class Scalar>
AlgebraResidual verify_algebra(const AlgebraSystem<Scalar>& sys, const SMatrix<Scalar>& s) {
    AlgebraResidual out;
    out.exact_zero = true;
    out.scale = sys.scale;
    for (int p = 0; p < 8; ++p) {
        Matrix<Scalar> diff = sys.lhs[p];
        for (int q = 0; q < 8; ++q) {
            const Scalar& coeff = s(p, q);
            if (is_zero(coeff)) continue;
            diff -= coeff * sys.rhs[q];
        }
        for (Eigen::Index r = 0; r < diff.rows(); ++r) {
            for (Eigen::Index c = 0; c < diff.cols(); ++c) {
                if (!is_zero(diff(r, c))) out.exact_zero = false;
            }
        }
        out.max_abs = std::max(out.max_abs, max_abs(diff));
    }
    return out;
}

template <class Scalar>
AlgebraResidual verify_algebra(Triple triple, const SpectralConfig<Scalar>& config, const SMatrix<Scalar>& s) {
    return verify_algebra(algebra_system(triple, config), s);
}

double closed_form_distance(Triple triple, const ApproxConfig& config, Tolerance tol) {
    const SolvedS<double> solved = solve_s(triple, config, tol);
    const SMatrix<double> closed = s_for_triple(triple, config);
    return (solved.s.body - closed.body).cwiseAbs().maxCoeff();
}

template Rational f_coupling<Rational>(const Rational&, const Rational&);
template double f_coupling<double>(const double&, const double&);
template SMatrix<Rational> s_closed_form<Rational>(Triple, const Rational&, const Rational&, const Rational&);
template SMatrix<double> s_closed_form<double>(Triple, const double&, const double&, const double&);
template SMatrix<Rational> s_for_triple<Rational>(Triple, const ExactConfig&);
template SMatrix<double> s_for_triple<double>(Triple, const ApproxConfig&);
template AlgebraSystem<Rational> algebra_system<Rational>(Triple, const ExactConfig&);
template AlgebraSystem<double> algebra_system<double>(Triple, const ApproxConfig&);
template SolvedS<Rational> solve_s<Rational>(Triple, const ExactConfig&, Tolerance);
template SolvedS<double> solve_s<double>(Triple, const ApproxConfig&, Tolerance);
template AlgebraResidual verify_algebra<Rational>(const AlgebraSystem<Rational>&, const SMatrix<Rational>&);
template AlgebraResidual verify_algebra<double>(const AlgebraSystem<double>&, const SMatrix<double>&);
template AlgebraResidual verify_algebra<Rational>(Triple, const ExactConfig&, const SMatrix<Rational>&);
template AlgebraResidual verify_algebra<double>(Triple, const ApproxConfig&, const SMatrix<double>&);

}  // namespace tetraverify
