#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tetraverify/linalg.hpp"
#include "tetraverify/sampling.hpp"
#include "tetraverify/smatrix.hpp"

namespace tetraverify {

/// Edge spaces E_12, E_13, E_14, E_23, E_24, E_34 occupy tensor slots 1..6
/// in this order.
inline constexpr std::array<LinePair, 6> kEdgeOrder{{{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}};

/// 1-based slot of an edge; throws std::out_of_range for pairs not in the order.
int edge_slot(LinePair edge);

/// Slots of the edges (i,j), (i,k), (j,k) touched by a triple.
std::array<int, 3> triple_slots(Triple t);

enum class Side { Left, Right };

/// Left: S123 S124 S134 S234. Right: S234 S134 S124 S123. Each factor is
/// embedded at its triple's slots of the six-edge register.
template <class Scalar>
Matrix<Scalar> assemble_side(const SMatrix<Scalar>& s123, const SMatrix<Scalar>& s124, const SMatrix<Scalar>& s134,
                             const SMatrix<Scalar>& s234, Side side);

enum class SSource { Closed, Solved };
std::string to_string(SSource source);

struct TetraOutcome {
    SSource source = SSource::Closed;
    bool exact_equal = false;
    double max_abs = 0.0;
    /// Largest entry of either side.
    double scale = 0.0;
    /// Column rank of each triple's algebra system; solved source only.
    std::optional<std::array<Eigen::Index, 4>> ranks;
    /// Worst relative algebra residual over the four solved S; solved source only.
    std::optional<double> eq1_max_residual;

    /// max_abs divided by max(1, scale).
    double relative() const { return max_abs / std::max(1.0, scale); }
};

/// Builds the four S-matrices of a 4-line config and compares both sides.
/// Closed source requires k = 0.
template <class Scalar>
TetraOutcome tetra_residual(const SpectralConfig<Scalar>& config, SSource source, Tolerance tol = {});

struct TetraTrialRecord {
    std::size_t index = 0;
    /// Spectral draw: "p/q" half-angle parameters (exact) or lambdas (approx).
    std::vector<std::string> draw;
    TetraOutcome outcome;
    bool passed = false;
    std::string error;
};

struct TetraReport {
    ScalarMode mode = ScalarMode::Exact;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    int bound = 0;
    double k = 0.0;
    std::optional<double> threshold;
    std::vector<TetraTrialRecord> records;
    std::size_t failures = 0;
    double max_residual = 0.0;
    double wall_seconds = 0.0;
};

/// Exact randomized identity test at k = 0 with closed-form S-matrices.
TetraReport identity_test(std::size_t trials, std::uint64_t seed, const SamplerBounds& bounds, unsigned threads);

/// Floating-point tetrahedron residuals. Closed-form S at k = 0, solved S
/// otherwise. A trial fails only when `threshold` is set and the relative
/// residual exceeds it.
TetraReport approx_tetra_test(double k, std::size_t trials, std::uint64_t seed, const SamplerBounds& bounds,
                              unsigned threads, std::optional<double> threshold, Tolerance tol = {});

struct SurveyRow {
    double k = 0.0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::array<double, 4> lambdas{};
    double eq1_max_residual = 0.0;
    double tetra_residual = 0.0;
    Eigen::Index min_rank = 0;
    bool rank_deficient = false;
    std::string error;
};

struct SurveyReport {
    std::uint64_t seed = 0;
    std::size_t trials_per_k = 0;
    std::vector<SurveyRow> rows;
    double wall_seconds = 0.0;
};

/// Solves all four S per (k, trial), recording the algebra control residual
/// and the tetrahedron residual without judging the latter.
SurveyReport elliptic_survey(std::span<const double> k_values, std::size_t trials, std::uint64_t seed,
                             const SamplerBounds& bounds, unsigned threads, Tolerance tol = {});

/// Columns: k,trial,seed,lambda1..lambda4,eq1_max_residual,tetra_residual,rank_flag.
void write_survey_csv(std::ostream& os, const SurveyReport& report);

/// Worker count from TETRAVERIFY_THREADS, else the hardware concurrency.
unsigned trial_threads();

/// Doubles rendered with 17 significant digits.
std::string format_double(double x);

}  // namespace tetraverify
