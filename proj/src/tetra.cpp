#include "tetraverify/tetra.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <ostream>
#include <sstream>
#include <thread>

namespace tetraverify {

int edge_slot(LinePair edge) {
    for (std::size_t s = 0; s < kEdgeOrder.size(); ++s) {
        if (kEdgeOrder[s] == edge) return static_cast<int>(s) + 1;
    }
    throw std::out_of_range("edge (" + std::to_string(edge.i) + "," + std::to_string(edge.j) + ") not in edge order");
}

std::array<int, 3> triple_slots(Triple t) {
    return {edge_slot({t.i, t.j}), edge_slot({t.i, t.k}), edge_slot({t.j, t.k})};
}

std::string to_string(SSource source) {
    return source == SSource::Closed ? "closed" : "solved";
}

template <class Scalar>
Matrix<Scalar> assemble_side(const SMatrix<Scalar>& s123, const SMatrix<Scalar>& s124, const SMatrix<Scalar>& s134,
                             const SMatrix<Scalar>& s234, Side side) {
    std::array<const SMatrix<Scalar>*, 4> factors{&s123, &s124, &s134, &s234};
    if (side == Side::Right) std::reverse(factors.begin(), factors.end());
    Matrix<Scalar> product = Matrix<Scalar>::Identity(64, 64);
    // Rightmost factor is applied first.
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
        const std::array<int, 3> slots = triple_slots((*it)->triple);
        apply_sites_left((*it)->body, std::span<const int>(slots), 6, product);
    }
    return product;
}

template Matrix<Rational> assemble_side<Rational>(const SMatrix<Rational>&, const SMatrix<Rational>&,
                                                  const SMatrix<Rational>&, const SMatrix<Rational>&, Side);
template Matrix<double> assemble_side<double>(const SMatrix<double>&, const SMatrix<double>&, const SMatrix<double>&,
                                              const SMatrix<double>&, Side);

namespace {

constexpr std::array<Triple, 4> kTetraTriples{{{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}}};

bool matrices_equal(const Matrix<Rational>& a, const Matrix<Rational>& b) { return a == b; }
bool matrices_equal(const Matrix<double>& a, const Matrix<double>& b) { return a == b; }

std::vector<std::string> describe_draw(const ExactConfig& config) {
    std::vector<std::string> out;
    for (const RationalAngle& a : config.angles()) out.push_back(a.t.to_string());
    return out;
}

std::vector<std::string> describe_draw(const ApproxConfig& config) {
    std::vector<std::string> out;
    for (double l : config.lambdas()) out.push_back(format_double(l));
    return out;
}

// Runs body(i) for i in [0, n) on up to `threads` workers.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body body) {
    const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) body(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void aggregate(TetraReport& report) {
    for (const TetraTrialRecord& r : report.records) {
        if (!r.passed) ++report.failures;
        report.max_residual = std::max(report.max_residual, r.outcome.max_abs);
    }
}

}  // namespace

template <class Scalar>
TetraOutcome tetra_residual(const SpectralConfig<Scalar>& config, SSource source, Tolerance tol) {
    if (config.line_count() != 4) {
        throw ConfigError("tetrahedron check needs 4 lines, got " + std::to_string(config.line_count()));
    }
    if (source == SSource::Closed && config.modulus() != 0.0) {
        throw ConfigError("closed-form S-matrices exist only at k = 0");
    }
    TetraOutcome out;
    out.source = source;
    std::array<SMatrix<Scalar>, 4> s;
    if (source == SSource::Closed) {
        for (std::size_t t = 0; t < 4; ++t) s[t] = s_for_triple(kTetraTriples[t], config);
    } else {
        std::array<Eigen::Index, 4> ranks{};
        double eq1 = 0.0;
        for (std::size_t t = 0; t < 4; ++t) {
            const AlgebraSystem<Scalar> sys = algebra_system(kTetraTriples[t], config);
            SolvedS<Scalar> solved = solve_s(kTetraTriples[t], config, tol);
            ranks[t] = solved.diagnostics.column_rank;
            eq1 = std::max(eq1, verify_algebra(sys, solved.s).relative());
            s[t] = std::move(solved.s);
        }
        out.ranks = ranks;
        out.eq1_max_residual = eq1;
    }
    const Matrix<Scalar> left = assemble_side(s[0], s[1], s[2], s[3], Side::Left);
    const Matrix<Scalar> right = assemble_side(s[0], s[1], s[2], s[3], Side::Right);
    out.exact_equal = matrices_equal(left, right);
    out.max_abs = max_abs(Matrix<Scalar>(left - right));
    out.scale = std::max(max_abs(left), max_abs(right));
    return out;
}

template TetraOutcome tetra_residual<Rational>(const ExactConfig&, SSource, Tolerance);
template TetraOutcome tetra_residual<double>(const ApproxConfig&, SSource, Tolerance);

TetraReport identity_test(std::size_t trials, std::uint64_t seed, const SamplerBounds& bounds, unsigned threads) {
    if (trials == 0) {
        throw ConfigError("identity_test needs at least one trial");
    }
    const auto start = std::chrono::steady_clock::now();
    TetraReport report;
    report.mode = ScalarMode::Exact;
    report.seed = seed;
    report.trials = trials;
    report.bound = bounds.bound;
    report.records.resize(trials);
    parallel_for(trials, threads, [&](std::size_t i) {
        TetraTrialRecord& rec = report.records[i];
        rec.index = i;
        try {
            std::mt19937_64 rng = trial_rng(seed, i);
            const ExactConfig config = sample_exact_config(rng, 4, bounds);
            rec.draw = describe_draw(config);
            rec.outcome = tetra_residual(config, SSource::Closed);
            rec.passed = rec.outcome.exact_equal;
        } catch (const std::exception& e) {
            rec.error = e.what();
            rec.passed = false;
        }
    });
    aggregate(report);
    report.wall_seconds = seconds_since(start);
    return report;
}

TetraReport approx_tetra_test(double k, std::size_t trials, std::uint64_t seed, const SamplerBounds& bounds,
                              unsigned threads, std::optional<double> threshold, Tolerance tol) {
    if (trials == 0) {
        throw ConfigError("approx_tetra_test needs at least one trial");
    }
    const auto start = std::chrono::steady_clock::now();
    TetraReport report;
    report.mode = ScalarMode::Approx;
    report.seed = seed;
    report.trials = trials;
    report.k = k;
    report.threshold = threshold;
    report.records.resize(trials);
    const SSource source = k == 0.0 ? SSource::Closed : SSource::Solved;
    parallel_for(trials, threads, [&](std::size_t i) {
        TetraTrialRecord& rec = report.records[i];
        rec.index = i;
        try {
            std::mt19937_64 rng = trial_rng(seed, i);
            const ApproxConfig config = sample_approx_config(rng, k, 4, bounds);
            rec.draw = describe_draw(config);
            rec.outcome = tetra_residual(config, source, tol);
            rec.passed = !threshold || rec.outcome.relative() <= *threshold;
        } catch (const std::exception& e) {
            rec.error = e.what();
            rec.passed = false;
        }
    });
    aggregate(report);
    report.wall_seconds = seconds_since(start);
    return report;
}

SurveyReport elliptic_survey(std::span<const double> k_values, std::size_t trials, std::uint64_t seed,
                             const SamplerBounds& bounds, unsigned threads, Tolerance tol) {
    if (k_values.empty()) {
        throw ConfigError("survey needs a nonempty k grid");
    }
    if (trials == 0) {
        throw ConfigError("survey needs at least one trial per k");
    }
    for (double k : k_values) {
        if (!(k >= 0.0 && k < 1.0)) throw ConfigError("survey modulus " + format_double(k) + " outside [0, 1)");
    }
    const auto start = std::chrono::steady_clock::now();
    SurveyReport report;
    report.seed = seed;
    report.trials_per_k = trials;
    report.rows.resize(k_values.size() * trials);
    parallel_for(report.rows.size(), threads, [&](std::size_t idx) {
        SurveyRow& row = report.rows[idx];
        row.k = k_values[idx / trials];
        row.trial = idx % trials;
        row.seed = seed;
        try {
            std::mt19937_64 rng = trial_rng(seed, idx);
            const ApproxConfig config = sample_approx_config(rng, row.k, 4, bounds);
            for (std::size_t l = 0; l < 4; ++l) row.lambdas[l] = config.lambdas()[l];
            const TetraOutcome outcome = tetra_residual(config, SSource::Solved, tol);
            row.eq1_max_residual = outcome.eq1_max_residual.value_or(0.0);
            row.tetra_residual = outcome.max_abs;
            row.min_rank = 8;
            for (Eigen::Index r : *outcome.ranks) row.min_rank = std::min(row.min_rank, r);
            row.rank_deficient = row.min_rank < 8;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    });
    report.wall_seconds = seconds_since(start);
    return report;
}

std::string format_double(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

void write_survey_csv(std::ostream& os, const SurveyReport& report) {
    os << "k,trial,seed,lambda1,lambda2,lambda3,lambda4,eq1_max_residual,tetra_residual,rank_flag\n";
    for (const SurveyRow& row : report.rows) {
        os << format_double(row.k) << ',' << row.trial << ',' << row.seed;
        for (double l : row.lambdas) os << ',' << format_double(l);
        os << ',' << format_double(row.eq1_max_residual) << ',' << format_double(row.tetra_residual) << ','
           << (row.rank_deficient ? 1 : 0) << '\n';
    }
}

unsigned trial_threads() {
    if (const char* env = std::getenv("TETRAVERIFY_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n >= 1) return static_cast<unsigned>(n);
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

}  // namespace tetraverify
