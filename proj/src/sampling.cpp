#include "tetraverify/sampling.hpp"

#include <cmath>

#include "tetraverify/smatrix.hpp"

namespace tetraverify {

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    return std::mt19937_64(seq);
}

namespace {

std::vector<Triple> triples_within(std::size_t lines) {
    std::vector<Triple> out;
    const int n = static_cast<int>(lines);
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            for (int k = j + 1; k <= n; ++k) out.push_back({i, j, k});
    return out;
}

// The six coupling denominators of the closed form, as (rho, sigma) pairs:
// (t1, t3), (t1, -t3), (t1, 1/t2), (t1, -1/t2), (1/t2, t3), (1/t2, -t3).
template <class Scalar>
std::array<Scalar, 6> pole_denominators(const Scalar& t1, const Scalar& inv2, const Scalar& t3) {
    return {t1 + t3, t1 - t3, t1 + inv2, t1 - inv2, inv2 + t3, inv2 - t3};
}

}  // namespace

std::optional<std::string> exact_degeneracy(const std::vector<RationalAngle>& angles) {
    for (std::size_t i = 0; i < angles.size(); ++i) {
        if (abs(angles[i].t) == Rational(1)) {
            return "t" + std::to_string(i + 1) + " = +-1 (cos vanishes)";
        }
    }
    const ExactConfig config(angles);
    for (const Triple& t : triples_within(angles.size())) {
        const Rational mid = config.tangent(t.j);
        if (mid.is_zero()) {
            return "tangent of middle line " + std::to_string(t.j) + " is zero in triple " + to_string(t);
        }
        for (const Rational& d : pole_denominators(config.tangent(t.i), Rational(1) / mid, config.tangent(t.k))) {
            if (d.is_zero()) return "coupling pole in triple " + to_string(t);
        }
    }
    return std::nullopt;
}

std::optional<std::string> approx_degeneracy(const ApproxConfig& config, double pole_margin) {
    for (std::size_t i = 1; i <= config.line_count(); ++i) {
        if (std::abs(std::cos(config.lambda(static_cast<int>(i)))) < pole_margin) {
            return "cos(lambda" + std::to_string(i) + ") near zero";
        }
    }
    for (const Triple& t : triples_within(config.line_count())) {
        const double mid = config.tangent(t.j);
        if (std::abs(mid) < pole_margin) {
            return "tangent of middle line " + std::to_string(t.j) + " near zero in triple " + to_string(t);
        }
        for (double d : pole_denominators(config.tangent(t.i), 1.0 / mid, config.tangent(t.k))) {
            if (std::abs(d) < pole_margin) return "near coupling pole in triple " + to_string(t);
        }
    }
    return std::nullopt;
}

ExactConfig sample_exact_config(std::mt19937_64& rng, std::size_t lines, const SamplerBounds& bounds) {
    if (bounds.bound < 1) {
        throw SamplingError("sampler bound must be at least 1");
    }
    std::uniform_int_distribution<long> num(-bounds.bound, bounds.bound);
    std::uniform_int_distribution<long> den(1, bounds.bound);
    for (int attempt = 0; attempt < bounds.max_resamples; ++attempt) {
        std::vector<RationalAngle> angles;
        angles.reserve(lines);
        for (std::size_t i = 0; i < lines; ++i) {
            const long p = num(rng);
            const long q = den(rng);
            angles.push_back({Rational(p, q)});
        }
        if (!exact_degeneracy(angles)) return ExactConfig(std::move(angles));
    }
    throw SamplingError("no nondegenerate exact draw after " + std::to_string(bounds.max_resamples) + " attempts");
}

ApproxConfig sample_approx_config(std::mt19937_64& rng, double k, std::size_t lines, const SamplerBounds& bounds) {
    std::uniform_real_distribution<double> dist(-bounds.lambda_max, bounds.lambda_max);
    for (int attempt = 0; attempt < bounds.max_resamples; ++attempt) {
        std::vector<double> lambdas(lines);
        for (double& l : lambdas) l = dist(rng);
        ApproxConfig config(k, std::move(lambdas));
        if (!approx_degeneracy(config, bounds.pole_margin)) return config;
    }
    throw SamplingError("no nondegenerate approx draw after " + std::to_string(bounds.max_resamples) + " attempts");
}

}  // namespace tetraverify
