#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tetraverify/rmatrix.hpp"

namespace tetraverify {

struct SamplerBounds {
    /// |numerator| and denominator bound for exact half-angle draws.
    int bound = 50;
    /// Resample attempts per trial before giving up.
    int max_resamples = 1000;
    /// Approx draws are uniform in [-lambda_max, lambda_max].
    double lambda_max = 1.2;
    /// Approx draws closer than this to a coupling pole are rejected.
    double pole_margin = 1e-6;
};

class SamplingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Independent stream per (seed, trial): serial and parallel runs see
/// identical draws.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

/// Why an exact draw is unusable for the closed-form S-matrices of every
/// triple it contains, or nullopt if it is fine.
std::optional<std::string> exact_degeneracy(const std::vector<RationalAngle>& angles);
std::optional<std::string> approx_degeneracy(const ApproxConfig& config, double pole_margin);

ExactConfig sample_exact_config(std::mt19937_64& rng, std::size_t lines, const SamplerBounds& bounds);
ApproxConfig sample_approx_config(std::mt19937_64& rng, double k, std::size_t lines, const SamplerBounds& bounds);

}  // namespace tetraverify
