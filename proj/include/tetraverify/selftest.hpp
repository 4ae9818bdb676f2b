#pragma once

#include <vector>

#include "tetraverify/report.hpp"

namespace tetraverify {

struct SelftestOptions {
    /// Perturbs sn by 1e-6 inside the elliptic checks; used to prove the
    /// checks can fail.
    bool inject_elliptic_fault = false;
};

/// Elliptic identity grid, embedding oracle comparison, free-fermion sweep,
/// and the k -> 0 convergence sweep of the solved S toward the closed form.
std::vector<Check> run_selftest(const SelftestOptions& options = {});

/// Fixed spectral parameters used by the convergence sweep.
inline constexpr double kSweepLambdas[3] = {0.37, -0.52, 0.81};

}  // namespace tetraverify
