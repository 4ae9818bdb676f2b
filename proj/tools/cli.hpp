#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tetraverify/linalg.hpp"

namespace tetraverify::cli {

/// Relative algebra residual bound for solved or floating-point S-matrices.
inline constexpr double kAlgebraResidualBound = 1e-10;
/// Tetrahedron residual bound, relative to the largest entry, for
/// floating-point closed-form S at k = 0.
inline constexpr double kFloatTetraBound = 1e-12;

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
    std::string command;
    ScalarMode mode = ScalarMode::Exact;
    std::vector<double> k_grid;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    int bound = 50;
    std::vector<std::string> lambdas;
    std::vector<int> triple{1, 2, 3};
    std::string source;
    std::string json_path;
    std::string csv_path;
    double tol = 1e-9;
    std::string config_file;
    bool inject_fault = false;

    double k() const { return k_grid.empty() ? 0.0 : k_grid.front(); }
};

/// Entry point shared by the executable and the acceptance suite.
/// args excludes the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tetraverify::cli
