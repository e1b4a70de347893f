#pragma once

#include "sigma2/csv.hpp"

#include <cstdint>
#include <string>

namespace sigma2 {

// One batch experiment.  Every run is a pure function of this struct; the
// seed fully determines all random draws.
struct RunConfig {
    std::string subcommand;
    int n = 4;
    int m = 13;
    std::uint64_t seed = 42;
    std::uint64_t samples = 100000;
    int grid_points = 4096;      // polyscan resolution
    double theta = 0.01;         // polyscan theta / qform theta cap
    double radius = 0.0;         // grid half-width; 0 picks the subcommand default
    std::string case_name = "quadratic";
    double C = -1.0;             // jacobi zero-order constant, <= 0 calibrates
    double eps_scale = 1.0;      // jacobi gradient-weight multiplier
    double force_ratio = 0.0;    // qform falsification control, < 0 activates
    int steps = 200000;          // wolff quadrature steps
    double r = 0.0;              // wolff/harnack/oscillation radius; 0 = default
    double density = 1.0;        // wolff constant density
    double holder_gamma = 0.5;   // seminorm exponent
    double R = 1.0;              // seminorm ball radius
    double C1 = 3.0;             // harnack multiplicative constant
    std::string save;            // optional grid output path (solve)
    std::string load;            // optional grid input path (jacobi, doubling)
};

struct RunResult {
    ExperimentReport report;
    int exit_code = 0; // 0 all contracts hold, 1 a property failed
};

RunResult run_lemmas(const RunConfig& cfg);
RunResult run_polyscan(const RunConfig& cfg);
RunResult run_qform(const RunConfig& cfg);
RunResult run_solve(const RunConfig& cfg);
RunResult run_jacobi(const RunConfig& cfg);
RunResult run_doubling(const RunConfig& cfg);
RunResult run_wolff(const RunConfig& cfg);
RunResult run_seminorms(const RunConfig& cfg);
RunResult run_harnack(const RunConfig& cfg);
RunResult run_oscillation(const RunConfig& cfg);

// Dispatch on cfg.subcommand; unknown names throw ParameterError.
RunResult run_subcommand(const RunConfig& cfg);

} // namespace sigma2
