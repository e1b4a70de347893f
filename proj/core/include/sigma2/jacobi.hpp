#pragma once

#include "sigma2/cone.hpp"
#include "sigma2/grid.hpp"
#include "sigma2/rhs.hpp"

#include <cstdint>
#include <vector>

namespace sigma2 {

// b = log of the discrete Laplacian, defined on depth-1 interior nodes; every
// other node holds zero.  Throws DomainError naming the first node where the
// Laplacian is not strictly positive.
GridFunction log_laplacian_field(const GridFunction& u);

struct JacobiOptions {
    double C = -1.0;        // <= 0 selects the calibrated default
    double eps_scale = 1.0; // multiplies the gradient-term weight
};

// Pointwise defect of the key differential inequality for b = log(laplacian):
//   residual = L_F b - eps |grad b|_F^2 - f_p . grad b + C Gamma^2 (1 + laplacian)
// evaluated with centered differences on depth-2 interior nodes.  Nonnegative
// up to discretization error when the inequality holds.
struct JacobiReport {
    int n = 0;
    double h = 0.0;
    double gamma = 0.0; // sup|u| + sup|Du| + 1
    double C = 0.0;     // zero-order constant actually used
    std::size_t count = 0;
    std::vector<std::size_t> nodes; // depth-2 interior, flat ascending
    std::vector<double> residual;
    std::vector<double> eps;   // gradient-term weight per node
    std::vector<double> ratio; // lambda_min / laplacian per node
    double min_residual = 0.0;
    std::size_t argmin = 0; // flat index of the minimizing node
    double K = 0.0;         // max(0, -min_residual) / h^2
    double C_min = 0.0;     // smallest C making every residual nonnegative
};

JacobiReport jacobi_residual(const GridFunction& u, const RhsSpec& rhs,
                             const JacobiOptions& opts = {});

// Randomized audit of the restricted quadratic form: for cone spectra with
// consistent f = sigma_2, the 2x2 restriction must have nonnegative trace and
// determinant for every index, and the penalized form must stay nonnegative
// on the constraint slice <DF, t> = fi.
struct QFormVerifyOptions {
    double theta_cap = 0.01;
    double force_ratio = 0.0; // < 0: prescribed lambda_min/sigma_1, outside the cone
    double tol = 1e-10;
};

struct QFormVerifyReport {
    int n = 0;
    std::uint64_t samples = 0;
    std::uint64_t violations = 0;
    std::uint64_t trace_failures = 0;
    std::uint64_t det_failures = 0;
    std::uint64_t penalty_failures = 0;
    double min_trace = 0.0;
    double min_det = 0.0;
    double min_penalized = 0.0;
    SampleStats stats;
};

QFormVerifyReport qform_verify(int n, std::uint64_t samples, std::uint64_t seed,
                               const QFormVerifyOptions& opts = {});

} // namespace sigma2
