#pragma once

#include "sigma2/grid.hpp"
#include "sigma2/rhs.hpp"
#include "sigma2/spectrum.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace sigma2 {

// Per-node cone certificates for the discrete Hessian over depth-1 interior
// nodes.
struct AdmissibilityReport {
    bool admissible = false;
    double min_sigma2 = 0.0;
    double min_laplacian = 0.0;
    std::size_t violations = 0;
    std::size_t first_violation = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> nodes;
    std::vector<ConeCertificate> certificates;
};

AdmissibilityReport admissibility_scan(const GridFunction& u);

// Discrete Hessians, gradients and laplacians over depth-1 interior nodes,
// packed flat (Hessian upper triangle row-major).
struct HessianField {
    int n = 0;
    std::size_t count = 0;
    std::vector<std::size_t> nodes;
    std::vector<double> hess;
    std::vector<double> grad;
    std::vector<double> laplacian;

    SymMatrix hessian(std::size_t k) const;
    std::span<const double> gradient(std::size_t k) const;
};

HessianField hessian_field(const GridFunction& u);

struct SolveOptions {
    double tol = -1.0;       // auto: 1e-10 * max(1, sup |f| at the initial iterate)
    int max_iter = 50;
    double damping_floor = 1e-4;
    // Unknown counts up to this use a sparse direct factorization; beyond it
    // a diagonally preconditioned Krylov iteration takes over.  Fill-in makes
    // the factorization impractical well before the Krylov path stalls.
    std::size_t direct_limit = 6000;
};

struct SolveOutcome {
    GridFunction u;
    int iterations = 0;               // accepted Newton steps
    double final_residual = 0.0;      // max norm over interior nodes
    bool admissible = false;
    std::vector<double> damping_history;
    std::vector<double> residual_history; // including the initial residual
};

// Least-squares quadratic fit to the boundary data, lifted into the cone if
// necessary, plus a discrete harmonic extension of the boundary mismatch so
// the initial iterate matches the boundary data exactly.
GridFunction default_initial_guess(const GridFunction& boundary);

// Damped Newton for sigma_2(D^2 u) = f(x, u, Du) with Dirichlet data taken
// from the boundary nodes of `boundary`.  Steps are halved until the iterate
// is admissible and the residual decreases; reaching the damping floor is a
// convergence error.
SolveOutcome solve(const RhsSpec& rhs, const GridFunction& boundary,
                   const std::optional<GridFunction>& init = std::nullopt,
                   const SolveOptions& opts = {});

} // namespace sigma2
