#pragma once

#include "sigma2/grid.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sigma2 {

// Nonnegative density against Lebesgue measure, in one of three shapes:
// a constant, a radial profile (piecewise linear samples on [0, r_max],
// zero beyond), or nodal values on a grid with cell volume h^n.
class DensityMeasure {
public:
    enum class Kind { Constant, Radial, Grid };

    static DensityMeasure constant(int n, double c);
    static DensityMeasure radial(int n, double r_max, std::vector<double> profile);
    static DensityMeasure grid(GridFunction density);

    Kind kind() const { return kind_; }
    int dim() const { return n_; }
    const GridFunction& grid_density() const;

    // Mass of the ball of radius t around x.  Exact for constant and radial
    // kinds (radial only at x = 0); node counting times h^n for grids.
    double ball_mass(std::span<const double> x, double t) const;

private:
    DensityMeasure() = default;
    Kind kind_ = Kind::Constant;
    int n_ = 0;
    double c_ = 0.0;
    double r_max_ = 0.0;
    std::vector<double> profile_;
    std::optional<GridFunction> grid_;

    friend double wolff_potential(const DensityMeasure&, std::span<const double>, double, int);
};

// Volume of the unit ball.
double unit_ball_volume(int n);

// W(x, r): integral over (0, r] of sqrt(mass(B_t(x)) / t^(n-4)) dt/t by
// composite midpoint quadrature in log t over [log(r 1e-6), log r].
double wolff_potential(const DensityMeasure& mu, std::span<const double> x, double r,
                       int steps);

struct HarnackReport {
    double sup = 0.0;
    double inf = 0.0;
    double r = 0.0;
    double C1 = 0.0;
    std::optional<double> C2;
    double rhs_sup = 0.0;
    double fitted_C2 = 0.0; // smallest C2 with sup <= C1 inf + C2 r^2
    bool satisfied = false;
    std::size_t nodes = 0;
};

// sup/inf of u over the exact node mask |x| <= r; u must be nonnegative and
// 2-convex, and r < radius/10.
HarnackReport harnack_check(const GridFunction& u, double rhs_sup, double r, double C1,
                            std::optional<double> C2 = std::nullopt);

struct SeminormReport {
    double weighted_sup = 0.0;    // sup of (R-|x|)^n |u|
    double weighted_holder = 0.0; // sup of min(d_x,d_y)^(n+gamma) |u(x)-u(y)| / |x-y|^gamma
    double gamma = 0.0;
    double R = 0.0;
    std::size_t nodes = 0;
    std::uint64_t pairs = 0;
    bool subsampled = false;
    std::uint64_t seed = 0; // pair-sampling seed when subsampled
};

// Exact over all pairs up to 4096 ball nodes; 20000 seeded pairs beyond.
SeminormReport weighted_seminorms(const GridFunction& u, double gamma, double R);

struct InterpolationReport {
    double eps = 0.0;
    double weighted_sup = 0.0;
    double weighted_holder = 0.0;
    double integral_abs = 0.0; // sum h^n |u| over the same node set
    double fitted_C = 0.0;     // smallest C with sup <= eps^gamma holder + C eps^-n integral
};

InterpolationReport interpolation_constant(const GridFunction& u, double gamma, double R,
                                           double eps);

struct OscillationRow {
    double r = 0.0;
    double omega_r = 0.0;
    double omega_10r = 0.0;
    bool satisfied = false; // with the fitted theta and C
};

struct OscillationReport {
    std::vector<OscillationRow> rows;
    double fitted_theta = 0.0;
    double fitted_C = 0.0;
};

// Oscillation sup-inf over exact masks B_r(x) and B_10r(x); fits theta on a
// coarse grid and reports the smallest C with omega_r <= theta omega_10r + C r^2.
OscillationReport oscillation_decay(const GridFunction& u, std::span<const double> x,
                                    std::span<const double> radii);

} // namespace sigma2
