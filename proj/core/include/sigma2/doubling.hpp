#pragma once

#include "sigma2/grid.hpp"

#include <string>
#include <vector>

namespace sigma2 {

// Parameters of the doubling test function
//   P = 2 log(9 - |x|^2) + alpha (x . Du - u) + (beta/2)|Du|^2 + log max{bbar, gamma}
// with bbar = log(laplacian) minus its sup over the inner ball.
struct DoublingConfig {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double r_inner = 1.0;
    double r_outer = 2.0;
    double constant_C = 10.0;
    double Gamma = 0.0; // norm 3 sup|Du| + sup|u| + 1 the defaults were built from
};

// Gamma norm used by the default parameter formulas.
double gamma_norm(const GridFunction& u);

// gamma = (10 n C / c_n) Gamma^2, alpha = 1/(60 n C Gamma gamma),
// beta = 1/(120 n^2 C Gamma^2 gamma).  Throws ConfigError if the resulting
// parameters break any of the documented constraints.
DoublingConfig checked_defaults(const GridFunction& u, double constant_C = 10.0);

struct ConstraintCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0; // satisfied means lhs <= rhs up to 1e-12 relative slack
    bool satisfied = false;
};

// The ten atomic parameter inequalities behind the default choices.
std::vector<ConstraintCheck> parameter_checks(const DoublingConfig& cfg, int n, double Gamma);

// Node-wise P on depth-1 interior nodes where 9 - |x|^2 > 0; NaN elsewhere.
GridFunction guanqiu_P(const GridFunction& u, const DoublingConfig& cfg);

struct DoublingReport {
    double sup_inner = 0.0; // sup of the discrete Laplacian over the inner ball
    double sup_outer = 0.0;
    double ratio = 0.0;
    double gamma_norm = 0.0; // Gamma
    double implied_bound = 0.0; // C exp(C Gamma^6)
    double fitted_C = 0.0;    // C' solving ratio = C' exp(C' Gamma^6)
    double P_max = 0.0;
    std::size_t max_P_location = 0; // flat index
};

// Doubling ratio of the discrete Laplacian over nested ball masks
// (|x| <= r + h/2), plus the maximum of the test function over the outer mask.
DoublingReport doubling_ratio(const GridFunction& u, const DoublingConfig& cfg);

} // namespace sigma2
