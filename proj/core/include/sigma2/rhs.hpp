#pragma once

#include "sigma2/sym_matrix.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sigma2 {

// Closed-form test solution with analytic derivatives.
struct ManufacturedSolution {
    std::string name;
    int n = 0;
    std::function<double(std::span<const double>)> value;
    std::function<std::vector<double>(std::span<const double>)> gradient;
    std::function<SymMatrix(std::span<const double>)> hessian;

    double sigma2_at(std::span<const double> x) const { return hessian(x).sigma2(); }
};

// Catalog: quadratic, expbump, quartic, quartic_steep, cosbump, shifted.
ManufacturedSolution manufactured_case(const std::string& name, int n);
std::vector<std::string> manufactured_names();

// Right-hand side f(x, z, p) with optional analytic partials; finite
// differences with step fd_step fill in when they are absent.
struct RhsSpec {
    using Eval = std::function<double(std::span<const double>, double, std::span<const double>)>;
    using EvalDz = std::function<double(std::span<const double>, double, std::span<const double>)>;
    using EvalDp =
        std::function<void(std::span<const double>, double, std::span<const double>, std::span<double>)>;

    Eval f;
    EvalDz fz;   // may be empty
    EvalDp fp;   // may be empty
    double fd_step = 1e-5;
    std::string description;

    double eval(std::span<const double> x, double z, std::span<const double> p) const;
    double dz(std::span<const double> x, double z, std::span<const double> p) const;
    void dp(std::span<const double> x, double z, std::span<const double> p,
            std::span<double> out) const;

    static RhsSpec constant(double c);
    // f(x) = sigma_2 of the manufactured Hessian; x-only.
    static RhsSpec from_manufactured(const ManufacturedSolution& mf);
    // f(x, z, p) = xpart(x) + z_coef * z + sum_i p_coefs[i] * p_i.
    static RhsSpec separable(std::function<double(std::span<const double>)> xpart,
                             double z_coef, std::vector<double> p_coefs);
    // f(x, z) = sigma_2(D^2 u*)(x) * (1 + 0.1 sin u*(x)) / (1 + 0.1 sin z);
    // the manufactured solution still solves sigma_2(D^2 u) = f(x, u).
    static RhsSpec zcoupled(const ManufacturedSolution& mf);
};

} // namespace sigma2
