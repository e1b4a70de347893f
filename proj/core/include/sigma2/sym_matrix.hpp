#pragma once

#include "sigma2/spectrum.hpp"

#include <span>
#include <vector>

namespace sigma2 {

// Dense symmetric matrix of small order.  Symmetry is structural: writes go
// through set(), which mirrors the entry.
class SymMatrix {
public:
    explicit SymMatrix(int n);

    // From row-major full storage; rejects inputs whose asymmetry exceeds
    // 1e-12 times the max-abs entry.
    static SymMatrix from_full(int n, std::span<const double> data);
    static SymMatrix identity(int n);
    static SymMatrix diagonal(std::span<const double> d);

    int n() const { return n_; }
    double operator()(int i, int j) const {
        return a_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
                  static_cast<std::size_t>(j)];
    }
    void set(int i, int j, double v);
    void add(int i, int j, double v);

    double trace() const;
    double frobenius_sq() const;

    // sigma_2 of the eigenvalues without solving for them:
    // (trace^2 - |A|_F^2) / 2.
    double sigma2() const;

    // Eigenvalues by cyclic Jacobi rotations with a fixed sweep count of 12,
    // returned descending.  Deterministic: no threshold-dependent branching
    // on convergence, identical arithmetic on every platform.
    Spectrum eigenvalues() const;

    const std::vector<double>& data() const { return a_; }

private:
    int n_;
    std::vector<double> a_;
};

// Coefficient matrix of the linearized operator at Hessian H:
// F = trace(H) I - H.
struct LinearizedCoeffs {
    SymMatrix F;
    // | sum F_ii - (n-1) trace(H) |, recomputable witness of the contraction
    // identity.
    double trace_residual = 0.0;
};

LinearizedCoeffs linearized_coeffs(const SymMatrix& hess);

} // namespace sigma2
