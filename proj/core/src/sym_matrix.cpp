#include "sigma2/sym_matrix.hpp"

#include "sigma2/errors.hpp"

#include <algorithm>
#include <cmath>

namespace sigma2 {

SymMatrix::SymMatrix(int n) : n_(n) {
    if (n < 1) throw ParameterError("SymMatrix: order must be positive");
    a_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
}

SymMatrix SymMatrix::from_full(int n, std::span<const double> data) {
    if (static_cast<int>(data.size()) != n * n)
        throw ParameterError("SymMatrix::from_full: wrong data size");
    double scale = 0.0;
    for (double v : data) scale = std::max(scale, std::abs(v));
    SymMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double aij = data[static_cast<std::size_t>(i * n + j)];
            const double aji = data[static_cast<std::size_t>(j * n + i)];
            if (std::abs(aij - aji) > 1e-12 * std::max(1.0, scale))
                throw ParameterError("SymMatrix::from_full: input is not symmetric");
            m.set(i, j, aij);
        }
    return m;
}

SymMatrix SymMatrix::identity(int n) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
    return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
    SymMatrix m(static_cast<int>(d.size()));
    for (int i = 0; i < m.n(); ++i) m.set(i, i, d[static_cast<std::size_t>(i)]);
    return m;
}

void SymMatrix::set(int i, int j, double v) {
    a_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)] = v;
    a_[static_cast<std::size_t>(j) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i)] = v;
}

void SymMatrix::add(int i, int j, double v) {
    set(i, j, (*this)(i, j) + v);
}

double SymMatrix::trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

double SymMatrix::frobenius_sq() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return s;
}

double SymMatrix::sigma2() const {
    const double t = trace();
    return 0.5 * (t * t - frobenius_sq());
}

Spectrum SymMatrix::eigenvalues() const {
    const int n = n_;
    if (n == 1) return Spectrum({a_[0], a_[0]}); // not reachable: order >= 2 in practice
    std::vector<double> a = a_;
    auto at = [&](int i, int j) -> double& {
        return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                 static_cast<std::size_t>(j)];
    };
    constexpr int kSweeps = 12;
    for (int sweep = 0; sweep < kSweeps; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double app = at(p, p);
                const double aqq = at(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                at(p, p) = app - t * apq;
                at(q, q) = aqq + t * apq;
                at(p, q) = 0.0;
                at(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = akp - s * (akq + tau * akp);
                    at(p, k) = at(k, p);
                    at(k, q) = akq + s * (akp - tau * akq);
                    at(q, k) = at(k, q);
                }
            }
        }
    }
    std::vector<double> eig(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = at(i, i);
    return Spectrum(std::move(eig));
}

LinearizedCoeffs linearized_coeffs(const SymMatrix& hess) {
    const int n = hess.n();
    const double tr = hess.trace();
    SymMatrix f(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            f.set(i, j, (i == j ? tr : 0.0) - hess(i, j));
    const double expected = (n - 1.0) * tr;
    LinearizedCoeffs out{std::move(f), 0.0};
    out.trace_residual = std::abs(out.F.trace() - expected);
    return out;
}

} // namespace sigma2
