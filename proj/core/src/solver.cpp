#include "sigma2/solver.hpp"

#include "sigma2/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <Eigen/IterativeLinearSolvers>

#include <algorithm>
#include <cmath>
#include <string>

namespace sigma2 {

namespace {

struct Workspace {
    const GridFunction* geom = nullptr;
    std::vector<std::size_t> interior;        // flat indices, ascending
    std::vector<std::ptrdiff_t> unknown_of;   // flat -> unknown id or -1
    std::vector<std::vector<double>> coords;  // per interior node

    explicit Workspace(const GridFunction& g) : geom(&g) {
        interior = interior_mask(g, 1);
        unknown_of.assign(g.size(), -1);
        for (std::size_t k = 0; k < interior.size(); ++k)
            unknown_of[interior[k]] = static_cast<std::ptrdiff_t>(k);
        coords.resize(interior.size());
        std::vector<int> idx(static_cast<std::size_t>(g.n));
        for (std::size_t k = 0; k < interior.size(); ++k) {
            g.unflat(interior[k], idx);
            coords[k] = g.coord(idx);
        }
    }
};

// sigma_1 and sigma_2 of the discrete Hessian via trace and Frobenius norm.
void cone_values_at(const GridFunction& u, std::size_t f, double& s1, double& s2) {
    const double h2 = u.h * u.h;
    double tr = 0.0, fro = 0.0;
    for (int a = 0; a < u.n; ++a) {
        const std::size_t sa = u.stride(a);
        const double haa = (u.values[f + sa] - 2.0 * u.values[f] + u.values[f - sa]) / h2;
        tr += haa;
        fro += haa * haa;
        for (int b = a + 1; b < u.n; ++b) {
            const std::size_t sb = u.stride(b);
            const double hab = (u.values[f + sa + sb] - u.values[f + sa - sb] -
                                u.values[f - sa + sb] + u.values[f - sa - sb]) /
                               (4.0 * h2);
            fro += 2.0 * hab * hab;
        }
    }
    s1 = tr;
    s2 = 0.5 * (tr * tr - fro);
}

bool iterate_admissible(const GridFunction& u, const Workspace& ws) {
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t f : ws.interior) {
        cone_values_at(u, f, s1, s2);
        if (!(s1 > 0.0) || !(s2 > 0.0)) return false;
    }
    return true;
}

double residual_vector(const RhsSpec& rhs, const GridFunction& u, const Workspace& ws,
                       Eigen::VectorXd* out) {
    const int n = u.n;
    std::vector<double> grad(static_cast<std::size_t>(n));
    double worst = 0.0;
    if (out) out->resize(static_cast<Eigen::Index>(ws.interior.size()));
    for (std::size_t k = 0; k < ws.interior.size(); ++k) {
        const std::size_t f = ws.interior[k];
        double s1 = 0.0, s2 = 0.0;
        cone_values_at(u, f, s1, s2);
        gradient_at(u, f, grad);
        const double r = s2 - rhs.eval(ws.coords[k], u.values[f], grad);
        if (out) (*out)(static_cast<Eigen::Index>(k)) = r;
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

Eigen::SparseMatrix<double> jacobian(const RhsSpec& rhs, const GridFunction& u,
                                     const Workspace& ws) {
    const int n = u.n;
    const double h = u.h;
    const double h2 = h * h;
    const auto count = static_cast<Eigen::Index>(ws.interior.size());
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(ws.interior.size() * (1 + 2 * static_cast<std::size_t>(n) +
                                        2 * static_cast<std::size_t>(n) * (n - 1)));
    std::vector<double> grad(static_cast<std::size_t>(n));
    std::vector<double> fp(static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < ws.interior.size(); ++k) {
        const std::size_t f = ws.interior[k];
        const auto row = static_cast<Eigen::Index>(k);
        const SymMatrix hess = hessian_at(u, f);
        const double tr = hess.trace();
        gradient_at(u, f, grad);
        const double z = u.values[f];
        const double fz = rhs.dz(ws.coords[k], z, grad);
        rhs.dp(ws.coords[k], z, grad, fp);

        auto push = [&](std::size_t flat, double v) {
            const std::ptrdiff_t col = ws.unknown_of[flat];
            if (col >= 0) trips.emplace_back(row, static_cast<Eigen::Index>(col), v);
        };

        double center = -fz;
        for (int a = 0; a < n; ++a) {
            const double faa = tr - hess(a, a);
            center += -2.0 * faa / h2;
            const std::size_t sa = u.stride(a);
            push(f + sa, faa / h2 - fp[static_cast<std::size_t>(a)] / (2.0 * h));
            push(f - sa, faa / h2 + fp[static_cast<std::size_t>(a)] / (2.0 * h));
            for (int b = a + 1; b < n; ++b) {
                const double fab = -hess(a, b);
                const std::size_t sb = u.stride(b);
                push(f + sa + sb, fab / (2.0 * h2));
                push(f - sa - sb, fab / (2.0 * h2));
                push(f + sa - sb, -fab / (2.0 * h2));
                push(f - sa + sb, -fab / (2.0 * h2));
            }
        }
        trips.emplace_back(row, row, center);
    }
    Eigen::SparseMatrix<double> jac(count, count);
    jac.setFromTriplets(trips.begin(), trips.end());
    return jac;
}

Eigen::VectorXd linear_solve(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& b,
                             std::size_t direct_limit) {
    if (static_cast<std::size_t>(a.rows()) <= direct_limit) {
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(a);
        if (lu.info() != Eigen::Success)
            throw ConvergenceError("linear solve: sparse factorization failed");
        Eigen::VectorXd x = lu.solve(b);
        if (lu.info() != Eigen::Success)
            throw ConvergenceError("linear solve: sparse back substitution failed");
        return x;
    }
    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::DiagonalPreconditioner<double>> krylov;
    krylov.setTolerance(1e-13);
    krylov.setMaxIterations(20000);
    krylov.compute(a);
    Eigen::VectorXd x = krylov.solve(b);
    if (krylov.info() != Eigen::Success)
        throw ConvergenceError("linear solve: Krylov iteration stalled at residual " +
                               std::to_string(krylov.error()));
    return x;
}

} // namespace

AdmissibilityReport admissibility_scan(const GridFunction& u) {
    u.validate();
    AdmissibilityReport rep;
    rep.nodes = interior_mask(u, 1);
    rep.certificates.reserve(rep.nodes.size());
    rep.admissible = true;
    rep.min_sigma2 = std::numeric_limits<double>::infinity();
    rep.min_laplacian = std::numeric_limits<double>::infinity();
    for (std::size_t f : rep.nodes) {
        double s1 = 0.0, s2 = 0.0;
        cone_values_at(u, f, s1, s2);
        ConeCertificate cert;
        cert.sigma1 = s1;
        cert.sigma2 = s2;
        cert.in_gamma2 = s1 > 0.0 && s2 > 0.0;
        if (!cert.in_gamma2) {
            if (rep.admissible) rep.first_violation = f;
            rep.admissible = false;
            ++rep.violations;
        }
        rep.min_sigma2 = std::min(rep.min_sigma2, s2);
        rep.min_laplacian = std::min(rep.min_laplacian, s1);
        rep.certificates.push_back(cert);
    }
    return rep;
}

SymMatrix HessianField::hessian(std::size_t k) const {
    SymMatrix hm(n);
    const std::size_t w = static_cast<std::size_t>(n) * (n + 1) / 2;
    std::size_t off = k * w;
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) hm.set(a, b, hess[off++]);
    return hm;
}

std::span<const double> HessianField::gradient(std::size_t k) const {
    return {grad.data() + k * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
}

HessianField hessian_field(const GridFunction& u) {
    u.validate();
    HessianField field;
    field.n = u.n;
    field.nodes = interior_mask(u, 1);
    field.count = field.nodes.size();
    const std::size_t w = static_cast<std::size_t>(u.n) * (u.n + 1) / 2;
    field.hess.resize(field.count * w);
    field.grad.resize(field.count * static_cast<std::size_t>(u.n));
    field.laplacian.resize(field.count);
    for (std::size_t k = 0; k < field.count; ++k) {
        const std::size_t f = field.nodes[k];
        const SymMatrix hm = hessian_at(u, f);
        std::size_t off = k * w;
        for (int a = 0; a < u.n; ++a)
            for (int b = a; b < u.n; ++b) field.hess[off++] = hm(a, b);
        gradient_at(u, f, std::span<double>(field.grad.data() + k * static_cast<std::size_t>(u.n),
                                            static_cast<std::size_t>(u.n)));
        field.laplacian[k] = hm.trace();
    }
    return field;
}

GridFunction default_initial_guess(const GridFunction& boundary) {
    boundary.validate();
    const int n = boundary.n;
    const int nq = 1 + n + n * (n + 1) / 2;

    // Least-squares quadratic through the boundary values.
    Eigen::MatrixXd ata = Eigen::MatrixXd::Zero(nq, nq);
    Eigen::VectorXd atb = Eigen::VectorXd::Zero(nq);
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    std::vector<double> x(static_cast<std::size_t>(n));
    Eigen::VectorXd row(nq);
    std::size_t f = 0;
    do {
        if (!boundary.is_interior(idx, 1)) {
            boundary.coord(idx, x);
            int c = 0;
            row(c++) = 1.0;
            for (int a = 0; a < n; ++a) row(c++) = x[static_cast<std::size_t>(a)];
            for (int a = 0; a < n; ++a)
                for (int b = a; b < n; ++b)
                    row(c++) = x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(b)];
            ata.noalias() += row * row.transpose();
            atb.noalias() += row * boundary.values[f];
        }
        ++f;
    } while (next_index(idx, boundary.m));
    Eigen::VectorXd q = ata.ldlt().solve(atb);

    // Assemble the quadratic's Hessian and lift it into the cone if needed.
    SymMatrix a(n);
    {
        int c = 1 + n;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const double coef = q(c++);
                a.set(i, j, i == j ? 2.0 * coef : coef);
            }
    }
    double lift = 0.0;
    {
        const double scale = std::max(1.0, std::sqrt(a.frobenius_sq()));
        SymMatrix trial = a;
        for (int tries = 0; tries < 200; ++tries) {
            if (trial.trace() > 0.05 * scale && trial.sigma2() > 0.0025 * scale * scale) break;
            lift += 0.25 * scale;
            for (int i = 0; i < n; ++i) trial.set(i, i, a(i, i) + lift);
        }
        for (int i = 0; i < n; ++i) a.set(i, i, a(i, i) + lift);
    }

    auto quad_value = [&](std::span<const double> xv) {
        double v = q(0);
        for (int i = 0; i < n; ++i) v += q(1 + i) * xv[static_cast<std::size_t>(i)];
        for (int i = 0; i < n; ++i) {
            v += 0.5 * a(i, i) * xv[static_cast<std::size_t>(i)] * xv[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < n; ++j)
                v += a(i, j) * xv[static_cast<std::size_t>(i)] * xv[static_cast<std::size_t>(j)];
        }
        return v;
    };

    GridFunction u0 = boundary;
    Workspace ws(boundary);

    // Discrete harmonic extension of the boundary mismatch keeps the guess
    // equal to the boundary data while staying smooth inside.
    const auto count = static_cast<Eigen::Index>(ws.interior.size());
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(count);
    const double h2 = boundary.h * boundary.h;
    for (std::size_t k = 0; k < ws.interior.size(); ++k) {
        const std::size_t fl = ws.interior[k];
        const auto rowi = static_cast<Eigen::Index>(k);
        trips.emplace_back(rowi, rowi, -2.0 * n / h2);
        for (int aaxis = 0; aaxis < n; ++aaxis) {
            const std::size_t s = boundary.stride(aaxis);
            for (const std::size_t nb : {fl + s, fl - s}) {
                const std::ptrdiff_t col = ws.unknown_of[nb];
                if (col >= 0) {
                    trips.emplace_back(rowi, static_cast<Eigen::Index>(col), 1.0 / h2);
                } else {
                    std::vector<int> bidx(static_cast<std::size_t>(n));
                    boundary.unflat(nb, bidx);
                    const std::vector<double> bx = boundary.coord(bidx);
                    b(rowi) -= (boundary.values[nb] - quad_value(bx)) / h2;
                }
            }
        }
    }
    Eigen::SparseMatrix<double> lap(count, count);
    lap.setFromTriplets(trips.begin(), trips.end());
    Eigen::VectorXd v = linear_solve(lap, b, SolveOptions{}.direct_limit);

    for (std::size_t k = 0; k < ws.interior.size(); ++k)
        u0.values[ws.interior[k]] = quad_value(ws.coords[k]) + v(static_cast<Eigen::Index>(k));
    return u0;
}

SolveOutcome solve(const RhsSpec& rhs, const GridFunction& boundary,
                   const std::optional<GridFunction>& init, const SolveOptions& opts) {
    boundary.validate();
    if (boundary.n < 2 || boundary.n > 4)
        throw UnsupportedDimension("solve: grids cover dimensions 2 through 4");
    if (!rhs.f) throw ParameterError("solve: missing right-hand side");

    GridFunction u = init ? *init : default_initial_guess(boundary);
    if (init) {
        u.validate();
        if (u.n != boundary.n || u.m != boundary.m || u.h != boundary.h)
            throw ParameterError("solve: initial iterate geometry mismatch");
        // Dirichlet data always comes from `boundary`.
        std::vector<int> idx(static_cast<std::size_t>(u.n), 0);
        std::size_t f = 0;
        do {
            if (!u.is_interior(idx, 1)) u.values[f] = boundary.values[f];
            ++f;
        } while (next_index(idx, u.m));
    }

    Workspace ws(boundary);
    if (ws.interior.empty()) throw ConfigError("solve: no interior nodes");

    // f must be positive where the iteration starts; its size also sets the
    // default tolerance.
    double tol = opts.tol;
    {
        std::vector<double> grad(static_cast<std::size_t>(u.n));
        double fmax = 1.0;
        for (std::size_t k = 0; k < ws.interior.size(); ++k) {
            const std::size_t fl = ws.interior[k];
            gradient_at(u, fl, grad);
            const double fv = rhs.eval(ws.coords[k], u.values[fl], grad);
            if (!(fv > 0.0))
                throw ParameterError("solve: right-hand side nonpositive at node " +
                                     std::to_string(fl));
            fmax = std::max(fmax, fv);
        }
        if (!(tol > 0.0)) tol = 1e-10 * fmax;
    }

    if (!iterate_admissible(u, ws))
        throw AdmissibilityError("solve: initial iterate is not 2-convex");

    SolveOutcome out{std::move(u), 0, 0.0, false, {}, {}};
    Eigen::VectorXd r;
    double rnorm = residual_vector(rhs, out.u, ws, &r);
    out.residual_history.push_back(rnorm);

    for (int it = 0; it < opts.max_iter && rnorm > tol; ++it) {
        const Eigen::SparseMatrix<double> jac = jacobian(rhs, out.u, ws);
        const Eigen::VectorXd step = linear_solve(jac, Eigen::VectorXd(-r), opts.direct_limit);

        double t = 1.0;
        GridFunction cand = out.u;
        bool accepted = false;
        while (t >= opts.damping_floor) {
            for (std::size_t k = 0; k < ws.interior.size(); ++k)
                cand.values[ws.interior[k]] =
                    out.u.values[ws.interior[k]] + t * step(static_cast<Eigen::Index>(k));
            Eigen::VectorXd rc;
            if (iterate_admissible(cand, ws)) {
                const double cnorm = residual_vector(rhs, cand, ws, &rc);
                if (cnorm < rnorm) {
                    out.u = std::move(cand);
                    r = std::move(rc);
                    rnorm = cnorm;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
            if (t < opts.damping_floor) break;
            cand = out.u;
        }
        if (!accepted)
            throw ConvergenceError(
                "solve: damping floor reached at iteration " + std::to_string(it + 1) +
                ", residual " + std::to_string(rnorm));
        out.damping_history.push_back(t);
        out.residual_history.push_back(rnorm);
        ++out.iterations;
    }

    if (rnorm > tol)
        throw ConvergenceError("solve: residual " + std::to_string(rnorm) +
                               " above tolerance after " + std::to_string(opts.max_iter) +
                               " iterations");
    out.final_residual = rnorm;
    out.admissible = iterate_admissible(out.u, ws);
    return out;
}

} // namespace sigma2
