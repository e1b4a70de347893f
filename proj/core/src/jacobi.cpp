#include "sigma2/jacobi.hpp"

#include "sigma2/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sigma2 {

namespace {

std::string node_label(const GridFunction& g, std::size_t f) {
    std::vector<int> idx(static_cast<std::size_t>(g.n));
    g.unflat(f, idx);
    const std::vector<double> x = g.coord(idx);
    std::string s = "node " + std::to_string(f) + " at (";
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (k) s += ", ";
        s += std::to_string(x[k]);
    }
    return s + ")";
}

} // namespace

GridFunction log_laplacian_field(const GridFunction& u) {
    u.validate();
    GridFunction b = u;
    std::fill(b.values.begin(), b.values.end(), 0.0);
    for (std::size_t f : interior_mask(u, 1)) {
        const double lap = laplacian_at(u, f);
        if (!(lap > 0.0))
            throw DomainError("log_laplacian_field: nonpositive Laplacian, " +
                              node_label(u, f));
        b.values[f] = std::log(lap);
    }
    return b;
}

JacobiReport jacobi_residual(const GridFunction& u, const RhsSpec& rhs,
                             const JacobiOptions& opts) {
    u.validate();
    if (u.n < 4)
        throw UnsupportedDimension("jacobi_residual: gradient-term weight needs n >= 4");
    if (!rhs.f) throw ParameterError("jacobi_residual: missing right-hand side");
    if (!(opts.eps_scale > 0.0))
        throw ParameterError("jacobi_residual: eps_scale must be positive");

    const GridFunction b = log_laplacian_field(u);
    const std::vector<std::size_t> inner = interior_mask(u, 1);
    const int n = u.n;

    // Gamma = sup|u| + sup|Du| + 1, gradients on depth-1 interior nodes.
    double sup_u = 0.0;
    for (double v : u.values) sup_u = std::max(sup_u, std::abs(v));
    std::vector<double> grad(static_cast<std::size_t>(n));
    double sup_du = 0.0;
    for (std::size_t f : inner) {
        gradient_at(u, f, grad);
        double g2 = 0.0;
        for (double g : grad) g2 += g * g;
        sup_du = std::max(sup_du, std::sqrt(g2));
    }
    const double gamma = sup_u + sup_du + 1.0;

    JacobiReport rep;
    rep.n = n;
    rep.h = u.h;
    rep.gamma = gamma;
    rep.nodes = interior_mask(u, 2);
    rep.count = rep.nodes.size();
    if (rep.nodes.empty()) throw ConfigError("jacobi_residual: no depth-2 interior nodes");

    double C = opts.C;
    if (!(C > 0.0)) {
        // Calibrated default: 10 (1 + sup of |f| + |grad f| + |laplacian f|)
        // for the nodal composition f(x, u, Du).
        GridFunction fgrid = u;
        std::fill(fgrid.values.begin(), fgrid.values.end(), 0.0);
        for (std::size_t f : inner) {
            gradient_at(u, f, grad);
            std::vector<int> idx(static_cast<std::size_t>(n));
            u.unflat(f, idx);
            fgrid.values[f] = rhs.eval(u.coord(idx), u.values[f], grad);
        }
        double proxy = 0.0;
        std::vector<double> fg(static_cast<std::size_t>(n));
        for (std::size_t f : rep.nodes) {
            gradient_at(fgrid, f, fg);
            double g2 = 0.0;
            for (double g : fg) g2 += g * g;
            proxy = std::max(proxy, std::abs(fgrid.values[f]) + std::sqrt(g2) +
                                        std::abs(laplacian_at(fgrid, f)));
        }
        C = 10.0 * (1.0 + proxy);
    }
    rep.C = C;

    rep.residual.reserve(rep.count);
    rep.eps.reserve(rep.count);
    rep.ratio.reserve(rep.count);
    rep.min_residual = std::numeric_limits<double>::infinity();
    rep.C_min = 0.0;

    std::vector<int> idx(static_cast<std::size_t>(n));
    std::vector<double> x(static_cast<std::size_t>(n));
    std::vector<double> gb(static_cast<std::size_t>(n));
    std::vector<double> fp(static_cast<std::size_t>(n));
    for (std::size_t f : rep.nodes) {
        const SymMatrix hess = hessian_at(u, f);
        const double lap = hess.trace();
        const Spectrum spec = hess.eigenvalues();
        const double ratio = spec.smallest() / lap;
        const double eps = opts.eps_scale * epsilon_jacobi(n, ratio);

        const LinearizedCoeffs lin = linearized_coeffs(hess);
        const SymMatrix bh = hessian_at(b, f);
        gradient_at(b, f, gb);

        double lfb = 0.0, gfb = 0.0;
        for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c) {
                lfb += lin.F(a, c) * bh(a, c);
                gfb += lin.F(a, c) * gb[static_cast<std::size_t>(a)] *
                       gb[static_cast<std::size_t>(c)];
            }

        u.unflat(f, idx);
        u.coord(idx, x);
        gradient_at(u, f, grad);
        rhs.dp(x, u.values[f], grad, fp);
        double drift = 0.0;
        for (int a = 0; a < n; ++a)
            drift += fp[static_cast<std::size_t>(a)] * gb[static_cast<std::size_t>(a)];

        const double zero_order = gamma * gamma * (1.0 + lap);
        const double res = lfb - eps * gfb - drift + C * zero_order;
        rep.residual.push_back(res);
        rep.eps.push_back(eps);
        rep.ratio.push_back(ratio);
        if (res < rep.min_residual) {
            rep.min_residual = res;
            rep.argmin = f;
        }
        rep.C_min = std::max(rep.C_min, (eps * gfb + drift - lfb) / zero_order);
    }
    rep.K = std::max(0.0, -rep.min_residual) / (u.h * u.h);
    return rep;
}

QFormVerifyReport qform_verify(int n, std::uint64_t samples, std::uint64_t seed,
                               const QFormVerifyOptions& opts) {
    if (n < 4) throw UnsupportedDimension("qform_verify: needs n = 4 or n >= 5");
    if (samples == 0) throw ParameterError("qform_verify: need at least one sample");
    if (opts.force_ratio > 0.0 || opts.force_ratio <= -1.0)
        throw ParameterError("qform_verify: force_ratio must lie in (-1, 0]");

    const bool forced = opts.force_ratio < 0.0;
    CounterRng rng(seed);
    QFormVerifyReport rep;
    rep.n = n;
    rep.samples = samples;
    const double inf = std::numeric_limits<double>::infinity();
    rep.min_trace = inf;
    rep.min_det = inf;
    rep.min_penalized = inf;

    std::vector<double> t(static_cast<std::size_t>(n));
    for (std::uint64_t s = 0; s < samples; ++s) {
        Spectrum lambda = forced
                              ? sample_forced_ratio(rng, n, opts.force_ratio)
                              : sample_gamma2(rng, n, true, &rep.stats);
        double f = rng.uniform(0.1, 10.0);
        if (!forced) {
            // Rescale so f = sigma_2(lambda) holds exactly as real numbers.
            const double s2 = sigma_k(lambda, 2);
            const double scale = std::sqrt(f / s2);
            std::vector<double> vals(lambda.values().begin(), lambda.values().end());
            for (double& v : vals) v *= scale;
            lambda = Spectrum(std::move(vals));
        }

        bool bad = false;
        for (int i = 0; i < n; ++i) {
            const RestrictedQForm form = restricted_qform(lambda, f, i, opts.theta_cap, forced);
            rep.min_trace = std::min(rep.min_trace, form.trace);
            rep.min_det = std::min(rep.min_det, form.det);
            if (form.trace < -opts.tol) {
                ++rep.trace_failures;
                bad = true;
            }
            if (form.det < -opts.tol) {
                ++rep.det_failures;
                bad = true;
            }
        }

        // One random direction on the constraint slice <DF, t> = fi.
        const int i = std::min(n - 1, static_cast<int>(rng.uniform01() * n));
        const double fi = rng.uniform(-0.1, 0.1);
        for (double& v : t) v = rng.uniform(-1.0, 1.0);
        const RestrictedQForm form = restricted_qform(lambda, f, i, opts.theta_cap, forced);
        const QFormVectors vecs = qform_vectors(lambda, f, i);
        double dft = 0.0;
        for (int k = 0; k < n; ++k) dft += vecs.DF[static_cast<std::size_t>(k)] * t[static_cast<std::size_t>(k)];
        const double shift = (fi - dft) / vecs.df_sq_direct;
        for (int k = 0; k < n; ++k) t[static_cast<std::size_t>(k)] += shift * vecs.DF[static_cast<std::size_t>(k)];
        const double penalized = q_index_value(form, t) + qform_penalty(form, fi);
        rep.min_penalized = std::min(rep.min_penalized, penalized);
        if (penalized < -opts.tol) {
            ++rep.penalty_failures;
            bad = true;
        }
        if (bad) ++rep.violations;
    }
    return rep;
}

} // namespace sigma2
