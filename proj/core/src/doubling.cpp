#include "sigma2/doubling.hpp"

#include "sigma2/cone.hpp"
#include "sigma2/errors.hpp"
#include "sigma2/jacobi.hpp"
#include "sigma2/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sigma2 {

namespace {

constexpr double kSlack = 1e-12;

bool leq_with_slack(double lhs, double rhs) {
    return lhs <= rhs + kSlack * std::max({std::abs(lhs), std::abs(rhs), 1.0});
}

void require_admissible(const GridFunction& u, const char* who) {
    const AdmissibilityReport rep = admissibility_scan(u);
    if (!rep.admissible)
        throw AdmissibilityError(std::string(who) + ": iterate leaves the cone at " +
                                 std::to_string(rep.violations) + " node(s)");
}

std::vector<std::size_t> masked_interior(const GridFunction& u, double r) {
    std::vector<std::size_t> mask = ball_mask(u, r, u.h / 2.0);
    const std::vector<std::size_t> inner = interior_mask(u, 1);
    std::vector<std::size_t> out;
    out.reserve(mask.size());
    std::set_intersection(mask.begin(), mask.end(), inner.begin(), inner.end(),
                          std::back_inserter(out));
    return out;
}

} // namespace

double gamma_norm(const GridFunction& u) {
    u.validate();
    double sup_u = 0.0;
    for (double v : u.values) sup_u = std::max(sup_u, std::abs(v));
    std::vector<double> grad(static_cast<std::size_t>(u.n));
    double sup_du = 0.0;
    for (std::size_t f : interior_mask(u, 1)) {
        gradient_at(u, f, grad);
        double g2 = 0.0;
        for (double g : grad) g2 += g * g;
        sup_du = std::max(sup_du, std::sqrt(g2));
    }
    return 3.0 * sup_du + sup_u + 1.0;
}

std::vector<ConstraintCheck> parameter_checks(const DoublingConfig& cfg, int n, double Gamma) {
    if (n < 2) throw ParameterError("parameter_checks: dimension must be at least 2");
    if (!(Gamma >= 1.0)) throw ParameterError("parameter_checks: Gamma must be at least 1");
    const double a = cfg.alpha, b = cfg.beta, g = cfg.gamma, C = cfg.constant_C;
    const double cn = dynamic_cn(n);
    std::vector<ConstraintCheck> checks;
    auto add = [&](std::string name, double lhs, double rhs) {
        checks.push_back({std::move(name), lhs, rhs, leq_with_slack(lhs, rhs)});
    };
    add("alpha <= 1", a, 1.0);
    add("beta Gamma <= 1", b * Gamma, 1.0);
    add("gamma >= Gamma^2", Gamma * Gamma, g);
    add("alpha^2 <= beta/(3C)", a * a, b / (3.0 * C));
    add("beta <= 1/(3 C Gamma^2)", b, 1.0 / (3.0 * C * Gamma * Gamma));
    add("gamma >= C/(4 c_n)", C / (4.0 * cn), g);
    add("beta <= alpha/(2 n Gamma)", b, a / (2.0 * n * Gamma));
    add("gamma >= 10 n C / c_n", 10.0 * n * C / cn, g);
    add("alpha^2 <= beta/(30 C gamma)", a * a, b / (30.0 * C * g));
    add("beta <= 1/(30 C Gamma^2 gamma)", b, 1.0 / (30.0 * C * Gamma * Gamma * g));
    return checks;
}

DoublingConfig checked_defaults(const GridFunction& u, double constant_C) {
    if (!(constant_C > 0.0)) throw ParameterError("checked_defaults: constant_C must be positive");
    const double Gamma = gamma_norm(u);
    const int n = u.n;
    DoublingConfig cfg;
    cfg.constant_C = constant_C;
    cfg.Gamma = Gamma;
    cfg.gamma = 10.0 * n * constant_C / dynamic_cn(n) * Gamma * Gamma;
    cfg.alpha = 1.0 / (60.0 * n * constant_C * Gamma * cfg.gamma);
    cfg.beta = 1.0 / (120.0 * n * n * constant_C * Gamma * Gamma * cfg.gamma);
    for (const ConstraintCheck& c : parameter_checks(cfg, n, Gamma))
        if (!c.satisfied)
            throw ConfigError("checked_defaults: parameter constraint failed: " + c.name);
    return cfg;
}

GridFunction guanqiu_P(const GridFunction& u, const DoublingConfig& cfg) {
    u.validate();
    if (!(cfg.alpha > 0.0) || !(cfg.beta > 0.0) || !(cfg.gamma > 0.0))
        throw ParameterError("guanqiu_P: alpha, beta, gamma must be positive");
    if (!(cfg.r_inner > 0.0) || !(cfg.r_inner < cfg.r_outer))
        throw ParameterError("guanqiu_P: need 0 < r_inner < r_outer");
    require_admissible(u, "guanqiu_P");

    const GridFunction b = log_laplacian_field(u);
    const std::vector<std::size_t> inner = masked_interior(u, cfg.r_inner);
    if (inner.empty()) throw ConfigError("guanqiu_P: inner ball mask has no interior nodes");
    double sup_b = -std::numeric_limits<double>::infinity();
    for (std::size_t f : inner) sup_b = std::max(sup_b, b.values[f]);

    GridFunction P = u;
    std::fill(P.values.begin(), P.values.end(),
              std::numeric_limits<double>::quiet_NaN());
    const int n = u.n;
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::vector<double> x(static_cast<std::size_t>(n));
    std::vector<double> grad(static_cast<std::size_t>(n));
    for (std::size_t f : interior_mask(u, 1)) {
        u.unflat(f, idx);
        u.coord(idx, x);
        double x2 = 0.0;
        for (double xi : x) x2 += xi * xi;
        const double rho = 9.0 - x2;
        if (!(rho > 0.0)) continue;
        gradient_at(u, f, grad);
        double xdu = 0.0, du2 = 0.0;
        for (int a = 0; a < n; ++a) {
            xdu += x[static_cast<std::size_t>(a)] * grad[static_cast<std::size_t>(a)];
            du2 += grad[static_cast<std::size_t>(a)] * grad[static_cast<std::size_t>(a)];
        }
        const double bbar = b.values[f] - sup_b;
        P.values[f] = 2.0 * std::log(rho) + cfg.alpha * (xdu - u.values[f]) +
                      0.5 * cfg.beta * du2 + std::log(std::max(bbar, cfg.gamma));
    }
    return P;
}

DoublingReport doubling_ratio(const GridFunction& u, const DoublingConfig& cfg) {
    u.validate();
    if (!(cfg.r_inner > 0.0) || !(cfg.r_inner < cfg.r_outer))
        throw ParameterError("doubling_ratio: need 0 < r_inner < r_outer");
    if (cfg.r_outer > u.radius() + u.h / 2.0)
        throw ConfigError("doubling_ratio: grid does not cover the outer ball");
    require_admissible(u, "doubling_ratio");

    const std::vector<std::size_t> inner = masked_interior(u, cfg.r_inner);
    const std::vector<std::size_t> outer = masked_interior(u, cfg.r_outer);
    if (inner.empty() || outer.empty())
        throw ConfigError("doubling_ratio: ball mask has no interior nodes");

    DoublingReport rep;
    rep.sup_inner = -std::numeric_limits<double>::infinity();
    for (std::size_t f : inner) rep.sup_inner = std::max(rep.sup_inner, laplacian_at(u, f));
    rep.sup_outer = -std::numeric_limits<double>::infinity();
    for (std::size_t f : outer) rep.sup_outer = std::max(rep.sup_outer, laplacian_at(u, f));
    rep.ratio = rep.sup_outer / rep.sup_inner;

    rep.gamma_norm = gamma_norm(u);
    const double g6 = std::pow(rep.gamma_norm, 6);
    rep.implied_bound = cfg.constant_C * std::exp(cfg.constant_C * g6);

    // Smallest C' with ratio <= C' exp(C' Gamma^6): the root of the increasing
    // function log C' + C' Gamma^6 - log ratio.
    const double target = std::log(rep.ratio);
    double lo = 1e-300, hi = 1.0;
    while (std::log(hi) + hi * g6 < target) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (std::log(mid) + mid * g6 < target)
            lo = mid;
        else
            hi = mid;
    }
    rep.fitted_C = 0.5 * (lo + hi);

    const GridFunction P = guanqiu_P(u, cfg);
    rep.P_max = -std::numeric_limits<double>::infinity();
    rep.max_P_location = outer.front();
    for (std::size_t f : outer) {
        const double v = P.values[f];
        if (std::isfinite(v) && v > rep.P_max) {
            rep.P_max = v;
            rep.max_P_location = f;
        }
    }
    if (!std::isfinite(rep.P_max))
        throw ConfigError("doubling_ratio: test function undefined on the outer ball");
    return rep;
}

} // namespace sigma2
