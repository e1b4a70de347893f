#include "sigma2/potential.hpp"

#include "sigma2/errors.hpp"
#include "sigma2/rng.hpp"
#include "sigma2/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sigma2 {

namespace {

constexpr double kCutoff = 1e-6; // lower quadrature limit t_min = r * kCutoff

bool at_origin(std::span<const double> x) {
    for (double v : x)
        if (v != 0.0) return false;
    return true;
}

double norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

// Integral of s^(n-1) times the piecewise-linear profile over [0, T].
double radial_mass(int n, double r_max, const std::vector<double>& profile, double T) {
    if (T <= 0.0) return 0.0;
    const double top = std::min(T, r_max);
    const double dr = r_max / static_cast<double>(profile.size() - 1);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < profile.size(); ++i) {
        const double a = dr * static_cast<double>(i);
        const double b = std::min(a + dr, top);
        if (b <= a) break;
        const double c1 = (profile[i + 1] - profile[i]) / dr;
        const double c0 = profile[i] - c1 * a;
        const double an = std::pow(a, n), bn = std::pow(b, n);
        acc += c0 * (bn - an) / n +
               c1 * (std::pow(b, n + 1) - std::pow(a, n + 1)) / (n + 1.0);
    }
    return static_cast<double>(n) * unit_ball_volume(n) * acc;
}

std::vector<double> node_distances(const GridFunction& g, std::span<const double> x) {
    std::vector<double> d;
    d.reserve(g.size());
    std::vector<int> idx(static_cast<std::size_t>(g.n), 0);
    std::vector<double> xn(static_cast<std::size_t>(g.n));
    std::size_t f = 0;
    do {
        g.coord(idx, xn);
        double s = 0.0;
        for (int a = 0; a < g.n; ++a) {
            const double dxa = xn[static_cast<std::size_t>(a)] - x[static_cast<std::size_t>(a)];
            s += dxa * dxa;
        }
        d.push_back(std::sqrt(s));
        ++f;
    } while (next_index(idx, g.m));
    return d;
}

} // namespace

DensityMeasure DensityMeasure::constant(int n, double c) {
    if (n < 2) throw ParameterError("DensityMeasure: dimension must be at least 2");
    if (!(c >= 0.0)) throw ParameterError("DensityMeasure: density must be nonnegative");
    DensityMeasure m;
    m.kind_ = Kind::Constant;
    m.n_ = n;
    m.c_ = c;
    return m;
}

DensityMeasure DensityMeasure::radial(int n, double r_max, std::vector<double> profile) {
    if (n < 2) throw ParameterError("DensityMeasure: dimension must be at least 2");
    if (!(r_max > 0.0)) throw ParameterError("DensityMeasure: r_max must be positive");
    if (profile.size() < 2) throw ParameterError("DensityMeasure: profile needs two samples");
    for (double v : profile)
        if (!(v >= 0.0)) throw ParameterError("DensityMeasure: density must be nonnegative");
    DensityMeasure m;
    m.kind_ = Kind::Radial;
    m.n_ = n;
    m.r_max_ = r_max;
    m.profile_ = std::move(profile);
    return m;
}

DensityMeasure DensityMeasure::grid(GridFunction density) {
    density.validate();
    for (double v : density.values)
        if (!(v >= 0.0)) throw ParameterError("DensityMeasure: density must be nonnegative");
    DensityMeasure m;
    m.kind_ = Kind::Grid;
    m.n_ = density.n;
    m.grid_ = std::move(density);
    return m;
}

const GridFunction& DensityMeasure::grid_density() const {
    if (!grid_) throw ParameterError("DensityMeasure: not a grid density");
    return *grid_;
}

double DensityMeasure::ball_mass(std::span<const double> x, double t) const {
    if (static_cast<int>(x.size()) != n_)
        throw ParameterError("DensityMeasure: center has wrong dimension");
    if (!(t >= 0.0)) throw ParameterError("DensityMeasure: radius must be nonnegative");
    switch (kind_) {
    case Kind::Constant:
        return c_ * unit_ball_volume(n_) * std::pow(t, n_);
    case Kind::Radial:
        if (!at_origin(x))
            throw ParameterError("DensityMeasure: radial densities are centered at the origin");
        return radial_mass(n_, r_max_, profile_, t);
    case Kind::Grid: {
        const GridFunction& g = *grid_;
        const std::vector<double> dist = node_distances(g, x);
        double mass = 0.0;
        for (std::size_t k = 0; k < dist.size(); ++k)
            if (dist[k] <= t) mass += g.values[k];
        return mass * std::pow(g.h, n_);
    }
    }
    throw ConfigError("DensityMeasure: unknown kind");
}

double unit_ball_volume(int n) {
    if (n < 1) throw ParameterError("unit_ball_volume: dimension must be positive");
    return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

double wolff_potential(const DensityMeasure& mu, std::span<const double> x, double r,
                       int steps) {
    if (mu.dim() < 4)
        throw UnsupportedDimension("wolff_potential: exponent (n-4)/2 needs n >= 4");
    if (static_cast<int>(x.size()) != mu.dim())
        throw ParameterError("wolff_potential: center has wrong dimension");
    if (!(r > 0.0)) throw ParameterError("wolff_potential: radius must be positive");
    if (steps < 100) throw ParameterError("wolff_potential: needs at least 100 steps");

    const int n = mu.dim();

    // Mass oracle: closed forms for constant/radial, sorted-distance prefix
    // sums for grids so each quadrature node costs a binary search.
    std::vector<double> dist, prefix;
    if (mu.kind() == DensityMeasure::Kind::Grid) {
        const GridFunction& g = *mu.grid_;
        dist = node_distances(g, x);
        std::vector<std::size_t> order(dist.size());
        for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
        prefix.resize(dist.size());
        std::vector<double> sorted(dist.size());
        double acc = 0.0;
        const double cell = std::pow(g.h, n);
        for (std::size_t k = 0; k < order.size(); ++k) {
            sorted[k] = dist[order[k]];
            acc += g.values[order[k]] * cell;
            prefix[k] = acc;
        }
        dist = std::move(sorted);
    } else if (mu.kind() == DensityMeasure::Kind::Radial && !at_origin(x)) {
        throw ParameterError("wolff_potential: radial densities are centered at the origin");
    }

    auto mass = [&](double t) {
        switch (mu.kind()) {
        case DensityMeasure::Kind::Constant:
            return mu.c_ * unit_ball_volume(n) * std::pow(t, n);
        case DensityMeasure::Kind::Radial:
            return radial_mass(n, mu.r_max_, mu.profile_, t);
        case DensityMeasure::Kind::Grid: {
            const auto it = std::upper_bound(dist.begin(), dist.end(), t);
            if (it == dist.begin()) return 0.0;
            return prefix[static_cast<std::size_t>(it - dist.begin()) - 1];
        }
        }
        return 0.0;
    };

    const double s_hi = std::log(r);
    const double s_lo = std::log(r * kCutoff);
    const double ds = (s_hi - s_lo) / steps;
    double acc = 0.0;
    for (int j = 0; j < steps; ++j) {
        const double t = std::exp(s_lo + (j + 0.5) * ds);
        acc += std::sqrt(mass(t) / std::pow(t, n - 4));
    }
    return acc * ds;
}

HarnackReport harnack_check(const GridFunction& u, double rhs_sup, double r, double C1,
                            std::optional<double> C2) {
    u.validate();
    if (!(rhs_sup >= 0.0)) throw ParameterError("harnack_check: rhs_sup must be nonnegative");
    if (!(r > 0.0)) throw ParameterError("harnack_check: radius must be positive");
    if (!(r < u.radius() / 10.0))
        throw ParameterError("harnack_check: needs r < grid radius / 10");
    if (!(C1 > 0.0)) throw ParameterError("harnack_check: C1 must be positive");
    for (double v : u.values)
        if (!(v >= 0.0)) throw DomainError("harnack_check: u must be nonnegative");
    {
        const AdmissibilityReport rep = admissibility_scan(u);
        if (!rep.admissible)
            throw AdmissibilityError("harnack_check: u leaves the cone at " +
                                     std::to_string(rep.violations) + " node(s)");
    }

    const std::vector<std::size_t> mask = ball_mask(u, r);
    if (mask.empty()) throw ConfigError("harnack_check: empty ball mask");

    HarnackReport rep;
    rep.r = r;
    rep.C1 = C1;
    rep.C2 = C2;
    rep.rhs_sup = rhs_sup;
    rep.nodes = mask.size();
    rep.sup = -std::numeric_limits<double>::infinity();
    rep.inf = std::numeric_limits<double>::infinity();
    for (std::size_t f : mask) {
        rep.sup = std::max(rep.sup, u.values[f]);
        rep.inf = std::min(rep.inf, u.values[f]);
    }
    rep.fitted_C2 = std::max(0.0, rep.sup - C1 * rep.inf) / (r * r);
    const double c2 = C2 ? *C2 : rep.fitted_C2;
    const double bound = C1 * rep.inf + c2 * r * r;
    rep.satisfied = rep.sup <= bound + 1e-12 * std::max(1.0, std::abs(bound));
    return rep;
}

namespace {

struct BallNodes {
    std::vector<std::size_t> flats;
    std::vector<double> dist; // |x| per node
};

BallNodes nodes_within(const GridFunction& u, double R) {
    BallNodes out;
    std::vector<int> idx(static_cast<std::size_t>(u.n), 0);
    std::vector<double> x(static_cast<std::size_t>(u.n));
    std::size_t f = 0;
    do {
        u.coord(idx, x);
        const double d = norm(x);
        if (d < R) {
            out.flats.push_back(f);
            out.dist.push_back(d);
        }
        ++f;
    } while (next_index(idx, u.m));
    return out;
}

} // namespace

SeminormReport weighted_seminorms(const GridFunction& u, double gamma, double R) {
    u.validate();
    if (!(gamma > 0.0) || gamma > 1.0)
        throw ParameterError("weighted_seminorms: gamma must lie in (0, 1]");
    if (!(R > 0.0)) throw ParameterError("weighted_seminorms: R must be positive");

    const BallNodes ball = nodes_within(u, R);
    const std::size_t N = ball.flats.size();
    if (N == 0) throw ConfigError("weighted_seminorms: no nodes with |x| < R");

    SeminormReport rep;
    rep.gamma = gamma;
    rep.R = R;
    rep.nodes = N;

    for (std::size_t k = 0; k < N; ++k) {
        const double d = R - ball.dist[k];
        rep.weighted_sup = std::max(
            rep.weighted_sup, std::pow(d, u.n) * std::abs(u.values[ball.flats[k]]));
    }

    std::vector<int> ia(static_cast<std::size_t>(u.n)), ib(static_cast<std::size_t>(u.n));
    std::vector<double> xa(static_cast<std::size_t>(u.n)), xb(static_cast<std::size_t>(u.n));
    auto pair_value = [&](std::size_t a, std::size_t b) {
        u.unflat(ball.flats[a], ia);
        u.unflat(ball.flats[b], ib);
        u.coord(ia, xa);
        u.coord(ib, xb);
        double sep = 0.0;
        for (int c = 0; c < u.n; ++c) {
            const double d = xa[static_cast<std::size_t>(c)] - xb[static_cast<std::size_t>(c)];
            sep += d * d;
        }
        if (sep == 0.0) return 0.0;
        const double dmin = R - std::max(ball.dist[a], ball.dist[b]);
        return std::pow(dmin, u.n + gamma) *
               std::abs(u.values[ball.flats[a]] - u.values[ball.flats[b]]) /
               std::pow(std::sqrt(sep), gamma);
    };

    if (N <= 4096) {
        for (std::size_t a = 0; a < N; ++a)
            for (std::size_t b = a + 1; b < N; ++b) {
                rep.weighted_holder = std::max(rep.weighted_holder, pair_value(a, b));
                ++rep.pairs;
            }
    } else {
        rep.subsampled = true;
        rep.seed = 0x5e31707 + N; // fixed per node set, recorded in the report
        CounterRng rng(rep.seed);
        for (int k = 0; k < 20000; ++k) {
            const auto a = std::min<std::size_t>(
                N - 1, static_cast<std::size_t>(rng.uniform01() * static_cast<double>(N)));
            auto b = std::min<std::size_t>(
                N - 2, static_cast<std::size_t>(rng.uniform01() * static_cast<double>(N - 1)));
            if (b >= a) ++b;
            rep.weighted_holder = std::max(rep.weighted_holder, pair_value(a, b));
            ++rep.pairs;
        }
    }
    return rep;
}

InterpolationReport interpolation_constant(const GridFunction& u, double gamma, double R,
                                           double eps) {
    if (!(eps > 0.0)) throw ParameterError("interpolation_constant: eps must be positive");
    const SeminormReport s = weighted_seminorms(u, gamma, R);

    InterpolationReport rep;
    rep.eps = eps;
    rep.weighted_sup = s.weighted_sup;
    rep.weighted_holder = s.weighted_holder;

    const BallNodes ball = nodes_within(u, R);
    double acc = 0.0;
    for (std::size_t f : ball.flats) acc += std::abs(u.values[f]);
    rep.integral_abs = acc * std::pow(u.h, u.n);

    const double excess = s.weighted_sup - std::pow(eps, gamma) * s.weighted_holder;
    if (excess <= 0.0)
        rep.fitted_C = 0.0;
    else if (rep.integral_abs > 0.0)
        rep.fitted_C = excess * std::pow(eps, u.n) / rep.integral_abs;
    else
        rep.fitted_C = std::numeric_limits<double>::infinity();
    return rep;
}

OscillationReport oscillation_decay(const GridFunction& u, std::span<const double> x,
                                    std::span<const double> radii) {
    u.validate();
    if (static_cast<int>(x.size()) != u.n)
        throw ParameterError("oscillation_decay: center has wrong dimension");
    if (radii.empty()) throw ParameterError("oscillation_decay: need at least one radius");
    {
        const AdmissibilityReport rep = admissibility_scan(u);
        if (!rep.admissible)
            throw AdmissibilityError("oscillation_decay: u leaves the cone at " +
                                     std::to_string(rep.violations) + " node(s)");
    }
    const double reach = norm(x);
    for (double r : radii) {
        if (!(r > 0.0)) throw ParameterError("oscillation_decay: radii must be positive");
        if (reach + 10.0 * r > u.radius() + 1e-12)
            throw ParameterError("oscillation_decay: ball of radius 10r leaves the grid");
    }

    auto omega = [&](double r) {
        const std::vector<std::size_t> mask = ball_mask(u, x, r);
        if (mask.empty()) throw ConfigError("oscillation_decay: empty ball mask");
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t f : mask) {
            lo = std::min(lo, u.values[f]);
            hi = std::max(hi, u.values[f]);
        }
        return hi - lo;
    };

    OscillationReport rep;
    rep.rows.reserve(radii.size());
    for (double r : radii) rep.rows.push_back({r, omega(r), omega(10.0 * r), false});

    double best_theta = 0.0, best_C = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 19; ++k) {
        const double theta = 0.05 * k;
        double need = 0.0;
        for (const OscillationRow& row : rep.rows)
            need = std::max(need, (row.omega_r - theta * row.omega_10r) / (row.r * row.r));
        need = std::max(need, 0.0);
        if (need < best_C) {
            best_C = need;
            best_theta = theta;
        }
    }
    rep.fitted_theta = best_theta;
    rep.fitted_C = best_C;
    for (OscillationRow& row : rep.rows) {
        const double bound = best_theta * row.omega_10r + best_C * row.r * row.r;
        row.satisfied = row.omega_r <= bound + 1e-12 * std::max(1.0, bound);
    }
    return rep;
}

} // namespace sigma2
