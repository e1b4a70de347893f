#include "sigma2/runners.hpp"

#include "sigma2/cone.hpp"
#include "sigma2/doubling.hpp"
#include "sigma2/errors.hpp"
#include "sigma2/grid.hpp"
#include "sigma2/jacobi.hpp"
#include "sigma2/potential.hpp"
#include "sigma2/rhs.hpp"
#include "sigma2/rng.hpp"
#include "sigma2/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sigma2 {

namespace {

constexpr double kIneqSlack = 1e-10;

std::int64_t i64(std::uint64_t v) { return static_cast<std::int64_t>(v); }

GridFunction sampled_case(const ManufacturedSolution& mf, int m, double radius) {
    return sample_grid(mf.n, m, radius, mf.value);
}

struct SolvedCase {
    ManufacturedSolution mf;
    GridFunction u;
    SolveOutcome outcome;
};

SolvedCase solve_case(const std::string& name, int n, int m, double radius) {
    SolvedCase sc{manufactured_case(name, n), GridFunction{}, SolveOutcome{}};
    const GridFunction boundary = sampled_case(sc.mf, m, radius);
    sc.outcome = solve(RhsSpec::from_manufactured(sc.mf), boundary);
    sc.u = sc.outcome.u;
    return sc;
}

} // namespace

RunResult run_lemmas(const RunConfig& cfg) {
    if (cfg.n < 3) throw ParameterError("lemmas: needs n >= 3");
    if (cfg.samples == 0) throw ParameterError("lemmas: need at least one sample");
    CounterRng rng(cfg.seed);
    SampleStats stats;
    const double inf = std::numeric_limits<double>::infinity();
    double min_gap = inf, min_fii = inf;
    std::uint64_t gap_violations = 0, fii_violations = 0;
    const int n = cfg.n;
    for (std::uint64_t s = 0; s < cfg.samples; ++s) {
        const Spectrum lambda = sample_gamma2(rng, n, false, &stats);
        const double s1 = sigma_k(lambda, 1);
        const double s2 = sigma_k(lambda, 2);
        const double gap = sharp_min_eig_gap(lambda);
        min_gap = std::min(min_gap, gap);
        if (gap < -kIneqSlack) ++gap_violations;

        double margin = (s1 - lambda[0]) - s2 / s1;
        margin = std::min(margin, (n - 1.0) / n * s1 - (s1 - lambda[0]));
        const double lo = (1.0 - 1.0 / std::sqrt(2.0)) * s1;
        const double hi = (2.0 * n - 2.0) / n * s1;
        for (int i = 1; i < n; ++i) {
            margin = std::min(margin, (s1 - lambda[i]) - lo);
            margin = std::min(margin, hi - (s1 - lambda[i]));
        }
        min_fii = std::min(min_fii, margin);
        if (margin < -kIneqSlack) ++fii_violations;
    }

    RunResult res;
    res.report.set_columns({"n", "samples", "gap_violations", "fii_violations",
                            "min_gap_margin", "min_fii_margin", "acceptance_rate"});
    res.report.add_row({static_cast<std::int64_t>(n), i64(cfg.samples), i64(gap_violations),
                        i64(fii_violations), min_gap, min_fii, stats.acceptance_rate()});
    const bool pass = gap_violations == 0 && fii_violations == 0;
    res.report.add_summary("n", static_cast<std::int64_t>(n));
    res.report.add_summary("min_gap_margin", min_gap);
    res.report.add_summary("min_fii_margin", min_fii);
    res.report.add_summary("violations", i64(gap_violations + fii_violations));
    res.report.add_summary("pass", std::string(pass ? "true" : "false"));
    res.exit_code = pass ? 0 : 1;
    return res;
}

RunResult run_polyscan(const RunConfig& cfg) {
    if (cfg.n < 4) throw UnsupportedDimension("polyscan: needs n = 4 or n >= 5");
    if (cfg.grid_points < 2) throw ParameterError("polyscan: needs at least two grid points");
    if (!(cfg.theta > 0.0)) throw ParameterError("polyscan: theta must be positive");
    const int n = cfg.n;
    const int G = cfg.grid_points;
    const double y_top = roots_yn(n).upper;
    const double cn = dynamic_cn(n), Cn = dynamic_Cn(n);

    RunResult res;
    res.report.set_columns({"j", "y", "eps", "q_delta", "R_delta", "q_delta_theta", "q1", "r",
                            "R1", "rtilde"});
    const double inf = std::numeric_limits<double>::infinity();
    double min_q = inf, min_R = inf, min_qt = inf, argmin_y = 0.0;
    for (int j = 1; j <= G; ++j) {
        const double y = y_top * j / G;
        // Gradient weight with the spectral ratio eliminated via ratio = 1 - y.
        double eps = n == 4 ? (2.0 / 9.0) * (1.5 - y) : Cn * (cn + 1.0 - y);
        eps = std::max(eps, 0.0);
        const QPolyValues q = q_polynomials(n, eps, cfg.theta, y);
        const QPolySplit sp = split_q_polynomials(n, y);
        res.report.add_row({static_cast<std::int64_t>(j), y, eps, q.q_delta, q.R_delta,
                            q.q_delta_theta, sp.q1, sp.r, sp.R1, sp.rtilde});
        min_q = std::min(min_q, q.q_delta);
        min_R = std::min(min_R, q.R_delta);
        if (q.q_delta_theta < min_qt) {
            min_qt = q.q_delta_theta;
            argmin_y = y;
        }
    }
    const RootPair yn = roots_yn(n), yt = roots_ytilde(n);
    const bool pass = min_qt >= -kIneqSlack;
    res.report.add_summary("n", static_cast<std::int64_t>(n));
    res.report.add_summary("theta", cfg.theta);
    res.report.add_summary("min_q_delta_theta", min_qt);
    res.report.add_summary("argmin_y", argmin_y);
    res.report.add_summary("min_q_delta", min_q);
    res.report.add_summary("min_R_delta", min_R);
    res.report.add_summary("yn_lower", yn.lower);
    res.report.add_summary("yn_upper", yn.upper);
    res.report.add_summary("ytilde_lower", yt.lower);
    res.report.add_summary("ytilde_upper", yt.upper);
    res.report.add_summary("pass", std::string(pass ? "true" : "false"));
    res.exit_code = pass ? 0 : 1;
    return res;
}

RunResult run_qform(const RunConfig& cfg) {
    QFormVerifyOptions opts;
    opts.theta_cap = cfg.theta;
    opts.force_ratio = cfg.force_ratio;
    const QFormVerifyReport rep = qform_verify(cfg.n, cfg.samples, cfg.seed, opts);

    RunResult res;
    res.report.set_columns({"n", "samples", "violations", "trace_failures", "det_failures",
                            "penalty_failures", "min_trace", "min_det", "min_penalized",
                            "tried", "accepted"});
    res.report.add_row({static_cast<std::int64_t>(rep.n), i64(rep.samples), i64(rep.violations),
                        i64(rep.trace_failures), i64(rep.det_failures),
                        i64(rep.penalty_failures), rep.min_trace, rep.min_det,
                        rep.min_penalized, i64(rep.stats.tried), i64(rep.stats.accepted)});
    // A falsification control is expected to trip; a production run must not.
    const bool pass =
        cfg.force_ratio < 0.0 ? rep.violations >= 1 : rep.violations == 0;
    res.report.add_summary("violations", i64(rep.violations));
    res.report.add_summary("min_trace", rep.min_trace);
    res.report.add_summary("min_det", rep.min_det);
    res.report.add_summary("min_penalized", rep.min_penalized);
    res.report.add_summary("force_ratio", cfg.force_ratio);
    res.report.add_summary("pass", std::string(pass ? "true" : "false"));
    res.exit_code = pass ? 0 : 1;
    return res;
}

RunResult run_solve(const RunConfig& cfg) {
    const double radius = cfg.radius > 0.0 ? cfg.radius : 1.0;
    const SolvedCase sc = solve_case(cfg.case_name, cfg.n, cfg.m, radius);

    const GridFunction exact = sampled_case(sc.mf, cfg.m, radius);
    double max_error = 0.0;
    for (std::size_t k = 0; k < exact.size(); ++k)
        max_error = std::max(max_error, std::abs(sc.u.values[k] - exact.values[k]));

    RunResult res;
    res.report.set_columns({"iter", "residual", "damping"});
    for (std::size_t i = 0; i < sc.outcome.residual_history.size(); ++i)
        res.report.add_row({static_cast<std::int64_t>(i), sc.outcome.residual_history[i],
                            i == 0 ? 0.0 : sc.outcome.damping_history[i - 1]});
    res.report.add_summary("n", static_cast<std::int64_t>(cfg.n));
    res.report.add_summary("m", static_cast<std::int64_t>(cfg.m));
    res.report.add_summary("case", cfg.case_name);
    res.report.add_summary("radius", radius);
    res.report.add_summary("iterations", static_cast<std::int64_t>(sc.outcome.iterations));
    res.report.add_summary("final_residual", sc.outcome.final_residual);
    res.report.add_summary("max_error", max_error);
    res.report.add_summary("admissible", std::string(sc.outcome.admissible ? "true" : "false"));
    if (!cfg.save.empty()) save_grid(sc.u, cfg.save);
    res.exit_code = sc.outcome.admissible && std::isfinite(max_error) ? 0 : 1;
    return res;
}

RunResult run_jacobi(const RunConfig& cfg) {
    const double radius = cfg.radius > 0.0 ? cfg.radius : 1.0;
    GridFunction u;
    int n = cfg.n, m = cfg.m;
    const ManufacturedSolution mf = manufactured_case(cfg.case_name, cfg.n);
    if (!cfg.load.empty()) {
        u = load_grid(cfg.load);
        n = u.n;
        m = u.m;
        if (n != mf.n) throw ParameterError("jacobi: loaded grid dimension differs from case");
    } else {
        u = solve_case(cfg.case_name, cfg.n, cfg.m, radius).u;
    }
    JacobiOptions opts;
    opts.C = cfg.C;
    opts.eps_scale = cfg.eps_scale;
    const JacobiReport rep = jacobi_residual(u, RhsSpec::from_manufactured(mf), opts);

    RunResult res;
    res.report.set_columns({"node", "residual", "eps", "ratio"});
    for (std::size_t k = 0; k < rep.count; ++k)
        res.report.add_row({i64(rep.nodes[k]), rep.residual[k], rep.eps[k], rep.ratio[k]});
    res.report.add_summary("n", static_cast<std::int64_t>(n));
    res.report.add_summary("m", static_cast<std::int64_t>(m));
    res.report.add_summary("case", cfg.case_name);
    res.report.add_summary("count", i64(rep.count));
    res.report.add_summary("min_residual", rep.min_residual);
    res.report.add_summary("argmin", i64(rep.argmin));
    res.report.add_summary("K", rep.K);
    res.report.add_summary("C", rep.C);
    res.report.add_summary("C_min", rep.C_min);
    res.report.add_summary("gamma", rep.gamma);
    res.report.add_summary("eps_scale", cfg.eps_scale);
    const bool pass = std::isfinite(rep.min_residual) && std::isfinite(rep.C_min);
    res.report.add_summary("pass", std::string(pass ? "true" : "false"));
    res.exit_code = pass ? 0 : 1;
    return res;
}

RunResult run_doubling(const RunConfig& cfg) {
    const double radius = cfg.radius > 0.0 ? cfg.radius : 3.0;
    GridFunction u;
    if (!cfg.load.empty()) {
        u = load_grid(cfg.load);
    } else {
        u = sampled_case(manufactured_case(cfg.case_name, cfg.n), cfg.m, radius);
    }
    const DoublingConfig dc = checked_defaults(u, cfg.C > 0.0 ? cfg.C : 10.0);
    const std::vector<ConstraintCheck> checks = parameter_checks(dc, u.n, dc.Gamma);
    const DoublingReport rep = doubling_ratio(u, dc);

    RunResult res;
    res.report.set_columns({"check", "lhs", "rhs", "satisfied"});
    bool all_ok = true;
    for (const ConstraintCheck& c : checks) {
        res.report.add_row({c.name, c.lhs, c.rhs,
                            std::string(c.satisfied ? "true" : "false")});
        all_ok = all_ok && c.satisfied;
    }
    res.report.add_summary("case", cfg.case_name);
    res.report.add_summary("n", static_cast<std::int64_t>(u.n));
    res.report.add_summary("m", static_cast<std::int64_t>(u.m));
    res.report.add_summary("ratio", rep.ratio);
    res.report.add_summary("sup_inner", rep.sup_inner);
    res.report.add_summary("sup_outer", rep.sup_outer);
    res.report.add_summary("gamma_norm", rep.gamma_norm);
    res.report.add_summary("fitted_C", rep.fitted_C);
    res.report.add_summary("implied_bound", rep.implied_bound);
    res.report.add_summary("P_max", rep.P_max);
    res.report.add_summary("max_P_location", i64(rep.max_P_location));
    res.report.add_summary("alpha", dc.alpha);
    res.report.add_summary("beta", dc.beta);
    res.report.add_summary("gamma", dc.gamma);
    const bool pass = all_ok && std::isfinite(rep.ratio) && rep.ratio >= 1.0 - 1e-12;
    res.report.add_summary("pass", std::string(pass ? "true" : "false"));
    res.exit_code = pass ? 0 : 1;
    return res;
}

RunResult run_wolff(const RunConfig& cfg) {
    if (cfg.n < 4) throw UnsupportedDimension("wolff: needs n >= 4");
    const double r = cfg.r > 0.0 ? cfg.r : 1.0;
    if (!(cfg.density > 0.0)) throw ParameterError("wolff: density must be positive");
    const DensityMeasure mu = DensityMeasure::constant(cfg.n, cfg.density);
    const DensityMeasure mu4 = DensityMeasure::constant(cfg.n, 4.0 * cfg.density);
    const std::vector<double> origin(static_cast<std::size_t>(cfg.n), 0.0);

    RunResult res;
    res.report.set_columns({"r", "steps", "W", "closed_form", "rel_err"});
    const double amp = std::sqrt(cfg.density * unit_ball_volume(cfg.n));
    double max_rel = 0.0;
    std::vector<double> ws;
    for (double ri : {0.5 * r, r, 2.0 * r}) {
        const double w = wolff_potential(mu, origin, ri, cfg.steps);
        const double closed = amp * ri * ri / 2.0;
        const double rel = std::abs(w - closed) / closed;
        res.report.add_row({ri, static_cast<std::int64_t>(cfg.steps), w, closed, rel});
        max_rel = std::max(max_rel, rel);
        ws.push_back(w);
    }
    const bool monotone = ws[0] <= ws[1] * (1.0 + 1e-10) && ws[1] <= ws[2] * (1.0 + 1e-10);
    const double w4 = wolff_potential(mu4, origin, r, cfg.steps);
    const double scaling_err = std::abs(w4 / (2.0 * ws[1]) - 1.0);

    const bool pass = max_rel <= 1e-8 && monotone && scaling_err <= 1e-10;
    res.report.add_summary("n", static_cast<std::int64_t>(cfg.n));
    res.report.add_summary("density", cfg.density);
    res.report.add_summary("max_rel_err", max_rel);
    res.report.add_summary("monotone", std::string(monotone ? "true" : "false"));
    res.report.add_summary("scaling_err", scaling_err);
    res.report.add_summary("pass", std::string(pass ? "true" : "false"));
    res.exit_code = pass ? 0 : 1;
    return res;
}

RunResult run_seminorms(const RunConfig& cfg) {
    const double radius = cfg.radius > 0.0 ? cfg.radius : 1.0;
    const GridFunction u = sampled_case(manufactured_case(cfg.case_name, cfg.n), cfg.m, radius);
    const SeminormReport base = weighted_seminorms(u, cfg.holder_gamma, cfg.R);

    RunResult res;
    res.report.set_columns({"eps", "weighted_sup", "weighted_holder", "integral_abs",
                            "fitted_C", "holds"});
    bool pass = true;
    for (double eps : {0.01, 0.1, 1.0}) {
        const InterpolationReport rep = interpolation_constant(u, cfg.holder_gamma, cfg.R, eps);
        const double bound = std::pow(eps, cfg.holder_gamma) * rep.weighted_holder +
                             rep.fitted_C * std::pow(eps, -u.n) * rep.integral_abs;
        const bool holds = std::isfinite(rep.fitted_C) &&
                           rep.weighted_sup <= bound + 1e-12 * std::max(1.0, bound);
        res.report.add_row({eps, rep.weighted_sup, rep.weighted_holder, rep.integral_abs,
                            rep.fitted_C, std::string(holds ? "true" : "false")});
        pass = pass && holds;
    }
    res.report.add_summary("case", cfg.case_name);
    res.report.add_summary("n", static_cast<std::int64_t>(cfg.n));
    res.report.add_summary("m", static_cast<std::int64_t>(cfg.m));
    res.report.add_summary("gamma", cfg.holder_gamma);
    res.report.add_summary("R", cfg.R);
    res.report.add_summary("nodes", i64(base.nodes));
    res.report.add_summary("pairs", i64(base.pairs));
    res.report.add_summary("subsampled", std::string(base.subsampled ? "true" : "false"));
    res.report.add_summary("pass", std::string(pass ? "true" : "false"));
    res.exit_code = pass ? 0 : 1;
    return res;
}

RunResult run_harnack(const RunConfig& cfg) {
    const double radius = cfg.radius > 0.0 ? cfg.radius : 1.0;
    const ManufacturedSolution mf = manufactured_case(cfg.case_name, cfg.n);
    const GridFunction u = sampled_case(mf, cfg.m, radius);
    const double r = cfg.r > 0.0 ? cfg.r : radius / 12.0;

    double rhs_sup = 0.0;
    {
        std::vector<int> idx(static_cast<std::size_t>(u.n), 0);
        std::vector<double> x(static_cast<std::size_t>(u.n));
        do {
            u.coord(idx, x);
            rhs_sup = std::max(rhs_sup, mf.sigma2_at(x));
        } while (next_index(idx, u.m));
    }
    const HarnackReport rep = harnack_check(u, rhs_sup, r, cfg.C1);

    RunResult res;
    res.report.set_columns({"case", "n", "m", "r", "C1", "sup", "inf", "fitted_C2",
                            "satisfied", "nodes"});
    res.report.add_row({cfg.case_name, static_cast<std::int64_t>(cfg.n),
                        static_cast<std::int64_t>(cfg.m), r, cfg.C1, rep.sup, rep.inf,
                        rep.fitted_C2, std::string(rep.satisfied ? "true" : "false"),
                        i64(rep.nodes)});
    res.report.add_summary("fitted_C2", rep.fitted_C2);
    res.report.add_summary("rhs_sup", rhs_sup);
    res.report.add_summary("pass", std::string(rep.satisfied ? "true" : "false"));
    res.exit_code = rep.satisfied ? 0 : 1;
    return res;
}

RunResult run_oscillation(const RunConfig& cfg) {
    const double radius = cfg.radius > 0.0 ? cfg.radius : 3.0;
    const GridFunction u = sampled_case(manufactured_case(cfg.case_name, cfg.n), cfg.m, radius);
    const double r = cfg.r > 0.0 ? cfg.r : radius / 48.0;
    const std::vector<double> radii = {r, 2.0 * r, 4.0 * r};
    const std::vector<double> origin(static_cast<std::size_t>(u.n), 0.0);
    const OscillationReport rep = oscillation_decay(u, origin, radii);

    RunResult res;
    res.report.set_columns({"r", "omega_r", "omega_10r", "satisfied"});
    bool pass = true;
    for (const OscillationRow& row : rep.rows) {
        res.report.add_row({row.r, row.omega_r, row.omega_10r,
                            std::string(row.satisfied ? "true" : "false")});
        pass = pass && row.satisfied;
    }
    res.report.add_summary("case", cfg.case_name);
    res.report.add_summary("n", static_cast<std::int64_t>(u.n));
    res.report.add_summary("m", static_cast<std::int64_t>(u.m));
    res.report.add_summary("fitted_theta", rep.fitted_theta);
    res.report.add_summary("fitted_C", rep.fitted_C);
    res.report.add_summary("pass", std::string(pass ? "true" : "false"));
    res.exit_code = pass ? 0 : 1;
    return res;
}

RunResult run_subcommand(const RunConfig& cfg) {
    if (cfg.subcommand == "lemmas") return run_lemmas(cfg);
    if (cfg.subcommand == "polyscan") return run_polyscan(cfg);
    if (cfg.subcommand == "qform") return run_qform(cfg);
    if (cfg.subcommand == "solve") return run_solve(cfg);
    if (cfg.subcommand == "jacobi") return run_jacobi(cfg);
    if (cfg.subcommand == "doubling") return run_doubling(cfg);
    if (cfg.subcommand == "wolff") return run_wolff(cfg);
    if (cfg.subcommand == "seminorms") return run_seminorms(cfg);
    if (cfg.subcommand == "harnack") return run_harnack(cfg);
    if (cfg.subcommand == "oscillation") return run_oscillation(cfg);
    throw ParameterError("unknown subcommand: " + cfg.subcommand);
}

} // namespace sigma2
