#include "sigma2/errors.hpp"
#include "sigma2/runners.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

void add_out(CLI::App* sub, std::string& out) {
    sub->add_option("--out", out, "write the CSV report here instead of stdout");
}

void add_grid_opts(CLI::App* sub, sigma2::RunConfig& cfg) {
    sub->add_option("--m", cfg.m, "odd nodes per axis")->check(CLI::Range(5, 1 << 16));
    sub->add_option("--case", cfg.case_name, "manufactured solution name");
    sub->add_option("--radius", cfg.radius, "grid half-width (0 = subcommand default)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical experiments for the sigma_2 Hessian equation"};
    app.require_subcommand(1);

    sigma2::RunConfig cfg;
    std::string out;

    CLI::App* lemmas = app.add_subcommand(
        "lemmas", "sample the eigenvalue cone; check the gap and coefficient bounds");
    lemmas->add_option("--n", cfg.n, "dimension")->check(CLI::Range(3, 64));
    lemmas->add_option("--samples", cfg.samples, "cone samples to draw");
    lemmas->add_option("--seed", cfg.seed, "random seed");
    add_out(lemmas, out);

    CLI::App* polyscan = app.add_subcommand(
        "polyscan", "scan the one-variable certificate polynomials on (0, y_n^+]");
    polyscan->add_option("--n", cfg.n, "dimension")->check(CLI::Range(4, 64));
    polyscan->add_option("--grid", cfg.grid_points, "scan resolution")
        ->check(CLI::Range(2, 1 << 24));
    polyscan->add_option("--theta", cfg.theta, "trace weight theta");
    add_out(polyscan, out);

    CLI::App* qform = app.add_subcommand(
        "qform", "verify the restricted quadratic form on random cone samples");
    qform->add_option("--n", cfg.n, "dimension")->check(CLI::Range(4, 64));
    qform->add_option("--samples", cfg.samples, "random instances");
    qform->add_option("--seed", cfg.seed, "random seed");
    qform->add_option("--theta", cfg.theta, "theta cap");
    qform->add_option("--force-ratio", cfg.force_ratio,
                      "negative: pin lambda_min/sigma_1 to falsify the form");
    add_out(qform, out);

    CLI::App* solve = app.add_subcommand(
        "solve", "Newton-solve the discrete equation against a manufactured case");
    solve->add_option("--n", cfg.n, "dimension")->check(CLI::Range(2, 4));
    add_grid_opts(solve, cfg);
    solve->add_option("--save", cfg.save, "write the solved grid to this path");
    add_out(solve, out);

    CLI::App* jacobi = app.add_subcommand(
        "jacobi", "evaluate the differential inequality for log of the Laplacian");
    jacobi->add_option("--n", cfg.n, "dimension")->check(CLI::Range(4, 4));
    add_grid_opts(jacobi, cfg);
    jacobi->add_option("--C", cfg.C, "zero-order constant (<= 0 calibrates a default)");
    jacobi->add_option("--eps-scale", cfg.eps_scale, "gradient-weight multiplier");
    jacobi->add_option("--load", cfg.load, "reuse a saved grid instead of solving");
    add_out(jacobi, out);

    CLI::App* doubling = app.add_subcommand(
        "doubling", "evaluate the doubling test function and its parameter constraints");
    doubling->add_option("--n", cfg.n, "dimension")->check(CLI::Range(2, 8));
    add_grid_opts(doubling, cfg);
    doubling->add_option("--C", cfg.C, "structural constant (<= 0 uses 10)");
    doubling->add_option("--load", cfg.load, "reuse a saved grid instead of sampling");
    add_out(doubling, out);

    CLI::App* wolff = app.add_subcommand(
        "wolff", "nonlinear potential of a constant density against the closed form");
    wolff->add_option("--n", cfg.n, "dimension")->check(CLI::Range(4, 64));
    wolff->add_option("--r", cfg.r, "potential radius (0 = 1.0)");
    wolff->add_option("--steps", cfg.steps, "quadrature steps")
        ->check(CLI::Range(100, 1 << 30));
    wolff->add_option("--density", cfg.density, "constant density value");
    add_out(wolff, out);

    CLI::App* seminorms = app.add_subcommand(
        "seminorms", "weighted seminorms and the interpolation constant");
    seminorms->add_option("--n", cfg.n, "dimension")->check(CLI::Range(2, 8));
    add_grid_opts(seminorms, cfg);
    seminorms->add_option("--gamma", cfg.holder_gamma, "Holder exponent in (0, 1]");
    seminorms->add_option("--R", cfg.R, "seminorm ball radius");
    add_out(seminorms, out);

    CLI::App* harnack = app.add_subcommand(
        "harnack", "two-sided bound sup <= C1 inf + C2 r^2 on a small ball");
    harnack->add_option("--n", cfg.n, "dimension")->check(CLI::Range(2, 8));
    add_grid_opts(harnack, cfg);
    harnack->add_option("--r", cfg.r, "ball radius (0 = radius/12)");
    harnack->add_option("--C1", cfg.C1, "multiplicative constant");
    add_out(harnack, out);

    CLI::App* oscillation = app.add_subcommand(
        "oscillation", "oscillation decay omega(r) <= theta omega(10r) + C r^2");
    oscillation->add_option("--n", cfg.n, "dimension")->check(CLI::Range(2, 8));
    add_grid_opts(oscillation, cfg);
    oscillation->add_option("--r", cfg.r, "base radius (0 = radius/48)");
    add_out(oscillation, out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\nrun with --help for usage\n";
        return 2;
    }

    cfg.subcommand = app.get_subcommands().front()->get_name();
    try {
        const sigma2::RunResult res = sigma2::run_subcommand(cfg);
        if (out.empty()) {
            res.report.write_csv(std::cout);
        } else {
            std::ofstream os(out);
            if (!os) {
                std::cerr << "error: cannot open " << out << " for writing\n";
                return 1;
            }
            res.report.write_csv(os);
        }
        return res.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
