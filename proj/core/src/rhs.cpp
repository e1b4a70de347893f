#include "sigma2/rhs.hpp"

#include "sigma2/errors.hpp"

#include <cmath>
#include <numbers>

namespace sigma2 {

namespace {

double dot_self_half(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return 0.5 * s;
}

ManufacturedSolution quadratic_case(int n) {
    ManufacturedSolution mf;
    mf.name = "quadratic";
    mf.n = n;
    mf.value = [](std::span<const double> x) { return dot_self_half(x); };
    mf.gradient = [](std::span<const double> x) {
        return std::vector<double>(x.begin(), x.end());
    };
    mf.hessian = [n](std::span<const double>) { return SymMatrix::identity(n); };
    return mf;
}

// |x - x0|^2 / 2 with x0 = (0.5, 0, ..., 0).
ManufacturedSolution shifted_case(int n) {
    ManufacturedSolution mf;
    mf.name = "shifted";
    mf.n = n;
    mf.value = [](std::span<const double> x) {
        double s = (x[0] - 0.5) * (x[0] - 0.5);
        for (std::size_t a = 1; a < x.size(); ++a) s += x[a] * x[a];
        return 0.5 * s;
    };
    mf.gradient = [](std::span<const double> x) {
        std::vector<double> g(x.begin(), x.end());
        g[0] -= 0.5;
        return g;
    };
    mf.hessian = [n](std::span<const double>) { return SymMatrix::identity(n); };
    return mf;
}

// |x|^2/2 + a exp(x_1)
ManufacturedSolution expbump_case(int n, double a) {
    ManufacturedSolution mf;
    mf.name = "expbump";
    mf.n = n;
    mf.value = [a](std::span<const double> x) { return dot_self_half(x) + a * std::exp(x[0]); };
    mf.gradient = [a](std::span<const double> x) {
        std::vector<double> g(x.begin(), x.end());
        g[0] += a * std::exp(x[0]);
        return g;
    };
    mf.hessian = [n, a](std::span<const double> x) {
        SymMatrix h = SymMatrix::identity(n);
        h.add(0, 0, a * std::exp(x[0]));
        return h;
    };
    return mf;
}

// |x|^2/2 + a x_1^4
ManufacturedSolution quartic_case(int n, double a, const char* name) {
    ManufacturedSolution mf;
    mf.name = name;
    mf.n = n;
    mf.value = [a](std::span<const double> x) {
        const double t = x[0] * x[0];
        return dot_self_half(x) + a * t * t;
    };
    mf.gradient = [a](std::span<const double> x) {
        std::vector<double> g(x.begin(), x.end());
        g[0] += 4.0 * a * x[0] * x[0] * x[0];
        return g;
    };
    mf.hessian = [n, a](std::span<const double> x) {
        SymMatrix h = SymMatrix::identity(n);
        h.add(0, 0, 12.0 * a * x[0] * x[0]);
        return h;
    };
    return mf;
}

// |x|^2/2 - (a/pi^2) cos(pi x_1), so u_11 = 1 + a cos(pi x_1).  The
// log-laplacian gradient peaks strictly inside the unit cube, which makes
// this the case of choice for inequality-margin studies.
ManufacturedSolution cosbump_case(int n, double a) {
    const double pi = std::numbers::pi;
    ManufacturedSolution mf;
    mf.name = "cosbump";
    mf.n = n;
    mf.value = [a, pi](std::span<const double> x) {
        return dot_self_half(x) - a / (pi * pi) * std::cos(pi * x[0]);
    };
    mf.gradient = [a, pi](std::span<const double> x) {
        std::vector<double> g(x.begin(), x.end());
        g[0] += a / pi * std::sin(pi * x[0]);
        return g;
    };
    mf.hessian = [n, a, pi](std::span<const double> x) {
        SymMatrix h = SymMatrix::identity(n);
        h.add(0, 0, a * std::cos(pi * x[0]));
        return h;
    };
    return mf;
}

} // namespace

ManufacturedSolution manufactured_case(const std::string& name, int n) {
    if (n < 2) throw ParameterError("manufactured_case: dimension must be at least 2");
    if (name == "quadratic") return quadratic_case(n);
    if (name == "shifted") return shifted_case(n);
    if (name == "expbump") return expbump_case(n, 0.05);
    if (name == "quartic") return quartic_case(n, 0.01, "quartic");
    if (name == "quartic_steep") return quartic_case(n, 1.0, "quartic_steep");
    if (name == "cosbump") return cosbump_case(n, 0.5);
    throw ParameterError("manufactured_case: unknown case '" + name + "'");
}

std::vector<std::string> manufactured_names() {
    return {"quadratic", "shifted", "expbump", "quartic", "quartic_steep", "cosbump"};
}

double RhsSpec::eval(std::span<const double> x, double z, std::span<const double> p) const {
    return f(x, z, p);
}

double RhsSpec::dz(std::span<const double> x, double z, std::span<const double> p) const {
    if (fz) return fz(x, z, p);
    return (f(x, z + fd_step, p) - f(x, z - fd_step, p)) / (2.0 * fd_step);
}

void RhsSpec::dp(std::span<const double> x, double z, std::span<const double> p,
                 std::span<double> out) const {
    if (fp) {
        fp(x, z, p, out);
        return;
    }
    std::vector<double> q(p.begin(), p.end());
    for (std::size_t a = 0; a < p.size(); ++a) {
        q[a] = p[a] + fd_step;
        const double hi = f(x, z, q);
        q[a] = p[a] - fd_step;
        const double lo = f(x, z, q);
        q[a] = p[a];
        out[a] = (hi - lo) / (2.0 * fd_step);
    }
}

RhsSpec RhsSpec::constant(double c) {
    if (!(c > 0.0)) throw ParameterError("RhsSpec::constant: value must be positive");
    RhsSpec r;
    r.f = [c](std::span<const double>, double, std::span<const double>) { return c; };
    r.fz = [](std::span<const double>, double, std::span<const double>) { return 0.0; };
    r.fp = [](std::span<const double>, double, std::span<const double>, std::span<double> out) {
        for (double& v : out) v = 0.0;
    };
    r.description = "constant";
    return r;
}

RhsSpec RhsSpec::from_manufactured(const ManufacturedSolution& mf) {
    RhsSpec r;
    r.f = [mf](std::span<const double> x, double, std::span<const double>) {
        return mf.sigma2_at(x);
    };
    r.fz = [](std::span<const double>, double, std::span<const double>) { return 0.0; };
    r.fp = [](std::span<const double>, double, std::span<const double>, std::span<double> out) {
        for (double& v : out) v = 0.0;
    };
    r.description = "manufactured:" + mf.name;
    return r;
}

RhsSpec RhsSpec::separable(std::function<double(std::span<const double>)> xpart, double z_coef,
                           std::vector<double> p_coefs) {
    RhsSpec r;
    r.f = [xpart, z_coef, p_coefs](std::span<const double> x, double z,
                                   std::span<const double> p) {
        double v = xpart(x) + z_coef * z;
        for (std::size_t a = 0; a < p_coefs.size() && a < p.size(); ++a)
            v += p_coefs[a] * p[a];
        return v;
    };
    r.fz = [z_coef](std::span<const double>, double, std::span<const double>) { return z_coef; };
    r.fp = [p_coefs](std::span<const double>, double, std::span<const double>,
                     std::span<double> out) {
        for (std::size_t a = 0; a < out.size(); ++a)
            out[a] = a < p_coefs.size() ? p_coefs[a] : 0.0;
    };
    r.description = "separable";
    return r;
}

RhsSpec RhsSpec::zcoupled(const ManufacturedSolution& mf) {
    RhsSpec r;
    r.f = [mf](std::span<const double> x, double z, std::span<const double>) {
        const double num = mf.sigma2_at(x) * (1.0 + 0.1 * std::sin(mf.value(x)));
        return num / (1.0 + 0.1 * std::sin(z));
    };
    r.fz = [mf](std::span<const double> x, double z, std::span<const double>) {
        const double num = mf.sigma2_at(x) * (1.0 + 0.1 * std::sin(mf.value(x)));
        const double den = 1.0 + 0.1 * std::sin(z);
        return -num * 0.1 * std::cos(z) / (den * den);
    };
    r.fp = [](std::span<const double>, double, std::span<const double>, std::span<double> out) {
        for (double& v : out) v = 0.0;
    };
    r.description = "zcoupled:" + mf.name;
    return r;
}

} // namespace sigma2
