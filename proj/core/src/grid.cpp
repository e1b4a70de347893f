#include "sigma2/grid.hpp"

#include "sigma2/csv.hpp"
#include "sigma2/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sigma2 {

namespace {

std::size_t ipow(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

} // namespace

GridFunction GridFunction::create(int n, int m, double radius) {
    if (n < 2) throw ParameterError("GridFunction: dimension must be at least 2");
    if (m < 5 || m % 2 == 0) throw ParameterError("GridFunction: m must be odd and at least 5");
    if (!(radius > 0.0)) throw ParameterError("GridFunction: radius must be positive");
    GridFunction g;
    g.n = n;
    g.m = m;
    g.h = 2.0 * radius / (m - 1);
    g.origin.assign(static_cast<std::size_t>(n), -radius);
    g.values.assign(ipow(static_cast<std::size_t>(m), n), 0.0);
    return g;
}

std::size_t GridFunction::stride(int axis) const {
    return ipow(static_cast<std::size_t>(m), n - 1 - axis);
}

std::size_t GridFunction::flat(std::span<const int> idx) const {
    std::size_t f = 0;
    for (int a = 0; a < n; ++a)
        f = f * static_cast<std::size_t>(m) + static_cast<std::size_t>(idx[static_cast<std::size_t>(a)]);
    return f;
}

void GridFunction::unflat(std::size_t flat_idx, std::span<int> idx) const {
    for (int a = n - 1; a >= 0; --a) {
        idx[static_cast<std::size_t>(a)] = static_cast<int>(flat_idx % static_cast<std::size_t>(m));
        flat_idx /= static_cast<std::size_t>(m);
    }
}

void GridFunction::coord(std::span<const int> idx, std::span<double> x) const {
    for (int a = 0; a < n; ++a)
        x[static_cast<std::size_t>(a)] =
            origin[static_cast<std::size_t>(a)] + h * idx[static_cast<std::size_t>(a)];
}

std::vector<double> GridFunction::coord(std::span<const int> idx) const {
    std::vector<double> x(static_cast<std::size_t>(n));
    coord(idx, x);
    return x;
}

bool GridFunction::is_interior(std::span<const int> idx, int depth) const {
    for (int a = 0; a < n; ++a) {
        const int i = idx[static_cast<std::size_t>(a)];
        if (i < depth || i >= m - depth) return false;
    }
    return true;
}

void GridFunction::validate() const {
    if (n < 2) throw ParameterError("GridFunction: dimension must be at least 2");
    if (m < 5 || m % 2 == 0) throw ParameterError("GridFunction: m must be odd and at least 5");
    if (!(h > 0.0)) throw ParameterError("GridFunction: spacing must be positive");
    if (origin.size() != static_cast<std::size_t>(n))
        throw ParameterError("GridFunction: origin size mismatch");
    if (values.size() != ipow(static_cast<std::size_t>(m), n))
        throw ParameterError("GridFunction: value count mismatch");
}

GridFunction sample_grid(int n, int m, double radius,
                         const std::function<double(std::span<const double>)>& f) {
    GridFunction g = GridFunction::create(n, m, radius);
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    std::vector<double> x(static_cast<std::size_t>(n));
    std::size_t k = 0;
    do {
        g.coord(idx, x);
        g.values[k++] = f(x);
    } while (next_index(idx, m));
    return g;
}

bool next_index(std::span<int> idx, int m) {
    for (int a = static_cast<int>(idx.size()) - 1; a >= 0; --a) {
        if (++idx[static_cast<std::size_t>(a)] < m) return true;
        idx[static_cast<std::size_t>(a)] = 0;
    }
    return false;
}

void save_grid(const GridFunction& g, std::ostream& os) {
    g.validate();
    os << "SIGMA2GRID v1\n";
    os << g.n << ' ' << g.m << ' ' << format_double(g.h);
    for (double o : g.origin) os << ' ' << format_double(o);
    os << '\n';
    for (double v : g.values) os << format_double(v) << '\n';
}

void save_grid(const GridFunction& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParameterError("save_grid: cannot open " + path);
    save_grid(g, out);
}

GridFunction load_grid(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw FormatError("grid file: missing header");
    if (header != "SIGMA2GRID v1") throw FormatError("grid file: bad header '" + header + "'");
    std::string meta;
    if (!std::getline(is, meta)) throw FormatError("grid file: missing metadata line");
    std::istringstream ms(meta);
    GridFunction g;
    if (!(ms >> g.n >> g.m >> g.h)) throw FormatError("grid file: bad metadata line");
    if (g.n < 2 || g.n > 16) throw FormatError("grid file: implausible dimension");
    g.origin.resize(static_cast<std::size_t>(g.n));
    for (double& o : g.origin)
        if (!(ms >> o)) throw FormatError("grid file: origin truncated");
    const std::size_t count = ipow(static_cast<std::size_t>(g.m), g.n);
    g.values.resize(count);
    std::string line;
    for (std::size_t k = 0; k < count; ++k) {
        if (!std::getline(is, line)) throw FormatError("grid file: value list truncated");
        const char* begin = line.c_str();
        char* end = nullptr;
        g.values[k] = std::strtod(begin, &end);
        if (end == begin) throw FormatError("grid file: unparseable value at line " +
                                            std::to_string(k + 3));
    }
    g.validate();
    return g;
}

GridFunction load_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("load_grid: cannot open " + path);
    return load_grid(in);
}

double laplacian_at(const GridFunction& u, std::size_t f) {
    const double h2 = u.h * u.h;
    double acc = 0.0;
    for (int a = 0; a < u.n; ++a) {
        const std::size_t s = u.stride(a);
        acc += (u.values[f + s] - 2.0 * u.values[f] + u.values[f - s]) / h2;
    }
    return acc;
}

void gradient_at(const GridFunction& u, std::size_t f, std::span<double> out) {
    const double inv2h = 1.0 / (2.0 * u.h);
    for (int a = 0; a < u.n; ++a) {
        const std::size_t s = u.stride(a);
        out[static_cast<std::size_t>(a)] = (u.values[f + s] - u.values[f - s]) * inv2h;
    }
}

SymMatrix hessian_at(const GridFunction& u, std::size_t f) {
    const double h2 = u.h * u.h;
    SymMatrix hess(u.n);
    for (int a = 0; a < u.n; ++a) {
        const std::size_t sa = u.stride(a);
        hess.set(a, a, (u.values[f + sa] - 2.0 * u.values[f] + u.values[f - sa]) / h2);
        for (int b = a + 1; b < u.n; ++b) {
            const std::size_t sb = u.stride(b);
            const double v = (u.values[f + sa + sb] - u.values[f + sa - sb] -
                              u.values[f - sa + sb] + u.values[f - sa - sb]) /
                             (4.0 * h2);
            hess.set(a, b, v);
        }
    }
    return hess;
}

double third_derivative_at(const GridFunction& u, std::size_t f, int i, int j, int k) {
    int a = i, b = j, c = k;
    // Canonical axis order makes the stencil identical for every permutation.
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    const double h2 = u.h * u.h;
    const std::size_t sc = u.stride(c);
    auto hess_ab = [&](std::size_t g) {
        const std::size_t sa = u.stride(a);
        if (a == b)
            return (u.values[g + sa] - 2.0 * u.values[g] + u.values[g - sa]) / h2;
        const std::size_t sb = u.stride(b);
        return (u.values[g + sa + sb] - u.values[g + sa - sb] - u.values[g - sa + sb] +
                u.values[g - sa - sb]) /
               (4.0 * h2);
    };
    return (hess_ab(f + sc) - hess_ab(f - sc)) / (2.0 * u.h);
}

std::vector<std::size_t> ball_mask(const GridFunction& g, std::span<const double> center,
                                   double r, double inflate) {
    if (static_cast<int>(center.size()) != g.n)
        throw ParameterError("ball_mask: center dimension mismatch");
    if (!(r >= 0.0)) throw ParameterError("ball_mask: negative radius");
    const double rr = (r + inflate) * (r + inflate);
    std::vector<std::size_t> mask;
    std::vector<int> idx(static_cast<std::size_t>(g.n), 0);
    std::vector<double> x(static_cast<std::size_t>(g.n));
    std::size_t f = 0;
    do {
        g.coord(idx, x);
        double d2 = 0.0;
        for (int a = 0; a < g.n; ++a) {
            const double d = x[static_cast<std::size_t>(a)] - center[static_cast<std::size_t>(a)];
            d2 += d * d;
        }
        if (d2 <= rr) mask.push_back(f);
        ++f;
    } while (next_index(idx, g.m));
    return mask;
}

std::vector<std::size_t> ball_mask(const GridFunction& g, double r, double inflate) {
    const std::vector<double> center(static_cast<std::size_t>(g.n), 0.0);
    return ball_mask(g, center, r, inflate);
}

std::vector<std::size_t> interior_mask(const GridFunction& g, int depth) {
    std::vector<std::size_t> mask;
    std::vector<int> idx(static_cast<std::size_t>(g.n), 0);
    std::size_t f = 0;
    do {
        if (g.is_interior(idx, depth)) mask.push_back(f);
        ++f;
    } while (next_index(idx, g.m));
    return mask;
}

} // namespace sigma2
