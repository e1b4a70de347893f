#include "sigma2/cone.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sigma2 {

namespace {

constexpr double kBoundaryBand = 1e-14;

void require_dim(int n, int lowest, const char* where) {
    if (n < lowest)
        throw UnsupportedDimension(std::string(where) + ": dimension " + std::to_string(n) +
                                   " not supported");
}

double inf_norm(const Spectrum& s) {
    double m = 0.0;
    for (double v : s.values()) m = std::max(m, std::abs(v));
    return m;
}

// Compensated add of x into (sum, comp).
inline void kahan_add(double& sum, double& comp, double x) {
    double y = x - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
}

} // namespace

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2)
        throw ParameterError("spectrum needs at least 2 eigenvalues");
    for (double v : values_)
        if (!std::isfinite(v)) throw ParameterError("spectrum entries must be finite");
    std::stable_sort(values_.begin(), values_.end(), std::greater<double>());
}

double sigma_k(const Spectrum& lambda, int k) {
    const int n = lambda.n();
    if (k < 1 || k > n) throw ParameterError("sigma_k: k must satisfy 1 <= k <= n");
    // e[j] accumulates the degree-j elementary symmetric polynomial while
    // eigenvalues are folded in one at a time.
    std::vector<double> e(static_cast<std::size_t>(k) + 1, 0.0);
    std::vector<double> comp(static_cast<std::size_t>(k) + 1, 0.0);
    e[0] = 1.0;
    for (int m = 0; m < n; ++m) {
        const double v = lambda[m];
        for (int j = std::min(m + 1, k); j >= 1; --j)
            kahan_add(e[static_cast<std::size_t>(j)], comp[static_cast<std::size_t>(j)],
                      v * e[static_cast<std::size_t>(j - 1)]);
    }
    return e[static_cast<std::size_t>(k)];
}

ConeCertificate cone_certificate(const Spectrum& lambda) {
    ConeCertificate cert;
    cert.sigma1 = sigma_k(lambda, 1);
    cert.sigma2 = sigma_k(lambda, 2);
    // Scale-relative boundary band so that the classification commutes with
    // positive rescaling of the spectrum.
    const double s = inf_norm(lambda);
    cert.in_gamma2 = cert.sigma1 > kBoundaryBand * s && cert.sigma2 > kBoundaryBand * s * s;
    return cert;
}

bool in_gamma2(const Spectrum& lambda) { return cone_certificate(lambda).in_gamma2; }

double sharp_min_eig_gap(const Spectrum& lambda) {
    const int n = lambda.n();
    require_dim(n, 3, "sharp_min_eig_gap");
    const ConeCertificate cert = cone_certificate(lambda);
    if (!cert.in_gamma2) throw DomainError("sharp_min_eig_gap: spectrum outside the cone");
    return cert.sigma1 - static_cast<double>(n) / (n - 2.0) * std::abs(lambda.smallest());
}

bool fii_bounds_check(const Spectrum& lambda, double rel_tol) {
    const int n = lambda.n();
    const ConeCertificate cert = cone_certificate(lambda);
    if (!cert.in_gamma2) throw DomainError("fii_bounds_check: spectrum outside the cone");
    const double s1 = cert.sigma1;
    const double slack = rel_tol * s1;
    const double top = s1 - lambda[0];
    if (cert.sigma2 / s1 > top + slack) return false;
    if (top > (n - 1.0) / n * s1 + slack) return false;
    const double lo = (1.0 - 1.0 / std::sqrt(2.0)) * s1;
    const double hi = (2.0 * n - 2.0) / n * s1;
    for (int i = 1; i < n; ++i) {
        const double gap = s1 - lambda[i];
        if (gap < lo - slack) return false;
        if (gap > hi + slack) return false;
    }
    return true;
}

double dynamic_cn(int n) {
    require_dim(n, 2, "dynamic_cn");
    return (std::sqrt(3.0 * n * n + 1.0) - n + 1.0) / (2.0 * n);
}

double dynamic_Cn(int n) {
    require_dim(n, 2, "dynamic_Cn");
    return (std::sqrt(3.0 * n * n + 1.0) - n - 1.0) / (3.0 * (n - 1.0));
}

namespace {

double epsilon_formula(int n, double ratio) {
    if (n == 4) return (2.0 / 9.0) * (0.5 + ratio);
    return dynamic_Cn(n) * (dynamic_cn(n) + ratio);
}

} // namespace

double epsilon_jacobi(int n, double ratio) {
    if (n < 4) throw UnsupportedDimension("epsilon_jacobi: needs n = 4 or n >= 5");
    const double threshold = (n == 4) ? 0.5 : dynamic_cn(n);
    if (ratio < -threshold)
        throw DomainError("epsilon_jacobi: ratio below the semi-convexity threshold");
    return epsilon_formula(n, ratio);
}

double epsilon_jacobi_unchecked(int n, double ratio) {
    if (n < 4) throw UnsupportedDimension("epsilon_jacobi: needs n = 4 or n >= 5");
    return epsilon_formula(n, ratio);
}

RootPair roots_yn(int n) {
    require_dim(n, 2, "roots_yn");
    const double disc = std::sqrt(3.0 * n * n + 1.0);
    return {(n + 1.0 - disc) / (2.0 * n), (n + 1.0 + disc) / (2.0 * n)};
}

RootPair roots_ytilde(int n) {
    require_dim(n, 2, "roots_ytilde");
    const double disc = std::sqrt(9.0 * n * n - 12.0 * n + 4.0);
    return {(n - 2.0 - disc) / (2.0 * n), (n - 2.0 + disc) / (2.0 * n)};
}

QPolyValues q_polynomials(int n, double eps, double theta, double y) {
    require_dim(n, 2, "q_polynomials");
    const double ymax = (2.0 * n - 2.0) / n;
    if (!(y >= 0.0 && y <= ymax))
        throw DomainError("q_polynomials: y outside [0, (2n-2)/n]");
    const double d = 1.0 + eps;
    const double b = 1.0 + theta;
    QPolyValues out;
    out.q_delta = -2.0 * n * d * y * y + (4.0 * (n - 1.0) * d - 2.0 * n + 6.0) * y +
                  (n - 1.0) * (4.0 - 3.0 * d);
    out.R_delta = -2.0 * n * d * y * y + (4.0 * (n - 1.0) * d - 2.0 * n) * y + 4.0 * (n - 1.0);
    out.q_delta_theta = -2.0 * n * b * d * y * y +
                        (4.0 * (n - 1.0) * b * d - 2.0 * n * b + 6.0) * y +
                        (n - 1.0) * (4.0 * b - 3.0 * d);
    const double recombined = out.q_delta + theta * out.R_delta;
    const double scale = std::max({1.0, std::abs(out.q_delta_theta), std::abs(recombined)});
    if (std::abs(out.q_delta_theta - recombined) > 1e-12 * scale)
        throw std::logic_error("q_polynomials: split identity failed");
    return out;
}

QPolySplit split_q_polynomials(int n, double y) {
    require_dim(n, 2, "split_q_polynomials");
    QPolySplit out;
    out.q1 = -2.0 * n * y * y + (2.0 * n + 2.0) * y + (n - 1.0);
    out.r = -2.0 * n * y * y + 4.0 * (n - 1.0) * y - 3.0 * (n - 1.0);
    out.R1 = -2.0 * n * y * y + (2.0 * n - 4.0) * y + 4.0 * (n - 1.0);
    out.rtilde = -2.0 * n * y * y + 4.0 * (n - 1.0) * y;
    return out;
}

bool trace_condition(int n, double delta, double theta) {
    require_dim(n, 2, "trace_condition");
    return delta <= 3.0 * (1.0 - theta) / (1.0 + theta) * n / (2.0 * n - 2.0);
}

RestrictedQForm restricted_qform(const Spectrum& lambda, double f, int i, double theta_cap,
                                 bool unchecked) {
    const int n = lambda.n();
    if (n < 4) throw UnsupportedDimension("restricted_qform: needs n = 4 or n >= 5");
    if (i < 0 || i >= n) throw ParameterError("restricted_qform: index out of range");
    if (!(f > 0.0)) throw ParameterError("restricted_qform: f must be positive");
    if (!(theta_cap > 0.0)) throw ParameterError("restricted_qform: theta_cap must be positive");

    RestrictedQForm form;
    form.n = n;
    form.i = i;
    form.f = f;
    form.sigma1 = sigma_k(lambda, 1);
    if (!(form.sigma1 > 0.0)) throw DomainError("restricted_qform: sigma_1 must be positive");
    form.ratio = lambda.smallest() / form.sigma1;
    form.eps = unchecked ? epsilon_jacobi_unchecked(n, form.ratio)
                         : epsilon_jacobi(n, form.ratio);
    form.delta = 1.0 + form.eps;
    form.df_sq = (n - 1.0) * form.sigma1 * form.sigma1 - 2.0 * f;
    if (!(form.df_sq > 0.0))
        throw DomainError("restricted_qform: |DF|^2 computed nonpositive");
    form.theta = std::min(theta_cap, (n - 1.0) * f / (9.0 * form.df_sq));
    form.beta = 1.0 + form.theta;

    const double fii = form.sigma1 - lambda[i];
    form.y = fii / form.sigma1;
    form.eta = 1.0 + form.delta * form.y;
    form.E_sq = 1.0 - fii * fii / form.df_sq;
    form.L_sq = 1.0 - 2.0 * (n - 1.0) * f / form.df_sq;
    form.EL = 1.0 - (n - 1.0) * fii * form.sigma1 / form.df_sq;

    form.m00 = 3.0 - 2.0 * form.beta * form.E_sq;
    form.m01 = -2.0 * form.beta * form.EL;
    form.m10 = -form.eta * form.beta * form.EL;
    form.m11 = 3.0 - form.eta * form.beta * form.L_sq;
    form.trace = form.m00 + form.m11;
    form.det = form.m00 * form.m11 - form.m01 * form.m10;
    return form;
}

QFormVectors qform_vectors(const Spectrum& lambda, double f, int i) {
    const int n = lambda.n();
    if (i < 0 || i >= n) throw ParameterError("qform_vectors: index out of range");
    const double s1 = sigma_k(lambda, 1);
    QFormVectors v;
    v.DF.resize(static_cast<std::size_t>(n));
    v.E.resize(static_cast<std::size_t>(n));
    v.L.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) v.DF[static_cast<std::size_t>(k)] = s1 - lambda[k];
    double df2 = 0.0;
    for (double x : v.DF) df2 += x * x;
    v.df_sq_direct = df2;
    const double df_formula = (n - 1.0) * s1 * s1 - 2.0 * f;
    const double fii = v.DF[static_cast<std::size_t>(i)];
    for (int k = 0; k < n; ++k) {
        const double dfk = v.DF[static_cast<std::size_t>(k)];
        v.E[static_cast<std::size_t>(k)] = (k == i ? 1.0 : 0.0) - fii / df_formula * dfk;
        v.L[static_cast<std::size_t>(k)] = 1.0 - (n - 1.0) * s1 / df_formula * dfk;
    }
    return v;
}

double qtilde_value(const RestrictedQForm& form, const QFormVectors& vecs,
                    std::span<const double> t) {
    if (static_cast<int>(t.size()) != form.n)
        throw ParameterError("qtilde_value: t has wrong dimension");
    double tt = 0.0, tE = 0.0, tL = 0.0;
    for (int k = 0; k < form.n; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        tt += t[ks] * t[ks];
        tE += t[ks] * vecs.E[ks];
        tL += t[ks] * vecs.L[ks];
    }
    return 3.0 * tt - 2.0 * form.beta * tE * tE - form.eta * form.beta * tL * tL;
}

double q_index_value(const RestrictedQForm& form, std::span<const double> t) {
    if (static_cast<int>(t.size()) != form.n)
        throw ParameterError("q_index_value: t has wrong dimension");
    double tt = 0.0, ta = 0.0;
    for (double x : t) {
        tt += x * x;
        ta += x;
    }
    const double ti = t[static_cast<std::size_t>(form.i)];
    return 3.0 * tt - 2.0 * ti * ti - form.eta * ta * ta;
}

double qform_penalty(const RestrictedQForm& form, double fi) {
    const double fii = form.y * form.sigma1;
    const double adf = (form.n - 1.0) * form.sigma1;
    const double w = 2.0 * fii * fii + form.eta * adf * adf;
    return w * (1.0 + 1.0 / form.theta) * fi * fi / (form.df_sq * form.df_sq);
}

std::optional<Spectrum> try_sample_gamma2(CounterRng& rng, int n, bool dynamic_semiconvex) {
    std::vector<double> vals(static_cast<std::size_t>(n));
    for (double& v : vals) v = rng.uniform(-1.0, 3.0);
    Spectrum s(std::move(vals));
    const ConeCertificate cert = cone_certificate(s);
    if (!cert.in_gamma2) return std::nullopt;
    if (dynamic_semiconvex && n >= 4) {
        if (s.smallest() / cert.sigma1 < -dynamic_cn(n)) return std::nullopt;
    }
    return s;
}

Spectrum sample_gamma2(CounterRng& rng, int n, bool dynamic_semiconvex, SampleStats* stats) {
    require_dim(n, 2, "sample_gamma2");
    for (std::uint64_t tries = 0; tries < 100000000ull; ++tries) {
        if (stats) ++stats->tried;
        auto s = try_sample_gamma2(rng, n, dynamic_semiconvex);
        if (s) {
            if (stats) ++stats->accepted;
            return *std::move(s);
        }
    }
    throw ConfigError("sample_gamma2: acceptance rate too low");
}

Spectrum sample_forced_ratio(CounterRng& rng, int n, double ratio, double scale) {
    require_dim(n, 2, "sample_forced_ratio");
    if (!(ratio < 0.0)) throw ParameterError("sample_forced_ratio: ratio must be negative");
    if (!(ratio > -1.0)) throw ParameterError("sample_forced_ratio: ratio must exceed -1");
    if (!(scale > 0.0)) throw ParameterError("sample_forced_ratio: scale must be positive");
    std::vector<double> vals(static_cast<std::size_t>(n));
    double head = 0.0;
    for (int k = 0; k + 1 < n; ++k) {
        vals[static_cast<std::size_t>(k)] = rng.uniform(0.5, 3.0);
        head += vals[static_cast<std::size_t>(k)];
    }
    // lambda_min = ratio * sigma_1 and sigma_1 = head + lambda_min.
    vals[static_cast<std::size_t>(n - 1)] = ratio * head / (1.0 - ratio);
    const double s1 = head + vals[static_cast<std::size_t>(n - 1)];
    const double factor = scale / s1;
    for (double& v : vals) v *= factor;
    return Spectrum(std::move(vals));
}

} // namespace sigma2
