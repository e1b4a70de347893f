#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sigma2/cone.hpp"
#include "sigma2/errors.hpp"
#include "sigma2/rng.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace sigma2;

namespace {

Spectrum spec(std::vector<double> v) { return Spectrum(std::move(v)); }

// Subset-sum oracle: sum over all k-subsets of the product of entries.
double sigma_k_brute(const std::vector<double>& v, int k) {
    const int n = static_cast<int>(v.size());
    double total = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != k) continue;
        double p = 1.0;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) p *= v[static_cast<std::size_t>(i)];
        total += p;
    }
    return total;
}

std::vector<double> random_values(CounterRng& rng, int n, double lo, double hi) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

} // namespace

TEST_CASE("spectrum sorts descending and validates") {
    const Spectrum s = spec({1.0, 3.0, -2.0, 0.5});
    CHECK(s[0] == 3.0);
    CHECK(s[3] == -2.0);
    CHECK(s.largest() == 3.0);
    CHECK(s.smallest() == -2.0);
    CHECK_THROWS_AS(spec({1.0}), ParameterError);
    CHECK_THROWS_AS(spec({1.0, std::nan("")}), ParameterError);
}

TEST_CASE("sigma_k on worked examples") {
    CHECK(sigma_k(spec({2, 1, 0, -1}), 2) == doctest::Approx(-1.0).epsilon(1e-15));
    const Spectrum s = spec({3, 1, 1, -1});
    CHECK(sigma_k(s, 1) == 4.0);
    CHECK(sigma_k(s, 2) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(in_gamma2(s));
    CHECK_FALSE(in_gamma2(spec({2, 1, 0, -1})));
    CHECK_THROWS_AS(sigma_k(s, 0), ParameterError);
    CHECK_THROWS_AS(sigma_k(s, 5), ParameterError);
}

TEST_CASE("sigma_k matches the subset-sum oracle") {
    CounterRng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<double> v = random_values(rng, 6, -2.0, 3.0);
        const Spectrum s = spec(v);
        for (int k = 1; k <= 6; ++k) {
            const double want = sigma_k_brute(v, k);
            CHECK(sigma_k(s, k) ==
                  doctest::Approx(want).epsilon(1e-12).scale(std::max(1.0, std::abs(want))));
        }
    }
}

TEST_CASE("sigma_k homogeneity over extreme scales") {
    CounterRng rng(12);
    const std::vector<double> v = random_values(rng, 5, -1.0, 2.0);
    for (double t : {1e-6, 1.0, 1e6}) {
        std::vector<double> w = v;
        for (double& x : w) x *= t;
        for (int k = 1; k <= 5; ++k) {
            const double base = sigma_k(spec(v), k);
            CHECK(sigma_k(spec(w), k) ==
                  doctest::Approx(std::pow(t, k) * base).epsilon(1e-12));
        }
    }
}

TEST_CASE("sigma_1 squared equals |lambda|^2 + 2 sigma_2") {
    CounterRng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const std::vector<double> v = random_values(rng, 7, -2.0, 2.0);
        double norm_sq = 0.0;
        for (double x : v) norm_sq += x * x;
        const Spectrum s = spec(v);
        const double lhs = sigma_k(s, 1) * sigma_k(s, 1);
        CHECK(lhs == doctest::Approx(norm_sq + 2.0 * sigma_k(s, 2))
                         .epsilon(1e-12)
                         .scale(std::max(1.0, norm_sq)));
    }
}

TEST_CASE("cone membership uses a scale-relative boundary band") {
    CHECK_FALSE(in_gamma2(spec({1.0, -1.0})));
    // sigma_2 comfortably above the relative band: inside.
    CHECK(in_gamma2(spec({1.0, 1e-13})));
    // sigma_2 below the band: conservatively outside even though positive.
    CHECK_FALSE(in_gamma2(spec({1.0, 1e-16})));
    // Classification commutes with rescaling.
    CHECK(in_gamma2(spec({1e12, 1e-13 * 1e12})));
    CHECK_FALSE(in_gamma2(spec({1e12, 1e-16 * 1e12})));
}

TEST_CASE("minimal-eigenvalue gap on worked examples") {
    CHECK(sharp_min_eig_gap(spec({1, 1, 1, 1})) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(sharp_min_eig_gap(spec({1, 1, 1e-10})) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK_THROWS_AS(sharp_min_eig_gap(spec({1.0, 1.0})), UnsupportedDimension);
    CHECK_THROWS_AS(sharp_min_eig_gap(spec({2, 1, 0, -1})), DomainError);
}

TEST_CASE("gap and coefficient bounds hold on sampled cone spectra") {
    CounterRng rng(14);
    for (int n : {3, 5, 8}) {
        for (int trial = 0; trial < 500; ++trial) {
            const Spectrum s = sample_gamma2(rng, n, false);
            CHECK(sharp_min_eig_gap(s) > 0.0);
            CHECK(fii_bounds_check(s));
        }
    }
}

TEST_CASE("semi-convexity threshold and gradient coefficient") {
    CHECK(dynamic_cn(4) == 0.5);
    CHECK(dynamic_Cn(4) == doctest::Approx(2.0 / 9.0).epsilon(1e-16));
    // c decreases and C increases with dimension.
    for (int n = 3; n < 64; ++n) {
        CHECK(dynamic_cn(n + 1) < dynamic_cn(n));
        CHECK(dynamic_Cn(n + 1) > dynamic_Cn(n));
    }
    CHECK_THROWS_AS(dynamic_cn(1), UnsupportedDimension);
}

TEST_CASE("gradient weight formula") {
    CHECK(epsilon_jacobi(4, 0.25) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(epsilon_jacobi(4, -0.5) == 0.0);
    CHECK(epsilon_jacobi(5, -dynamic_cn(5)) == 0.0);
    CHECK(epsilon_jacobi(6, 0.0) ==
          doctest::Approx(dynamic_Cn(6) * dynamic_cn(6)).epsilon(1e-15));
    CHECK_THROWS_AS(epsilon_jacobi(3, 0.0), UnsupportedDimension);
    CHECK_THROWS_AS(epsilon_jacobi(4, -0.5000001), DomainError);
    CHECK(epsilon_jacobi_unchecked(4, -0.9) < 0.0);
}

TEST_CASE("quadratic roots are exact where the discriminant is a square") {
    const RootPair y4 = roots_yn(4);
    CHECK(y4.lower == -0.25);
    CHECK(y4.upper == 1.5);
    for (int n = 4; n <= 10; ++n) {
        const RootPair yt = roots_ytilde(n);
        CHECK(yt.lower == -1.0);
        CHECK(yt.upper == (2.0 * n - 2.0) / n);
        // Upper root of the base polynomial sits at 1 + c(n), inside the domain.
        const RootPair yn = roots_yn(n);
        CHECK(yn.upper == doctest::Approx(1.0 + dynamic_cn(n)).epsilon(1e-15));
        CHECK(yn.upper <= (2.0 * n - 2.0) / n + 1e-15);
    }
}

TEST_CASE("certificate polynomials at pinned points") {
    const QPolySplit at_root = split_q_polynomials(4, 1.5);
    CHECK(at_root.q1 == 0.0);
    CHECK(at_root.R1 == 0.0);
    CHECK(split_q_polynomials(4, 0.0).q1 == 3.0);

    CounterRng rng(15);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 4 + static_cast<int>(rng.uniform01() * 5.0);
        const double y = rng.uniform(0.0, (2.0 * n - 2.0) / n);
        const double eps = rng.uniform(0.0, 0.4);
        const double theta = rng.uniform(0.0, 0.05);
        const QPolyValues q = q_polynomials(n, eps, theta, y);
        const QPolySplit sp = split_q_polynomials(n, y);
        CHECK(q.q_delta ==
              doctest::Approx(sp.q1 + eps * sp.r).epsilon(1e-12).scale(10.0));
        CHECK(q.R_delta ==
              doctest::Approx(sp.R1 + eps * sp.rtilde).epsilon(1e-12).scale(10.0));
        CHECK(q.q_delta_theta ==
              doctest::Approx(q.q_delta + theta * q.R_delta).epsilon(1e-12).scale(10.0));
    }
    CHECK_THROWS_AS(q_polynomials(4, 0.1, 0.01, -0.1), DomainError);
    CHECK_THROWS_AS(q_polynomials(4, 0.1, 0.01, 1.51), DomainError);
}

TEST_CASE("trace positivity condition") {
    CHECK(trace_condition(4, 1.5, 0.01));
    CHECK_FALSE(trace_condition(4, 2.0, 0.01));
    CHECK(trace_condition(4, 2.0, 0.0));
    CHECK_FALSE(trace_condition(4, 2.0 + 1e-12, 0.0));
}

TEST_CASE("restricted form scalars match the vector construction") {
    CounterRng rng(16);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 4 + static_cast<int>(rng.uniform01() * 4.0);
        const Spectrum s = sample_gamma2(rng, n, true);
        const double f = sigma_k(s, 2);
        const int i = static_cast<int>(rng.uniform01() * n);
        const RestrictedQForm form = restricted_qform(s, f, i);
        const QFormVectors vecs = qform_vectors(s, f, i);

        CHECK(form.df_sq ==
              doctest::Approx(vecs.df_sq_direct).epsilon(1e-11).scale(vecs.df_sq_direct));
        auto dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
            double d = 0.0;
            for (std::size_t k = 0; k < a.size(); ++k) d += a[k] * b[k];
            return d;
        };
        CHECK(form.E_sq == doctest::Approx(dot(vecs.E, vecs.E)).epsilon(1e-10).scale(1.0));
        CHECK(form.L_sq == doctest::Approx(dot(vecs.L, vecs.L)).epsilon(1e-10).scale(1.0));
        CHECK(form.EL == doctest::Approx(dot(vecs.E, vecs.L)).epsilon(1e-10).scale(1.0));
        // E and L are projections away from DF.
        CHECK(dot(vecs.E, vecs.DF) == doctest::Approx(0.0).scale(form.sigma1 * form.sigma1));
        CHECK(dot(vecs.L, vecs.DF) == doctest::Approx(0.0).scale(form.sigma1 * form.sigma1));
    }
}

TEST_CASE("restricted form is positive on dynamically semi-convex samples") {
    CounterRng rng(17);
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = 4 + static_cast<int>(rng.uniform01() * 3.0);
        const Spectrum s = sample_gamma2(rng, n, true);
        const double f = sigma_k(s, 2);
        for (int i = 0; i < n; ++i) {
            const RestrictedQForm form = restricted_qform(s, f, i);
            CHECK(form.trace >= -1e-10);
            CHECK(form.det >= -1e-10);
        }
    }
}

TEST_CASE("forced ratio breaks the determinant") {
    CounterRng rng(18);
    int negative = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const Spectrum s = sample_forced_ratio(rng, 6, -0.9);
        CHECK(s.smallest() / sigma_k(s, 1) == doctest::Approx(-0.9).epsilon(1e-12));
        const RestrictedQForm form = restricted_qform(s, 1.0, 5, 0.01, true);
        if (form.det < 0.0) ++negative;
    }
    CHECK(negative >= 1);
    CHECK_THROWS_AS(sample_forced_ratio(rng, 6, 0.1), ParameterError);
    CHECK_THROWS_AS(sample_forced_ratio(rng, 6, -1.0), ParameterError);
}

TEST_CASE("Young penalty links the index form to the projected form") {
    CounterRng rng(19);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 4 + static_cast<int>(rng.uniform01() * 3.0);
        const Spectrum s = sample_gamma2(rng, n, true);
        const double f = sigma_k(s, 2);
        const int i = static_cast<int>(rng.uniform01() * n);
        const RestrictedQForm form = restricted_qform(s, f, i);
        const QFormVectors vecs = qform_vectors(s, f, i);

        const double fi = rng.uniform(-0.5, 0.5);
        std::vector<double> t = random_values(rng, n, -1.0, 1.0);
        double df_dot = 0.0;
        for (int k = 0; k < n; ++k) df_dot += vecs.DF[static_cast<std::size_t>(k)] * t[static_cast<std::size_t>(k)];
        const double shift = (fi - df_dot) / vecs.df_sq_direct;
        for (int k = 0; k < n; ++k) t[static_cast<std::size_t>(k)] += shift * vecs.DF[static_cast<std::size_t>(k)];

        const double lhs = q_index_value(form, t) + qform_penalty(form, fi);
        const double rhs = qtilde_value(form, vecs, t);
        CHECK(lhs >= rhs - 1e-10 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("projected form acts as 3|t|^2 orthogonal to the span") {
    CounterRng rng(20);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 5;
        const Spectrum s = sample_gamma2(rng, n, true);
        const double f = sigma_k(s, 2);
        const RestrictedQForm form = restricted_qform(s, f, 2);
        const QFormVectors vecs = qform_vectors(s, f, 2);

        std::vector<double> t = random_values(rng, n, -1.0, 1.0);
        auto project_out = [](std::vector<double>& v, const std::vector<double>& d) {
            double num = 0.0, den = 0.0;
            for (std::size_t k = 0; k < v.size(); ++k) {
                num += v[k] * d[k];
                den += d[k] * d[k];
            }
            if (den > 0.0)
                for (std::size_t k = 0; k < v.size(); ++k) v[k] -= num / den * d[k];
        };
        // E and L are not orthogonal to each other, so orthogonalize the pair
        // first; projecting t off an orthogonal basis empties the whole span.
        std::vector<double> L_perp = vecs.L;
        project_out(L_perp, vecs.E);
        project_out(t, vecs.E);
        project_out(t, L_perp);
        double norm_sq = 0.0;
        for (double x : t) norm_sq += x * x;
        CHECK(qtilde_value(form, vecs, t) ==
              doctest::Approx(3.0 * norm_sq).epsilon(1e-9).scale(std::max(1.0, norm_sq)));
    }
}

TEST_CASE("cone sampler respects its contracts") {
    CounterRng rng(21);
    SampleStats stats;
    for (int trial = 0; trial < 300; ++trial) {
        const Spectrum s = sample_gamma2(rng, 5, true, &stats);
        CHECK(in_gamma2(s));
        CHECK(s.smallest() / sigma_k(s, 1) >= -dynamic_cn(5));
    }
    CHECK(stats.accepted == 300);
    CHECK(stats.tried >= stats.accepted);
    CHECK(stats.acceptance_rate() > 0.0);
    CHECK(stats.acceptance_rate() <= 1.0);
}
