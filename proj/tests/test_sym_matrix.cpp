#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sigma2/cone.hpp"
#include "sigma2/errors.hpp"
#include "sigma2/rng.hpp"
#include "sigma2/sym_matrix.hpp"

#include <array>
#include <cmath>
#include <vector>

using namespace sigma2;

namespace {

SymMatrix random_symmetric(CounterRng& rng, int n, double lo, double hi) {
    SymMatrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) a.set(i, j, rng.uniform(lo, hi));
    return a;
}

} // namespace

TEST_CASE("construction, mirroring, and basic scalars") {
    SymMatrix a(3);
    a.set(0, 2, 5.0);
    CHECK(a(2, 0) == 5.0);
    a.add(2, 0, 1.0);
    CHECK(a(0, 2) == 6.0);

    const std::array<double, 4> d{3.0, 1.0, 1.0, -1.0};
    const SymMatrix diag = SymMatrix::diagonal(d);
    CHECK(diag.trace() == 4.0);
    CHECK(diag.frobenius_sq() == 12.0);
    CHECK(diag.sigma2() == 2.0);
    CHECK(SymMatrix::identity(4).sigma2() == 6.0);
}

TEST_CASE("from_full accepts symmetric data and rejects asymmetry") {
    const std::vector<double> sym{1.0, 2.0, 2.0, 3.0};
    CHECK(SymMatrix::from_full(2, sym)(0, 1) == 2.0);
    const std::vector<double> bad{1.0, 2.0, 2.1, 3.0};
    CHECK_THROWS_AS(SymMatrix::from_full(2, bad), ParameterError);
    CHECK_THROWS_AS(SymMatrix::from_full(3, sym), ParameterError);
}

TEST_CASE("eigenvalues on known matrices") {
    // [[2,1],[1,2]] has eigenvalues 3 and 1.
    SymMatrix a(2);
    a.set(0, 0, 2.0);
    a.set(1, 1, 2.0);
    a.set(0, 1, 1.0);
    const Spectrum e = a.eigenvalues();
    CHECK(e[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(e[1] == doctest::Approx(1.0).epsilon(1e-14));

    // Rotation of diag(5, 2, -1) by a known orthogonal basis.
    const double c = std::cos(0.7), s = std::sin(0.7);
    SymMatrix b(3);
    b.set(0, 0, 5.0 * c * c + 2.0 * s * s);
    b.set(0, 1, (5.0 - 2.0) * c * s);
    b.set(1, 1, 5.0 * s * s + 2.0 * c * c);
    b.set(2, 2, -1.0);
    const Spectrum eb = b.eigenvalues();
    CHECK(eb[0] == doctest::Approx(5.0).epsilon(1e-13));
    CHECK(eb[1] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(eb[2] == doctest::Approx(-1.0).epsilon(1e-13));
}

TEST_CASE("eigenvalues are deterministic and invariant-preserving") {
    CounterRng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform01() * 7.0);
        const SymMatrix a = random_symmetric(rng, n, -3.0, 3.0);
        const Spectrum e1 = a.eigenvalues();
        const Spectrum e2 = a.eigenvalues();
        for (int i = 0; i < n; ++i) CHECK(e1[i] == e2[i]);

        double sum = 0.0, sq = 0.0;
        for (int i = 0; i < n; ++i) {
            sum += e1[i];
            sq += e1[i] * e1[i];
        }
        CHECK(sum == doctest::Approx(a.trace()).epsilon(1e-12).scale(10.0));
        CHECK(sq == doctest::Approx(a.frobenius_sq()).epsilon(1e-12).scale(10.0));
        CHECK(sigma_k(e1, 2) == doctest::Approx(a.sigma2()).epsilon(1e-11).scale(10.0));
    }
}

TEST_CASE("linearized coefficients flip the spectrum around the trace") {
    const std::array<double, 4> d{2.0, 1.0, 0.0, -1.0};
    const LinearizedCoeffs lc = linearized_coeffs(SymMatrix::diagonal(d));
    // F = trace(H) I - H = diag(0, 1, 2, 3).
    CHECK(lc.F(0, 0) == 0.0);
    CHECK(lc.F(1, 1) == 1.0);
    CHECK(lc.F(2, 2) == 2.0);
    CHECK(lc.F(3, 3) == 3.0);
    CHECK(lc.trace_residual <= 1e-14);
}

TEST_CASE("linearized coefficients are positive definite on the cone") {
    CounterRng rng(32);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + static_cast<int>(rng.uniform01() * 4.0);
        SymMatrix h = random_symmetric(rng, n, -1.0, 1.5);
        // Push toward the cone; skip samples that still miss it.
        for (int i = 0; i < n; ++i) h.add(i, i, 1.0);
        if (!in_gamma2(h.eigenvalues())) continue;
        const LinearizedCoeffs lc = linearized_coeffs(h);
        const Spectrum fe = lc.F.eigenvalues();
        CHECK(fe.smallest() > 0.0);
        // Contraction identity: sum F_ii = (n-1) trace(H).
        CHECK(lc.F.trace() ==
              doctest::Approx((n - 1.0) * h.trace()).epsilon(1e-12).scale(10.0));
        CHECK(lc.trace_residual <= 1e-12 * std::max(1.0, std::abs(h.trace())));
    }
}

TEST_CASE("linearized eigenvalues are sigma1 minus the Hessian eigenvalues") {
    CounterRng rng(33);
    for (int trial = 0; trial < 100; ++trial) {
        const SymMatrix h = random_symmetric(rng, 5, -2.0, 2.0);
        const Spectrum he = h.eigenvalues();
        const Spectrum fe = linearized_coeffs(h).F.eigenvalues();
        const double s1 = h.trace();
        for (int i = 0; i < 5; ++i)
            CHECK(fe[i] == doctest::Approx(s1 - he[4 - i]).epsilon(1e-11).scale(10.0));
    }
}
