#pragma once

#include "sigma2/rng.hpp"
#include "sigma2/spectrum.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sigma2 {

// Elementary symmetric polynomial sigma_k(lambda), 1 <= k <= n, computed by
// the incremental recurrence with compensated accumulation.
double sigma_k(const Spectrum& lambda, int k);

// sigma_1 and sigma_2 with the strict cone test.  Boundary spectra, meaning
// sigma_1 or sigma_2 within 1e-14 of zero at the spectrum's own scale, are
// classified as outside.
ConeCertificate cone_certificate(const Spectrum& lambda);
bool in_gamma2(const Spectrum& lambda);

// sigma_1 - (n/(n-2)) |lambda_n|, strictly positive on the cone for n > 2.
double sharp_min_eig_gap(const Spectrum& lambda);

// Two-sided bounds on sigma_1 - lambda_i for spectra in the cone:
//   sigma_2/sigma_1 <= sigma_1 - lambda_1 <= ((n-1)/n) sigma_1
//   (1 - 1/sqrt(2)) sigma_1 <= sigma_1 - lambda_i <= ((2n-2)/n) sigma_1, i >= 2
// checked with relative tolerance rel_tol at the sigma_1 scale.
bool fii_bounds_check(const Spectrum& lambda, double rel_tol = 1e-12);

// Semi-convexity threshold c(n) = (sqrt(3n^2+1) - n + 1) / (2n), n >= 2.
double dynamic_cn(int n);

// Gradient coefficient C(n) = (sqrt(3n^2+1) - n - 1) / (3(n-1)), n >= 2.
double dynamic_Cn(int n);

// Gradient-term weight for b = log(laplacian): ratio = lambda_min / laplacian.
//   n = 4:   (2/9) (1/2 + ratio),            needs ratio >= -1/2
//   n >= 5:  C(n) (c(n) + ratio),            needs ratio >= -c(n)
// Returns 0 exactly at the threshold ratio.  n in {2, 3} is unsupported.
double epsilon_jacobi(int n, double ratio);
// Same formula without the threshold check; may return negative values.
// Exists for falsification controls only.
double epsilon_jacobi_unchecked(int n, double ratio);

struct RootPair {
    double lower = 0.0;
    double upper = 0.0;
};

// Roots y_n^-/+ of q_1, from the discriminant 3n^2+1.  (-1/4, 3/2) at n = 4.
RootPair roots_yn(int n);
// Roots of R_1, discriminant 9n^2-12n+4 = (3n-2)^2, so (-1, (2n-2)/n) exactly.
RootPair roots_ytilde(int n);

struct QPolyValues {
    double q_delta = 0.0;
    double R_delta = 0.0;
    double q_delta_theta = 0.0;
};

// The one-variable certificate polynomials at delta = 1+eps, beta = 1+theta:
//   q_delta(y)       = -2n d y^2 + (4(n-1)d - 2n + 6) y + (n-1)(4 - 3d)
//   R_delta(y)       = -2n d y^2 + (4(n-1)d - 2n) y + 4(n-1)
//   q_{delta,theta}  = -2n b d y^2 + (4(n-1)bd - 2nb + 6) y + (n-1)(4b - 3d)
// with the identity q_{delta,theta} = q_delta + theta R_delta verified
// internally to 1e-12.  Valid y range is [0, (2n-2)/n].
QPolyValues q_polynomials(int n, double eps, double theta, double y);

struct QPolySplit {
    double q1 = 0.0;     // q_delta at delta = 1
    double r = 0.0;      // (q_delta - q1) / eps
    double R1 = 0.0;     // R_delta at delta = 1
    double rtilde = 0.0; // (R_delta - R1) / eps
};

QPolySplit split_q_polynomials(int n, double y);

// Trace positivity condition: delta <= 3 (1-theta)/(1+theta) * n/(2n-2).
bool trace_condition(int n, double delta, double theta);

// Scalars of the 2x2 restriction of the Hessian-of-b quadratic form to the
// span of the projected directions E (from e_i) and L (from (1,...,1)).
// Inner products come from the closed forms in terms of F_ii, |DF|^2 and f;
// the vectors below give an independent route.
struct RestrictedQForm {
    int n = 0;
    int i = 0;          // 0-based index into the descending spectrum
    double sigma1 = 0.0;
    double f = 0.0;
    double ratio = 0.0; // lambda_min / sigma1
    double eps = 0.0;
    double delta = 0.0;
    double theta = 0.0;
    double beta = 0.0;
    double y = 0.0;     // F_ii / sigma1
    double eta = 0.0;   // 1 + delta y
    double df_sq = 0.0; // (n-1) sigma1^2 - 2 f
    double E_sq = 0.0;
    double L_sq = 0.0;
    double EL = 0.0;
    double m00 = 0.0, m01 = 0.0, m10 = 0.0, m11 = 0.0;
    double trace = 0.0;
    double det = 0.0;
};

// theta_cap is the ceiling in theta = min(theta_cap, (n-1) f / (9 |DF|^2)).
// unchecked admits ratios below the semi-convexity threshold.
RestrictedQForm restricted_qform(const Spectrum& lambda, double f, int i,
                                 double theta_cap = 0.01, bool unchecked = false);

// Vector data for the same construction.
struct QFormVectors {
    std::vector<double> DF; // diag(F) = sigma1 - lambda_k
    std::vector<double> E;
    std::vector<double> L;
    double df_sq_direct = 0.0; // sum F_kk^2
};

QFormVectors qform_vectors(const Spectrum& lambda, double f, int i);

// 3|t|^2 - 2 beta <t,E>^2 - eta beta <t,L>^2, evaluated with actual vectors.
double qtilde_value(const RestrictedQForm& form, const QFormVectors& vecs,
                    std::span<const double> t);

// Unprojected form 3|t|^2 - 2 <t,e_i>^2 - eta <t,a>^2.
double q_index_value(const RestrictedQForm& form, std::span<const double> t);

// Young-inequality penalty linking the two: Q_i >= Qtilde_i - penalty when
// <DF,t> = fi.
double qform_penalty(const RestrictedQForm& form, double fi);

struct SampleStats {
    std::uint64_t tried = 0;
    std::uint64_t accepted = 0;
    double acceptance_rate() const {
        return tried ? static_cast<double>(accepted) / static_cast<double>(tried) : 0.0;
    }
};

// One rejection-sampling attempt: n iid uniforms on [-1, 3].
std::optional<Spectrum> try_sample_gamma2(CounterRng& rng, int n, bool dynamic_semiconvex);

// Rejection-sample a cone spectrum; with dynamic_semiconvex also require
// lambda_min / sigma_1 >= -c(n).
Spectrum sample_gamma2(CounterRng& rng, int n, bool dynamic_semiconvex,
                       SampleStats* stats = nullptr);

// Spectrum with positive leading entries and lambda_min / sigma_1 = ratio
// prescribed (ratio < 0), scaled so sigma_1 = scale.  Used by falsification
// controls; the result is generally outside the cone.
Spectrum sample_forced_ratio(CounterRng& rng, int n, double ratio, double scale = 10.0);

} // namespace sigma2
