#pragma once

#include <cstdint>
#include <optional>

// Analytic machinery for the Gaussian-copula success probability: the
// exponential-sandwich constants, the Gaussian certificate that dominates
// the first order statistic of n standard normals, the resulting analytic
// lower bound, and its inversion to a guaranteeing sample size (kept as
// log10(n) so astronomically large answers stay representable).

namespace ordsel::gbound {

struct OmegaConstants {
    double c1;  // 1/2 - omega/pi
    double c2;  // cot(omega) / (pi - 2 omega)
};

// Throws std::domain_error unless omega in (0, pi/2).
OmegaConstants omega_constants(double omega);

struct DominatingParams {
    double mu_n;
    double sigma_n2;
};

// mu_n = -sqrt(log(n c1)/c2),
// sigma_n^2 = -log log 2 / (2 c2 (log(n c1) - log log 2)).
// Throws std::domain_error when n*c1 <= 1.
DominatingParams dominating_params(std::int64_t n, double omega);

struct OmegaCertificate {
    double omega = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double mu_n = 0.0;      // NaN when n*c1 <= 1
    double sigma_n2 = 0.0;  // NaN when n*c1 <= 1
    std::int64_t n = 0;
    bool certified = false;
    int failed_check = 0;  // 0 = certified; 1..3 = first failing check
};

// Certificate that N(mu_n, sigma_n^2) stochastically dominates the first
// order statistic of n standard normals:
//   (1) n c1 > 1 (strict),
//   (2) Q(z)^n <= Q((z - mu_n)/sigma_n) on `grid` points spanning [mu_n, 0],
//   (3) the closed-form quadratic-discriminant condition for z >= 0.
OmegaCertificate certify(std::int64_t n, double omega, int grid = 1000);

// Same checks with n given as its natural logarithm, usable far beyond the
// double (and int64) range.
OmegaCertificate certify_log(double log_n, double omega, int grid = 1000);

// Lower bound on the success probability for a Gaussian copula with
// correlation rho, any m >= 1:
//   Phi((Phi^-1(alpha) - rho mu_n) / sqrt(1 - rho^2 + rho^2 sigma_n^2)),
// or 0 when (n, omega) does not certify.
double lower_bound(std::int64_t n, double alpha, double rho, double omega);

struct OptimizedBound {
    double bound;       // 0 when no omega certifies
    double omega_star;  // NaN when no omega certifies
};

// Maximise lower_bound over omega in [1e-6, pi/2 - 1e-6]: 512-point scan,
// then golden-section refinement around the incumbent.
OptimizedBound optimized_lower_bound(std::int64_t n, double alpha, double rho);

struct InversionSpec {
    double alpha;  // (0, 1]
    double rho;    // (0, 1]
    double delta;  // (0, 1]

    void validate() const;
};

struct QuarticCoefficients {
    double a4, a3, a2, a1, a0;
};

// Coefficients of the quartic in x = sqrt(log(n c1)) whose greatest real
// root solves lower_bound(n) = 1 - delta.
QuarticCoefficients quartic_coefficients(const InversionSpec& spec, double omega);

struct LogSampleSize {
    double log10_n;
    std::optional<std::int64_t> exact_n;  // populated when log10_n <= 15
};

// Smallest certified n with lower_bound(n, alpha, rho, omega) >= 1 - delta,
// from the greatest real root of the quartic. When the answer fits an
// integer it is adjusted so the bound inequality holds at n and fails at
// n - 1, then re-certified. nullopt = no finite certified answer at this
// omega (the infinite sentinel).
std::optional<LogSampleSize> n_star(const InversionSpec& spec, double omega);

struct InversionResult {
    LogSampleSize size;
    double omega_star;
    double bound_at_n;  // certified bound at the returned size
};

// Minimise n_star over omega (512-point scan + golden-section refinement).
std::optional<InversionResult> n_star_optimized(const InversionSpec& spec);

// Correlation of an observation corrupted by independent additive Gaussian
// noise with noise-to-signal ratio xi^2: rho = (1 + xi^2)^(-1/2).
double rho_from_noise(double xi2);

}  // namespace ordsel::gbound
