#include "ordsel/gbound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ordsel/quartic.hpp"
#include "ordsel/specfun.hpp"

namespace ordsel::gbound {

using specfun::log_q;
using specfun::Phi;
using specfun::Phi_inv;

namespace {

constexpr double kLogLog2 = -0.36651292058166432701243915823267946;  // log log 2
constexpr double kLn2 = 0.69314718055994530941723212145818;
constexpr double kLn10 = 2.3025850929940456840179914546844;
constexpr double kOmegaLo = 1e-6;
// Above this, exp(log n) and n*log Q(z) leave the double range; switch the
// certificate checks to pure log arithmetic.
constexpr double kLogNHuge = 600.0;

double nan_d() { return std::numeric_limits<double>::quiet_NaN(); }
double omega_hi() { return M_PI / 2.0 - kOmegaLo; }

// log(-log Q(z)); stable even where Q(|z|) underflows (z very negative).
double log_neg_log_q(double z) {
    if (z >= 0.0) return std::log(-log_q(z));
    const double lqm = log_q(-z);  // log Q(|z|)
    if (lqm < -36.0) return lqm;   // -log Q(z) = Q(|z|) to double precision
    return std::log(-std::log1p(-std::exp(lqm)));
}

DominatingParams params_from_lognc1(double lognc1, double c2) {
    return {-std::sqrt(lognc1 / c2), -kLogLog2 / (2.0 * c2 * (lognc1 - kLogLog2))};
}

// Argument of Phi in the analytic bound; comparing in this space avoids the
// saturation of Phi near 1.
double bound_argument(double lognc1, double c2, double alpha, double rho) {
    const auto [mu, s2] = params_from_lognc1(lognc1, c2);
    const double inv_alpha = alpha >= 1.0 ? std::numeric_limits<double>::infinity() : Phi_inv(alpha);
    return (inv_alpha - rho * mu) / std::sqrt(1.0 - rho * rho + rho * rho * s2);
}

}  // namespace

OmegaConstants omega_constants(double omega) {
    if (!(omega > 0.0) || !(omega < M_PI / 2.0)) {
        throw std::domain_error("omega_constants: omega must lie in (0, pi/2)");
    }
    return {0.5 - omega / M_PI, (std::cos(omega) / std::sin(omega)) / (M_PI - 2.0 * omega)};
}

DominatingParams dominating_params(std::int64_t n, double omega) {
    const auto [c1, c2] = omega_constants(omega);
    const double nc1 = static_cast<double>(n) * c1;
    if (!(nc1 > 1.0)) throw std::domain_error("dominating_params: requires n*c1 > 1");
    return params_from_lognc1(std::log(nc1), c2);
}

OmegaCertificate certify_log(double log_n, double omega, int grid) {
    if (grid < 100) throw std::invalid_argument("certify: grid must be >= 100");
    const auto [c1, c2] = omega_constants(omega);
    OmegaCertificate cert;
    cert.omega = omega;
    cert.c1 = c1;
    cert.c2 = c2;
    cert.mu_n = nan_d();
    cert.sigma_n2 = nan_d();

    // (1) n c1 > 1, strictly
    const double lognc1 = log_n + std::log(c1);
    if (!(lognc1 > 0.0)) {
        cert.failed_check = 1;
        return cert;
    }
    const auto [mu, s2] = params_from_lognc1(lognc1, c2);
    cert.mu_n = mu;
    cert.sigma_n2 = s2;
    const double sig = std::sqrt(s2);

    const bool huge = log_n > kLogNHuge;
    const double n = huge ? 0.0 : std::exp(log_n);

    // (2) Q(z)^n <= Q((z - mu)/sigma) across [mu, 0]
    for (int i = 0; i < grid; ++i) {
        const double z = mu * static_cast<double>(grid - 1 - i) / static_cast<double>(grid - 1);
        const double rhs_arg = (z - mu) / sig;
        if (!huge) {
            if (n * log_q(z) > log_q(rhs_arg)) {
                cert.failed_check = 2;
                return cert;
            }
        } else {
            // n log Q(z) <= log Q(r)  <=>  log n + log(-log Q(z)) >= log(-log Q(r))
            if (log_n + log_neg_log_q(z) < log_neg_log_q(rhs_arg)) {
                cert.failed_check = 2;
                return cert;
            }
        }
    }

    // (3) (n/2 - c2/s2)(n log 2 + mu^2/s2 - log c1) >= c2^2 mu^2 / s2^2
    if (!huge) {
        const double lhs = (0.5 * n - c2 / s2) * (n * kLn2 + mu * mu / s2 - std::log(c1));
        const double rhs = c2 * c2 * mu * mu / (s2 * s2);
        if (!(lhs >= rhs)) {
            cert.failed_check = 3;
            return cert;
        }
    } else {
        // Conservative log-space version: the second factor is at least
        // n log 2 (its remaining terms are positive here).
        const double log_a1 = log_n - kLn2;
        const double log_a2 = std::log(c2 / s2);
        bool ok = log_a1 > log_a2;
        if (ok) {
            const double log_term1 = log_a1 + std::log1p(-std::exp(log_a2 - log_a1));
            const double log_term2 = log_n + std::log(kLn2);
            const double log_rhs = 2.0 * std::log(c2) + 2.0 * std::log(-mu) - 2.0 * std::log(s2);
            ok = log_term1 + log_term2 >= log_rhs;
        }
        if (!ok) {
            cert.failed_check = 3;
            return cert;
        }
    }

    cert.certified = true;
    return cert;
}

OmegaCertificate certify(std::int64_t n, double omega, int grid) {
    if (n < 1) throw std::domain_error("certify: n must be >= 1");
    const auto [c1, c2] = omega_constants(omega);
    // The strict n*c1 > 1 test must see the exact product, not its log.
    if (!(static_cast<double>(n) * c1 > 1.0)) {
        OmegaCertificate cert;
        cert.omega = omega;
        cert.c1 = c1;
        cert.c2 = c2;
        cert.mu_n = nan_d();
        cert.sigma_n2 = nan_d();
        cert.n = n;
        cert.failed_check = 1;
        return cert;
    }
    OmegaCertificate cert = certify_log(std::log(static_cast<double>(n)), omega, grid);
    cert.n = n;
    return cert;
}

double lower_bound(std::int64_t n, double alpha, double rho, double omega) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("lower_bound: alpha must lie in (0,1]");
    if (!(rho > 0.0 && rho <= 1.0)) throw std::domain_error("lower_bound: rho must lie in (0,1]");
    const OmegaCertificate cert = certify(n, omega);
    if (!cert.certified) return 0.0;
    const double lognc1 = std::log(static_cast<double>(n) * cert.c1);
    return Phi(bound_argument(lognc1, cert.c2, alpha, rho));
}

OptimizedBound optimized_lower_bound(std::int64_t n, double alpha, double rho) {
    constexpr int kGrid = 512;
    const double lo = kOmegaLo, hi = omega_hi();

    double best_val = 0.0;
    double best_w = nan_d();
    for (int i = 0; i < kGrid; ++i) {
        const double w = lo + (hi - lo) * static_cast<double>(i) / (kGrid - 1);
        const double v = lower_bound(n, alpha, rho, w);
        if (v > best_val) {
            best_val = v;
            best_w = w;
        }
    }
    if (!(best_val > 0.0)) return {0.0, nan_d()};

    const double step = (hi - lo) / (kGrid - 1);
    double a = std::max(lo, best_w - step);
    double b = std::min(hi, best_w + step);
    const double invphi = 0.6180339887498948482;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = lower_bound(n, alpha, rho, c);
    double fd = lower_bound(n, alpha, rho, d);
    for (int it = 0; it < 40; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = lower_bound(n, alpha, rho, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = lower_bound(n, alpha, rho, d);
        }
    }
    const double w = 0.5 * (a + b);
    const double v = lower_bound(n, alpha, rho, w);
    if (v > best_val) {
        best_val = v;
        best_w = w;
    }
    return {best_val, best_w};
}

void InversionSpec::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("inversion: alpha must lie in (0,1]");
    if (!(rho > 0.0 && rho <= 1.0)) throw std::domain_error("inversion: rho must lie in (0,1]");
    if (!(delta > 0.0 && delta <= 1.0)) throw std::domain_error("inversion: delta must lie in (0,1]");
}

QuarticCoefficients quartic_coefficients(const InversionSpec& spec, double omega) {
    spec.validate();
    const auto [c1, c2] = omega_constants(omega);
    (void)c1;
    const double a = spec.alpha >= 1.0 ? std::numeric_limits<double>::infinity() : Phi_inv(spec.alpha);
    const double b = spec.delta >= 1.0 ? -std::numeric_limits<double>::infinity() : Phi_inv(1.0 - spec.delta);
    const double rho = spec.rho;
    const double rc = std::sqrt(c2);
    const double mix = a * a - b * b + rho * rho * b * b;
    return {
        -2.0 * rho * rho / kLogLog2,
        -4.0 * a * rho * rc / kLogLog2,
        2.0 * rho * rho - 2.0 * c2 * mix / kLogLog2,
        4.0 * rc * a * rho,
        2.0 * c2 * mix - rho * rho * b * b,
    };
}

namespace {

// Natural log of the real-valued n solving bound = 1 - delta at this omega.
std::optional<double> raw_log_nstar(const InversionSpec& spec, double omega) {
    const auto qc = quartic_coefficients(spec, omega);
    const auto x = greatest_real_root({qc.a4, qc.a3, qc.a2, qc.a1, qc.a0});
    if (!x || *x < 0.0) return std::nullopt;
    const auto [c1, c2] = omega_constants(omega);
    (void)c2;
    return (*x) * (*x) - std::log(c1);
}

std::optional<LogSampleSize> trivial_inversion(const InversionSpec& spec) {
    // alpha = 1 gives success probability exactly 1; delta = 1 asks for
    // p >= 0. Either way n = 1 suffices and the quartic is degenerate.
    if (spec.alpha >= 1.0 || spec.delta >= 1.0) return LogSampleSize{0.0, 1};
    return std::nullopt;
}

// First integer that passes the certificate, scanning up from the strict
// n*c1 > 1 boundary. The scan is capped; in practice the boundary itself or
// its immediate neighbours certify.
std::optional<std::int64_t> first_certified(double c1, double omega) {
    std::int64_t n = static_cast<std::int64_t>(std::floor(1.0 / c1)) + 1;
    for (int s = 0; s < 64; ++s, ++n) {
        if (certify(n, omega).certified) return n;
    }
    return std::nullopt;
}

}  // namespace

std::optional<LogSampleSize> n_star(const InversionSpec& spec, double omega) {
    spec.validate();
    if (auto t = trivial_inversion(spec)) return t;

    const auto [c1, c2] = omega_constants(omega);
    const double target_z = Phi_inv(1.0 - spec.delta);
    const auto meets = [&, c1 = c1, c2 = c2](std::int64_t nn) {
        const double nc1 = static_cast<double>(nn) * c1;
        if (!(nc1 > 1.0)) return false;
        return bound_argument(std::log(nc1), c2, spec.alpha, spec.rho) >= target_z;
    };

    // If the bound already clears the target at the certification boundary,
    // the quartic has no meaningful crossing (possible for delta > 1/2);
    // the first certifiable n is then the smallest certified answer.
    if (meets(static_cast<std::int64_t>(std::floor(1.0 / c1)) + 1)) {
        const auto n_first = first_certified(c1, omega);
        if (n_first && meets(*n_first)) {
            return LogSampleSize{std::log10(static_cast<double>(*n_first)), *n_first};
        }
    }

    const auto ln_opt = raw_log_nstar(spec, omega);
    if (!ln_opt) return std::nullopt;
    const double ln_n = *ln_opt;

    if (ln_n / kLn10 > 15.0) {
        if (!certify_log(ln_n, omega).certified) return std::nullopt;
        return LogSampleSize{ln_n / kLn10, std::nullopt};
    }

    const double n_real = std::exp(ln_n);
    std::int64_t cand = static_cast<std::int64_t>(std::ceil(n_real * (1.0 - 5e-13)));
    cand = std::max<std::int64_t>(cand, 1);
    for (int i = 0; i < 8 && cand > 1 && meets(cand - 1); ++i) --cand;
    for (int i = 0; i < 8 && !meets(cand); ++i) ++cand;
    if (!meets(cand)) return std::nullopt;

    // The crossing can sit below the first certifiable n; step up to it.
    for (int s = 0; s < 64 && !certify(cand, omega).certified; ++s) ++cand;
    if (!certify(cand, omega).certified) return std::nullopt;
    return LogSampleSize{std::log10(static_cast<double>(cand)), cand};
}

std::optional<InversionResult> n_star_optimized(const InversionSpec& spec) {
    spec.validate();
    if (auto t = trivial_inversion(spec)) {
        return InversionResult{*t, nan_d(), spec.alpha >= 1.0 ? 1.0 : 0.0};
    }

    constexpr int kGrid = 512;
    const double lo = kOmegaLo, hi = omega_hi();

    // Certified objective: log n*(omega), +inf where the quartic has no
    // usable root or certification fails. Mirrors n_star's boundary shortcut.
    const auto objective = [&](double w) {
        const auto [c1, c2] = omega_constants(w);
        const double target_z = Phi_inv(1.0 - spec.delta);
        const auto meets = [&, c1 = c1, c2 = c2](std::int64_t nn) {
            const double nc1 = static_cast<double>(nn) * c1;
            return nc1 > 1.0 &&
                   bound_argument(std::log(nc1), c2, spec.alpha, spec.rho) >= target_z;
        };
        if (meets(static_cast<std::int64_t>(std::floor(1.0 / c1)) + 1)) {
            const auto n_first = first_certified(c1, w);
            if (n_first && meets(*n_first)) return std::log(static_cast<double>(*n_first));
        }
        const auto ln = raw_log_nstar(spec, w);
        if (!ln) return std::numeric_limits<double>::infinity();
        if (!certify_log(*ln, w).certified) return std::numeric_limits<double>::infinity();
        return *ln;
    };

    double best_ln = std::numeric_limits<double>::infinity();
    double best_w = nan_d();
    for (int i = 0; i < kGrid; ++i) {
        const double w = lo + (hi - lo) * static_cast<double>(i) / (kGrid - 1);
        const double v = objective(w);
        if (v < best_ln) {
            best_ln = v;
            best_w = w;
        }
    }
    if (!std::isfinite(best_ln)) return std::nullopt;

    const double step = (hi - lo) / (kGrid - 1);
    double a = std::max(lo, best_w - step);
    double b = std::min(hi, best_w + step);
    const double invphi = 0.6180339887498948482;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    for (int it = 0; it < 60; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = objective(d);
        }
    }
    double w_star = 0.5 * (a + b);
    if (objective(w_star) > best_ln) w_star = best_w;

    auto size = n_star(spec, w_star);
    if (!size) {
        size = n_star(spec, best_w);
        if (!size) return std::nullopt;
        w_star = best_w;
    }

    double bound_at;
    const auto [c1, c2] = omega_constants(w_star);
    if (size->exact_n) {
        bound_at = Phi(bound_argument(std::log(static_cast<double>(*size->exact_n) * c1), c2,
                                      spec.alpha, spec.rho));
    } else {
        bound_at = Phi(bound_argument(size->log10_n * kLn10 + std::log(c1), c2, spec.alpha, spec.rho));
    }
    return InversionResult{*size, w_star, bound_at};
}

double rho_from_noise(double xi2) {
    if (!(xi2 >= 0.0)) throw std::domain_error("rho_from_noise: xi^2 must be >= 0");
    return 1.0 / std::sqrt(1.0 + xi2);
}

}  // namespace ordsel::gbound
