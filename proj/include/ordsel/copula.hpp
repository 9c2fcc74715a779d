#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "ordsel/rng.hpp"

namespace ordsel {

enum class CopulaFamily { Gaussian, Clayton, Frank, Independence, Comonotonic };

const char* family_name(CopulaFamily f);

// Thrown when an operation has no meaning for a family (e.g. quadrature of
// the comonotonic copula, which has no conditional density).
struct unsupported_family_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Immutable bivariate copula model. Construct through the named factories,
// which validate the parameter ranges:
//   Gaussian rho in [-1,1], Clayton theta > 0, Frank theta > 0.
class CopulaModel {
public:
    static CopulaModel gaussian(double rho);
    static CopulaModel clayton(double theta);
    static CopulaModel frank(double theta);
    static CopulaModel independence();
    static CopulaModel comonotonic();

    // Parse "gaussian"/"clayton"/"frank"/"independence"/"comonotonic".
    static CopulaModel from_name(const std::string& name, double param);

    CopulaFamily family() const { return family_; }
    bool has_param() const {
        return family_ == CopulaFamily::Gaussian || family_ == CopulaFamily::Clayton ||
               family_ == CopulaFamily::Frank;
    }
    double param() const { return param_; }

    // C(u,v) = Pr(U <= u, V <= v). Domain: the closed unit square.
    double joint_cdf(double u, double v) const;

    // Conditional CDF of the second coordinate given the first,
    // C_{X|Z}(v|u) = dC(u,v)/du. Domain: v in [0,1], u in (0,1).
    // |rho| = 1 routes to the comonotonic / countermonotonic indicator.
    double conditional_cdf(double v, double u) const;

    // lim_{u -> 0+} C_{X|Z}(v|u) for v in (0,1].
    double boundary_conditional_cdf(double v) const;

    // Inverse of conditional_cdf in v at fixed u (used by sampling).
    double conditional_quantile(double w, double u) const;

    // One (U,V) pair distributed per the copula.
    std::pair<double, double> sample_pair(RandomStream& stream) const;

    // True iff conditional_cdf(v|u) is non-increasing in u on a
    // grid_size x grid_size interior grid (tolerance 1e-12).
    bool sipd_check(int grid_size) const;

private:
    CopulaModel(CopulaFamily f, double p) : family_(f), param_(p) {}
    CopulaFamily family_;
    double param_;
};

// CDF of the standard bivariate normal: Pr(X <= h, Y <= k) with
// correlation r. Drezner-Wesolowsky/Genz hybrid, ~1e-15 absolute.
double bivariate_normal_cdf(double h, double k, double r);

}  // namespace ordsel
