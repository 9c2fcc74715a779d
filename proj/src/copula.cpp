#include "ordsel/copula.hpp"

#include <algorithm>
#include <cmath>

#include "ordsel/specfun.hpp"

namespace ordsel {

using specfun::Phi;
using specfun::Phi_inv;

const char* family_name(CopulaFamily f) {
    switch (f) {
        case CopulaFamily::Gaussian: return "gaussian";
        case CopulaFamily::Clayton: return "clayton";
        case CopulaFamily::Frank: return "frank";
        case CopulaFamily::Independence: return "independence";
        case CopulaFamily::Comonotonic: return "comonotonic";
    }
    return "?";
}

CopulaModel CopulaModel::gaussian(double rho) {
    if (!(rho >= -1.0 && rho <= 1.0)) throw std::domain_error("gaussian copula: rho must lie in [-1,1]");
    return {CopulaFamily::Gaussian, rho};
}

CopulaModel CopulaModel::clayton(double theta) {
    if (!(theta > 0.0)) throw std::domain_error("clayton copula: parameter must be > 0");
    return {CopulaFamily::Clayton, theta};
}

CopulaModel CopulaModel::frank(double theta) {
    if (!(theta > 0.0)) throw std::domain_error("frank copula: parameter must be > 0");
    return {CopulaFamily::Frank, theta};
}

CopulaModel CopulaModel::independence() { return {CopulaFamily::Independence, 0.0}; }
CopulaModel CopulaModel::comonotonic() { return {CopulaFamily::Comonotonic, 0.0}; }

CopulaModel CopulaModel::from_name(const std::string& name, double param) {
    if (name == "gaussian") return gaussian(param);
    if (name == "clayton") return clayton(param);
    if (name == "frank") return frank(param);
    if (name == "independence") return independence();
    if (name == "comonotonic") return comonotonic();
    throw std::invalid_argument("unknown copula family: " + name);
}

namespace {

void require_unit(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error(std::string(what) + " must lie in [0,1]");
}

// log(u^-t + v^-t - 1), evaluated through exponentials of a = -t log u,
// b = -t log v so that large parameters cannot overflow.
double clayton_log_sum(double t, double u, double v) {
    const double a = -t * std::log(u);
    const double b = -t * std::log(v);
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m) - std::exp(-m));
}

// Denominator of the Frank conditional CDF,
//   (e^-t - 1) + (e^-tu - 1)(e^-tv - 1),
// grouped to avoid cancellation. The expanded four-exponential form is exact
// when both tu and tv are large; the expm1 form is exact otherwise.
double frank_denominator(double t, double u, double v) {
    if (t * u > 30.0 && t * v > 30.0) {
        return std::exp(-t * (u + v)) - std::exp(-t * u) - std::exp(-t * v) + std::exp(-t);
    }
    return std::expm1(-t) + std::expm1(-t * u) * std::expm1(-t * v);
}

}  // namespace

double CopulaModel::joint_cdf(double u, double v) const {
    require_unit(u, "joint_cdf: u");
    require_unit(v, "joint_cdf: v");
    if (u == 0.0 || v == 0.0) return 0.0;
    if (u == 1.0) return v;
    if (v == 1.0) return u;
    switch (family_) {
        case CopulaFamily::Independence:
            return u * v;
        case CopulaFamily::Comonotonic:
            return std::min(u, v);
        case CopulaFamily::Gaussian: {
            if (param_ >= 1.0) return std::min(u, v);
            if (param_ <= -1.0) return std::max(u + v - 1.0, 0.0);
            return bivariate_normal_cdf(Phi_inv(u), Phi_inv(v), param_);
        }
        case CopulaFamily::Clayton:
            return std::exp(-clayton_log_sum(param_, u, v) / param_);
        case CopulaFamily::Frank: {
            const double t = param_;
            // C = -(1/t) log(D / (e^-t - 1)) with D the grouped denominator.
            const double d = frank_denominator(t, u, v);
            return -(std::log(-d) - std::log(-std::expm1(-t))) / t;
        }
    }
    return 0.0;
}

double CopulaModel::conditional_cdf(double v, double u) const {
    require_unit(v, "conditional_cdf: v");
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("conditional_cdf: u must lie in (0,1)");
    if (v == 0.0) return 0.0;
    if (v == 1.0) return 1.0;
    switch (family_) {
        case CopulaFamily::Independence:
            return v;
        case CopulaFamily::Comonotonic:
            return u <= v ? 1.0 : 0.0;
        case CopulaFamily::Gaussian: {
            const double r = param_;
            if (r >= 1.0) return u <= v ? 1.0 : 0.0;
            if (r <= -1.0) return u > 1.0 - v ? 1.0 : 0.0;
            return Phi((Phi_inv(v) - r * Phi_inv(u)) / std::sqrt(1.0 - r * r));
        }
        case CopulaFamily::Clayton: {
            const double t = param_;
            return std::exp((-t - 1.0) * std::log(u) + (-1.0 / t - 1.0) * clayton_log_sum(t, u, v));
        }
        case CopulaFamily::Frank: {
            const double t = param_;
            return std::exp(-t * u) * std::expm1(-t * v) / frank_denominator(t, u, v);
        }
    }
    return 0.0;
}

double CopulaModel::boundary_conditional_cdf(double v) const {
    if (!(v > 0.0 && v <= 1.0)) throw std::domain_error("boundary_conditional_cdf: v must lie in (0,1]");
    switch (family_) {
        case CopulaFamily::Independence:
            return v;
        case CopulaFamily::Comonotonic:
            return 1.0;
        case CopulaFamily::Gaussian:
            if (param_ <= 0.0) throw std::domain_error("boundary_conditional_cdf: gaussian requires rho > 0");
            return 1.0;
        case CopulaFamily::Clayton:
            return 1.0;
        case CopulaFamily::Frank:
            return std::expm1(-param_ * v) / std::expm1(-param_);
    }
    return 0.0;
}

double CopulaModel::conditional_quantile(double w, double u) const {
    if (!(w > 0.0 && w < 1.0)) throw std::domain_error("conditional_quantile: w must lie in (0,1)");
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("conditional_quantile: u must lie in (0,1)");
    switch (family_) {
        case CopulaFamily::Independence:
            return w;
        case CopulaFamily::Comonotonic:
            return u;
        case CopulaFamily::Gaussian: {
            const double r = param_;
            if (r >= 1.0) return u;
            if (r <= -1.0) return 1.0 - u;
            return Phi(r * Phi_inv(u) + std::sqrt(1.0 - r * r) * Phi_inv(w));
        }
        case CopulaFamily::Clayton: {
            const double t = param_;
            // v = (1 + u^-t (w^{-t/(1+t)} - 1))^{-1/t}
            const double inner = std::exp(-t * std::log(u)) * std::expm1(-(t / (1.0 + t)) * std::log(w));
            return std::exp(-std::log1p(inner) / t);
        }
        case CopulaFamily::Frank: {
            const double t = param_;
            const double em = std::expm1(-t);
            return -std::log1p(w * em / (w + (1.0 - w) * std::exp(-t * u))) / t;
        }
    }
    return w;
}

std::pair<double, double> CopulaModel::sample_pair(RandomStream& stream) const {
    switch (family_) {
        case CopulaFamily::Comonotonic: {
            const double u = stream.next_uniform();
            return {u, u};
        }
        case CopulaFamily::Independence:
            return {stream.next_uniform(), stream.next_uniform()};
        case CopulaFamily::Gaussian: {
            const double r = param_;
            const double z = stream.next_normal();
            if (r >= 1.0) {
                const double u = Phi(z);
                return {u, u};
            }
            if (r <= -1.0) {
                const double u = Phi(z);
                return {u, 1.0 - u};
            }
            const double x = r * z + std::sqrt(1.0 - r * r) * stream.next_normal();
            return {Phi(z), Phi(x)};
        }
        default: {
            const double u = stream.next_uniform();
            const double w = stream.next_uniform();
            return {u, conditional_quantile(w, u)};
        }
    }
}

bool CopulaModel::sipd_check(int grid_size) const {
    if (grid_size < 3) throw std::invalid_argument("sipd_check: grid_size must be >= 3");
    const double tol = 1e-12;
    for (int iv = 1; iv < grid_size; ++iv) {
        const double v = static_cast<double>(iv) / grid_size;
        double prev = conditional_cdf(v, 1.0 / (grid_size + 1.0));
        for (int iu = 2; iu <= grid_size; ++iu) {
            const double u = static_cast<double>(iu) / (grid_size + 1.0);
            const double cur = conditional_cdf(v, u);
            if (cur > prev + tol) return false;
            prev = cur;
        }
    }
    return true;
}

// Drezner & Wesolowsky (1990) / Genz hybrid for the bivariate normal CDF.
double bivariate_normal_cdf(double h, double k, double r) {
    // Genz formulates Pr(X > h, Y > k); flip signs at the end.
    h = -h;
    k = -k;
    if (std::isinf(h) || std::isinf(k)) {
        if (h == INFINITY || k == INFINITY) return 0.0;
        if (h == -INFINITY) return k == -INFINITY ? 1.0 : Phi(-k);
        return Phi(-h);
    }

    static const double w6[3] = {0.1713244923791705, 0.3607615730481384, 0.4679139345726904};
    static const double x6[3] = {0.9324695142031522, 0.6612093864662647, 0.2386191860831970};
    static const double w12[6] = {0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
                                  0.2031674267230659, 0.2334925365383547, 0.2491470458134029};
    static const double x12[6] = {0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
                                  0.5873179542866171, 0.3678314989981802, 0.1252334085114692};
    static const double w20[10] = {0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
                                   0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
                                   0.1316886384491766,  0.1420961093183821,  0.1491729864726037,
                                   0.1527533871307259};
    static const double x20[10] = {0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
                                   0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
                                   0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
                                   0.07652652113349733};

    const double* w;
    const double* x;
    int ng;
    const double ar = std::fabs(r);
    if (ar < 0.3) {
        w = w6; x = x6; ng = 3;
    } else if (ar < 0.75) {
        w = w12; x = x12; ng = 6;
    } else {
        w = w20; x = x20; ng = 10;
    }

    const double tp = 2.0 * M_PI;
    double hk = h * k;
    double bvn = 0.0;

    if (ar < 0.925) {
        const double hs = 0.5 * (h * h + k * k);
        const double asr = 0.5 * std::asin(r);
        for (int i = 0; i < ng; ++i) {
            for (double sgn : {-1.0, 1.0}) {
                const double sn = std::sin(asr * (1.0 + sgn * x[i]));
                bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
            }
        }
        bvn = bvn * asr / tp + Phi(-h) * Phi(-k);
    } else {
        if (r < 0.0) {
            k = -k;
            hk = -hk;
        }
        if (ar < 1.0) {
            const double as = 1.0 - r * r;
            double a = std::sqrt(as);
            const double bs = (h - k) * (h - k);
            const double c = (4.0 - hk) / 8.0;
            const double d = (12.0 - hk) / 80.0;
            const double asr0 = -0.5 * (bs / as + hk);
            if (asr0 > -100.0) {
                bvn = a * std::exp(asr0) * (1.0 - c * (bs - as) * (1.0 - d * bs) / 3.0 + c * d * as * as);
            }
            if (hk > -100.0) {
                const double b = std::sqrt(bs);
                const double sp = std::sqrt(tp) * Phi(-b / a);
                bvn -= std::exp(-0.5 * hk) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
            }
            a *= 0.5;
            for (int i = 0; i < ng; ++i) {
                for (double sgn : {-1.0, 1.0}) {
                    const double xs0 = a * (1.0 + sgn * x[i]);
                    const double xs = xs0 * xs0;
                    const double asr1 = -0.5 * (bs / xs + hk);
                    if (asr1 > -100.0) {
                        const double rs = std::sqrt(1.0 - xs);
                        const double sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
                        const double ep = std::exp(-0.5 * hk * xs / ((1.0 + rs) * (1.0 + rs))) / rs;
                        bvn += a * w[i] * std::exp(asr1) * (ep - sp);
                    }
                }
            }
            bvn = -bvn / tp;
        }
        if (r > 0.0) {
            bvn += Phi(-std::max(h, k));
        } else {
            bvn = -bvn;
            if (k > h) bvn += h < 0.0 ? Phi(k) - Phi(h) : Phi(-h) - Phi(-k);
        }
    }
    return std::clamp(bvn, 0.0, 1.0);
}

}  // namespace ordsel
