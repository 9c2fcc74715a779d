#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

// Adaptive one-dimensional quadrature on a Gauss7/Kronrod15 kernel, plus a
// cumulative antiderivative built on a shared adaptive partition.

namespace ordsel::quad {

namespace detail {
// Kronrod abscissae (positive half) and weights; Gauss weights for the
// embedded 7-point rule.
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};
}  // namespace detail

template <class F>
double kronrod15(const F& f, double a, double b, double& err) {
    using namespace detail;
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double k15 = kWgk[7] * fc;
    double g7 = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kXgk[i];
        const double fs = f(c + dx) + f(c - dx);
        k15 += kWgk[i] * fs;
        if (i % 2 == 1) g7 += kWg[i / 2] * fs;
    }
    k15 *= h;
    g7 *= h;
    err = std::pow(200.0 * std::fabs(k15 - g7), 1.5);
    if (!std::isfinite(err)) err = std::fabs(k15 - g7);
    return k15;
}

struct Result {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
};

// Integrate f over [a,b] to absolute tolerance, optionally seeding the
// subdivision with interior breakpoints (for integrands with a known
// narrow peak the kernel would otherwise step over).
template <class F>
Result integrate(const F& f, double a, double b, double abs_tol,
                 const std::vector<double>& breakpoints = {}, int max_segments = 4000) {
    struct Seg {
        double a, b, value, error;
        bool operator<(const Seg& o) const { return error < o.error; }
    };
    std::priority_queue<Seg> heap;
    double total = 0.0, total_err = 0.0;

    std::vector<double> pts{a};
    for (double p : breakpoints) {
        if (p > a && p < b) pts.push_back(p);
    }
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());

    int segments = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] <= pts[i]) continue;
        double e;
        const double v = kronrod15(f, pts[i], pts[i + 1], e);
        heap.push({pts[i], pts[i + 1], v, e});
        total += v;
        total_err += e;
        ++segments;
    }

    while (total_err > abs_tol && segments < max_segments) {
        const Seg worst = heap.top();
        heap.pop();
        total -= worst.value;
        total_err -= worst.error;
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {  // interval exhausted at double precision
            total += worst.value;
            total_err += worst.error;
            break;
        }
        for (auto [lo, hi] : {std::pair{worst.a, mid}, std::pair{mid, worst.b}}) {
            double e;
            const double v = kronrod15(f, lo, hi, e);
            heap.push({lo, hi, v, e});
            total += v;
            total_err += e;
        }
        ++segments;
    }
    return {total, total_err, total_err <= abs_tol};
}

// Antiderivative G(t) = int_0^t f, t in [0, upper]. The partition is refined
// until every segment's Kronrod error is below its share of tol; a query then
// costs one prefix lookup plus a single 15-point rule on the partial segment,
// so an outer adaptive integral can evaluate G at arbitrary nodes without
// nested adaptive passes.
class Antiderivative {
public:
    template <class F>
    Antiderivative(const F& f, double upper, double tol) : f_(f), upper_(upper) {
        build(0.0, upper, tol / std::max(upper, 1e-300), 0);
        breaks_.push_back(upper);
        prefix_.resize(breaks_.size(), 0.0);
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
            prefix_[i] = acc;
            acc += seg_values_[i];
        }
        prefix_.back() = acc;
    }

    double operator()(double t) const {
        if (t <= 0.0) return 0.0;
        if (t >= upper_) return prefix_.back();
        const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
        const std::size_t k = static_cast<std::size_t>(it - breaks_.begin()) - 1;
        double e;
        return prefix_[k] + kronrod15(f_, breaks_[k], t, e);
    }

    double total() const { return prefix_.back(); }

private:
    void build(double a, double b, double tol_per_unit, int depth) {
        double e;
        const double v = kronrod15(f_, a, b, e);
        if ((e <= tol_per_unit * (b - a) && depth >= 2) || depth >= 40) {
            breaks_.push_back(a);
            seg_values_.push_back(v);
            return;
        }
        const double mid = 0.5 * (a + b);
        build(a, mid, tol_per_unit, depth + 1);
        build(mid, b, tol_per_unit, depth + 1);
    }

    std::function<double(double)> f_;
    double upper_;
    std::vector<double> breaks_;
    std::vector<double> seg_values_;
    std::vector<double> prefix_;
};

}  // namespace ordsel::quad
