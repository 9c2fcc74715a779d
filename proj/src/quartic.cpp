#include "ordsel/quartic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace ordsel {

namespace {

double eval_poly(const std::vector<double>& monic_tail, double x) {
    // p(x) = x^d + monic_tail[0] x^(d-1) + ... + monic_tail[d-1]
    double acc = 1.0;
    for (double c : monic_tail) acc = acc * x + c;
    return acc;
}

double eval_poly_deriv(const std::vector<double>& monic_tail, double x) {
    const int d = static_cast<int>(monic_tail.size());
    double acc = d;
    for (int i = 0; i < d - 1; ++i) acc = acc * x + (d - 1 - i) * monic_tail[static_cast<std::size_t>(i)];
    return acc;
}

}  // namespace

std::optional<double> greatest_real_root(const std::array<double, 5>& coeffs) {
    double scale = 0.0;
    for (double c : coeffs) scale = std::max(scale, std::fabs(c));
    if (scale == 0.0) throw std::invalid_argument("greatest_real_root: all coefficients are zero");

    std::size_t lead = 0;
    while (lead < 4 && std::fabs(coeffs[lead]) <= 1e-14 * scale) ++lead;
    const int degree = static_cast<int>(4 - lead);
    if (degree == 0) return std::nullopt;  // nonzero constant: no roots

    std::vector<double> tail(static_cast<std::size_t>(degree));
    for (int i = 0; i < degree; ++i) {
        tail[static_cast<std::size_t>(i)] = coeffs[lead + 1 + static_cast<std::size_t>(i)] / coeffs[lead];
    }

    if (degree == 1) return -tail[0];

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    for (int i = 0; i < degree; ++i) companion(0, i) = -tail[static_cast<std::size_t>(i)];
    for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;

    const Eigen::EigenSolver<Eigen::MatrixXd> solver(companion);
    std::optional<double> best;
    for (int i = 0; i < degree; ++i) {
        const auto ev = solver.eigenvalues()(i);
        if (std::fabs(ev.imag()) > 1e-9 * (1.0 + std::fabs(ev.real()))) continue;
        double x = ev.real();
        for (int it = 0; it < 2; ++it) {
            const double d = eval_poly_deriv(tail, x);
            if (d == 0.0) break;
            x -= eval_poly(tail, x) / d;
        }
        if (!best || x > *best) best = x;
    }
    return best;
}

}  // namespace ordsel
