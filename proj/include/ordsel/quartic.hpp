#pragma once

#include <array>
#include <optional>

namespace ordsel {

// Greatest real root of a4 x^4 + a3 x^3 + a2 x^2 + a1 x + a0.
// Leading near-zero coefficients fall through to the cubic / quadratic /
// linear cases. Roots come from companion-matrix eigenvalues and are then
// Newton-polished; an eigenvalue counts as real when its imaginary part is
// below 1e-9 * (1 + |real part|). Returns nullopt when no real root exists.
// Throws std::invalid_argument if all coefficients are zero.
std::optional<double> greatest_real_root(const std::array<double, 5>& coeffs);

}  // namespace ordsel
