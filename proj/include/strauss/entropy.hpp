#pragma once

namespace strauss {

/// Binary (coin-flip) entropy H(u) = -(u ln u + (1-u) ln(1-u)) and its first
/// two derivatives.
///
/// order 0: H(u), defined on [0,1] with H(0) = H(1) = 0 (continuous extension).
/// order 1: H'(u) = ln((1-u)/u), interior points only.
/// order 2: H''(u) = -1/(u(1-u)), interior points only.
///
/// Throws std::domain_error for u outside [0,1], for derivatives requested at
/// the endpoints, and std::invalid_argument for an unknown order.
double h_entropy(double u, int order = 0);

namespace detail {

/// Tolerance for clamping values that graze the [0,1] boundary.
inline constexpr double kBoundaryTol = 1e-12;

/// H(u) for u already known to lie in [0,1]; endpoints give 0.
double h_unchecked(double u);

/// H(u) with the boundary-clamp rule of the graphon types: values within
/// kBoundaryTol of [0,1] are clamped, anything farther out yields NaN.
/// No exceptions; intended for optimizer hot paths.
double h_block(double u);

} // namespace detail
} // namespace strauss
