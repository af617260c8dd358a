#pragma once

#include <cstddef>
#include <vector>

#include "riesz_star/params.hpp"

namespace riesz {

// Attractive Riesz kernel W(x) = |x|^{2s-1} / (2s-1)  (negative, vanishing at
// infinity for s < 1/2). Throws std::domain_error at x = 0.
double riesz_w(double x, const RieszParams& p);

// W'(x) = sign(x) |x|^{2s-2}. Throws std::domain_error at x = 0.
double riesz_w_prime(double x, const RieszParams& p);

// W''(x) = (2s-2) |x|^{2s-3}, even and strictly negative for s < 1.
// Throws std::domain_error at x = 0.
double riesz_w_second(double x, const RieszParams& p);

// Closed form of the two-sided exterior integral of W' against a unit-slope
// parametrisation:  int_{|xi| >= b} W'(c - xi) dxi = W(b - c) - W(b + c),
// valid for |c| < b. Used for the tails where the zero-extended density
// vanishes and the flow map is affine.
double w_prime_exterior_integral(double c, double b, const RieszParams& p);

// Discrete principal-value quadrature of the subtracted potential gradient
//   dPsi(x_q) = int W'(x_q - y) (rho~(y) - rho(x_q)) dy,
// where rho~ is the zero extension of a density sampled on the uniform grid
// x_j = x0 + j h, j = 0..rho.size()-1. The self-term y = x_q is excluded
// (symmetric exclusion), interior nodes carry weight h, and the exterior
// tails (rho~ = 0) are evaluated in closed form from the support edges.
// Summation is a fixed left-to-right reduction.
// Errors: query index out of range; any rho value below -neg_tol.
double potential_gradient(const std::vector<double>& rho, double x0, double h,
                          std::size_t query, const RieszParams& p,
                          double neg_tol = 1e-12);

// Euler Beta function via std::lgamma. Requires a, b > 0.
double beta_fn(double a, double b);

} // namespace riesz
