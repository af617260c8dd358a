#pragma once

#include <functional>

namespace riesz {

// Integrand for tanh-sinh quadrature. Receives the abscissa x together with
// the distances to both interval endpoints (x - a and b - x) evaluated in
// exact-rounding form, so endpoint-singular factors like (b - x)^(2s-1) can be
// computed without catastrophic cancellation near the ends.
using SingularIntegrand = std::function<double(double x, double dist_a, double dist_b)>;

struct TanhSinhResult {
    double value = 0.0;
    double error_estimate = 0.0; // |last level - previous level|
    int levels = 0;
};

// Double-exponential (tanh-sinh) quadrature on (a, b). Handles integrable
// endpoint singularities (powers > -1). rel_tol is the level-to-level
// convergence target.
TanhSinhResult tanh_sinh(const SingularIntegrand& f, double a, double b,
                         double rel_tol = 1e-12, int max_levels = 11);

// Convenience overload for integrands that do not need the endpoint distances.
TanhSinhResult tanh_sinh(const std::function<double(double)>& f, double a, double b,
                         double rel_tol = 1e-12, int max_levels = 11);

} // namespace riesz
