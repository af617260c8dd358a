#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "riesz_star/params.hpp"

namespace riesz {

// Compactly supported equilibrium density on a uniform symmetric grid.
// Nodes are x_k = k*h for k = -n_half..n_half, stored left to right in `rho`
// (index i maps to k = i - n_half).  The density vanishes exactly at the two
// edge nodes and is even by construction.
struct SteadyProfile {
  RieszParams params;
  double radius = 0.0;  // support half-width, = n_half * h
  double h = 0.0;
  int n_half = 0;
  std::vector<double> rho;  // 2*n_half + 1 values
  double mass = 0.0;
  double fixed_point_residual = 0.0;  // sup |rho^g - P[rho]| / sup rho^g
  int iterations = 0;

  int n_nodes() const { return 2 * n_half + 1; }
  double x_of(int k) const { return h * k; }  // signed node index
  double rho_of(int k) const { return rho[static_cast<std::size_t>(k + n_half)]; }
  double sup_rho() const;
  std::vector<double> rho_gamma() const;  // pow(rho, gamma) per node
};

class SteadyError : public std::runtime_error {
 public:
  SteadyError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

// Subtracted-kernel force S(x_q) = pv integral of W'(x_q - y)(rho(y) - rho(x_q))
// at every node of a symmetric grid, sharing one precomputed lattice table.
// Matches kernel::potential_gradient (edge-node tail convention) up to round-off
// but runs in O(n) per query with no pow calls in the inner loop.
std::vector<double> subtracted_gradient_all(const std::vector<double>& rho_full,
                                            double h, const RieszParams& p);

// Fixed-point map P[rho](x_k) = integral_{x_k}^{R} rho(y) S(y) dy via suffix
// trapezoid sums (right-to-left, deterministic order).
std::vector<double> fixed_point_map(const std::vector<double>& rho_full, double h,
                                    const RieszParams& p);

// Damped Picard iteration on the canonical support [-1, 1] followed by the
// exact mass-1 rescale.  n_grid is the interval count per half-domain (grid
// spacing 1/n_grid), relax in (0, 1].  Throws SteadyError on non-convergence
// carrying the residual history; throws ConfigError on bad parameters.
SteadyProfile solve_steady(const RieszParams& p, int n_grid, double tol = 1e-6,
                           double relax = 0.5, int max_iter = 20000);

struct ResidualReport {
  double sup_abs = 0.0;    // sup_k |D_h(rho^g)_k + rho_k * S_k| over interior nodes
  double scale = 0.0;      // sup_k |D_h(rho^g)_k|  (pressure-gradient magnitude)
  double relative = 0.0;   // sup_abs / scale
  double weighted_relative = 0.0;  // same with weight rho^{-1/2} on both sides
};

// Distributional residual of d/dx(rho^gamma) + rho * dPsi/dx at interior nodes,
// with the force from kernel::potential_gradient and centered differences for
// the pressure gradient.  Independent of the solver's internal quadrature.
ResidualReport steady_residual_report(const SteadyProfile& profile);
double steady_residual(const SteadyProfile& profile);  // .relative shorthand

// Exact scaling-symmetry rescale: rho_l(x) = l^{2s/(2-gamma)} rho(l x) with l
// chosen so the new mass equals target_mass.  Grid maps node-for-node.
SteadyProfile rescale_profile(const SteadyProfile& profile, double target_mass);

// Same symmetry, solved for a target support half-width instead.
SteadyProfile rescale_to_radius(const SteadyProfile& profile, double target_radius);

// Discrete free energy F[rho] = sum h [ rho^g/(g-1) + rho (W*rho)/2 ], with the
// singular self-cell of W*rho integrated in closed form.
double free_energy(const std::vector<double>& rho_full, double h, const RieszParams& p);
double free_energy(const SteadyProfile& profile);

struct PinchReport {
  double c_min = 0.0;  // min over window of rho^power / (radius - |x|)
  double c_max = 0.0;  // max over the same window
  int n_nodes = 0;
};

// Ratio bounds of rho^power against the linear distance to the boundary over
// the outer `window_fraction` of the support, skipping the outermost
// `exclude_fraction` where the solver tolerance floor dominates.
PinchReport pinch_constants(const SteadyProfile& profile, double power,
                            double window_fraction, double exclude_fraction);

// Least-squares slope of rho^{gamma-1} against x over the right-boundary fit
// window (distance between lo_fraction and hi_fraction of the radius from the
// edge).  Finite and strictly negative for a physical-vacuum profile.
double boundary_slope(const SteadyProfile& profile, double lo_fraction = 0.02,
                      double hi_fraction = 0.10);

} // namespace riesz
