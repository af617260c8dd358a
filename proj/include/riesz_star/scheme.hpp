#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "riesz_star/steady.hpp"

namespace riesz {

// Lagrangian flow state on the half grid k = 0..N (x_k = k h). Negative
// indices exist only through the odd extension eta_{-k} = -eta_k,
// v_{-k} = -v_k; the closures eta_0 = 0, eta_N = eta_{N-1} + h, v_N = v_{N-1}
// are re-imposed after every update.
struct GridState {
    double t = 0.0;
    std::vector<double> eta;  // size N+1
    std::vector<double> v;    // size N+1

    int n() const { return static_cast<int>(eta.size()) - 1; }
    double stretch(int k, double h) const {  // forward (eta_{k+1}-eta_k)/h
        return (eta[static_cast<std::size_t>(k) + 1] -
                eta[static_cast<std::size_t>(k)]) / h;
    }
};

struct SchemeConfig {
    int n = 400;                    // must match the profile half-grid count
    double dt = 0.0;                // 0 = policy default
    bool adaptive = false;          // halve dt on large velocity increments
    double safety = 0.5;            // explicit-step stability safety factor
    std::string integrator = "imex_be";  // imex_be | explicit_rk4
    double t_end = 50.0;
    int snapshot_every = 0;         // steps between snapshots; 0 = auto
    double eps0 = 0.01;

    void validate() const;
};

// Raised when the stretch guard [1/4, 4] trips or a state stops being
// strictly monotone; carries the failure location.
struct GuardError : std::runtime_error {
    double t;
    int k;
    double stretch;
    GuardError(const std::string& msg, double t_, int k_, double stretch_)
        : std::runtime_error(msg), t(t_), k(k_), stretch(stretch_) {}
};

// State-independent pieces of the right side, assembled once per run:
// theta[k+N] approximates rho_bar^gamma(x_k) through the double sum over the
// steady profile, and phi_static[k+N] = -rho_bar_k * (lattice-subtracted
// kernel gradient), the part of Phi that never changes.
struct SchemeCache {
    std::vector<double> theta;       // size 2N+1, k = -N..N
    std::vector<double> phi_static;  // size 2N+1
};

std::vector<double> theta_weights(const SteadyProfile& profile);
SchemeCache make_cache(const SteadyProfile& profile);

// Full nonlocal forcing Phi_k for k = -N..N (size 2N+1). The flow-dependent
// sum runs over the whole lattice: grid indices directly, the affine
// extension beyond +-N in closed form through the kernel antiderivative.
std::vector<double> phi_discrete(const GridState& state,
                                 const SteadyProfile& profile,
                                 const SchemeCache& cache);

struct RhsResult {
    std::vector<double> deta;  // = v (size N+1)
    std::vector<double> dv;    // size N+1; dv[0] = 0, dv[N] = dv[N-1]
};

RhsResult rhs(const GridState& state, const SteadyProfile& profile,
              const SchemeCache& cache);

GridState step(const GridState& state, const SteadyProfile& profile,
               const SchemeCache& cache, double dt, const SchemeConfig& config);

GridState initial_data(const SteadyProfile& profile, double eps0);
GridState initial_data(const SteadyProfile& profile,
                       const std::vector<double>& w0,
                       const std::vector<double>& w1);

// Throws GuardError / ConfigError when the state violates the closures,
// strict monotonicity, or the stretch guard.
void validate_state(const GridState& state, const SteadyProfile& profile);

struct Trajectory {
    std::vector<GridState> snapshots;
    std::string status;      // completed | guard_tripped | step_budget_exhausted
    double guard_time = -1.0;  // < 0 when the guard never fired
    double dt_used = 0.0;      // final dt (adaptive runs may have halved it)
    long steps = 0;
};

Trajectory simulate(const SchemeConfig& config, const SteadyProfile& profile);

struct EulerianView {
    std::vector<double> xi;   // cell left edges eta_k, k = -N..N
    std::vector<double> rho;  // cell densities; boundary cells are 0
    std::vector<double> u;    // node velocities
    double a = 0.0;           // free boundary position eta_N
};

EulerianView eulerian_reconstruct(const GridState& state,
                                  const SteadyProfile& profile);

// One row per (snapshot, node k = 0..N): t,k,x_k,eta_k,v_k,stretch_k,
// rho_eulerian_k. stretch is forward (backward at k = N, which equals 1 by
// the closure); rho_eulerian at k = N is the vacuum boundary cell, 0.
void write_trajectory_csv(const std::filesystem::path& path,
                          const Trajectory& trajectory,
                          const SteadyProfile& profile);

}  // namespace riesz
