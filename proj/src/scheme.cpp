#include "riesz_star/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>

#include "riesz_star/io.hpp"
#include "riesz_star/kernel.hpp"
#include "riesz_star/parallel.hpp"

namespace riesz {

namespace {

constexpr double kGuardLo = 0.25;
constexpr double kGuardHi = 4.0;

std::size_t idx(int k, int n) { return static_cast<std::size_t>(k + n); }

// Materialize the full grid k = -N..N from the half-grid state via the odd
// extension. Index i corresponds to k = i - N.
void materialize_full(const GridState& state, std::vector<double>& eta_f,
                      std::vector<double>& v_f) {
    const int n = state.n();
    const std::size_t m = static_cast<std::size_t>(2 * n + 1);
    eta_f.assign(m, 0.0);
    v_f.assign(m, 0.0);
    for (int k = 0; k <= n; ++k) {
        eta_f[idx(k, n)] = state.eta[static_cast<std::size_t>(k)];
        eta_f[idx(-k, n)] = -state.eta[static_cast<std::size_t>(k)];
        v_f[idx(k, n)] = state.v[static_cast<std::size_t>(k)];
        v_f[idx(-k, n)] = -state.v[static_cast<std::size_t>(k)];
    }
}

void check_same_grid(const GridState& state, const SteadyProfile& profile) {
    if (state.n() != profile.n_half)
        throw ConfigError("scheme: state and profile grids differ");
    if (state.v.size() != state.eta.size())
        throw ConfigError("scheme: eta/v length mismatch");
}

// Strict monotonicity on the half grid implies it on the odd extension.
void check_monotone(const GridState& state, const SteadyProfile& profile) {
    const int n = state.n();
    for (int k = 0; k < n; ++k) {
        const double d = state.eta[static_cast<std::size_t>(k) + 1] -
                         state.eta[static_cast<std::size_t>(k)];
        if (!(d > 0.0))
            throw GuardError("scheme: flow map lost monotonicity", state.t, k,
                             d / profile.h);
    }
}

void check_guard_band(const GridState& state, const SteadyProfile& profile) {
    const int n = state.n();
    for (int k = 0; k < n; ++k) {
        const double sigma = state.stretch(k, profile.h);
        if (!(sigma >= kGuardLo && sigma <= kGuardHi))
            throw GuardError("scheme: stretch left the guard band [1/4, 4]",
                             state.t, k, sigma);
    }
}

// Flow-dependent part of Phi for full-grid indices in [i_lo, i_hi]:
//   (h rho_k / (eta_{k+1}-eta_k)) * sum_{j != k} h W'(eta_k - eta~_j)
//                                    (rho_j sigma_k - rho_k sigma~_j),
// with the lattice beyond +-N handled in closed form (the extension is
// affine with unit stretch there, and rho vanishes). Writes into out.
void phi_flow_fill(const GridState& state, const SteadyProfile& profile,
                   int i_lo, int i_hi, std::vector<double>& out) {
    const int n = state.n();
    const std::size_t m = static_cast<std::size_t>(2 * n + 1);
    const double h = profile.h;
    const double e = 2.0 * profile.params.s - 2.0;
    const RieszParams p = profile.params;

    std::vector<double> eta_f, v_f;
    materialize_full(state, eta_f, v_f);
    const double eta_edge = eta_f[m - 1];

    // sigma~_j: forward stretch on the grid, exactly 1 at j = N (the affine
    // extension side; the closure makes the last grid cell unit too).
    std::vector<double> sigma_f(m, 1.0);
    for (std::size_t j = 0; j + 1 < m; ++j)
        sigma_f[j] = (eta_f[j + 1] - eta_f[j]) / h;

    parallel_for(static_cast<std::size_t>(i_lo), static_cast<std::size_t>(i_hi) + 1,
                 [&](std::size_t i) {
        const double rk = profile.rho[i];
        if (rk == 0.0) {
            out[i] = 0.0;
            return;
        }
        const double ek = eta_f[i];
        const double sigma_k = sigma_f[i];
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i) continue;
            const double z = ek - eta_f[j];
            const double w = z > 0.0 ? std::pow(z, e) : -std::pow(-z, e);
            acc += w * (profile.rho[j] * sigma_k - rk * sigma_f[j]);
        }
        acc *= h;
        // Exterior lattice (|eta~_j| beyond the boundary): rho~ = 0 and unit
        // stretch leave -rho_k times the closed-form tail integral.
        acc -= rk * w_prime_exterior_integral(ek, eta_edge, p);
        out[i] += (h * rk / (eta_f[i + 1] - eta_f[i])) * acc;
    });
}

// Pressure difference term of the momentum equation at interior k.
double pressure_term(const GridState& state, const SteadyProfile& profile,
                     const SchemeCache& cache, int k) {
    const int n = state.n();
    const double h = profile.h;
    const double g = profile.params.gamma;
    const double d_fwd = state.eta[static_cast<std::size_t>(k) + 1] -
                         state.eta[static_cast<std::size_t>(k)];
    const double d_bwd = state.eta[static_cast<std::size_t>(k)] -
                         state.eta[static_cast<std::size_t>(k) - 1];
    const double fwd = cache.theta[idx(k + 1, n)] * (std::pow(h / d_fwd, g) - 1.0);
    const double bwd = cache.theta[idx(k, n)] * (std::pow(h / d_bwd, g) - 1.0);
    return (fwd - bwd) / h;
}

double viscous_term(const GridState& state, const SteadyProfile& profile, int k) {
    const double h = profile.h;
    const std::size_t q = static_cast<std::size_t>(k);
    const double d_fwd = state.eta[q + 1] - state.eta[q];
    const double d_bwd = state.eta[q] - state.eta[q - 1];
    return ((state.v[q + 1] - state.v[q]) / d_fwd -
            (state.v[q] - state.v[q - 1]) / d_bwd) / h;
}

void impose_closures(GridState& state, double h) {
    const std::size_t n = state.eta.size() - 1;
    state.eta[0] = 0.0;
    state.v[0] = 0.0;
    state.eta[n] = state.eta[n - 1] + h;
    state.v[n] = state.v[n - 1];
}

GridState step_imex_be(const GridState& state, const SteadyProfile& profile,
                       const SchemeCache& cache, double dt) {
    const int n = state.n();
    const double h = profile.h;
    check_monotone(state, profile);
    check_guard_band(state, profile);

    std::vector<double> phi(static_cast<std::size_t>(2 * n + 1), 0.0);
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = cache.phi_static[i];
    phi_flow_fill(state, profile, n + 1, 2 * n - 1, phi);

    // Viscous part implicit (linear in v_new, tridiagonal); pressure and Phi
    // explicit. Unknowns v_new_k, k = 1..N-1; v_new_0 = 0 and v_new_N =
    // v_new_{N-1} close the system.
    const int rows = n - 1;
    std::vector<double> sub(static_cast<std::size_t>(rows), 0.0);
    std::vector<double> diag(static_cast<std::size_t>(rows), 0.0);
    std::vector<double> sup(static_cast<std::size_t>(rows), 0.0);
    std::vector<double> rhs_col(static_cast<std::size_t>(rows), 0.0);

    for (int k = 1; k <= n - 1; ++k) {
        const std::size_t q = static_cast<std::size_t>(k);
        const std::size_t r = static_cast<std::size_t>(k - 1);
        const double rho_k = profile.rho[idx(k, n)];
        const double d_fwd = state.eta[q + 1] - state.eta[q];
        const double d_bwd = state.eta[q] - state.eta[q - 1];
        const double a = 1.0 / (h * d_bwd);
        const double b = 1.0 / (h * d_fwd);
        double dg = rho_k / dt + a + b;
        sub[r] = -a;
        sup[r] = -b;
        if (k == n - 1) {
            // v_new_N = v_new_{N-1}: the forward viscous difference vanishes.
            dg = rho_k / dt + a;
            sup[r] = 0.0;
        }
        diag[r] = dg;
        rhs_col[r] = rho_k * state.v[q] / dt - pressure_term(state, profile, cache, k) -
                     phi[idx(k, n)];
    }

    // Thomas elimination; the diagonal dominates by rho_k/dt > 0.
    for (int r = 1; r < rows; ++r) {
        const std::size_t q = static_cast<std::size_t>(r);
        const double w = sub[q] / diag[q - 1];
        diag[q] -= w * sup[q - 1];
        rhs_col[q] -= w * rhs_col[q - 1];
    }
    std::vector<double> v_new(static_cast<std::size_t>(n + 1), 0.0);
    if (rows > 0) {
        v_new[static_cast<std::size_t>(n - 1)] =
            rhs_col[static_cast<std::size_t>(rows - 1)] /
            diag[static_cast<std::size_t>(rows - 1)];
        for (int r = rows - 2; r >= 0; --r) {
            const std::size_t q = static_cast<std::size_t>(r);
            v_new[q + 1] = (rhs_col[q] - sup[q] * v_new[q + 2]) / diag[q];
        }
    }
    v_new[0] = 0.0;
    v_new[static_cast<std::size_t>(n)] = v_new[static_cast<std::size_t>(n - 1)];

    GridState next;
    next.t = state.t + dt;
    next.v = v_new;
    next.eta = state.eta;
    for (int k = 0; k <= n; ++k)
        next.eta[static_cast<std::size_t>(k)] += dt * v_new[static_cast<std::size_t>(k)];
    impose_closures(next, h);
    return next;
}

GridState step_rk4(const GridState& state, const SteadyProfile& profile,
                   const SchemeCache& cache, double dt) {
    const double h = profile.h;
    const auto stage = [&](const GridState& base, const RhsResult& slope,
                           double c) {
        GridState s;
        s.t = base.t + c;
        s.eta = base.eta;
        s.v = base.v;
        for (std::size_t q = 0; q < s.eta.size(); ++q) {
            s.eta[q] += c * slope.deta[q];
            s.v[q] += c * slope.dv[q];
        }
        impose_closures(s, h);
        return s;
    };

    const RhsResult k1 = rhs(state, profile, cache);
    const GridState s2 = stage(state, k1, 0.5 * dt);
    const RhsResult k2 = rhs(s2, profile, cache);
    const GridState s3 = stage(state, k2, 0.5 * dt);
    const RhsResult k3 = rhs(s3, profile, cache);
    const GridState s4 = stage(state, k3, dt);
    const RhsResult k4 = rhs(s4, profile, cache);

    GridState next;
    next.t = state.t + dt;
    next.eta = state.eta;
    next.v = state.v;
    for (std::size_t q = 0; q < next.eta.size(); ++q) {
        next.eta[q] += dt / 6.0 *
                       (k1.deta[q] + 2.0 * k2.deta[q] + 2.0 * k3.deta[q] + k4.deta[q]);
        next.v[q] += dt / 6.0 *
                     (k1.dv[q] + 2.0 * k2.dv[q] + 2.0 * k3.dv[q] + k4.dv[q]);
    }
    impose_closures(next, h);
    return next;
}

}  // namespace

void SchemeConfig::validate() const {
    if (n < 32) throw ConfigError("scheme config: n must be at least 32");
    if (!(t_end > 0.0)) throw ConfigError("scheme config: t_end must be positive");
    if (dt < 0.0) throw ConfigError("scheme config: dt must be nonnegative");
    if (integrator != "imex_be" && integrator != "explicit_rk4")
        throw ConfigError("scheme config: integrator must be imex_be or explicit_rk4");
    if (snapshot_every < 0)
        throw ConfigError("scheme config: snapshot_every must be nonnegative");
    if (!(eps0 >= 0.0 && eps0 <= 0.05))
        throw ConfigError("scheme config: eps0 must lie in [0, 0.05]");
    if (!(safety > 0.0 && safety <= 1.0))
        throw ConfigError("scheme config: safety must lie in (0, 1]");
}

std::vector<double> theta_weights(const SteadyProfile& profile) {
    const int n = profile.n_half;
    const std::size_t m = static_cast<std::size_t>(2 * n + 1);
    const std::vector<double> grad =
        subtracted_gradient_all(profile.rho, profile.h, profile.params);

    // theta_k = sum_{i >= k+1} rho_i * grad_i * h, accumulated right to left
    // so theta_N = 0 exactly.
    std::vector<double> theta(m, 0.0);
    for (std::size_t i = m - 1; i-- > 0;)
        theta[i] = theta[i + 1] + profile.rho[i + 1] * grad[i + 1] * profile.h;
    return theta;
}

SchemeCache make_cache(const SteadyProfile& profile) {
    SchemeCache cache;
    const std::vector<double> grad =
        subtracted_gradient_all(profile.rho, profile.h, profile.params);
    const std::size_t m = profile.rho.size();
    cache.phi_static.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        cache.phi_static[i] = -profile.rho[i] * grad[i];
    cache.theta.assign(m, 0.0);
    for (std::size_t i = m - 1; i-- > 0;)
        cache.theta[i] = cache.theta[i + 1] + profile.rho[i + 1] * grad[i + 1] * profile.h;
    return cache;
}

std::vector<double> phi_discrete(const GridState& state,
                                 const SteadyProfile& profile,
                                 const SchemeCache& cache) {
    check_same_grid(state, profile);
    check_monotone(state, profile);
    const int n = state.n();
    std::vector<double> phi(cache.phi_static);
    phi_flow_fill(state, profile, 0, 2 * n, phi);
    return phi;
}

RhsResult rhs(const GridState& state, const SteadyProfile& profile,
              const SchemeCache& cache) {
    check_same_grid(state, profile);
    check_monotone(state, profile);
    check_guard_band(state, profile);
    const int n = state.n();

    std::vector<double> phi(static_cast<std::size_t>(2 * n + 1), 0.0);
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = cache.phi_static[i];
    if (n >= 2) phi_flow_fill(state, profile, n + 1, 2 * n - 1, phi);

    RhsResult out;
    out.deta = state.v;
    out.deta[0] = 0.0;
    out.dv.assign(static_cast<std::size_t>(n + 1), 0.0);
    for (int k = 1; k <= n - 1; ++k) {
        const double rho_k = profile.rho[idx(k, n)];
        const double force = viscous_term(state, profile, k) -
                             pressure_term(state, profile, cache, k) -
                             phi[idx(k, n)];
        out.dv[static_cast<std::size_t>(k)] = force / rho_k;
    }
    out.dv[static_cast<std::size_t>(n)] = out.dv[static_cast<std::size_t>(n - 1)];
    return out;
}

GridState step(const GridState& state, const SteadyProfile& profile,
               const SchemeCache& cache, double dt, const SchemeConfig& config) {
    if (!(dt > 0.0)) throw ConfigError("step: dt must be positive");
    check_same_grid(state, profile);
    if (config.integrator == "explicit_rk4")
        return step_rk4(state, profile, cache, dt);
    return step_imex_be(state, profile, cache, dt);
}

GridState initial_data(const SteadyProfile& profile, double eps0) {
    if (!(eps0 >= 0.0 && eps0 <= 0.05))
        throw ConfigError("initial_data: eps0 must lie in [0, 0.05]");
    const int n = profile.n_half;
    const double r = profile.radius;
    GridState state;
    state.t = 0.0;
    state.eta.assign(static_cast<std::size_t>(n + 1), 0.0);
    state.v.assign(static_cast<std::size_t>(n + 1), 0.0);
    for (int k = 0; k < n; ++k) {
        const double x = profile.x_of(k);
        const double u = x / r;
        const double bump = 1.0 - u * u;
        state.eta[static_cast<std::size_t>(k)] = x + eps0 * x * bump * bump;
    }
    impose_closures(state, profile.h);
    return state;
}

GridState initial_data(const SteadyProfile& profile, const std::vector<double>& w0,
                       const std::vector<double>& w1) {
    const int n = profile.n_half;
    const std::size_t len = static_cast<std::size_t>(n + 1);
    if (w0.size() != len || w1.size() != len)
        throw ConfigError("initial_data: displacement/velocity length must be N+1");
    if (w0[0] != 0.0 || w1[0] != 0.0)
        throw ConfigError("initial_data: odd data must vanish at the center");

    double sup_w0 = 0.0;
    for (double w : w0) sup_w0 = std::max(sup_w0, std::fabs(w));
    const double r = profile.radius;
    const double h = profile.h;
    // Compatibility: the displacement slope must vanish at the boundary; on
    // the grid the one-sided difference of compatible data is O(h * w'').
    const double edge_slope = (w0[len - 1] - w0[len - 2]) / h;
    if (std::fabs(edge_slope) > 32.0 * h * sup_w0 / (r * r) + 1e-12)
        throw ConfigError("initial_data: displacement slope at the boundary "
                          "violates the compatibility condition");
    for (std::size_t k = 1; k < len; ++k) {
        const double slope = (w0[k] - w0[k - 1]) / h;
        if (std::fabs(slope) > 0.5)
            throw ConfigError("initial_data: displacement gradient too large "
                              "(flow map would leave the monotone regime)");
    }

    GridState state;
    state.t = 0.0;
    state.eta.assign(len, 0.0);
    state.v = w1;
    for (int k = 0; k <= n; ++k)
        state.eta[static_cast<std::size_t>(k)] =
            profile.x_of(k) + w0[static_cast<std::size_t>(k)];
    impose_closures(state, h);
    check_monotone(state, profile);
    return state;
}

void validate_state(const GridState& state, const SteadyProfile& profile) {
    check_same_grid(state, profile);
    const std::size_t n = state.eta.size() - 1;
    if (state.eta[0] != 0.0)
        throw GuardError("state: eta_0 must be 0", state.t, 0, 0.0);
    if (state.v[0] != 0.0)
        throw GuardError("state: v_0 must be 0", state.t, 0, 0.0);
    const double edge = state.eta[n] - state.eta[n - 1];
    if (std::fabs(edge - profile.h) > 1e-12 * std::max(1.0, std::fabs(state.eta[n])))
        throw GuardError("state: boundary cell must have unit stretch", state.t,
                         static_cast<int>(n) - 1, edge / profile.h);
    double sup_v = 0.0;
    for (double w : state.v) sup_v = std::max(sup_v, std::fabs(w));
    if (std::fabs(state.v[n] - state.v[n - 1]) > 1e-12 * std::max(1.0, sup_v))
        throw GuardError("state: boundary velocity closure violated", state.t,
                         static_cast<int>(n), 0.0);
    check_monotone(state, profile);
}

Trajectory simulate(const SchemeConfig& config, const SteadyProfile& profile) {
    config.validate();
    profile.params.validate();
    if (config.n != profile.n_half)
        throw ConfigError("simulate: config n must match the profile grid");

    const double h = profile.h;
    double dt = config.dt;
    if (dt <= 0.0) {
        if (config.integrator == "explicit_rk4") {
            double rho_min = std::numeric_limits<double>::infinity();
            for (int k = 1; k <= profile.n_half - 1; ++k)
                rho_min = std::min(rho_min, profile.rho[idx(k, profile.n_half)]);
            dt = config.safety * h * h * rho_min;
        } else {
            dt = 0.25 * h;
        }
    }
    const long max_steps = 2000000;
    if (!(dt > 0.0) || config.t_end / dt > static_cast<double>(max_steps))
        throw ConfigError("simulate: dt too small to reach t_end within the "
                          "step budget; choose dt explicitly");

    const SchemeCache cache = make_cache(profile);
    GridState state = initial_data(profile, config.eps0);

    long cadence = config.snapshot_every;
    if (cadence <= 0)
        cadence = std::max(1L, static_cast<long>(std::llround(config.t_end / dt / 200.0)));

    Trajectory traj;
    traj.snapshots.push_back(state);
    const double dt_floor = 1e-12 * h;

    long steps = 0;
    while (state.t < config.t_end * (1.0 - 1e-12)) {
        const double dt_step = std::min(dt, config.t_end - state.t);
        GridState next;
        try {
            next = step(state, profile, cache, dt_step, config);
        } catch (const GuardError& g) {
            if (config.adaptive && dt > dt_floor) {
                dt *= 0.5;
                continue;
            }
            traj.status = "guard_tripped";
            traj.guard_time = g.t;
            traj.dt_used = dt;
            traj.steps = steps;
            return traj;
        }

        if (config.adaptive) {
            double sup_v = 0.0, incr = 0.0;
            for (std::size_t q = 0; q < state.v.size(); ++q) {
                sup_v = std::max(sup_v, std::fabs(state.v[q]));
                incr = std::max(incr, std::fabs(next.v[q] - state.v[q]));
            }
            if (incr > 0.1 * sup_v + 1e-8 && dt > dt_floor) {
                dt *= 0.5;
                continue;
            }
        }

        state = std::move(next);
        ++steps;
        if (steps % cadence == 0) traj.snapshots.push_back(state);
        if (steps >= max_steps && state.t < config.t_end * (1.0 - 1e-12)) {
            traj.status = "step_budget_exhausted";
            traj.dt_used = dt;
            traj.steps = steps;
            return traj;
        }
    }

    if (traj.snapshots.back().t != state.t) traj.snapshots.push_back(state);
    traj.status = "completed";
    traj.dt_used = dt;
    traj.steps = steps;
    return traj;
}

EulerianView eulerian_reconstruct(const GridState& state,
                                  const SteadyProfile& profile) {
    check_same_grid(state, profile);
    check_monotone(state, profile);
    const int n = state.n();
    const std::size_t m = static_cast<std::size_t>(2 * n + 1);

    EulerianView view;
    std::vector<double> eta_f, v_f;
    materialize_full(state, eta_f, v_f);
    view.xi = eta_f;
    view.u = v_f;
    view.a = state.eta[static_cast<std::size_t>(n)];
    view.rho.assign(m, 0.0);
    for (std::size_t i = 0; i + 1 < m; ++i)
        view.rho[i] = profile.rho[i] * profile.h / (eta_f[i + 1] - eta_f[i]);
    view.rho[m - 1] = 0.0;  // vacuum boundary cell
    return view;
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const Trajectory& trajectory,
                          const SteadyProfile& profile) {
    std::string csv = "t,k,x_k,eta_k,v_k,stretch_k,rho_eulerian_k\n";
    const double h = profile.h;
    for (const GridState& snap : trajectory.snapshots) {
        const int n = snap.n();
        for (int k = 0; k <= n; ++k) {
            const std::size_t q = static_cast<std::size_t>(k);
            const double stretch =
                k < n ? (snap.eta[q + 1] - snap.eta[q]) / h
                      : (snap.eta[q] - snap.eta[q - 1]) / h;
            const double rho_eul =
                k < n ? profile.rho[idx(k, n)] * h / (snap.eta[q + 1] - snap.eta[q])
                      : 0.0;
            csv += format_double(snap.t);
            csv += ',';
            csv += std::to_string(k);
            csv += ',';
            csv += format_double(profile.x_of(k));
            csv += ',';
            csv += format_double(snap.eta[q]);
            csv += ',';
            csv += format_double(snap.v[q]);
            csv += ',';
            csv += format_double(stretch);
            csv += ',';
            csv += format_double(rho_eul);
            csv += '\n';
        }
    }
    atomic_write(path, csv);
}

}  // namespace riesz
