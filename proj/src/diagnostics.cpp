#include "riesz_star/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "riesz_star/io.hpp"
#include "riesz_star/kernel.hpp"

namespace riesz {

namespace {

void odd_extend(const std::vector<double>& half, std::vector<double>& full) {
    const int n = static_cast<int>(half.size()) - 1;
    full.assign(static_cast<std::size_t>(2 * n + 1), 0.0);
    for (int k = 0; k <= n; ++k) {
        full[static_cast<std::size_t>(n + k)] = half[static_cast<std::size_t>(k)];
        full[static_cast<std::size_t>(n - k)] = -half[static_cast<std::size_t>(k)];
    }
}

std::vector<double> suffix_trap(const std::vector<double>& f, double h) {
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t i = f.size() - 1; i-- > 0;)
        out[i] = out[i + 1] + 0.5 * h * (f[i] + f[i + 1]);
    return out;
}

}  // namespace

EnergyReport energy_discrete(const GridState& state,
                             const std::vector<double>& accel,
                             const SteadyProfile& profile) {
    if (state.n() != profile.n_half)
        throw ConfigError("energy_discrete: state and profile grids differ");
    if (accel.size() != state.v.size())
        throw ConfigError("energy_discrete: accel length must be N+1");

    const int n = state.n();
    const double h = profile.h;
    const double g = profile.params.gamma;
    const std::size_t m = static_cast<std::size_t>(2 * n + 1);

    std::vector<double> eta_f, v_f, a_f;
    odd_extend(state.eta, eta_f);
    odd_extend(state.v, v_f);
    odd_extend(accel, a_f);

    EnergyReport rep;
    rep.t = state.t;
    rep.boundary_a = state.eta[static_cast<std::size_t>(n)];

    // Backward differences over k = -N+1..N.
    double max_grad_sq = 0.0, sup_sd = 0.0, sup_dv = 0.0;
    double jac_min = std::numeric_limits<double>::infinity();
    double jac_max = -std::numeric_limits<double>::infinity();
    double norm_stretch2 = 0.0, norm_dtx2 = 0.0;
    for (std::size_t i = 1; i < m; ++i) {
        const double sigma = (eta_f[i] - eta_f[i - 1]) / h;
        const double sd = sigma - 1.0;
        const double dv = (v_f[i] - v_f[i - 1]) / h;
        max_grad_sq = std::max(max_grad_sq, sd * sd + dv * dv);
        sup_sd = std::max(sup_sd, std::fabs(sd));
        sup_dv = std::max(sup_dv, std::fabs(dv));
        jac_min = std::min(jac_min, sigma);
        jac_max = std::max(jac_max, sigma);
        const double rg = std::pow(profile.rho[i], g);
        norm_stretch2 += h * rg * sd * sd;
        norm_dtx2 += h * rg * dv * dv;
    }

    double w2 = 0.0, w2_alt = 0.0;
    for (std::size_t i = 1; i + 1 < m; ++i) {
        const double second =
            (eta_f[i + 1] - 2.0 * eta_f[i] + eta_f[i - 1]) / (h * h);
        const double r = profile.rho[i];
        if (r > 0.0) {
            w2 += h * std::pow(r, 2.0 * g - 1.0) * second * second;
            w2_alt += h * std::pow(r, g - 0.5) * second * second;
        }
    }

    double w2_acc = 0.0, norm_v2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = profile.rho[i];
        w2_acc += h * r * a_f[i] * a_f[i];
        norm_v2 += h * r * v_f[i] * v_f[i];
    }

    rep.max_grad_sq = max_grad_sq;
    rep.w2_second_diff = w2;
    rep.w2_accel = w2_acc;
    rep.e_n = max_grad_sq + w2 + w2_acc;
    rep.sup_stretch_dev = sup_sd;
    rep.sup_dv = sup_dv;
    rep.w2_second_diff_alt = w2_alt;
    rep.norm_stretch = std::sqrt(norm_stretch2);
    rep.norm_dtx = std::sqrt(norm_dtx2);
    rep.norm_v = std::sqrt(norm_v2);
    rep.norm_accel = std::sqrt(w2_acc);
    rep.jac_min = jac_min;
    rep.jac_max = jac_max;
    return rep;
}

EnergyReport energy_discrete(const GridState& state, const SteadyProfile& profile,
                             const SchemeCache& cache) {
    const RhsResult r = rhs(state, profile, cache);
    return energy_discrete(state, r.dv, profile);
}

std::vector<EnergyReport> energy_series(const Trajectory& trajectory,
                                        const SteadyProfile& profile,
                                        const SchemeCache& cache) {
    std::vector<EnergyReport> out;
    out.reserve(trajectory.snapshots.size());
    for (const GridState& snap : trajectory.snapshots)
        out.push_back(energy_discrete(snap, profile, cache));
    return out;
}

double physical_energy(const GridState& state, const SteadyProfile& profile,
                       const SchemeCache& cache) {
    if (state.n() != profile.n_half)
        throw ConfigError("physical_energy: state and profile grids differ");
    const int n = state.n();
    const double h = profile.h;
    const double g = profile.params.gamma;
    const std::size_t m = static_cast<std::size_t>(2 * n + 1);

    std::vector<double> eta_f, v_f;
    odd_extend(state.eta, eta_f);
    odd_extend(state.v, v_f);

    double kinetic = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        kinetic += 0.5 * profile.rho[i] * v_f[i] * v_f[i] * h;

    double internal = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double d = eta_f[i + 1] - eta_f[i];
        internal += cache.theta[i] * std::pow(h / d, g - 1.0) * h / (g - 1.0);
    }

    // Pairwise interaction on the deformed grid; the diagonal cell is
    // excluded (integrable singularity, O(h^{2s+1}) omission).
    double interaction = 0.0;
    const RieszParams p = profile.params;
    for (std::size_t i = 0; i < m; ++i) {
        const double ri = profile.rho[i];
        if (ri == 0.0) continue;
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i || profile.rho[j] == 0.0) continue;
            acc += riesz_w(eta_f[i] - eta_f[j], p) * profile.rho[j];
        }
        interaction += 0.5 * ri * acc * h * h;
    }
    return kinetic + internal + interaction;
}

void write_energy_csv(const std::filesystem::path& path,
                      const std::vector<EnergyReport>& series) {
    std::string csv =
        "t,e_n,max_grad_sq,sup_stretch_dev,sup_dv,w2_second_diff,"
        "w2_second_diff_alt,w2_accel,norm_stretch,norm_dtx,norm_v,norm_accel,"
        "jac_min,jac_max,a\n";
    for (const EnergyReport& r : series) {
        const double cols[] = {r.t, r.e_n, r.max_grad_sq, r.sup_stretch_dev,
                               r.sup_dv, r.w2_second_diff, r.w2_second_diff_alt,
                               r.w2_accel, r.norm_stretch, r.norm_dtx, r.norm_v,
                               r.norm_accel, r.jac_min, r.jac_max, r.boundary_a};
        for (std::size_t c = 0; c < std::size(cols); ++c) {
            if (c) csv += ',';
            csv += format_double(cols[c]);
        }
        csv += '\n';
    }
    atomic_write(path, csv);
}

FitResult decay_fit(const std::vector<std::pair<double, double>>& series,
                    double t_lo, double t_hi) {
    FitResult fit;
    std::vector<double> xs, ys;
    for (const auto& [t, norm] : series) {
        if (t < t_lo || t > t_hi) continue;
        if (!(norm > 0.0)) {
            fit.degenerate = true;
            return fit;
        }
        xs.push_back(std::log1p(t));
        ys.push_back(std::log(norm));
    }
    fit.n_samples = static_cast<int>(xs.size());
    if (fit.n_samples < 10) {
        fit.degenerate = true;
        return fit;
    }

    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) {
        fit.degenerate = true;
        return fit;
    }
    fit.slope = sxy / sxx;
    if (syy > 0.0) {
        fit.r2 = (sxy * sxy) / (sxx * syy);
    } else {
        fit.r2 = 1.0;  // exactly constant series: the flat line fits exactly
    }
    return fit;
}

double jacobian_representation_check(const Trajectory& trajectory,
                                     const SteadyProfile& profile,
                                     const SchemeCache& cache) {
    const std::size_t s_count = trajectory.snapshots.size();
    if (s_count < 2)
        throw ConfigError("jacobian_representation_check: need >= 2 snapshots");
    const int n = profile.n_half;
    const double h = profile.h;
    const double g = profile.params.gamma;
    const std::size_t m = static_cast<std::size_t>(2 * n + 1);

    // Per-snapshot suffix integrals: h1 of rho*v, h2 of Phi; cumulative
    // trapezoid of h2 in t.
    std::vector<std::vector<double>> h1(s_count), h2cum(s_count);
    std::vector<double> times(s_count, 0.0);
    std::vector<double> prev_h2;
    for (std::size_t i = 0; i < s_count; ++i) {
        const GridState& snap = trajectory.snapshots[i];
        times[i] = snap.t;
        std::vector<double> v_f;
        odd_extend(snap.v, v_f);
        std::vector<double> integrand(m, 0.0);
        for (std::size_t q = 0; q < m; ++q) integrand[q] = profile.rho[q] * v_f[q];
        h1[i] = suffix_trap(integrand, h);

        const std::vector<double> phi = phi_discrete(snap, profile, cache);
        std::vector<double> h2 = suffix_trap(phi, h);
        if (i == 0) {
            h2cum[i].assign(m, 0.0);
        } else {
            h2cum[i] = h2cum[i - 1];
            const double dt = times[i] - times[i - 1];
            for (std::size_t q = 0; q < m; ++q)
                h2cum[i][q] += 0.5 * dt * (prev_h2[q] + h2[q]);
        }
        prev_h2 = std::move(h2);
    }

    std::vector<double> eta0_f;
    odd_extend(trajectory.snapshots[0].eta, eta0_f);

    const std::vector<double> rho_g = profile.rho_gamma();

    double worst = 0.0;
    for (std::size_t i = 1; i < s_count; ++i) {
        const double t = times[i];
        std::vector<double> eta_f;
        odd_extend(trajectory.snapshots[i].eta, eta_f);
        for (std::size_t q = 1; q < m; ++q) {
            if (profile.rho[q] == 0.0) continue;  // boundary nodes excluded
            const double stretch0 = (eta0_f[q] - eta0_f[q - 1]) / h;
            const double measured = (eta_f[q] - eta_f[q - 1]) / h;
            const double rg = rho_g[q];

            const double first =
                std::exp(-g * rg * t - g * h1[i][q] + g * h1[0][q] -
                         g * h2cum[i][q]);
            // s-integral: exp(-g*rg*(t-s)) times a slowly varying factor E(s).
            // The decay rate g*rg is large at the core, so integrate the
            // exponential weight exactly against piecewise-linear E.
            const double a = g * rg;
            double integral = 0.0;
            double prev_e = 0.0, prev_w = 0.0;
            for (std::size_t j = 0; j <= i; ++j) {
                const double e_slow = std::exp(-g * h1[i][q] + g * h1[j][q] -
                                               g * (h2cum[i][q] - h2cum[j][q]));
                const double w = std::exp(-a * (t - times[j]));
                if (j > 0) {
                    const double len = times[j] - times[j - 1];
                    const double al = a * len;
                    if (al < 1e-8) {
                        integral += 0.5 * len * (prev_e * prev_w + e_slow * w);
                    } else {
                        // int exp(-a(t-s)) (c0 + c1 (s - t_{j-1})) ds over the
                        // interval, with weights w = exp(-a(t-t_j)).
                        const double c1 = (e_slow - prev_e) / len;
                        integral += prev_e * (w - prev_w) / a +
                                    c1 * (len * w / a - (w - prev_w) / (a * a));
                    }
                }
                prev_e = e_slow;
                prev_w = w;
            }
            const double bracket =
                first + g * std::pow(profile.rho[q] / stretch0, g) * integral;
            const double recon = stretch0 * std::pow(bracket, 1.0 / g);
            worst = std::max(worst, std::fabs(recon / measured - 1.0));
        }
    }
    return worst;
}

BoundaryTrack boundary_track(const Trajectory& trajectory) {
    BoundaryTrack track;
    const std::size_t s_count = trajectory.snapshots.size();
    track.series.reserve(s_count);
    for (const GridState& snap : trajectory.snapshots)
        track.series.emplace_back(snap.t, snap.eta.back());

    for (std::size_t i = 1; i + 1 < s_count; ++i) {
        const double dt = track.series[i + 1].first - track.series[i - 1].first;
        if (!(dt > 0.0)) continue;
        const double rate =
            (track.series[i + 1].second - track.series[i - 1].second) / dt;
        const double v_n = trajectory.snapshots[i].v.back();
        track.max_rate_deviation =
            std::max(track.max_rate_deviation, std::fabs(rate - v_n));
    }
    return track;
}

ForcingMonitor forcing_monitor(const GridState& state,
                               const SteadyProfile& profile,
                               const SchemeCache& cache) {
    if (state.n() != profile.n_half)
        throw ConfigError("forcing_monitor: state and profile grids differ");
    const int n = state.n();
    const double h = profile.h;
    const double g = profile.params.gamma;
    const std::size_t m = static_cast<std::size_t>(2 * n + 1);

    const std::vector<double> phi = phi_discrete(state, profile, cache);

    std::vector<double> eta_f;
    odd_extend(state.eta, eta_f);

    ForcingMonitor mon;
    double num2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = profile.rho[i];
        if (r > 0.0) num2 += h * phi[i] * phi[i] / r;
    }
    mon.weighted_phi_norm = std::sqrt(num2);

    double sup_stretch = 0.0;
    for (std::size_t i = 1; i < m; ++i)
        sup_stretch = std::max(sup_stretch, std::fabs(eta_f[i] - eta_f[i - 1]) / h);
    double w2 = 0.0;
    for (std::size_t i = 1; i + 1 < m; ++i) {
        const double r = profile.rho[i];
        if (r <= 0.0) continue;
        const double second =
            (eta_f[i + 1] - 2.0 * eta_f[i] + eta_f[i - 1]) / (h * h);
        w2 += h * std::pow(r, 2.0 * g - 1.0) * second * second;
    }
    mon.majorant = sup_stretch * sup_stretch + w2;
    mon.ratio = mon.majorant > 0.0 ? mon.weighted_phi_norm / mon.majorant : 0.0;
    return mon;
}

}  // namespace riesz
