#include "riesz_star/steady.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>

#include "riesz_star/kernel.hpp"
#include "riesz_star/parallel.hpp"

namespace riesz {

namespace {

std::vector<double> pow_each(const std::vector<double>& v, double e) {
    std::vector<double> out(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = v[i] > 0.0 ? std::pow(v[i], e) : 0.0;
    return out;
}

double sup_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

// Suffix trapezoid of f from each node out to the right support edge.
std::vector<double> suffix_trapezoid(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = n - 1; i-- > 0;)
        out[i] = out[i + 1] + 0.5 * h * (f[i] + f[i + 1]);
    return out;
}

// Least-squares amplitude factor t minimizing sum (t rho^g - P)^2.
double amplitude_ratio(const std::vector<double>& pg, const std::vector<double>& pmap) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < pg.size(); ++i) {
        num += pg[i] * pmap[i];
        den += pg[i] * pg[i];
    }
    if (den <= 0.0) return 0.0;
    return num / den;
}

// sup |t rho^g - P| / (t sup rho^g); dimensionless fixed-point defect.
double identity_residual(const std::vector<double>& pg, const std::vector<double>& pmap,
                         double t) {
    const double scale = t * sup_of(pg);
    if (scale <= 0.0) return 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < pg.size(); ++i)
        worst = std::max(worst, std::fabs(t * pg[i] - pmap[i]));
    return worst / scale;
}

} // namespace

double SteadyProfile::sup_rho() const { return sup_of(rho); }

std::vector<double> SteadyProfile::rho_gamma() const { return pow_each(rho, params.gamma); }

std::vector<double> subtracted_gradient_all(const std::vector<double>& rho_full,
                                            double h, const RieszParams& p) {
    const std::size_t n = rho_full.size();
    if (n < 3 || n % 2 == 0)
        throw ConfigError("subtracted_gradient_all: need an odd node count >= 3");
    if (!(h > 0.0)) throw ConfigError("subtracted_gradient_all: spacing must be positive");

    // Lattice kernel table W'((i-j) h) = sign * wp[|i-j|]; one pow per offset
    // instead of one per pair.
    std::vector<double> wp(n, 0.0);
    const double e = 2.0 * p.s - 2.0;
    for (std::size_t m = 1; m < n; ++m)
        wp[m] = std::pow(static_cast<double>(m) * h, e);

    if (rho_full[0] != 0.0 || rho_full[n - 1] != 0.0)
        throw std::domain_error(
            "subtracted_gradient_all: nonvanishing density at a support edge");

    const double x0 = -(0.5 * static_cast<double>(n - 1)) * h;
    const double a = x0;
    const double b = x0 + static_cast<double>(n - 1) * h;

    std::vector<double> out(n, 0.0);
    parallel_for(0, n, [&](std::size_t i) {
        const double ri = rho_full[i];
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double w = j < i ? wp[i - j] : -wp[j - i];
            acc += w * (rho_full[j] - ri);
        }
        acc *= h;
        if (ri != 0.0 && i != 0 && i != n - 1) {
            const double xq = x0 + static_cast<double>(i) * h;
            acc -= ri * (riesz_w(xq - b, p) - riesz_w(xq - a, p));
        }
        out[i] = acc;
    });
    return out;
}

std::vector<double> fixed_point_map(const std::vector<double>& rho_full, double h,
                                    const RieszParams& p) {
    const std::vector<double> s = subtracted_gradient_all(rho_full, h, p);
    std::vector<double> f(rho_full.size(), 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = rho_full[i] * s[i];
    return suffix_trapezoid(f, h);
}

SteadyProfile solve_steady(const RieszParams& p, int n_grid, double tol, double relax,
                           int max_iter) {
    p.validate();
    if (n_grid < 64) throw ConfigError("solve_steady: n_grid must be at least 64");
    if (!(tol > 0.0)) throw ConfigError("solve_steady: tol must be positive");
    if (!(relax > 0.0) || relax > 1.0)
        throw ConfigError("solve_steady: relax must lie in (0, 1]");
    if (max_iter < 1) throw ConfigError("solve_steady: max_iter must be positive");

    const int nh = n_grid;
    const std::size_t n = static_cast<std::size_t>(2 * nh + 1);
    const double h = 1.0 / static_cast<double>(nh);
    const double inv_gamma = 1.0 / p.gamma;

    // Parabolic bump on [-1, 1], sup-normalized to 1 already.
    std::vector<double> phi(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = -1.0 + static_cast<double>(i) * h;
        phi[i] = std::max(0.0, 1.0 - x * x);
    }

    std::vector<double> history;
    history.reserve(256);
    bool converged = false;
    int used = 0;
    std::vector<double> raw(n, 0.0);

    for (int it = 1; it <= max_iter; ++it) {
        const std::vector<double> pmap = fixed_point_map(phi, h, p);
        const std::vector<double> pg = pow_each(phi, p.gamma);
        const double t = amplitude_ratio(pg, pmap);
        const double res = t > 0.0 ? identity_residual(pg, pmap, t)
                                   : std::numeric_limits<double>::infinity();
        history.push_back(res);

        for (std::size_t i = 0; i < n; ++i) {
            const double lifted = pmap[i] > 0.0 ? std::pow(pmap[i], inv_gamma) : 0.0;
            raw[i] = (1.0 - relax) * phi[i] + relax * lifted;
        }
        raw[0] = 0.0;
        raw[n - 1] = 0.0;
        for (std::size_t i = 0; i < n / 2; ++i) {
            const double m = 0.5 * (raw[i] + raw[n - 1 - i]);
            raw[i] = m;
            raw[n - 1 - i] = m;
        }
        const double mx = sup_of(raw);
        if (!(mx > 0.0))
            throw SteadyError("solve_steady: iterate collapsed to zero", history);

        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double next = raw[i] / mx;
            delta = std::max(delta, std::fabs(next - phi[i]));
            phi[i] = next;
        }

        used = it;
        if (delta <= tol && res <= tol) {
            converged = true;
            break;
        }
    }

    if (!converged) {
        std::ostringstream os;
        os << "solve_steady: no convergence after " << max_iter
           << " iterations (last residual "
           << (history.empty() ? -1.0 : history.back()) << ")";
        throw SteadyError(os.str(), history);
    }

    // Absolute amplitude from the quadratic/(gamma) homogeneity mismatch:
    // (c phi)^g = P[c phi] forces c^{g-2} = t.
    {
        const std::vector<double> pmap = fixed_point_map(phi, h, p);
        const std::vector<double> pg = pow_each(phi, p.gamma);
        const double t = amplitude_ratio(pg, pmap);
        if (!(t > 0.0))
            throw SteadyError("solve_steady: degenerate amplitude recovery", history);
        const double c = std::pow(t, -1.0 / (2.0 - p.gamma));
        for (std::size_t i = 0; i < n; ++i) phi[i] *= c;
    }

    SteadyProfile prof;
    prof.params = p;
    prof.h = h;
    prof.n_half = nh;
    prof.radius = 1.0;
    prof.rho = phi;
    double mass = 0.0;
    for (double v : prof.rho) mass += v;
    prof.mass = mass * h;
    prof.iterations = used;

    SteadyProfile unit = rescale_profile(prof, 1.0);
    unit.iterations = used;

    // Fresh identity defect on the returned grid (absolute scaling, no fit).
    const std::vector<double> pmap = fixed_point_map(unit.rho, unit.h, unit.params);
    const std::vector<double> pg = unit.rho_gamma();
    unit.fixed_point_residual = identity_residual(pg, pmap, 1.0);
    return unit;
}

ResidualReport steady_residual_report(const SteadyProfile& profile) {
    ResidualReport rep;
    const std::size_t n = profile.rho.size();
    if (n < 3) return rep;
    const std::vector<double> pg = profile.rho_gamma();
    const double x0 = -static_cast<double>(profile.n_half) * profile.h;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double grad = (pg[i + 1] - pg[i - 1]) / (2.0 * profile.h);
        const double force =
            potential_gradient(profile.rho, x0, profile.h, i, profile.params);
        const double res = grad + profile.rho[i] * force;
        rep.sup_abs = std::max(rep.sup_abs, std::fabs(res));
        rep.scale = std::max(rep.scale, std::fabs(grad));
        if (profile.rho[i] > 0.0) {
            const double w = 1.0 / std::sqrt(profile.rho[i]);
            rep.weighted_relative = std::max(rep.weighted_relative, std::fabs(res) * w);
        }
    }
    if (rep.scale > 0.0) {
        rep.relative = rep.sup_abs / rep.scale;
        double wscale = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (profile.rho[i] <= 0.0) continue;
            const double grad = (pg[i + 1] - pg[i - 1]) / (2.0 * profile.h);
            wscale = std::max(wscale, std::fabs(grad) / std::sqrt(profile.rho[i]));
        }
        rep.weighted_relative = wscale > 0.0 ? rep.weighted_relative / wscale : 0.0;
    } else {
        rep.relative = 0.0;
        rep.weighted_relative = 0.0;
    }
    return rep;
}

double steady_residual(const SteadyProfile& profile) {
    return steady_residual_report(profile).relative;
}

SteadyProfile rescale_profile(const SteadyProfile& profile, double target_mass) {
    if (!(target_mass > 0.0))
        throw ConfigError("rescale_profile: target mass must be positive");
    if (profile.params.gamma >= 2.0)
        throw std::domain_error("rescale_profile: scaling exponent degenerates at gamma >= 2");
    const double a_exp = 2.0 * profile.params.s / (2.0 - profile.params.gamma);
    const double mass_exp = a_exp - 1.0;  // mass scales as lambda^{mass_exp}
    if (mass_exp == 0.0)
        throw std::domain_error("rescale_profile: mass is scaling-invariant at these exponents");
    const double lambda = std::pow(target_mass / profile.mass, 1.0 / mass_exp);
    const double amp = std::pow(lambda, a_exp);

    SteadyProfile out = profile;
    out.h = profile.h / lambda;
    out.radius = profile.radius / lambda;
    for (double& v : out.rho) v *= amp;
    double mass = 0.0;
    for (double v : out.rho) mass += v;
    out.mass = mass * out.h;
    return out;
}

SteadyProfile rescale_to_radius(const SteadyProfile& profile, double target_radius) {
    if (!(target_radius > 0.0))
        throw ConfigError("rescale_to_radius: target radius must be positive");
    if (profile.params.gamma >= 2.0)
        throw std::domain_error("rescale_to_radius: scaling exponent degenerates at gamma >= 2");
    const double lambda = profile.radius / target_radius;
    const double amp = std::pow(lambda, 2.0 * profile.params.s / (2.0 - profile.params.gamma));

    SteadyProfile out = profile;
    out.h = profile.h / lambda;
    out.radius = target_radius;
    for (double& v : out.rho) v *= amp;
    double mass = 0.0;
    for (double v : out.rho) mass += v;
    out.mass = mass * out.h;
    return out;
}

double free_energy(const std::vector<double>& rho_full, double h, const RieszParams& p) {
    const std::size_t n = rho_full.size();
    if (n < 3) throw ConfigError("free_energy: need at least three grid nodes");
    if (!(h > 0.0)) throw ConfigError("free_energy: spacing must be positive");

    // Kernel value table and the exact integral of W over the singular cell
    // [-h/2, h/2]: 2 (h/2)^{2s} / (2s (2s-1)).
    const double k = p.k();
    std::vector<double> wv(n, 0.0);
    for (std::size_t m = 1; m < n; ++m)
        wv[m] = std::pow(static_cast<double>(m) * h, k) / k;
    const double self_cell = 2.0 * std::pow(0.5 * h, 2.0 * p.s) / (2.0 * p.s * k);

    std::vector<double> psi(n, 0.0);
    parallel_for(0, n, [&](std::size_t i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            acc += rho_full[j] * wv[i > j ? i - j : j - i];
        }
        psi[i] = acc * h + rho_full[i] * self_cell;
    });

    double total = 0.0;
    const double inv_gm1 = 1.0 / (p.gamma - 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double pg = rho_full[i] > 0.0 ? std::pow(rho_full[i], p.gamma) : 0.0;
        total += pg * inv_gm1 + 0.5 * rho_full[i] * psi[i];
    }
    return total * h;
}

double free_energy(const SteadyProfile& profile) {
    return free_energy(profile.rho, profile.h, profile.params);
}

PinchReport pinch_constants(const SteadyProfile& profile, double power,
                            double window_fraction, double exclude_fraction) {
    if (!(window_fraction > 0.0) || window_fraction > 1.0 ||
        exclude_fraction < 0.0 || exclude_fraction >= window_fraction)
        throw ConfigError("pinch_constants: need 0 <= exclude < window <= 1");
    PinchReport rep;
    rep.c_min = std::numeric_limits<double>::infinity();
    for (int j = 1; j < profile.n_half; ++j) {
        const double dist = static_cast<double>(profile.n_half - j) * profile.h;
        if (dist > window_fraction * profile.radius) continue;
        if (dist < exclude_fraction * profile.radius) continue;
        const double value = profile.rho_of(j);
        const double ratio = (value > 0.0 ? std::pow(value, power) : 0.0) / dist;
        rep.c_min = std::min(rep.c_min, ratio);
        rep.c_max = std::max(rep.c_max, ratio);
        ++rep.n_nodes;
    }
    if (rep.n_nodes == 0) rep.c_min = 0.0;
    return rep;
}

double boundary_slope(const SteadyProfile& profile, double lo_fraction, double hi_fraction) {
    if (!(lo_fraction >= 0.0) || !(hi_fraction > lo_fraction) || hi_fraction > 1.0)
        throw ConfigError("boundary_slope: need 0 <= lo < hi <= 1");
    std::vector<double> xs, gs;
    const double gm1 = profile.params.gamma - 1.0;
    for (int j = 1; j <= profile.n_half; ++j) {
        const double dist = static_cast<double>(profile.n_half - j) * profile.h;
        if (dist > hi_fraction * profile.radius || dist < lo_fraction * profile.radius)
            continue;
        const double value = profile.rho_of(j);
        xs.push_back(profile.x_of(j));
        gs.push_back(value > 0.0 ? std::pow(value, gm1) : 0.0);
    }
    if (xs.size() < 2)
        throw ConfigError("boundary_slope: fit window contains fewer than two nodes");
    double mx = 0.0, mg = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        mg += gs[i];
    }
    mx /= static_cast<double>(xs.size());
    mg /= static_cast<double>(xs.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (gs[i] - mg);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    if (den <= 0.0)
        throw ConfigError("boundary_slope: degenerate fit window");
    return num / den;
}

} // namespace riesz
