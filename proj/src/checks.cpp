#include "riesz_star/checks.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstddef>
#include <sstream>

#include <nlohmann/json.hpp>

#include "riesz_star/kernel.hpp"
#include "riesz_star/parallel.hpp"
#include "riesz_star/quadrature.hpp"
#include "riesz_star/rng.hpp"

namespace riesz {

namespace {

// Shared edge factor: kills the displacement gradient at the support
// boundary without moving the center, and keeps it twice differentiable so
// only the bump class is genuinely just Lipschitz.
double edge_factor(double x) {
    const double u = 1.0 - x * x;
    return u * u;
}

double edge_factor_deriv(double x) { return -4.0 * x * (1.0 - x * x); }

double inner_eval(const TestFunction& f, double x) {
    switch (f.kind) {
        case TestFunctionKind::polynomial_odd: {
            // sum c_m x^{2m+1}
            double acc = 0.0;
            double xp = x;
            for (double c : f.coef) {
                acc += c * xp;
                xp *= x * x;
            }
            return acc;
        }
        case TestFunctionKind::random_fourier: {
            double acc = 0.0;
            for (std::size_t m = 0; m < f.coef.size(); ++m)
                acc += f.coef[m] * std::sin(static_cast<double>(m + 1) * M_PI * x);
            return acc;
        }
        case TestFunctionKind::lipschitz_bump: {
            const double c1 = f.coef.size() > 0 ? f.coef[0] : 0.0;
            const double c2 = f.coef.size() > 1 ? f.coef[1] : 0.0;
            const double fold = std::max(0.0, std::fabs(x) - f.kink);
            const double sgn = x >= 0.0 ? 1.0 : -1.0;
            return c1 * x + c2 * sgn * fold;
        }
    }
    return 0.0;
}

double inner_deriv(const TestFunction& f, double x) {
    switch (f.kind) {
        case TestFunctionKind::polynomial_odd: {
            double acc = 0.0;
            double xp = 1.0;
            for (std::size_t m = 0; m < f.coef.size(); ++m) {
                acc += f.coef[m] * static_cast<double>(2 * m + 1) * xp;
                xp *= x * x;
            }
            return acc;
        }
        case TestFunctionKind::random_fourier: {
            double acc = 0.0;
            for (std::size_t m = 0; m < f.coef.size(); ++m) {
                const double om = static_cast<double>(m + 1) * M_PI;
                acc += f.coef[m] * om * std::cos(om * x);
            }
            return acc;
        }
        case TestFunctionKind::lipschitz_bump: {
            const double c1 = f.coef.size() > 0 ? f.coef[0] : 0.0;
            const double c2 = f.coef.size() > 1 ? f.coef[1] : 0.0;
            // d/dx [sign(x) max(0, |x|-q)] = 1 outside the fold, 0 inside;
            // the fold point itself takes the outside (right-sided) value.
            return c1 + (std::fabs(x) >= f.kink ? c2 : 0.0);
        }
    }
    return 0.0;
}

}  // namespace

double TestFunction::eval(double x) const { return scale * inner_eval(*this, x) * edge_factor(x); }

double TestFunction::deriv(double x) const {
    return scale * (inner_deriv(*this, x) * edge_factor(x) +
                    inner_eval(*this, x) * edge_factor_deriv(x));
}

std::vector<double> TestFunction::sample(int n_half, double radius) const {
    if (n_half < 1) throw ConfigError("TestFunction::sample: n_half must be positive");
    if (!(radius > 0.0)) throw ConfigError("TestFunction::sample: radius must be positive");
    std::vector<double> out(static_cast<std::size_t>(2 * n_half + 1));
    for (int k = -n_half; k <= n_half; ++k)
        out[static_cast<std::size_t>(k + n_half)] =
            eval(static_cast<double>(k) / static_cast<double>(n_half));
    (void)radius;  // samples live on the unit pullback of the support
    return out;
}

double TestFunction::sup_deriv(int scan_points) const {
    double sup = 0.0;
    for (int i = 0; i <= scan_points; ++i) {
        const double x = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(scan_points);
        sup = std::max(sup, std::fabs(deriv(x)));
    }
    if (kind == TestFunctionKind::lipschitz_bump) {
        for (double x : {kink, -kink}) {
            sup = std::max(sup, std::fabs(deriv(x)));
            // left-sided slope at the fold
            const double eps = 1e-9;
            sup = std::max(sup, std::fabs(deriv(x - (x > 0 ? eps : -eps))));
        }
    }
    return sup;
}

std::vector<TestFunction> TestFunctionFamily::generate() const {
    if (count < 0) throw ConfigError("TestFunctionFamily: count must be nonnegative");
    if (!(amplitude_cap > 0.0))
        throw ConfigError("TestFunctionFamily: amplitude cap must be positive");
    Rng rng(seed);
    std::vector<TestFunction> out;
    out.reserve(static_cast<std::size_t>(count));
    // Normalize strictly inside the cap so the pointwise smallness hypothesis
    // |w(x)-w(y)| <= cap |x-y| survives the finite scan of sup|w'|.
    const double target = amplitude_cap * (1.0 - std::ldexp(1.0, -20));
    for (int i = 0; i < count; ++i) {
        TestFunction f;
        f.kind = kind;
        switch (kind) {
            case TestFunctionKind::polynomial_odd:
                f.coef = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                          rng.uniform(-1.0, 1.0)};
                break;
            case TestFunctionKind::random_fourier:
                f.coef = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                          rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
                break;
            case TestFunctionKind::lipschitz_bump:
                f.coef = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
                f.kink = rng.uniform(0.2, 0.7);
                break;
        }
        double sup = f.sup_deriv();
        if (!(sup > 0.0)) {
            f.coef.assign(f.coef.size(), 0.0);
            f.coef[0] = 1.0;
            sup = f.sup_deriv();
        }
        f.scale = target / sup;
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<TestFunction> mixed_family(std::uint64_t seed, int count, double amplitude_cap) {
    const TestFunctionKind kinds[3] = {TestFunctionKind::polynomial_odd,
                                       TestFunctionKind::random_fourier,
                                       TestFunctionKind::lipschitz_bump};
    std::vector<TestFunction> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int c = 0; c < 3 && static_cast<int>(out.size()) < count; ++c) {
        TestFunctionFamily fam;
        fam.seed = seed + static_cast<std::uint64_t>(c) * 0x9e3779b97f4a7c15ull;
        fam.kind = kinds[c];
        fam.count = (count + 2 - c) / 3;
        fam.amplitude_cap = amplitude_cap;
        for (auto& f : fam.generate()) out.push_back(std::move(f));
    }
    // Interleave the classes so truncated prefixes still mix them.
    std::vector<TestFunction> mixed;
    mixed.reserve(out.size());
    const std::size_t third = (out.size() + 2) / 3;
    for (std::size_t i = 0; i < third; ++i)
        for (std::size_t c = 0; c < 3; ++c) {
            std::size_t idx = c * third + i;
            if (idx < out.size() && mixed.size() < static_cast<std::size_t>(count))
                mixed.push_back(out[idx]);
        }
    mixed.resize(std::min<std::size_t>(mixed.size(), static_cast<std::size_t>(count)));
    return mixed;
}

// ---------------------------------------------------------------------------

namespace {

// |d h|^{2s-3} by node distance d = 1..2N; index 0 unused.
std::vector<double> power_table(const SteadyProfile& prof) {
    const std::size_t nn = prof.rho.size();
    std::vector<double> table(nn, 0.0);
    const double e = 2.0 * prof.params.s - 3.0;
    for (std::size_t d = 1; d < nn; ++d)
        table[d] = std::pow(static_cast<double>(d) * prof.h, e);
    return table;
}

void require_nodal(const std::vector<double>& w, const SteadyProfile& prof,
                   const char* who) {
    if (w.size() != prof.rho.size()) {
        std::ostringstream os;
        os << who << ": displacement has " << w.size() << " nodes, profile has "
           << prof.rho.size();
        throw ConfigError(os.str());
    }
}

std::vector<double> assemble_l(const std::vector<double>& w, const SteadyProfile& prof,
                               double sign) {
    require_nodal(w, prof, "linop_l");
    const std::size_t nn = prof.rho.size();
    const std::vector<double> table = power_table(prof);
    const double wsec = sign * (2.0 * prof.params.s - 2.0);
    const double h = prof.h;
    std::vector<double> out(nn, 0.0);
    parallel_for(0, nn, [&](std::size_t i) {
        const double ri = prof.rho[i];
        if (ri == 0.0) return;
        double acc = 0.0;
        for (std::size_t j = 0; j < nn; ++j) {
            if (j == i || prof.rho[j] == 0.0) continue;
            const std::size_t d = j > i ? j - i : i - j;
            acc += table[d] * prof.rho[j] * (w[i] - w[j]);
        }
        out[i] = wsec * h * ri * acc;
    });
    return out;
}

// Closed-form exterior tails of the second-derivative kernel against the
// constant continuation of w: int_{y > R} W''(x_i - y) dy = W'(x_i - R) and
// int_{y < -R} W''(x_i - y) dy = -W'(x_i + R).
double tail_term(const std::vector<double>& w, const SteadyProfile& prof,
                 std::size_t i) {
    const double xi = prof.x_of(static_cast<int>(i) - prof.n_half);
    const double right = riesz_w_prime(xi - prof.radius, prof.params);
    const double left = -riesz_w_prime(xi + prof.radius, prof.params);
    return (w[i] - w.back()) * right + (w[i] - w.front()) * left;
}

}  // namespace

std::vector<double> linop_l(const std::vector<double>& w_nodes,
                            const SteadyProfile& profile) {
    return assemble_l(w_nodes, profile, 1.0);
}

std::vector<double> linop_l1(const std::vector<double>& w_nodes,
                             const SteadyProfile& profile) {
    require_nodal(w_nodes, profile, "linop_l1");
    const std::size_t nn = profile.rho.size();
    const std::vector<double> table = power_table(profile);
    const double wsec = 2.0 * profile.params.s - 2.0;
    const double h = profile.h;
    std::vector<double> out(nn, 0.0);
    parallel_for(0, nn, [&](std::size_t i) {
        const double ri = profile.rho[i];
        if (ri == 0.0) return;
        double acc = 0.0;
        for (std::size_t j = 0; j < nn; ++j) {
            if (j == i) continue;
            const std::size_t d = j > i ? j - i : i - j;
            acc += wsec * table[d] * (w_nodes[i] - w_nodes[j]);
        }
        out[i] = ri * ri * (h * acc + tail_term(w_nodes, profile, i));
    });
    return out;
}

std::vector<double> linop_l2(const std::vector<double>& w_nodes,
                             const SteadyProfile& profile) {
    require_nodal(w_nodes, profile, "linop_l2");
    const std::size_t nn = profile.rho.size();
    const std::vector<double> table = power_table(profile);
    const double wsec = 2.0 * profile.params.s - 2.0;
    const double h = profile.h;
    std::vector<double> out(nn, 0.0);
    parallel_for(0, nn, [&](std::size_t i) {
        const double ri = profile.rho[i];
        if (ri == 0.0) return;
        double acc = 0.0;
        for (std::size_t j = 0; j < nn; ++j) {
            if (j == i) continue;
            const std::size_t d = j > i ? j - i : i - j;
            acc += wsec * table[d] * (ri - profile.rho[j]) * (w_nodes[i] - w_nodes[j]);
        }
        out[i] = -ri * (h * acc) - ri * ri * tail_term(w_nodes, profile, i);
    });
    return out;
}

double interaction_form(const std::vector<double>& w_nodes,
                        const SteadyProfile& profile) {
    require_nodal(w_nodes, profile, "interaction_form");
    const std::size_t nn = profile.rho.size();
    const std::vector<double> table = power_table(profile);
    std::vector<double> partial(nn, 0.0);
    parallel_for(0, nn, [&](std::size_t i) {
        const double ri = profile.rho[i];
        if (ri == 0.0) return;
        double acc = 0.0;
        for (std::size_t j = i + 1; j < nn; ++j) {
            if (profile.rho[j] == 0.0) continue;
            const double d = w_nodes[i] - w_nodes[j];
            acc += profile.rho[j] * d * d * table[j - i];
        }
        partial[i] = ri * acc;
    });
    double total = 0.0;
    for (std::size_t i = 0; i < nn; ++i) total += partial[i];
    return total * profile.h * profile.h;
}

double quadratic_form(const std::vector<double>& w_nodes,
                      const SteadyProfile& profile) {
    const std::vector<double> lw = linop_l(w_nodes, profile);
    double acc = 0.0;
    for (std::size_t i = 0; i < lw.size(); ++i) acc += w_nodes[i] * lw[i];
    return acc * profile.h;
}

CoercivityReport coercivity_check(const std::vector<double>& w_nodes,
                                  const SteadyProfile& profile) {
    require_nodal(w_nodes, profile, "coercivity_check");
    CoercivityReport rep;
    const std::size_t nn = profile.rho.size();
    const double h = profile.h;
    const double g = profile.params.gamma;
    double lhs = 0.0;
    for (std::size_t i = 0; i + 1 < nn; ++i) {
        if (profile.rho[i] == 0.0) continue;
        const double slope = (w_nodes[i + 1] - w_nodes[i]) / h;
        lhs += h * std::pow(profile.rho[i], g) * slope * slope;
    }
    rep.lhs = lhs;
    rep.rhs = interaction_form(w_nodes, profile);
    // pass tracks the unweighted domination (pressure form >= interaction
    // form, constant one).  That constant is sharp: for w = x the virial
    // identity sum rho^gamma h = double interaction sum makes the two sides
    // equal, so rhs/lhs sweeps up to 1 over any family containing
    // near-dilation members.  The meaningful gap quantity is therefore the
    // weighted quotient 2(1-s)*rhs / (gamma*lhs), whose supremum sits at
    // 2(1-s)/gamma (attained in the dilation limit) precisely because
    // gamma > 2(1-s) in the admissible regime.
    const double s = profile.params.s;
    rep.ratio = rep.lhs > 0.0
                    ? (2.0 * (1.0 - s) * rep.rhs) / (g * rep.lhs)
                    : 0.0;
    rep.pass = rep.lhs >= rep.rhs * (1.0 - 1e-8);
    return rep;
}

// ---------------------------------------------------------------------------

const char* remainder_kind_name(RemainderKind which) {
    switch (which) {
        case RemainderKind::potential_taylor2: return "potential_taylor2";
        case RemainderKind::gradient_taylor1: return "gradient_taylor1";
        case RemainderKind::gradient_diff: return "gradient_diff";
        case RemainderKind::power3_diff: return "power3_diff";
        case RemainderKind::power4_diff: return "power4_diff";
    }
    return "unknown";
}

namespace {

struct Increment {
    double dx = 0.0;  // x - y
    double dw = 0.0;  // w(x) - w(y)
    double de = 0.0;  // dx + dw
};

double remainder_value(RemainderKind which, const Increment& inc, const RieszParams& p) {
    const double s = p.s;
    switch (which) {
        case RemainderKind::potential_taylor2:
            return riesz_w(inc.de, p) - riesz_w(inc.dx, p) -
                   riesz_w_prime(inc.dx, p) * inc.dw -
                   0.5 * riesz_w_second(inc.dx, p) * inc.dw * inc.dw;
        case RemainderKind::gradient_taylor1:
            return riesz_w_prime(inc.de, p) - riesz_w_prime(inc.dx, p) -
                   riesz_w_second(inc.dx, p) * inc.dw;
        case RemainderKind::gradient_diff:
            return riesz_w_prime(inc.de, p) - riesz_w_prime(inc.dx, p);
        case RemainderKind::power3_diff:
            return std::pow(std::fabs(inc.dx), 2.0 * s - 3.0) -
                   std::pow(std::fabs(inc.de), 2.0 * s - 3.0);
        case RemainderKind::power4_diff:
            return std::pow(std::fabs(inc.dx), 2.0 * s - 4.0) -
                   std::pow(std::fabs(inc.de), 2.0 * s - 4.0);
    }
    return 0.0;
}

double remainder_envelope(RemainderKind which, const Increment& inc,
                          const RieszParams& p, double a) {
    const double s = p.s;
    const double adx = std::fabs(inc.dx);
    switch (which) {
        case RemainderKind::potential_taylor2:
            return 4.0 * (1.0 - s) * (3.0 - 2.0 * s) * a * inc.dw * inc.dw *
                   std::pow(adx, 2.0 * s - 3.0);
        case RemainderKind::gradient_taylor1:
            return 2.0 * (1.0 - s) * (3.0 - 2.0 * s) * a * a *
                   std::pow(adx, 2.0 * s - 2.0);
        case RemainderKind::gradient_diff:
            return 2.0 * (1.0 - s) * a * std::pow(1.0 - a, 2.0 * s - 3.0) *
                   std::pow(adx, 2.0 * s - 2.0);
        case RemainderKind::power3_diff:
            return (3.0 - 2.0 * s) * a * (1.0 + a) * std::pow(1.0 - a, 2.0 * s - 5.0) *
                   std::pow(adx, 2.0 * s - 3.0);
        case RemainderKind::power4_diff:
            return (4.0 - 2.0 * s) * a * (1.0 + a) * std::pow(1.0 - a, 2.0 * s - 6.0) *
                   std::pow(adx, 2.0 * s - 4.0);
    }
    return 0.0;
}

}  // namespace

RemainderReport remainder_bound_check(RemainderKind which, const TestFunction& w,
                                      double x, double y, const RieszParams& p,
                                      double a_eps0) {
    Increment inc;
    inc.dx = x - y;
    if (std::fabs(inc.dx) < 10.0 * DBL_EPSILON)
        throw ConfigError("remainder_bound_check: degenerate pair, |x - y| below 10 eps");
    if (!(a_eps0 > 0.0) || !(a_eps0 < 0.5))
        throw ConfigError("remainder_bound_check: amplitude hypothesis requires 0 < a < 1/2");
    inc.dw = w.eval(x) - w.eval(y);
    if (std::fabs(inc.dw) > a_eps0 * std::fabs(inc.dx) * (1.0 + 1e-12))
        throw ConfigError("remainder_bound_check: increment violates the amplitude hypothesis");
    inc.de = inc.dx + inc.dw;

    RemainderReport rep;
    rep.value = std::fabs(remainder_value(which, inc, p));
    rep.bound = remainder_envelope(which, inc, p, a_eps0);
    rep.pass = rep.value <= rep.bound * (1.0 + 1e-8);
    return rep;
}

double remainder_scaling_exponent(RemainderKind which, std::uint64_t seed,
                                  int triples, const RieszParams& p,
                                  double a_eps0, int halvings) {
    if (triples < 1) throw ConfigError("remainder_scaling_exponent: need triples >= 1");
    if (halvings < 1) throw ConfigError("remainder_scaling_exponent: need halvings >= 1");
    std::vector<TestFunction> pool = mixed_family(seed, std::min(triples, 48), a_eps0);
    Rng rng(seed ^ 0xd1b54a32d192ed03ull);
    std::vector<double> exponents;
    exponents.reserve(static_cast<std::size_t>(triples));
    for (int t = 0; t < triples; ++t) {
        const TestFunction& f = pool[static_cast<std::size_t>(t) % pool.size()];
        double x = 0.0, y = 0.0;
        do {
            x = rng.uniform(-0.95, 0.95);
            y = rng.uniform(-0.95, 0.95);
        } while (std::fabs(x - y) < 0.05);
        const double base_dw = f.eval(x) - f.eval(y);
        if (std::fabs(base_dw) < 1e-12) continue;
        // Scale the whole displacement down; the increment scales exactly
        // with it, so the ratio of successive remainders isolates the
        // contraction order.
        const double m_hi = std::ldexp(1.0, -(halvings - 1));
        Increment hi, lo;
        hi.dx = lo.dx = x - y;
        hi.dw = m_hi * base_dw;
        lo.dw = 0.5 * m_hi * base_dw;
        hi.de = hi.dx + hi.dw;
        lo.de = lo.dx + lo.dw;
        const double v_hi = std::fabs(remainder_value(which, hi, p));
        const double v_lo = std::fabs(remainder_value(which, lo, p));
        // Discard pairs drowned in the cancellation noise of the defining
        // subtraction (at scale eps * |W| and its derivatives).
        const double noise = 64.0 * DBL_EPSILON *
                             (std::fabs(riesz_w(hi.dx, p)) +
                              std::fabs(riesz_w_prime(hi.dx, p)) + 1.0);
        if (v_hi <= noise || v_lo <= noise) continue;
        exponents.push_back(std::log2(v_hi / v_lo));
    }
    if (exponents.empty())
        throw ConfigError("remainder_scaling_exponent: no usable triples");
    std::sort(exponents.begin(), exponents.end());
    return exponents[exponents.size() / 2];
}

// ---------------------------------------------------------------------------

HardyReport hardy_check(const std::vector<double>& f_nodes, double k_exp) {
    if (!(k_exp > 1.0))
        throw ConfigError("hardy_check: weight exponent must exceed 1");
    if (f_nodes.size() < 3)
        throw ConfigError("hardy_check: need at least 3 grid nodes on [0, 1/2]");
    const std::size_t m = f_nodes.size() - 1;
    const double h = 0.5 / static_cast<double>(m);
    if (k_exp < 2.0 && f_nodes[0] != 0.0)
        throw ConfigError("hardy_check: weight is singular at 0, f(0) must vanish");

    std::vector<double> df(f_nodes.size(), 0.0);
    df[0] = (-3.0 * f_nodes[0] + 4.0 * f_nodes[1] - f_nodes[2]) / (2.0 * h);
    df[m] = (3.0 * f_nodes[m] - 4.0 * f_nodes[m - 1] + f_nodes[m - 2]) / (2.0 * h);
    for (std::size_t j = 1; j < m; ++j)
        df[j] = (f_nodes[j + 1] - f_nodes[j - 1]) / (2.0 * h);

    HardyReport rep;
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t j = 0; j <= m; ++j) {
        const double x = static_cast<double>(j) * h;
        const double trap = (j == 0 || j == m) ? 0.5 : 1.0;
        const double f2 = f_nodes[j] * f_nodes[j];
        double wl = 0.0;
        if (j == 0) {
            // x^{k-2} f^2 -> 0 at x = 0 whenever it is integrable (f(0) = 0
            // when the weight is singular; otherwise the weight vanishes or
            // is 1 at k = 2).
            wl = (k_exp == 2.0) ? f2 : 0.0;
        } else {
            wl = std::pow(x, k_exp - 2.0) * f2;
        }
        lhs += trap * h * wl;
        const double wk = (j == 0) ? 0.0 : std::pow(x, k_exp);
        rhs += trap * h * wk * (f2 + df[j] * df[j]);
    }
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.ratio = rhs > 0.0 ? lhs / rhs : 0.0;
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

// int_{-1}^{x} (1+y)^{-alpha} (x-y)^{2s-1} dy for the tent weight, by
// double-exponential quadrature in the endpoint-distance form.
double tent_left_integral(double alpha, double x, const RieszParams& p) {
    const double spow = 2.0 * p.s - 1.0;
    const SingularIntegrand f = [alpha, spow](double, double da, double db) {
        return std::pow(da, -alpha) * std::pow(db, spow);
    };
    return tanh_sinh(f, -1.0, x, 1e-13, 12).value;
}

double tent_right_integral(double alpha, double x, const RieszParams& p) {
    const double spow = 2.0 * p.s - 1.0;
    const SingularIntegrand f = [alpha, spow](double, double da, double db) {
        return std::pow(db, -alpha) * std::pow(da, spow);
    };
    return tanh_sinh(f, x, 1.0, 1e-13, 12).value;
}

void require_alpha(double alpha, const char* who) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        std::ostringstream os;
        os << who << ": requires 0 < alpha < 1, got " << alpha;
        throw ConfigError(os.str());
    }
}

}  // namespace

WeightedKernelReport weighted_kernel_tent_check(double alpha, const RieszParams& p,
                                                int probe_points, double tol) {
    require_alpha(alpha, "weighted_kernel_tent_check");
    if (probe_points < 2)
        throw ConfigError("weighted_kernel_tent_check: need at least 2 probe points");
    const double ts = 2.0 * p.s;
    const double b = beta_fn(1.0 - alpha, ts);
    WeightedKernelReport rep;
    for (int t = 0; t < probe_points; ++t) {
        const double x = -0.9 + 1.8 * static_cast<double>(t) /
                                    static_cast<double>(probe_points - 1);
        const double left = tent_left_integral(alpha, x, p);
        const double right = tent_right_integral(alpha, x, p);
        const double exact_left = std::pow(1.0 + x, ts - alpha) * b;
        const double exact_right = std::pow(1.0 - x, ts - alpha) * b;
        rep.worst_dev = std::max(rep.worst_dev, std::fabs(left / exact_left - 1.0));
        rep.worst_dev = std::max(rep.worst_dev, std::fabs(right / exact_right - 1.0));
        const double total = left + right;
        const double mirrored = tent_left_integral(alpha, -x, p) +
                                tent_right_integral(alpha, -x, p);
        rep.symmetry_dev =
            std::max(rep.symmetry_dev, std::fabs(mirrored - total) / std::fabs(total));
    }
    rep.pass = rep.worst_dev <= tol && rep.symmetry_dev <= std::max(tol, 1e-10);
    return rep;
}

WeightedKernelReport weighted_kernel_profile_check(double alpha,
                                                   const SteadyProfile& profile,
                                                   double c_frozen,
                                                   double window_fraction) {
    require_alpha(alpha, "weighted_kernel_profile_check");
    if (!(window_fraction > 0.0) || !(window_fraction < 1.0))
        throw ConfigError(
            "weighted_kernel_profile_check: requires 0 < window_fraction < 1");
    const RieszParams& p = profile.params;
    // The computed equilibrium pinches like dist^{1/(gamma-1)} at the support
    // edge, a power well above one for gamma close to one.  Two consequences
    // shape this check.  First, rho^{-alpha} is integrable only when
    // alpha < gamma - 1, so callers must keep alpha below that line or the
    // lattice sum grows without bound under refinement.  Second, the quotient
    // against rho^{2s-alpha}(x) still blows up as x approaches the edge (the
    // integral scales like dist^{2s - alpha/(gamma-1)} there, which cannot
    // keep pace with rho^{2s-alpha} ~ dist^{(2s-alpha)/(gamma-1)}), so the
    // frozen-constant claim is only meaningful on a fixed interior window.
    if (!(alpha < p.gamma - 1.0))
        throw ConfigError(
            "weighted_kernel_profile_check: needs alpha < gamma - 1 so the "
            "weight stays integrable at the support edge");
    const double ts = 2.0 * p.s;
    const std::size_t nn = profile.rho.size();
    const double h = profile.h;
    const double inv2s = 1.0 / ts;
    // antiderivative of |z|^{2s-1}
    const auto anti = [ts, inv2s](double z) {
        const double mag = std::pow(std::fabs(z), ts) * inv2s;
        return z >= 0.0 ? mag : -mag;
    };
    WeightedKernelReport rep;
    const int nh = profile.n_half;
    std::vector<double> ratios(nn, 0.0);
    parallel_for(0, nn, [&](std::size_t q) {
        const int k = static_cast<int>(q) - nh;
        const double xq = profile.x_of(k);
        if (std::fabs(xq) > window_fraction * profile.radius) return;
        if (profile.rho[q] <= 0.0) return;
        double total = 0.0;
        for (std::size_t j = 0; j + 1 < nn; ++j) {
            const double rho_mid = 0.5 * (profile.rho[j] + profile.rho[j + 1]);
            if (rho_mid <= 0.0) continue;
            const double yl = profile.x_of(static_cast<int>(j) - nh);
            const double cell = anti(xq - yl) - anti(xq - (yl + h));
            total += std::pow(rho_mid, -alpha) * cell;
        }
        ratios[q] = total / std::pow(profile.rho[q], ts - alpha);
    });
    for (double r : ratios) rep.worst_ratio = std::max(rep.worst_ratio, r);
    for (std::size_t q = 0; q < nn; ++q) {
        const double mirror = ratios[nn - 1 - q];
        if (ratios[q] > 0.0 && mirror > 0.0)
            rep.symmetry_dev = std::max(
                rep.symmetry_dev, std::fabs(mirror - ratios[q]) / ratios[q]);
    }
    rep.pass = c_frozen > 0.0 && rep.worst_ratio <= 1.05 * c_frozen &&
               std::isfinite(rep.worst_ratio);
    return rep;
}

DoubleIntegralReport weighted_kernel_double_check(double alpha, double beta,
                                                  const RieszParams& p,
                                                  int n_cells, double drift_tol) {
    require_alpha(alpha, "weighted_kernel_double_check");
    if (!(beta > 0.0))
        throw ConfigError("weighted_kernel_double_check: requires beta > 0");
    if (!(1.0 + 2.0 * p.s > alpha + beta))
        throw ConfigError(
            "weighted_kernel_double_check: integrability requires 1 + 2s > alpha + beta");
    if (n_cells < 8)
        throw ConfigError("weighted_kernel_double_check: need at least 8 cells");

    const double ts = 2.0 * p.s;
    const auto value_at = [&](int n) {
        const std::size_t un = static_cast<std::size_t>(n);
        const double delta = 2.0 / static_cast<double>(n);
        std::vector<double> wa(un), wb(un), kd(un, 0.0);
        for (std::size_t i = 0; i < un; ++i) {
            const double x = -1.0 + (static_cast<double>(i) + 0.5) * delta;
            wa[i] = std::pow(1.0 - std::fabs(x), -alpha);
            wb[i] = std::pow(1.0 - std::fabs(x), -beta);
        }
        for (std::size_t d = 1; d < un; ++d)
            kd[d] = std::pow(static_cast<double>(d) * delta, ts - 1.0);
        // Same-cell pairs take the exact kernel integral over the cell square.
        const double diag = 2.0 * std::pow(delta, ts + 1.0) / (ts * (ts + 1.0));
        std::vector<double> partial(un, 0.0);
        parallel_for(0, un, [&](std::size_t i) {
            double acc = wb[i] * diag / (delta * delta);
            for (std::size_t j = 0; j < un; ++j) {
                if (j == i) continue;
                acc += wb[j] * kd[j > i ? j - i : i - j];
            }
            partial[i] = wa[i] * acc;
        });
        double total = 0.0;
        for (std::size_t i = 0; i < un; ++i) total += partial[i];
        return total * delta * delta;
    };

    DoubleIntegralReport rep;
    rep.value_coarse = value_at(n_cells);
    rep.value_fine = value_at(2 * n_cells);
    rep.drift = std::fabs(rep.value_fine / rep.value_coarse - 1.0);
    rep.pass = std::isfinite(rep.value_coarse) && std::isfinite(rep.value_fine) &&
               rep.drift <= drift_tol;
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

// Family constant for the computed-profile weighted-kernel bound, frozen from
// a coarse calibration of the canonical (s, gamma) = (0.45, 1.2) radius-one
// profile at alpha = 0.15 on the half-radius interior window; regressions
// past 5% fail the sweep. (alpha must stay below gamma - 1 = 0.2 for the
// weight to remain integrable against this profile's edge pinch.) Measured
// worst ratios 789.9 / 909.7 / 959.3 at N = 200 / 400 / 800, monotone with
// shrinking increments; 1100 leaves ~9% above the finest calibration point.
constexpr double kProfileKernelFrozenC = 1100.0;
constexpr double kProfileKernelAlpha = 0.15;
constexpr double kProfileKernelWindow = 0.5;

// Refinement drift allowance for the double-integral variant (midpoint
// lattice converges like delta^{1 - max(alpha, beta)} near the edges).
constexpr double kDoubleDriftTol = 0.05;

// Amplitude-contraction orders of the five remainder kinds, in enum order.
// These follow from the definitions: potential_taylor2 subtracts the Taylor
// polynomial through the second-order term, so its remainder is cubic in the
// increment; gradient_taylor1 subtracts through first order, so quadratic;
// the three difference kinds subtract nothing beyond the base value, so
// linear. The measured exponents track these to about 1e-4 at the sweep's
// default amplitudes.
constexpr double kTaylorOrders[5] = {3.0, 2.0, 1.0, 1.0, 1.0};

}  // namespace

std::vector<SweepReport> run_verification_sweeps(const SteadyProfile& profile,
                                                 const SweepOptions& options) {
    std::vector<SweepReport> reports;
    const RieszParams& p = profile.params;
    const double sign = options.mutate_kernel_sign ? -1.0 : 1.0;
    const double ratio_cap = 2.0 * (1.0 - p.s) / p.gamma + 0.05;

    // quadratic identity + negativity share the operator evaluations
    {
        SweepReport ident{"quadratic_identity", 0, 0, 0.0};
        SweepReport negat{"form_negativity", 0, 0, 0.0};
        const std::vector<TestFunction> fam =
            mixed_family(options.seed, options.identity_functions, 0.05);
        bool first = true;
        for (const TestFunction& f : fam) {
            const std::vector<double> w = f.sample(profile.n_half, profile.radius);
            const std::vector<double> lw = assemble_l(w, profile, sign);
            double q = 0.0;
            for (std::size_t i = 0; i < lw.size(); ++i) q += w[i] * lw[i];
            q *= profile.h;
            const double ds = interaction_form(w, profile);
            const double rel =
                std::fabs(q + 2.0 * (1.0 - p.s) * ds) / std::max(std::fabs(q), DBL_MIN);
            ident.trials++;
            if (rel > 1e-6) ident.failures++;
            ident.worst_margin = std::max(ident.worst_margin, rel);
            negat.trials++;
            if (q > 0.0) negat.failures++;
            if (first || q > negat.worst_margin) negat.worst_margin = q;
            first = false;
        }
        reports.push_back(ident);
        reports.push_back(negat);
    }

    {
        SweepReport rep{"coercivity", 0, 0, 0.0};
        const std::vector<TestFunction> fam = mixed_family(
            options.seed ^ 0xa076bc31ull, options.coercivity_functions, 0.05);
        for (const TestFunction& f : fam) {
            const std::vector<double> w = f.sample(profile.n_half, profile.radius);
            const CoercivityReport c = coercivity_check(w, profile);
            rep.trials++;
            if (!c.pass || c.ratio > ratio_cap) rep.failures++;
            rep.worst_margin = std::max(rep.worst_margin, c.ratio);
        }
        reports.push_back(rep);
    }

    {
        SweepReport rep{"remainder_bounds", 0, 0, 0.0};
        const std::vector<TestFunction> pool = mixed_family(
            options.seed ^ 0x517cc1b7ull, 96, options.remainder_amplitude);
        Rng rng(options.seed ^ 0x2545f491ull);
        const RemainderKind kinds[5] = {
            RemainderKind::potential_taylor2, RemainderKind::gradient_taylor1,
            RemainderKind::gradient_diff, RemainderKind::power3_diff,
            RemainderKind::power4_diff};
        for (int t = 0; t < options.remainder_triples; ++t) {
            const TestFunction& f = pool[static_cast<std::size_t>(t) % pool.size()];
            double x = 0.0, y = 0.0;
            do {
                x = rng.uniform(-0.98, 0.98);
                y = rng.uniform(-0.98, 0.98);
            } while (std::fabs(x - y) < 1e-3);
            const RemainderKind which = kinds[t % 5];
            const RemainderReport r =
                remainder_bound_check(which, f, x, y, p, options.remainder_amplitude);
            rep.trials++;
            if (!r.pass) rep.failures++;
            if (r.bound > 0.0)
                rep.worst_margin = std::max(rep.worst_margin, r.value / r.bound);
        }
        reports.push_back(rep);
    }

    {
        SweepReport rep{"remainder_scaling", 0, 0, 0.0};
        for (int k = 0; k < 5; ++k) {
            const double measured = remainder_scaling_exponent(
                static_cast<RemainderKind>(k), options.seed ^ 0x9e3779b9ull,
                options.scaling_triples, p, options.remainder_amplitude);
            const double dev = std::fabs(measured - kTaylorOrders[k]);
            rep.trials++;
            if (dev > 0.2) rep.failures++;
            rep.worst_margin = std::max(rep.worst_margin, dev);
        }
        reports.push_back(rep);
    }

    {
        SweepReport rep{"hardy_family", 0, 0, 0.0};
        const std::vector<TestFunction> fam = mixed_family(
            options.seed ^ 0xb5297a4dull, options.hardy_functions, 1.0);
        const double kexps[3] = {1.5, 2.0, 3.0};
        for (std::size_t fi = 0; fi < fam.size(); ++fi) {
            const double k_exp = kexps[fi % 3];
            const auto sample_on_half = [&](std::size_t m) {
                std::vector<double> vals(m + 1);
                for (std::size_t j = 0; j <= m; ++j)
                    vals[j] = fam[fi].eval(0.5 * static_cast<double>(j) /
                                           static_cast<double>(m));
                return vals;
            };
            const HardyReport coarse = hardy_check(sample_on_half(2048), k_exp);
            const HardyReport fine = hardy_check(sample_on_half(4096), k_exp);
            const double drift = coarse.ratio > 0.0
                                     ? std::fabs(fine.ratio / coarse.ratio - 1.0)
                                     : 0.0;
            rep.trials++;
            if (!(std::isfinite(fine.ratio)) || drift > 0.01) rep.failures++;
            rep.worst_margin = std::max(rep.worst_margin, drift);
        }
        reports.push_back(rep);
    }

    {
        SweepReport rep{"beta_identity", 0, 0, 0.0};
        const double ts = 2.0 * p.s;
        const double alpha = 0.3;
        const double b = beta_fn(1.0 - alpha, ts);
        for (int t = 0; t < options.beta_probe_points; ++t) {
            const double x = -0.9 + 1.8 * static_cast<double>(t) /
                                        static_cast<double>(options.beta_probe_points - 1);
            const double left = tent_left_integral(alpha, x, p);
            const double exact = std::pow(1.0 + x, ts - alpha) * b;
            const double dev = std::fabs(left / exact - 1.0);
            rep.trials++;
            if (dev > 1e-8) rep.failures++;
            rep.worst_margin = std::max(rep.worst_margin, dev);
        }
        reports.push_back(rep);
    }

    {
        SweepReport rep{"weighted_kernel_profile", 1, 0, 0.0};
        const WeightedKernelReport wk = weighted_kernel_profile_check(
            kProfileKernelAlpha, profile, kProfileKernelFrozenC,
            kProfileKernelWindow);
        rep.worst_margin = wk.worst_ratio / kProfileKernelFrozenC;
        if (!wk.pass) rep.failures++;
        reports.push_back(rep);
    }

    {
        SweepReport rep{"weighted_kernel_double", 1, 0, 0.0};
        const DoubleIntegralReport di =
            weighted_kernel_double_check(0.4, 0.4, p, 1024, kDoubleDriftTol);
        rep.worst_margin = di.drift;
        if (!di.pass) rep.failures++;
        reports.push_back(rep);
    }

    return reports;
}

bool sweeps_all_pass(const std::vector<SweepReport>& reports) {
    for (const SweepReport& r : reports)
        if (r.failures > 0) return false;
    return true;
}

std::string sweep_reports_to_json(const std::vector<SweepReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const SweepReport& r : reports) {
        nlohmann::json obj;
        obj["name"] = r.name;
        obj["trials"] = r.trials;
        obj["failures"] = r.failures;
        obj["worst_margin"] = r.worst_margin;
        arr.push_back(obj);
    }
    return arr.dump(2) + "\n";
}

}  // namespace riesz
