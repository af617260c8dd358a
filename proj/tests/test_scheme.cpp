#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "riesz_star/scheme.hpp"
#include "riesz_star/steady.hpp"

using namespace riesz;

namespace {

const RieszParams canon{};

const SteadyProfile& r100() {
    static SteadyProfile p = rescale_to_radius(solve_steady(canon, 100), 1.0);
    return p;
}
const SteadyProfile& r200() {
    static SteadyProfile p = rescale_to_radius(solve_steady(canon, 200), 1.0);
    return p;
}
const SchemeCache& cache100() {
    static SchemeCache c = make_cache(r100());
    return c;
}

double sup_abs(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::fabs(x));
    return s;
}

}  // namespace

TEST_CASE("config validation") {
    SchemeConfig c;
    CHECK_NOTHROW(c.validate());
    c.n = 31;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.n = 100;
    c.integrator = "leapfrog";
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.integrator = "imex_be";
    c.t_end = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.t_end = 1.0;
    c.eps0 = 0.06;  // perturbation cap keeps the flow in the guard band
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.eps0 = 0.01;
    c.dt = -1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("theta weights approximate the pressure profile") {
    const std::vector<double> theta = theta_weights(r100());
    REQUIRE(theta.size() == 201);
    CHECK(theta[200] == 0.0);  // right-to-left accumulation ends at zero

    double worst = 0.0, sup_rg = 0.0;
    for (int k = -100; k <= 100; ++k) {
        const double rg = std::pow(r100().rho_of(k), canon.gamma);
        sup_rg = std::max(sup_rg, rg);
        worst = std::max(worst, std::fabs(theta[static_cast<std::size_t>(k + 100)] - rg));
    }
    // O(h)-level agreement with rho^gamma, frozen at N = 100
    CHECK(worst / sup_rg == doctest::Approx(8.81e-2).epsilon(0.02));

    // The right-endpoint suffix rule breaks evenness by exactly one cell:
    // the integrand rho*grad is odd, so theta_{-k} - theta_k telescopes to
    // h * rho_k * grad_k.
    const std::vector<double> grad =
        subtracted_gradient_all(r100().rho, r100().h, canon);
    for (int k : {13, 40, 77}) {
        const double gap = theta[static_cast<std::size_t>(100 - k)] -
                           theta[static_cast<std::size_t>(100 + k)];
        const double cell = r100().h * r100().rho_of(k) *
                            grad[static_cast<std::size_t>(100 + k)];
        CHECK(gap == doctest::Approx(cell).epsilon(1e-10));
        CHECK(std::fabs(gap) / sup_rg < 2e-2);  // below the O(h^2s) error
    }

    const SchemeCache& c = cache100();
    CHECK(c.theta == theta);
    CHECK(c.phi_static.size() == 201);
    CHECK(c.phi_static[0] == 0.0);    // vacuum edge: -rho * grad = 0
    CHECK(c.phi_static[200] == 0.0);
}

TEST_CASE("the steady state is a discrete equilibrium") {
    const GridState eq = initial_data(r100(), 0.0);
    for (int k = 0; k <= 100; ++k)
        CHECK(eq.eta[static_cast<std::size_t>(k)] ==
              doctest::Approx(r100().x_of(k)).epsilon(1e-14));
    CHECK(sup_abs(eq.v) == 0.0);

    const RhsResult r = rhs(eq, r100(), cache100());
    CHECK(r.deta == eq.v);
    CHECK(sup_abs(r.dv) < 1e-10);  // measured 3.5e-13: forcing cancels exactly

    const std::vector<double> phi = phi_discrete(eq, r100(), cache100());
    REQUIRE(phi.size() == 201);
    CHECK(sup_abs(phi) < 1e-10);
}

TEST_CASE("initial data closures and input validation") {
    const GridState st = initial_data(r100(), 0.01);
    CHECK(st.eta[0] == 0.0);
    CHECK(st.v[0] == 0.0);
    CHECK(st.eta[100] - st.eta[99] == doctest::Approx(r100().h).epsilon(1e-12));
    CHECK(st.v[100] == st.v[99]);
    CHECK_NOTHROW(validate_state(st, r100()));

    CHECK_THROWS_AS(initial_data(r100(), -0.01), ConfigError);
    CHECK_THROWS_AS(initial_data(r100(), 0.06), ConfigError);

    std::vector<double> w0(101, 0.0), w1(101, 0.0);
    CHECK_THROWS_AS(initial_data(r100(), std::vector<double>(10, 0.0), w1),
                    ConfigError);
    w0[0] = 1e-3;  // odd data must vanish at the center
    CHECK_THROWS_AS(initial_data(r100(), w0, w1), ConfigError);
    w0[0] = 0.0;
    w0[50] = 0.9 * r100().h;  // isolated spike: gradient above 1/2
    CHECK_THROWS_AS(initial_data(r100(), w0, w1), ConfigError);
}

TEST_CASE("validate_state rejects broken closures and folds") {
    GridState st = initial_data(r100(), 0.01);
    GridState bad = st;
    bad.eta[0] = 1e-9;
    CHECK_THROWS_AS(validate_state(bad, r100()), GuardError);

    bad = st;
    bad.eta[100] += 1e-3;  // boundary cell must keep unit stretch
    CHECK_THROWS_AS(validate_state(bad, r100()), GuardError);

    bad = st;
    std::swap(bad.eta[40], bad.eta[41]);  // fold
    CHECK_THROWS_AS(validate_state(bad, r100()), GuardError);
}

TEST_CASE("imex step: positivity of dt, equilibrium fixed point") {
    const GridState eq = initial_data(r100(), 0.0);
    SchemeConfig c;
    c.n = 100;
    CHECK_THROWS_AS(step(eq, r100(), cache100(), 0.0, c), ConfigError);

    const GridState next = step(eq, r100(), cache100(), 1e-3, c);
    CHECK(sup_abs(next.v) < 1e-10);
    CHECK(next.t == doctest::Approx(1e-3));
}

TEST_CASE("short stable run at N=100 with the default dt policy") {
    SchemeConfig c;
    c.n = 100;
    c.t_end = 0.5;
    Trajectory tr = simulate(c, r100());
    CHECK(tr.status == "completed");
    CHECK(tr.steps == 200);
    CHECK(tr.dt_used == doctest::Approx(0.25 * r100().h).epsilon(1e-14));
    CHECK(tr.snapshots.size() == 201);  // auto cadence targets ~200 frames
    CHECK(tr.guard_time < 0.0);
    CHECK(tr.snapshots.front().t == 0.0);
    CHECK(tr.snapshots.back().t == doctest::Approx(0.5).epsilon(1e-12));
    for (std::size_t i = 1; i < tr.snapshots.size(); ++i)
        CHECK(tr.snapshots[i].t > tr.snapshots[i - 1].t);
    CHECK_NOTHROW(validate_state(tr.snapshots.back(), r100()));
}

TEST_CASE("simulate is deterministic and thread-count independent") {
    SchemeConfig c;
    c.n = 100;
    c.t_end = 0.2;

    setenv("RIESZ_STAR_THREADS", "1", 1);
    Trajectory a = simulate(c, r100());
    setenv("RIESZ_STAR_THREADS", "4", 1);
    Trajectory b = simulate(c, r100());
    unsetenv("RIESZ_STAR_THREADS");
    Trajectory d = simulate(c, r100());

    REQUIRE(a.snapshots.size() == b.snapshots.size());
    CHECK(a.snapshots.back().eta == b.snapshots.back().eta);  // bitwise
    CHECK(a.snapshots.back().v == b.snapshots.back().v);
    CHECK(a.snapshots.back().eta == d.snapshots.back().eta);
    CHECK(a.snapshots.back().v == d.snapshots.back().v);
}

TEST_CASE("lattice instability at N=200 trips the stretch guard") {
    // The N=200 grid sits below the resolution threshold where the discrete
    // system is stable; the perturbation grows until the stretch leaves
    // [1/4, 4] shortly after t = 3.5. The run must stop cleanly with the
    // last good state preserved.
    SchemeConfig c;
    c.n = 200;
    c.t_end = 10.0;
    Trajectory tr = simulate(c, r200());
    CHECK(tr.status == "guard_tripped");
    CHECK(tr.guard_time == doctest::Approx(3.51).epsilon(0.1));
    CHECK(tr.steps < 10.0 / tr.dt_used);
    REQUIRE(!tr.snapshots.empty());
    CHECK(tr.snapshots.back().t < 10.0);
    CHECK_NOTHROW(validate_state(tr.snapshots.back(), r200()));
}

TEST_CASE("imex Richardson self-convergence is first order") {
    auto final_v = [&](double dt) {
        SchemeConfig c;
        c.n = 100;
        c.dt = dt;
        c.t_end = 0.05;
        return simulate(c, r100()).snapshots.back().v;
    };
    const std::vector<double> v1 = final_v(2e-3);
    const std::vector<double> v2 = final_v(1e-3);
    const std::vector<double> v4 = final_v(5e-4);
    double e12 = 0.0, e24 = 0.0;
    for (std::size_t i = 0; i < v1.size(); ++i) {
        e12 = std::max(e12, std::fabs(v1[i] - v2[i]));
        e24 = std::max(e24, std::fabs(v2[i] - v4[i]));
    }
    CHECK(e12 == doctest::Approx(2.116e-5).epsilon(0.05));
    CHECK(e24 == doctest::Approx(1.070e-5).epsilon(0.05));
    CHECK(e12 / e24 == doctest::Approx(2.0).epsilon(0.15));  // O(dt)
}

TEST_CASE("explicit integrator hits the physical-vacuum stiffness wall") {
    // The viscous eigenvalue scales like 1/(rho_min h^2) ~ 3e13 on this
    // profile, so the stability-policy dt underruns the step budget and any
    // practical fixed dt trips the guard on the first step. Both failure
    // modes are contractual.
    SchemeConfig c;
    c.n = 100;
    c.integrator = "explicit_rk4";
    c.t_end = 1.0;
    CHECK_THROWS_AS(simulate(c, r100()), ConfigError);  // budget at policy dt

    c.dt = 1e-3;
    Trajectory tr = simulate(c, r100());
    CHECK(tr.status == "guard_tripped");
    CHECK(tr.steps == 0);
    CHECK(tr.snapshots.size() == 1);
}

TEST_CASE("eulerian reconstruction conserves mass and tracks the boundary") {
    SchemeConfig c;
    c.n = 100;
    c.t_end = 0.2;
    Trajectory tr = simulate(c, r100());
    const GridState& last = tr.snapshots.back();
    const EulerianView view = eulerian_reconstruct(last, r100());

    REQUIRE(view.xi.size() == 201);
    REQUIRE(view.rho.size() == 201);
    REQUIRE(view.u.size() == 201);
    CHECK(view.a == last.eta[100]);
    CHECK(view.rho[200] == 0.0);
    CHECK(view.rho[0] == 0.0);  // left vacuum cell carries rho_{-N} = 0

    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < view.xi.size(); ++i) {
        CHECK(view.xi[i + 1] > view.xi[i]);
        mass += view.rho[i] * (view.xi[i + 1] - view.xi[i]);
    }
    CHECK(mass == doctest::Approx(r100().mass).epsilon(1e-11));
    // odd extension of the velocity
    CHECK(view.u[100 - 30] == doctest::Approx(-view.u[100 + 30]).epsilon(1e-14));
}

TEST_CASE("simulate rejects a grid mismatch") {
    SchemeConfig c;
    c.n = 128;
    c.t_end = 0.1;
    CHECK_THROWS_AS(simulate(c, r100()), ConfigError);
}
