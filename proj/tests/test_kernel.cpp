#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "riesz_star/kernel.hpp"
#include "riesz_star/quadrature.hpp"
#include "riesz_star/steady.hpp"

using namespace riesz;

namespace {
const RieszParams canon{};  // s = 0.45, gamma = 1.2, k = -0.1
}

TEST_CASE("kernel closed forms at the canonical exponent") {
    // W(x) = |x|^k / k with k = -0.1: W(1) = -10, W(2) = 2^{-0.1} / (-0.1).
    CHECK(riesz_w(1.0, canon) == doctest::Approx(-10.0).epsilon(1e-14));
    CHECK(riesz_w(2.0, canon) ==
          doctest::Approx(-9.3303299153680741).epsilon(1e-14));
    CHECK(riesz_w(-2.0, canon) == riesz_w(2.0, canon));  // even
    CHECK(riesz_w(1e6, canon) > riesz_w(1.0, canon));    // increasing to 0-
    CHECK(riesz_w(1e6, canon) < 0.0);

    CHECK(riesz_w_prime(2.0, canon) ==
          doctest::Approx(std::pow(2.0, -1.1)).epsilon(1e-14));
    CHECK(riesz_w_prime(-2.0, canon) == -riesz_w_prime(2.0, canon));  // odd

    CHECK(riesz_w_second(2.0, canon) ==
          doctest::Approx(-1.1 * std::pow(2.0, -2.1)).epsilon(1e-14));
    CHECK(riesz_w_second(-0.7, canon) == riesz_w_second(0.7, canon));
    CHECK(riesz_w_second(0.7, canon) < 0.0);
}

TEST_CASE("kernel derivatives are consistent with finite differences") {
    const double d = 1e-6;
    for (double x : {0.3, 1.0, 2.5, -0.8}) {
        const double fd_w = (riesz_w(x + d, canon) - riesz_w(x - d, canon)) / (2 * d);
        CHECK(fd_w == doctest::Approx(riesz_w_prime(x, canon)).epsilon(1e-8));
        const double fd_wp =
            (riesz_w_prime(x + d, canon) - riesz_w_prime(x - d, canon)) / (2 * d);
        CHECK(fd_wp == doctest::Approx(riesz_w_second(x, canon)).epsilon(1e-7));
    }
}

TEST_CASE("kernel throws at the origin") {
    CHECK_THROWS_AS(riesz_w(0.0, canon), std::domain_error);
    CHECK_THROWS_AS(riesz_w_prime(0.0, canon), std::domain_error);
    CHECK_THROWS_AS(riesz_w_second(0.0, canon), std::domain_error);
}

TEST_CASE("exterior integral matches quadrature plus analytic tails") {
    // int_{|xi| >= b} W'(c - xi) dxi, checked against tanh-sinh on (b, B) and
    // (-B, -b) plus the exact antiderivative tails beyond |B|.
    const double B = 50.0;
    for (auto [c, b] : std::vector<std::pair<double, double>>{
             {0.0, 1.0}, {0.4, 1.0}, {-0.9, 1.2}, {0.99, 1.0}}) {
        const auto f = [&](double xi) { return riesz_w_prime(c - xi, canon); };
        const double right = tanh_sinh(f, b, B).value + riesz_w(B - c, canon);
        const double left = tanh_sinh(f, -B, -b).value - riesz_w(B + c, canon);
        const double expect = right + left;
        CHECK(w_prime_exterior_integral(c, b, canon) ==
              doctest::Approx(expect).epsilon(1e-10));
    }
    // odd in c, zero at the center
    CHECK(w_prime_exterior_integral(0.0, 2.0, canon) == doctest::Approx(0.0));
    CHECK(w_prime_exterior_integral(0.3, 2.0, canon) ==
          doctest::Approx(-w_prime_exterior_integral(-0.3, 2.0, canon))
              .epsilon(1e-14));
}

TEST_CASE("potential gradient agrees with the O(n) lattice evaluation") {
    // Two independent implementations of the same subtracted principal-value
    // sum: the per-query direct sum and the table-sharing all-nodes version.
    const int n = 80;
    const double h = 1.0 / n;
    std::vector<double> rho(2 * n + 1);
    for (int k = -n; k <= n; ++k) {
        const double x = k * h;
        rho[static_cast<std::size_t>(k + n)] = (1.0 - x * x) * (1.0 - x * x);
    }
    const std::vector<double> all = subtracted_gradient_all(rho, h, canon);
    for (std::size_t q : {std::size_t(0), std::size_t(n / 2), std::size_t(n),
                          std::size_t(3 * n / 2), std::size_t(2 * n)}) {
        CHECK(potential_gradient(rho, -1.0, h, q, canon) ==
              doctest::Approx(all[q]).epsilon(1e-12));
    }
    // odd for an even density
    CHECK(all[static_cast<std::size_t>(n)] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(all[static_cast<std::size_t>(n + 17)] ==
          doctest::Approx(-all[static_cast<std::size_t>(n - 17)]).epsilon(1e-10));
}

TEST_CASE("potential gradient rejects bad input") {
    std::vector<double> rho(11, 1.0);
    CHECK_THROWS(potential_gradient(rho, 0.0, 0.1, 11, canon));  // query range
    rho[4] = -1e-3;
    CHECK_THROWS(potential_gradient(rho, 0.0, 0.1, 5, canon));  // negative density
}

TEST_CASE("beta function values") {
    CHECK(beta_fn(0.5, 0.5) == doctest::Approx(3.14159265358979324).epsilon(1e-13));
    CHECK(beta_fn(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    // reference value computed with 50-digit arithmetic
    CHECK(beta_fn(0.7, 0.9) == doctest::Approx(1.552451434116).epsilon(1e-12));
    CHECK(beta_fn(0.7, 0.9) == doctest::Approx(beta_fn(0.9, 0.7)).epsilon(1e-14));
    // recursion B(a+1, b) = B(a, b) * a / (a + b)
    CHECK(beta_fn(1.7, 0.9) ==
          doctest::Approx(beta_fn(0.7, 0.9) * 0.7 / 1.6).epsilon(1e-13));
    CHECK_THROWS(beta_fn(0.0, 1.0));
    CHECK_THROWS(beta_fn(1.0, -0.5));
}

TEST_CASE("tanh-sinh quadrature handles endpoint singularities") {
    const auto sqrt_sing = [](double x) { return 1.0 / std::sqrt(x); };
    const TanhSinhResult r1 = tanh_sinh(sqrt_sing, 0.0, 1.0);
    CHECK(r1.value == doctest::Approx(2.0).epsilon(1e-11));
    CHECK(r1.levels >= 2);

    const auto log_sing = [](double x) { return std::log(1.0 / x); };
    CHECK(tanh_sinh(log_sing, 0.0, 1.0).value == doctest::Approx(1.0).epsilon(1e-11));

    const auto smooth = [](double x) { return std::sin(x); };
    CHECK(tanh_sinh(smooth, 0.0, 3.14159265358979324).value ==
          doctest::Approx(2.0).epsilon(1e-12));

    // endpoint-distance form: (b - x)^{2s-1} integrates to 1/(2s) on (0, 1)
    const SingularIntegrand edge = [](double, double, double db) {
        return std::pow(db, -0.1);
    };
    CHECK(tanh_sinh(edge, 0.0, 1.0).value ==
          doctest::Approx(1.0 / 0.9).epsilon(1e-11));
}
