#include "riesz_star/kernel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace riesz {

double riesz_w(double x, const RieszParams& p) {
    if (x == 0.0) throw std::domain_error("riesz_w: kernel argument is zero");
    const double k = p.k(); // 2s - 1 in (-1, 0)
    return std::pow(std::fabs(x), k) / k;
}

double riesz_w_prime(double x, const RieszParams& p) {
    if (x == 0.0) throw std::domain_error("riesz_w_prime: kernel argument is zero");
    const double mag = std::pow(std::fabs(x), 2.0 * p.s - 2.0);
    return x > 0.0 ? mag : -mag;
}

double riesz_w_second(double x, const RieszParams& p) {
    if (x == 0.0) throw std::domain_error("riesz_w_second: kernel argument is zero");
    return (2.0 * p.s - 2.0) * std::pow(std::fabs(x), 2.0 * p.s - 3.0);
}

double w_prime_exterior_integral(double c, double b, const RieszParams& p) {
    if (!(std::fabs(c) < b))
        throw std::domain_error("w_prime_exterior_integral: requires |c| < b");
    return riesz_w(b - c, p) - riesz_w(b + c, p);
}

double potential_gradient(const std::vector<double>& rho, double x0, double h,
                          std::size_t query, const RieszParams& p, double neg_tol) {
    const std::size_t n = rho.size();
    if (n < 2) throw ConfigError("potential_gradient: need at least two grid nodes");
    if (!(h > 0.0)) throw ConfigError("potential_gradient: grid spacing must be positive");
    if (query >= n)
        throw ConfigError("potential_gradient: query index outside the sampled support");
    for (std::size_t j = 0; j < n; ++j) {
        if (rho[j] < -neg_tol) {
            std::ostringstream os;
            os << "potential_gradient: negative density " << rho[j] << " at node " << j;
            throw std::domain_error(os.str());
        }
    }

    const double xq = x0 + static_cast<double>(query) * h;
    const double rq = rho[query];

    // Interior: subtracted integrand, self-cell excluded, weight h per node.
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == query) continue;
        const double xj = x0 + static_cast<double>(j) * h;
        acc += riesz_w_prime(xq - xj, p) * (rho[j] - rq) * h;
    }

    // Exterior (zero extension): closed-form antiderivative from the support
    // edges a = x0, b = x0 + (n-1) h. Right tail integral of W'(xq - xi) over
    // xi in (b, inf) is W(xq - b); left tail over (-inf, a) is -W(xq - a).
    const double a = x0;
    const double b = x0 + static_cast<double>(n - 1) * h;
    if (rq != 0.0) {
        if (query == 0 || query == n - 1)
            throw std::domain_error(
                "potential_gradient: subtracted integral diverges at a support edge "
                "with nonvanishing density");
        double tail = riesz_w(xq - b, p) - riesz_w(xq - a, p);
        acc += (0.0 - rq) * tail;
    }
    return acc;
}

double beta_fn(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::domain_error("beta_fn: arguments must be positive");
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

} // namespace riesz
