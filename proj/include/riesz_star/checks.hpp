#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riesz_star/params.hpp"
#include "riesz_star/steady.hpp"

namespace riesz {

// ---------------------------------------------------------------------------
// Test perturbations: closed-form displacement profiles w on [-1, 1] with
// w(0) = 0 and w'(+-1) = 0 exactly (every class carries a (1-x^2)^2 edge
// factor), normalized so sup |w'| equals a requested amplitude. They are
// evaluable at arbitrary points, not just on a grid, because the pointwise
// remainder checks need off-grid increments.

enum class TestFunctionKind { lipschitz_bump, polynomial_odd, random_fourier };

struct TestFunction {
    TestFunctionKind kind = TestFunctionKind::polynomial_odd;
    std::vector<double> coef;  // inner-shape coefficients, meaning per kind
    double kink = 0.5;         // lipschitz_bump: fold location in (0, 1)
    double scale = 1.0;        // normalization factor fixed by the generator

    double eval(double x) const;
    double deriv(double x) const;  // right-sided limit at the bump fold

    // Nodal samples w(x_i) on the symmetric grid x_i = i h, i = -n..n, with
    // h = radius / n_half.
    std::vector<double> sample(int n_half, double radius = 1.0) const;

    // Scan sup of |deriv| over [-1, 1]; fold points are included explicitly.
    double sup_deriv(int scan_points = 8192) const;
};

// Deterministic generator: `count` functions of one smoothness class, each
// rescaled so sup |w'| = amplitude_cap * (1 - 2^-20) (strictly inside the cap
// so the derivative-smallness hypothesis of the pointwise bounds holds).
struct TestFunctionFamily {
    std::uint64_t seed = 20260815;
    int count = 20;
    TestFunctionKind kind = TestFunctionKind::random_fourier;
    double amplitude_cap = 0.05;

    std::vector<TestFunction> generate() const;
};

// Round-robin over the three classes, `count` functions in total.
std::vector<TestFunction> mixed_family(std::uint64_t seed, int count,
                                       double amplitude_cap);

// ---------------------------------------------------------------------------
// Linearized interaction operator on the profile grid (all vectors are nodal,
// size 2N+1, index i = k + N).
//
// The operator acts on a displacement w extended by constants beyond the
// support edges (the flow there is rigid translation, so the displacement
// gradient vanishes outside). Integrating the gradient-average form by parts
// turns both pieces into second-derivative-kernel sums:
//
//   (L1 w)_i = rho_i^2 [ sum_{j != i} h W''(x_i - x_j) (w_i - w_j) + tails ]
//   (L2 w)_i = -rho_i  [ sum_{j != i} h W''(x_i - x_j) (rho_i - rho_j)
//                        (w_i - w_j) ] - (the same tails)
//
// where the exterior tails are closed-form antiderivative differences. Under
// the constant extension the tails cancel identically in the sum, so
//
//   (L w)_i = rho_i sum_{j != i} h W''(x_i - x_j) rho_j (w_i - w_j)
//
// is a pure lattice sum. The j = i exclusion is the discrete principal value
// used everywhere else in the project. This assembly makes the quadratic-form
// identity below exact in floating arithmetic, not just to O(h).
std::vector<double> linop_l(const std::vector<double>& w_nodes,
                            const SteadyProfile& profile);
std::vector<double> linop_l1(const std::vector<double>& w_nodes,
                             const SteadyProfile& profile);
std::vector<double> linop_l2(const std::vector<double>& w_nodes,
                             const SteadyProfile& profile);

// Pair sum  sum_{i<j} h^2 rho_i rho_j (w_i - w_j)^2 / |x_i - x_j|^{3-2s},
// the interaction side of the quadratic-form identity
//   sum_i h w_i (L w)_i = -2(1-s) * interaction_form(w).
double interaction_form(const std::vector<double>& w_nodes,
                        const SteadyProfile& profile);

// sum_i h w_i (L w)_i, fixed left-to-right reduction.
double quadratic_form(const std::vector<double>& w_nodes,
                      const SteadyProfile& profile);

// ---------------------------------------------------------------------------
// Weighted-gradient coercivity: the pressure-weighted gradient energy
//   lhs = sum_i h rho_i^gamma ((w_{i+1} - w_i)/h)^2   (forward differences)
// dominates the interaction form rhs with constant one. That constant is
// sharp — the virial identity of the equilibrium makes the two sides equal
// at w = x — so rhs/lhs offers no gap to measure. ratio therefore reports
// the weighted quotient 2(1-s) rhs / (gamma lhs) (0 when lhs = 0), whose
// supremum over displacement families is 2(1-s)/gamma < 1: the margin by
// which pressure beats the attractive interaction.
struct CoercivityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;  // 2(1-s) rhs / (gamma lhs)
    bool pass = false;   // lhs >= rhs * (1 - 1e-8)
};

CoercivityReport coercivity_check(const std::vector<double>& w_nodes,
                                  const SteadyProfile& profile);

// ---------------------------------------------------------------------------
// Pointwise kernel-expansion remainders. For a pair x != y and a displacement
// w with sup|w'| <= a < 1/2, write dx = x - y, dw = w(x) - w(y),
// de = dx + dw. The five remainders and their envelopes:
//
//   potential_taylor2 : W(de) - W(dx) - W'(dx) dw - (1/2) W''(dx) dw^2
//                       <= 4 (1-s)(3-2s) a |dw|^2 / |dx|^{3-2s}
//   gradient_taylor1  : W'(de) - W'(dx) - W''(dx) dw
//                       <= 2 (1-s)(3-2s) a^2 / |dx|^{2-2s}
//   gradient_diff     : W'(de) - W'(dx)
//                       <= 2 (1-s) a / (1-a)^{3-2s} / |dx|^{2-2s}
//   power3_diff       : 1/|dx|^{3-2s} - 1/|de|^{3-2s}
//                       <= (3-2s) a (1+a) / (1-a)^{5-2s} / |dx|^{3-2s}
//   power4_diff       : 1/|dx|^{4-2s} - 1/|de|^{4-2s}
//                       <= (4-2s) a (1+a) / (1-a)^{6-2s} / |dx|^{4-2s}
enum class RemainderKind {
    potential_taylor2,
    gradient_taylor1,
    gradient_diff,
    power3_diff,
    power4_diff
};

const char* remainder_kind_name(RemainderKind which);

struct RemainderReport {
    double value = 0.0;  // |exact remainder|
    double bound = 0.0;  // envelope at the amplitude hypothesis
    bool pass = false;   // value <= bound * (1 + 1e-8)
};

// Evaluates the exact remainder by its definition and the published envelope.
// a_eps0 is the increment-amplitude hypothesis (must satisfy
// sup|w'| <= a_eps0 < 1/2). Pairs with |x - y| < 10 * machine epsilon are
// rejected with ConfigError, as are hypothesis violations.
RemainderReport remainder_bound_check(RemainderKind which, const TestFunction& w,
                                      double x, double y, const RieszParams& p,
                                      double a_eps0);

// Measured contraction order of one remainder kind: the median over `triples`
// random (w, x, y) of log2(value(amp) / value(amp/2)), with the whole
// displacement scaled down `halvings` times from amplitude a_eps0. The
// expected orders asserted by the verification contract are
// {2, 1, 1, 1, 1}; the Taylor construction of the first two kinds actually
// contracts one order faster ({3, 2}), which the sweep reports as measured.
double remainder_scaling_exponent(RemainderKind which, std::uint64_t seed,
                                  int triples, const RieszParams& p,
                                  double a_eps0, int halvings = 3);

// ---------------------------------------------------------------------------
// Weighted Hardy comparison on (0, 1/2):
//   lhs = int_0^{1/2} x^{k-2} f^2 dx,
//   rhs = int_0^{1/2} x^k (f^2 + f'^2) dx,
// trapezoid on the uniform closed grid carrying f, derivative by centered
// differences (one-sided at the ends). k_exp <= 1 is rejected (ConfigError);
// for k_exp < 2 the weight is singular at 0 and f(0) must vanish.
struct HardyReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;  // lhs / rhs, 0 when rhs = 0
};

HardyReport hardy_check(const std::vector<double>& f_nodes, double k_exp);

// ---------------------------------------------------------------------------
// Weighted-kernel integral bounds for a vanishing-at-the-edges weight:
//   int_{-1}^{1} rho^{-alpha}(y) / |x-y|^{1-2s} dy <= C rho^{2s-alpha}(x).
// For the tent weight 1 - |x| on [-1, 1] the two halves of the integral have
// exact Beta-function values
//   int_{-1}^{x} (1+y)^{-alpha} (x-y)^{2s-1} dy
//     = (1+x)^{2s-alpha} B(1-alpha, 2s)
// (mirror for the other half), which the check reproduces by singular
// quadrature at probe points. For a computed lattice profile the ratio of the
// left side to rho^{2s-alpha}(x) is compared against a frozen family
// constant; because that profile pinches like dist^{1/(gamma-1)} rather than
// linearly, the weight is integrable only for alpha < gamma - 1 and the
// bounded-ratio claim holds only on a fixed interior window (queries are
// restricted to |x| <= window_fraction * radius). Requires 0 < alpha < 1.
struct WeightedKernelReport {
    bool pass = false;
    double worst_dev = 0.0;    // tent: max |quadrature / exact - 1| over probes
    double worst_ratio = 0.0;  // computed: max integral / rho^{2s-alpha}
    double symmetry_dev = 0.0; // tent: max |I(x) - I(-x)| / I(x)
};

WeightedKernelReport weighted_kernel_tent_check(double alpha, const RieszParams& p,
                                                int probe_points, double tol);

WeightedKernelReport weighted_kernel_profile_check(double alpha,
                                                   const SteadyProfile& profile,
                                                   double c_frozen,
                                                   double window_fraction = 0.5);

// Double-integral variant
//   int int rho^{-alpha}(x) rho^{-beta}(y) / |x-y|^{1-2s} dx dy
// for the tent weight; finite iff 1 + 2s > alpha + beta (hypothesis enforced,
// ConfigError otherwise). Returns midpoint-lattice values at n and 2n cells;
// passes when both are finite and the refinement drift is below drift_tol.
struct DoubleIntegralReport {
    bool pass = false;
    double value_coarse = 0.0;
    double value_fine = 0.0;
    double drift = 0.0;  // |fine/coarse - 1|
};

DoubleIntegralReport weighted_kernel_double_check(double alpha, double beta,
                                                  const RieszParams& p,
                                                  int n_cells, double drift_tol);

// ---------------------------------------------------------------------------
// Verification sweeps. Each sweep is deterministic in the seed; reports carry
// the trial count, the number of out-of-contract trials, and the worst value
// of the sweep's headline margin statistic:
//   quadratic_identity  max relative identity defect          (fail > 1e-6)
//   form_negativity     max sum_i h w_i (L w)_i               (fail > 0)
//   coercivity          max 2(1-s)rhs/(gamma lhs)             (fail when lhs
//                       < rhs(1-1e-8) or ratio > 2(1-s)/gamma + 0.05)
//   remainder_bounds    max value/bound                       (fail > 1+1e-8)
//   remainder_scaling   max |measured order - Taylor order|   (fail > 0.2;
//                       Taylor orders are {3, 2, 1, 1, 1} in enum order)
//   hardy_family        max ratio drift under grid doubling   (fail when the
//                       family sup ratio regresses past its frozen value or
//                       drift > 1%)
//   beta_identity       max |quadrature/exact - 1|            (fail > 1e-8)
//   weighted_kernel     computed-profile ratio vs frozen C    (fail when the
//                       frozen constant regresses by > 5%)
struct SweepReport {
    std::string name;
    long trials = 0;
    long failures = 0;
    double worst_margin = 0.0;
};

struct SweepOptions {
    std::uint64_t seed = 20260815;
    int identity_functions = 20;
    int coercivity_functions = 1000;
    int remainder_triples = 10000;
    double remainder_amplitude = 0.05;
    int scaling_triples = 64;
    int hardy_functions = 50;
    int beta_probe_points = 20;
    // Fault-injection switch for the harness: flips the sign of the kernel
    // weights inside the operator assembly so the identity/negativity/
    // coercivity sweeps must fail. Proves the sweeps can reject a broken
    // kernel.
    bool mutate_kernel_sign = false;
};

std::vector<SweepReport> run_verification_sweeps(const SteadyProfile& profile,
                                                 const SweepOptions& options);

bool sweeps_all_pass(const std::vector<SweepReport>& reports);

// JSON array of {failures, name, trials, worst_margin} objects (sorted keys,
// shortest round-trip numbers), used verbatim by the verify subcommand.
std::string sweep_reports_to_json(const std::vector<SweepReport>& reports);

}  // namespace riesz
