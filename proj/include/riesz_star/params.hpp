#pragma once

#include <stdexcept>
#include <string>

namespace riesz {

// Model parameters for the attractive Riesz interaction W_k(x) = |x|^k / k,
// k = 2s - 1 in (-1, 0), together with the adiabatic exponent gamma.
// The supercritical existence regime is gamma > 2(1-s); the stronger regime
// used by the stability theory is 3/8 < s < 1/2 and 2(1-s) < gamma < 1 + 2s/3.
struct RieszParams {
    double s = 0.45;
    double gamma = 1.2;

    double k() const { return 2.0 * s - 1.0; }
    double gamma_supercritical() const { return 2.0 * (1.0 - s); }
    double gamma_wellposed_upper() const { return 1.0 + 2.0 * s / 3.0; }

    bool in_supercritical_regime() const {
        return s > 0.0 && s < 0.5 && gamma > gamma_supercritical();
    }
    bool in_strict_regime() const {
        return s > 3.0 / 8.0 && s < 0.5 && gamma > gamma_supercritical() &&
               gamma < gamma_wellposed_upper();
    }

    // Throws std::invalid_argument unless 0 < s < 1/2 and gamma > 2(1-s).
    // With require_strict also enforces 3/8 < s and gamma < 1 + 2s/3.
    void validate(bool require_strict = false) const;
};

// Thrown on parameter/regime violations (mapped to exit code 2 by the CLI).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace riesz
