#include "riesz_star/params.hpp"

#include <sstream>

namespace riesz {

void RieszParams::validate(bool require_strict) const {
    if (!(s > 0.0 && s < 0.5)) {
        std::ostringstream os;
        os << "s = " << s << " outside (0, 1/2)";
        throw ConfigError(os.str());
    }
    if (!(gamma > gamma_supercritical())) {
        std::ostringstream os;
        os << "gamma = " << gamma << " not above the supercritical threshold 2(1-s) = "
           << gamma_supercritical();
        throw ConfigError(os.str());
    }
    if (require_strict && !in_strict_regime()) {
        std::ostringstream os;
        os << "(s, gamma) = (" << s << ", " << gamma
           << ") outside the strict regime 3/8 < s < 1/2, 2(1-s) < gamma < 1 + 2s/3";
        throw ConfigError(os.str());
    }
}

} // namespace riesz
