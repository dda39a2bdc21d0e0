#include "dicke/lzs.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dicke::lzs {

namespace {
void require_velocity(double velocity) {
    if (!(velocity > 0.0)) throw std::invalid_argument("velocity must be > 0");
}
}  // namespace

double p_lz(double gap, double velocity) {
    require_velocity(velocity);
    if (gap < 0.0) throw std::invalid_argument("gap must be >= 0");
    return std::exp(-2.0 * std::numbers::pi * gap * gap / (4.0 * velocity));
}

double p_plus_double(double gap, double velocity, double phase) {
    const double p = p_lz(gap, velocity);
    const double s = std::sin(phase);
    return 4.0 * p * (1.0 - p) * s * s;
}

double p_plus_averaged(double gap, double velocity) {
    const double p = p_lz(gap, velocity);
    return 2.0 * p * (1.0 - p);
}

double peak_velocity(double gap) {
    if (!(gap > 0.0)) throw std::invalid_argument("peak velocity needs a positive gap");
    return std::numbers::pi * gap * gap / (2.0 * std::numbers::ln2);
}

}  // namespace dicke::lzs
