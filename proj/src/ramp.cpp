#include "dicke/ramp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dicke {

RampProtocol RampProtocol::triangular(double velocity) {
    if (!(velocity > 0.0) || !std::isfinite(velocity)) {
        throw std::invalid_argument("annealing velocity must be finite and > 0");
    }
    RampProtocol p;
    p.kind_ = Kind::triangular;
    p.velocity_ = velocity;
    p.tau_ = 1.0 / velocity;
    p.duration_ = 2.0 * p.tau_;
    return p;
}

RampProtocol RampProtocol::from_gamma(double gamma) {
    if (!std::isfinite(gamma)) throw std::invalid_argument("gamma must be finite");
    return triangular(std::exp2(gamma));
}

RampProtocol RampProtocol::constant(double value, double duration) {
    if (!(value >= 0.0) || !std::isfinite(value)) throw std::invalid_argument("constant coupling must be >= 0");
    if (!(duration > 0.0) || !std::isfinite(duration)) throw std::invalid_argument("duration must be > 0");
    RampProtocol p;
    p.kind_ = Kind::constant;
    p.value_ = value;
    p.duration_ = duration;
    return p;
}

double RampProtocol::gamma() const noexcept { return kind_ == Kind::triangular ? std::log2(velocity_) : 0.0; }

double RampProtocol::lambda_unchecked(double t) const noexcept {
    if (kind_ == Kind::constant) return value_;
    return t <= tau_ ? velocity_ * t : velocity_ * (duration_ - t);
}

double RampProtocol::lambda_at(double t) const {
    if (!(t >= 0.0 && t <= duration_)) {
        throw std::out_of_range("t = " + std::to_string(t) + " outside pulse [0, " + std::to_string(duration_) + "]");
    }
    return lambda_unchecked(t);
}

std::vector<double> RampProtocol::kinks() const {
    if (kind_ == Kind::triangular) return {tau_};
    return {};
}

std::vector<double> critical_crossings(const RampProtocol& protocol, double lambda_c) {
    if (protocol.kind() != RampProtocol::Kind::triangular) {
        throw std::invalid_argument("critical crossings are defined for triangular pulses only");
    }
    if (!(lambda_c > 0.0 && lambda_c < protocol.peak())) {
        throw std::invalid_argument("lambda_c = " + std::to_string(lambda_c) + " is never crossed by a pulse of peak " +
                                    std::to_string(protocol.peak()));
    }
    const double up = lambda_c / protocol.velocity();
    return {up, protocol.duration() - up};
}

}  // namespace dicke
