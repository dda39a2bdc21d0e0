#pragma once
// Coupling protocols lambda(t).

#include <vector>

namespace dicke {

// Triangular pulse: lambda rises with slope v from 0 to 1 over tau = 1/v and
// falls back to 0 over another tau. The constant protocol holds a fixed
// coupling over an explicit duration and exists for static tests.
class RampProtocol {
public:
    enum class Kind { triangular, constant };

    static RampProtocol triangular(double velocity);
    static RampProtocol from_gamma(double gamma);
    static RampProtocol constant(double value, double duration);

    Kind kind() const noexcept { return kind_; }
    double velocity() const noexcept { return velocity_; }
    double gamma() const noexcept;
    double tau() const noexcept { return tau_; }
    double duration() const noexcept { return duration_; }
    double constant_value() const noexcept { return value_; }
    double peak() const noexcept { return kind_ == Kind::triangular ? 1.0 : value_; }

    // Throws std::out_of_range outside [0, duration].
    double lambda_at(double t) const;
    // Same as lambda_at without the range check (used at RK stage times).
    double lambda_unchecked(double t) const noexcept;

    // Interior times where the slope changes; the integrator aligns steps to them.
    std::vector<double> kinks() const;

private:
    RampProtocol() = default;

    Kind kind_ = Kind::constant;
    double velocity_ = 0.0;
    double tau_ = 0.0;
    double duration_ = 0.0;
    double value_ = 0.0;
};

// Times at which a triangular pulse crosses lambda_c, ascending. Throws
// std::invalid_argument for constant protocols or if lambda_c is not strictly
// between 0 and the peak.
std::vector<double> critical_crossings(const RampProtocol& protocol, double lambda_c);

}  // namespace dicke
