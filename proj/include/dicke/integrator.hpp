#pragma once
// Time propagation of d psi/dt = -i H(lambda(t)) psi over a coupling protocol.

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "dicke/model.hpp"
#include "dicke/ramp.hpp"

namespace dicke {

enum class Method { rk4_fixed, rk_adaptive };

std::string_view method_name(Method m) noexcept;
Method parse_method(std::string_view name);

struct IntegratorSettings {
    Method method = Method::rk4_fixed;
    // Fixed step; 0 selects default_step().
    double step = 0.0;
    // Local error tolerance of the adaptive method (max-abs per accepted step).
    double tolerance = 1e-11;
    bool renormalize = false;
    int sample_count = 400;
    // Propagate H(lambda) - E where E is the mean energy at the start of each
    // step, then restore the phase exp(-i E dt) exactly. The emitted state is
    // the lab-frame state either way.
    bool energy_shift = true;

    void validate() const;
};

// Step used by rk4_fixed when settings.step == 0: min(0.01, 0.01 / v) further
// capped by the stability and accuracy limit kStepScale / ||H(peak)||.
inline constexpr double kStepScale = 0.25;
double default_step(const RampProtocol& protocol, const TimeDependentHamiltonian& h);

// Drift |norm - 1| above this aborts evolve with a NumericalError.
inline constexpr double kNormDriftAbort = 1e-6;

struct SamplePoint {
    std::size_t index;
    double t;
    double lambda;
};

struct TrajectorySummary {
    std::vector<double> times;
    std::vector<double> lambdas;
    std::size_t steps = 0;
    std::size_t rejected_steps = 0;
    double step_used = 0.0;  // fixed step, or smallest accepted adaptive step
    double max_norm_drift = 0.0;
    double final_norm_drift = 0.0;
    bool renormalized = false;
};

// Uniform sample grid t_i = i * duration / (count - 1).
std::vector<double> sample_times(const RampProtocol& protocol, int count);

using AmplitudeSink = std::function<void(const SamplePoint&, std::span<const cplx>)>;

// Core propagation loop, independent of the basis. psi holds the initial
// amplitudes on entry and the final amplitudes on return.
TrajectorySummary evolve_amplitudes(const TimeDependentHamiltonian& h, std::vector<cplx>& psi,
                                    const RampProtocol& protocol, const IntegratorSettings& settings,
                                    const AmplitudeSink& sink);

using StateSink = std::function<void(const SamplePoint&, const StateVector&)>;

struct Trajectory {
    TrajectorySummary summary;
    StateVector final_state;
};

Trajectory evolve(const StateVector& psi0, const RampProtocol& protocol, const IntegratorSettings& settings,
                  const StateSink& sink);

// One classical RK4 step of size dt from time t in the lab frame, with lambda
// evaluated at the stage times.
class Rk4Stepper {
public:
    explicit Rk4Stepper(const TimeDependentHamiltonian& h);

    // Returns the energy shift used (0 when shift is false).
    double step(std::span<cplx> psi, double t, double dt, const RampProtocol& protocol, bool shift);

private:
    const TimeDependentHamiltonian& h_;
    std::vector<cplx> hpsi_, stage_, acc_;
};

// One step as taken by evolve; energy_shift as in IntegratorSettings.
StateVector step_fixed(const StateVector& psi, double t, double dt, const RampProtocol& protocol,
                       bool energy_shift = true);

}  // namespace dicke
