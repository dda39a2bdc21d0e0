#include "dicke/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "dicke/kernels.hpp"

namespace dicke {

std::string_view method_name(Method m) noexcept { return m == Method::rk4_fixed ? "rk4_fixed" : "rk_adaptive"; }

Method parse_method(std::string_view name) {
    if (name == "rk4_fixed") return Method::rk4_fixed;
    if (name == "rk_adaptive") return Method::rk_adaptive;
    throw std::invalid_argument("unknown integration method '" + std::string(name) + "'");
}

void IntegratorSettings::validate() const {
    if (step < 0.0 || !std::isfinite(step)) throw std::invalid_argument("step must be > 0 (or 0 for the default)");
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
    if (sample_count < 2) throw std::invalid_argument("sample_count must be >= 2");
}

double default_step(const RampProtocol& protocol, const TimeDependentHamiltonian& h) {
    double dt = 0.01;
    if (protocol.kind() == RampProtocol::Kind::triangular) dt = std::min(dt, 0.01 / protocol.velocity());
    const double bound = h.spectral_bound(protocol.peak());
    if (bound > 0.0) dt = std::min(dt, kStepScale / bound);
    return dt;
}

std::vector<double> sample_times(const RampProtocol& protocol, int count) {
    std::vector<double> t(static_cast<std::size_t>(count));
    const double total = protocol.duration();
    for (int i = 0; i < count; ++i) {
        t[static_cast<std::size_t>(i)] = total * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    t.back() = total;
    return t;
}

namespace {

double norm_of(std::span<const cplx> v) {
    return std::sqrt(kernels::active().real_dot(v.data(), v.data(), v.size()));
}

// (H(lambda) - E) psi into out with E = <psi|H|psi>/<psi|psi>; returns E.
double apply_shifted(const TimeDependentHamiltonian& h, double lambda, std::span<const cplx> psi,
                     std::span<cplx> out, bool shift) {
    const auto& kt = kernels::active();
    h.apply(lambda, 0.0, psi, out);
    if (!shift) return 0.0;
    const double e = kt.real_dot(psi.data(), out.data(), psi.size()) / kt.real_dot(psi.data(), psi.data(), psi.size());
    kt.caxpy(out.data(), cplx(-e, 0.0), psi.data(), psi.size());
    return e;
}

// Dormand-Prince 5(4) with embedded error estimate.
class DormandPrince {
public:
    explicit DormandPrince(const TimeDependentHamiltonian& h) : h_(h) {
        for (auto& k : k_) k.resize(h.dimension());
        stage_.resize(h.dimension());
        err_.resize(h.dimension());
    }

    // Attempts one step; on success psi is advanced and true returned. err_out
    // receives the max-abs local error estimate either way.
    bool attempt(std::span<cplx> psi, double t, double dt, const RampProtocol& protocol, bool shift, double tol,
                 double& err_out) {
        static constexpr std::array<double, 7> c{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
        static constexpr std::array<std::array<double, 6>, 7> a{{
            {},
            {1.0 / 5},
            {3.0 / 40, 9.0 / 40},
            {44.0 / 45, -56.0 / 15, 32.0 / 9},
            {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
            {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
            {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
        }};
        static constexpr std::array<double, 7> e{71.0 / 57600,  0.0,         -71.0 / 16695, 71.0 / 1920,
                                                 -17253.0 / 339200, 22.0 / 525, -1.0 / 40};
        const auto& kt = kernels::active();
        const std::size_t n = psi.size();
        const cplx minus_i_dt(0.0, -dt);

        const double energy = apply_shifted(h_, protocol.lambda_unchecked(t), psi, k_[0], shift);
        for (std::size_t s = 1; s < 7; ++s) {
            std::copy(psi.begin(), psi.end(), stage_.begin());
            for (std::size_t j = 0; j < s; ++j) {
                if (a[s][j] != 0.0) kt.caxpy(stage_.data(), minus_i_dt * a[s][j], k_[j].data(), n);
            }
            h_.apply(protocol.lambda_unchecked(t + c[s] * dt), energy, stage_, k_[s]);
        }
        // Stage 7 input is the 5th-order solution.
        std::fill(err_.begin(), err_.end(), cplx{});
        for (std::size_t j = 0; j < 7; ++j) {
            if (e[j] != 0.0) kt.caxpy(err_.data(), minus_i_dt * e[j], k_[j].data(), n);
        }
        double err = 0.0;
        for (const cplx& v : err_) err = std::max(err, std::abs(v));
        err_out = err;
        if (!(err <= tol)) return false;

        // stage_ holds the 5th-order solution in the shifted frame.
        std::copy(stage_.begin(), stage_.end(), psi.begin());
        if (shift) kt.cscale(psi.data(), std::polar(1.0, -energy * dt), n);
        return true;
    }

private:
    const TimeDependentHamiltonian& h_;
    std::array<std::vector<cplx>, 7> k_;
    std::vector<cplx> stage_, err_;
};

[[noreturn]] void abort_drift(double drift, double t, double dt) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "norm drift " << drift << " exceeds " << kNormDriftAbort << " at t=" << t << " with step size " << dt
        << "; reduce the step (or tolerance)";
    throw NumericalError(msg.str());
}

}  // namespace

Rk4Stepper::Rk4Stepper(const TimeDependentHamiltonian& h)
    : h_(h), hpsi_(h.dimension()), stage_(h.dimension()), acc_(h.dimension()) {}

double Rk4Stepper::step(std::span<cplx> psi, double t, double dt, const RampProtocol& protocol, bool shift) {
    const auto& kt = kernels::active();
    const std::size_t n = psi.size();
    const cplx half(0.0, -0.5 * dt);
    const cplx full(0.0, -dt);
    const cplx sixth(0.0, -dt / 6.0);
    const cplx third(0.0, -dt / 3.0);
    const double lam0 = protocol.lambda_unchecked(t);
    const double lam_mid = protocol.lambda_unchecked(t + 0.5 * dt);
    const double lam1 = protocol.lambda_unchecked(t + dt);

    const double energy = apply_shifted(h_, lam0, psi, hpsi_, shift);
    kt.caxpy_into(acc_.data(), psi.data(), sixth, hpsi_.data(), n);
    kt.caxpy_into(stage_.data(), psi.data(), half, hpsi_.data(), n);

    h_.apply(lam_mid, energy, stage_, hpsi_);
    kt.caxpy(acc_.data(), third, hpsi_.data(), n);
    kt.caxpy_into(stage_.data(), psi.data(), half, hpsi_.data(), n);

    h_.apply(lam_mid, energy, stage_, hpsi_);
    kt.caxpy(acc_.data(), third, hpsi_.data(), n);
    kt.caxpy_into(stage_.data(), psi.data(), full, hpsi_.data(), n);

    h_.apply(lam1, energy, stage_, hpsi_);
    kt.caxpy(acc_.data(), sixth, hpsi_.data(), n);

    std::copy(acc_.begin(), acc_.end(), psi.begin());
    if (shift) kt.cscale(psi.data(), std::polar(1.0, -energy * dt), n);
    return energy;
}

TrajectorySummary evolve_amplitudes(const TimeDependentHamiltonian& h, std::vector<cplx>& psi,
                                    const RampProtocol& protocol, const IntegratorSettings& settings,
                                    const AmplitudeSink& sink) {
    settings.validate();
    if (psi.size() != h.dimension()) throw std::invalid_argument("state dimension does not match the Hamiltonian");
    const double norm0 = norm_of(psi);
    if (std::abs(norm0 - 1.0) > 1e-10) throw std::invalid_argument("initial state is not normalized");

    TrajectorySummary summary;
    summary.renormalized = settings.renormalize;
    summary.times = sample_times(protocol, settings.sample_count);
    for (double t : summary.times) summary.lambdas.push_back(protocol.lambda_at(t));

    // Sample times and protocol kinks are exact step boundaries.
    std::vector<double> breaks = summary.times;
    for (double k : protocol.kinks()) breaks.push_back(k);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    const bool fixed = settings.method == Method::rk4_fixed;
    const double dt_target = settings.step > 0.0 ? settings.step : default_step(protocol, h);
    summary.step_used = dt_target;

    Rk4Stepper rk4(h);
    DormandPrince dp(h);
    double adaptive_dt = dt_target;
    double min_accepted = dt_target;
    std::size_t next_sample = 0;
    const auto& kt = kernels::active();

    auto check_norm = [&](double t, double dt) {
        const double drift = std::abs(norm_of(psi) - 1.0);
        summary.max_norm_drift = std::max(summary.max_norm_drift, drift);
        if (drift > kNormDriftAbort) abort_drift(drift, t, dt);
        if (settings.renormalize) {
            kt.cscale(psi.data(), cplx(1.0 / norm_of(psi), 0.0), psi.size());
        }
    };

    for (std::size_t b = 0; b < breaks.size(); ++b) {
        const double t_here = breaks[b];
        if (next_sample < summary.times.size() && summary.times[next_sample] == t_here) {
            sink({next_sample, t_here, summary.lambdas[next_sample]}, psi);
            ++next_sample;
        }
        if (b + 1 == breaks.size()) break;
        const double t_next = breaks[b + 1];
        const double span = t_next - t_here;

        if (fixed) {
            const auto nsteps = static_cast<std::size_t>(std::max(1.0, std::ceil(span / dt_target - 1e-9)));
            const double dt = span / static_cast<double>(nsteps);
            for (std::size_t s = 0; s < nsteps; ++s) {
                const double t = t_here + static_cast<double>(s) * dt;
                rk4.step(psi, t, dt, protocol, settings.energy_shift);
                ++summary.steps;
                if (settings.renormalize) check_norm(t + dt, dt);
            }
            check_norm(t_next, dt);
        } else {
            double t = t_here;
            while (t < t_next) {
                const double remaining = t_next - t;
                const bool last = adaptive_dt >= remaining * (1.0 - 1e-12);
                const double dt = last ? remaining : adaptive_dt;
                double err = 0.0;
                const bool ok = dp.attempt(psi, t, dt, protocol, settings.energy_shift, settings.tolerance, err);
                const double factor = err > 0.0 ? 0.9 * std::pow(settings.tolerance / err, 0.2) : 5.0;
                if (ok) {
                    t = last ? t_next : t + dt;
                    ++summary.steps;
                    if (!last) min_accepted = std::min(min_accepted, dt);
                    adaptive_dt = dt * std::clamp(factor, 0.2, 5.0);
                    if (last) adaptive_dt = std::max(adaptive_dt, dt);
                    if (settings.renormalize) check_norm(t, dt);
                } else {
                    ++summary.rejected_steps;
                    adaptive_dt = dt * std::clamp(factor, 0.1, 0.9);
                    if (adaptive_dt < 1e-12 * std::max(1.0, protocol.duration())) {
                        throw NumericalError("adaptive step collapsed below 1e-12 at t=" + std::to_string(t));
                    }
                }
            }
            check_norm(t_next, adaptive_dt);
        }
    }
    if (!fixed) summary.step_used = min_accepted;
    summary.final_norm_drift = std::abs(norm_of(psi) - 1.0);
    return summary;
}

Trajectory evolve(const StateVector& psi0, const RampProtocol& protocol, const IntegratorSettings& settings,
                  const StateSink& sink) {
    DickeHamiltonian h(psi0.basis_ptr());
    std::vector<cplx> amps(psi0.amplitudes().begin(), psi0.amplitudes().end());
    // The sink sees a StateVector view refreshed at each sample.
    StateVector view(psi0.basis_ptr());
    auto summary = evolve_amplitudes(h, amps, protocol, settings, [&](const SamplePoint& sp, std::span<const cplx> a) {
        std::copy(a.begin(), a.end(), view.amplitudes().begin());
        if (sink) sink(sp, view);
    });
    return {std::move(summary), StateVector(psi0.basis_ptr(), std::move(amps))};
}

StateVector step_fixed(const StateVector& psi, double t, double dt, const RampProtocol& protocol, bool energy_shift) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    DickeHamiltonian h(psi.basis_ptr());
    Rk4Stepper stepper(h);
    StateVector out = psi;
    stepper.step(out.amplitudes(), t, dt, protocol, energy_shift);
    return out;
}

}  // namespace dicke
