#pragma once
// Brute-force reference: the same dynamics on the full 2^N x (chi+1) product
// space with J_a = (1/2) sum_i sigma_a^(i), and observables computed from
// dense operators. Only meant for N <= 5 and chi <= 32.

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dicke/integrator.hpp"
#include "dicke/model.hpp"
#include "dicke/observables.hpp"

namespace dicke::oracle {

inline constexpr int kMaxQubits = 5;
inline constexpr int kMaxFockCut = 32;

struct FullSpaceModel {
    int n_qubits = 2;
    int fock_cut = 8;
    double qubit_freq = 1.0;
    double field_freq = 1.0;

    // Throws std::invalid_argument outside the dimension guard.
    void check() const;
    std::size_t configurations() const noexcept { return std::size_t{1} << n_qubits; }
    std::size_t dimension() const noexcept { return configurations() * static_cast<std::size_t>(fock_cut + 1); }
};

// Amplitude of |config, n> at config * (chi + 1) + n; bit i of config set means
// qubit i is up.
struct FullSpaceState {
    FullSpaceModel model;
    std::vector<cplx> amps;

    // 2^N x (chi+1) coefficient matrix.
    Eigen::MatrixXcd matrix() const;
};

FullSpaceState full_initial_state(const FullSpaceModel& model);

// Sparse CSR Hamiltonian built from Pauli strings.
class FullSpaceHamiltonian final : public TimeDependentHamiltonian {
public:
    explicit FullSpaceHamiltonian(const FullSpaceModel& model);

    std::size_t dimension() const noexcept override { return diag_.size(); }
    void apply(double lambda, double shift, std::span<const cplx> in, std::span<cplx> out) const override;
    double spectral_bound(double lambda) const override;

    Eigen::MatrixXd dense(double lambda) const;

private:
    std::vector<double> diag_;
    std::vector<std::size_t> row_start_;
    std::vector<std::size_t> cols_;
    std::vector<double> vals_;
};

using FullSink = std::function<void(const SamplePoint&, const FullSpaceState&)>;

struct FullTrajectory {
    TrajectorySummary summary;
    FullSpaceState final_state;
};

FullTrajectory full_evolve(const FullSpaceModel& model, const RampProtocol& protocol,
                           const IntegratorSettings& settings, const FullSink& sink);

// Explicit trace over the field and qubits 2..N-1.
TwoQubitRdm partial_trace_pair(const FullSpaceState& state);

// All singular values of the 2^N x (chi+1) coefficient matrix, descending.
std::vector<double> schmidt_direct(const FullSpaceState& state);

// Amplitudes on the symmetric Dicke states |J=N/2, m_z> x |n>, written into a
// basis with matching N and chi (either sector).
StateVector project_to_dicke(const FullSpaceState& state, const BasisPtr& basis);

// Record quantities from dense operators on the full space.
ObservableRecord full_measure(const FullSpaceState& state);

}  // namespace dicke::oracle
