#pragma once
// Diagnostics extracted from an instantaneous state of the light-matter system.

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "dicke/model.hpp"

namespace dicke {

// Amplitudes reshaped into an (N+1) x (chi+1) matrix: row k holds
// m_z = k - N/2, column n the Fock number. Parity-forbidden slots are zero.
class CoefficientMatrix {
public:
    explicit CoefficientMatrix(const StateVector& psi);
    CoefficientMatrix(Eigen::MatrixXcd values, int n_qubits);

    const Eigen::MatrixXcd& values() const noexcept { return c_; }
    int n_qubits() const noexcept { return n_qubits_; }
    int rows() const noexcept { return static_cast<int>(c_.rows()); }
    int cols() const noexcept { return static_cast<int>(c_.cols()); }
    cplx at(int two_mz, int n) const { return c_((two_mz + n_qubits_) / 2, n); }

    // Inverse reshape onto a basis with matching N and chi.
    StateVector to_state(const BasisPtr& basis) const;

private:
    Eigen::MatrixXcd c_;
    int n_qubits_;
};

struct Populations {
    std::vector<double> qubit;  // <m_z|rho_Q|m_z>, index k = m_z + N/2
    std::vector<double> boson;  // <n|rho_B|n>
};

Populations subsystem_populations(const CoefficientMatrix& c);

struct QuadratureMoments {
    double mean_x = 0.0;
    double mean_p = 0.0;
    double var_x = 0.5;
    double var_p = 0.5;
    double cov_xp = 0.0;  // symmetrized

    double heisenberg_determinant() const noexcept { return var_x * var_p - cov_xp * cov_xp; }
};

// x = (a + a^dag)/sqrt 2, p = i(a^dag - a)/sqrt 2.
QuadratureMoments quadrature_moments(const CoefficientMatrix& c);
QuadratureMoments quadrature_moments(const StateVector& psi);

// Var(x) + Var(p) - sqrt((Var(x) - Var(p))^2 + 4 Cov^2); below 1 means squeezed.
double boson_squeezing(const QuadratureMoments& m);

// First moments <J_a> and symmetrized second moments <{J_a, J_b}>/2 for
// a, b in {x, y, z} (index 0, 1, 2).
struct CollectiveCorrelators {
    std::array<double, 3> mean{};
    std::array<std::array<double, 3>, 3> second{};

    double total_spin_squared() const noexcept { return second[0][0] + second[1][1] + second[2][2]; }
};

CollectiveCorrelators collective_correlators(const CoefficientMatrix& c);
CollectiveCorrelators collective_correlators(const StateVector& psi);

// Basis order {up-up, up-down, down-up, down-down}.
using TwoQubitRdm = Eigen::Matrix4cd;

inline constexpr double kPsdTolerance = 1e-9;

// Pair density matrix of a permutation-symmetric N-qubit state rebuilt from
// collective correlators. Throws NumericalError if the result is not positive
// semidefinite within kPsdTolerance, std::invalid_argument if N < 2.
TwoQubitRdm two_qubit_rdm(const CollectiveCorrelators& corr, int n_qubits);

// Checks the pair-RDM invariants (Hermitian, unit trace, PSD, exchange
// symmetric); throws NumericalError naming the violation.
void check_two_qubit_rdm(const TwoQubitRdm& rho);

// Eigenvalues of rho at or below this are treated as round-off in concurrence().
inline constexpr double kConcurrenceCutoff = 1e-14;

// Wootters concurrence in [0, 1].
double concurrence(const TwoQubitRdm& rho);

// 1 - (N - 1) c_w
double spin_squeezing(double c_w, int n_qubits);

// Singular values of the coefficient matrix, descending; length min(N+1, chi+1).
std::vector<double> schmidt_spectrum(const CoefficientMatrix& c);

// |S_1^2 - S_2^2|. Requires at least two coefficients.
double schmidt_gap(const std::vector<double>& spectrum);

// <a^dag a> / (N/2)
double order_parameter(const StateVector& psi);
double mean_photon_number(const CoefficientMatrix& c);

inline constexpr double kMonogamyTolerance = 1e-9;

// Everything the run record carries for one sample.
struct ObservableRecord {
    double photons = 0.0;
    double jz = 0.0;
    double order_parameter = 0.0;
    double xi_b2 = 1.0;
    double c_w = 0.0;
    double xi_q2 = 1.0;
    double schmidt_gap = 1.0;
    double s1_sq = 1.0;
    double s2_sq = 0.0;
    double norm = 1.0;
    double parity = 1.0;
    double j_squared = 0.0;
    double boundary_population = 0.0;
    // (N-1) c_w > 1 + kMonogamyTolerance, i.e. xi_q2 < 0. Flagged, never clamped.
    bool monogamy_violated = false;
    Populations populations;
    std::vector<double> spectrum;
};

ObservableRecord measure(const StateVector& psi);

}  // namespace dicke
