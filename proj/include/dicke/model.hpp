#pragma once
// Truncated Hilbert space of the Dicke model and its Hamiltonian
//
//   H(lambda) = eps J_z + omega a^dag a + (2 lambda / sqrt(N)) J_x (a^dag + a)
//
// restricted to the maximal angular momentum J = N/2 and a Fock cut n <= chi.

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/SparseCore>

namespace dicke {

using cplx = std::complex<double>;

// Raised when a computed quantity violates a physical or numerical invariant.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Sector { parity_even, full_product };

std::string_view sector_name(Sector s) noexcept;
Sector parse_sector(std::string_view name);

struct ModelParams {
    int n_qubits = 1;
    double qubit_freq = 1.0;
    double field_freq = 1.0;
    int fock_cut = 0;
    Sector sector = Sector::parity_even;

    // Throws std::invalid_argument describing the first violated constraint.
    void validate() const;

    double spin() const noexcept { return 0.5 * n_qubits; }
    // sqrt(eps * omega) / 2
    double critical_coupling() const noexcept;

    bool operator==(const ModelParams&) const = default;
};

// A joint state |m_z, n>. m_z is stored doubled so that odd N stays integral.
struct BasisState {
    int two_mz;
    int n;

    double mz() const noexcept { return 0.5 * two_mz; }
    bool operator==(const BasisState&) const = default;
};

// Ordered basis, lexicographic in (m_z, n). States sharing the same number of
// matter excitations k = m_z + N/2 form a contiguous block whose Fock numbers
// are first_fock(k), first_fock(k) + stride, ...
class Basis {
public:
    static constexpr std::size_t kMaxStates = std::size_t{1} << 28;

    const ModelParams& params() const noexcept { return params_; }
    std::size_t size() const noexcept { return states_.size(); }
    std::span<const BasisState> states() const noexcept { return states_; }
    const BasisState& operator[](std::size_t i) const noexcept { return states_[i]; }

    std::optional<std::size_t> index_of(int two_mz, int n) const noexcept;

    int excitations_max() const noexcept { return params_.n_qubits; }
    std::size_t block_offset(int k) const noexcept { return block_offset_[static_cast<std::size_t>(k)]; }
    std::size_t block_size(int k) const noexcept {
        return block_offset_[static_cast<std::size_t>(k) + 1] - block_offset_[static_cast<std::size_t>(k)];
    }
    int first_fock(int k) const noexcept;
    int fock_stride() const noexcept { return params_.sector == Sector::parity_even ? 2 : 1; }

private:
    friend std::shared_ptr<const Basis> build_basis(const ModelParams& params);
    explicit Basis(const ModelParams& params) : params_(params) {}

    ModelParams params_;
    std::vector<BasisState> states_;
    std::vector<std::size_t> block_offset_;
};

using BasisPtr = std::shared_ptr<const Basis>;

BasisPtr build_basis(const ModelParams& params);

class StateVector {
public:
    explicit StateVector(BasisPtr basis);
    StateVector(BasisPtr basis, std::vector<cplx> amps);

    const Basis& basis() const noexcept { return *basis_; }
    const BasisPtr& basis_ptr() const noexcept { return basis_; }
    std::size_t size() const noexcept { return amps_.size(); }

    std::span<cplx> amplitudes() noexcept { return amps_; }
    std::span<const cplx> amplitudes() const noexcept { return amps_; }
    cplx& operator[](std::size_t i) noexcept { return amps_[i]; }
    const cplx& operator[](std::size_t i) const noexcept { return amps_[i]; }

    double norm() const noexcept;

private:
    BasisPtr basis_;
    std::vector<cplx> amps_;
};

// Generator interface shared by the symmetric-sector model and the full-space
// verification model: out = (H(lambda) - shift) * in.
class TimeDependentHamiltonian {
public:
    virtual ~TimeDependentHamiltonian() = default;
    virtual std::size_t dimension() const noexcept = 0;
    virtual void apply(double lambda, double shift, std::span<const cplx> in, std::span<cplx> out) const = 0;
    // Upper bound on the spectral radius of H(lambda).
    virtual double spectral_bound(double lambda) const = 0;
};

// Cached split H = H_diag + lambda * H_coup. The coupling is stored as runs of
// contiguous (dst, src) index pairs with real weights, so applying it is a
// sequence of weighted axpy kernel calls.
class DickeHamiltonian final : public TimeDependentHamiltonian {
public:
    explicit DickeHamiltonian(BasisPtr basis);

    const Basis& basis() const noexcept { return *basis_; }
    const BasisPtr& basis_ptr() const noexcept { return basis_; }

    std::size_t dimension() const noexcept override { return diag_.size(); }
    void apply(double lambda, double shift, std::span<const cplx> in, std::span<cplx> out) const override;
    double spectral_bound(double lambda) const override;

    std::span<const double> diagonal() const noexcept { return diag_; }

private:
    struct Run {
        std::size_t dst;
        std::size_t src;
        std::size_t len;
        std::size_t weight_offset;
    };

    BasisPtr basis_;
    std::vector<double> diag_;
    std::vector<Run> runs_;
    std::vector<double> weights_;
    std::vector<double> coupling_row_abs_;
};

// H(lambda) psi. Throws std::invalid_argument if psi belongs to another basis.
StateVector apply_hamiltonian(const Basis& basis, double lambda, const StateVector& psi);

// Materialized H(lambda), assembled directly from the ladder rules. Intended for
// tests and small diagnostics; rejects bases larger than kMaxMatrixDimension.
inline constexpr std::size_t kMaxMatrixDimension = 20000;
Eigen::SparseMatrix<double> hamiltonian_matrix(const Basis& basis, double lambda);

// Unit amplitude on |-N/2, 0>.
StateVector initial_state(const BasisPtr& basis);

// sum (-1)^(n + m_z + N/2) |amp|^2
double parity_expectation(const StateVector& psi);

// Total population on states with n = chi.
double boundary_population(const StateVector& psi);

}  // namespace dicke
