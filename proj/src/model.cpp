#include "dicke/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dicke/kernels.hpp"

namespace dicke {

std::string_view sector_name(Sector s) noexcept {
    return s == Sector::parity_even ? "parity_even" : "full_product";
}

Sector parse_sector(std::string_view name) {
    if (name == "parity_even") return Sector::parity_even;
    if (name == "full_product") return Sector::full_product;
    throw std::invalid_argument("unknown sector '" + std::string(name) + "'");
}

void ModelParams::validate() const {
    if (n_qubits < 1) throw std::invalid_argument("n_qubits must be >= 1");
    if (fock_cut < 0) throw std::invalid_argument("fock_cut must be >= 0");
    if (!(qubit_freq > 0.0) || !std::isfinite(qubit_freq)) {
        throw std::invalid_argument("qubit_freq must be finite and > 0");
    }
    if (!(field_freq > 0.0) || !std::isfinite(field_freq)) {
        throw std::invalid_argument("field_freq must be finite and > 0");
    }
}

double ModelParams::critical_coupling() const noexcept { return 0.5 * std::sqrt(qubit_freq * field_freq); }

int Basis::first_fock(int k) const noexcept {
    return params_.sector == Sector::parity_even ? (k & 1) : 0;
}

std::optional<std::size_t> Basis::index_of(int two_mz, int n) const noexcept {
    const int big_n = params_.n_qubits;
    if (((two_mz + big_n) & 1) != 0) return std::nullopt;
    const int k = (two_mz + big_n) / 2;
    if (k < 0 || k > big_n || n < 0 || n > params_.fock_cut) return std::nullopt;
    const int first = first_fock(k);
    const int stride = fock_stride();
    if (n < first || (n - first) % stride != 0) return std::nullopt;
    return block_offset(k) + static_cast<std::size_t>((n - first) / stride);
}

BasisPtr build_basis(const ModelParams& params) {
    params.validate();
    const auto rows = static_cast<unsigned long long>(params.n_qubits) + 1;
    const auto cols = static_cast<unsigned long long>(params.fock_cut) + 1;
    if (cols > std::numeric_limits<unsigned long long>::max() / rows || rows * cols > Basis::kMaxStates) {
        throw std::invalid_argument("basis of (N+1)(chi+1) = " + std::to_string(rows) + "x" +
                                    std::to_string(cols) + " states exceeds the index range");
    }

    auto basis = std::shared_ptr<Basis>(new Basis(params));
    const int big_n = params.n_qubits;
    basis->block_offset_.reserve(static_cast<std::size_t>(big_n) + 2);
    basis->states_.reserve(params.sector == Sector::parity_even ? (rows * cols + 1) / 2 : rows * cols);
    for (int k = 0; k <= big_n; ++k) {
        basis->block_offset_.push_back(basis->states_.size());
        for (int n = basis->first_fock(k); n <= params.fock_cut; n += basis->fock_stride()) {
            basis->states_.push_back({2 * k - big_n, n});
        }
    }
    basis->block_offset_.push_back(basis->states_.size());
    return basis;
}

StateVector::StateVector(BasisPtr basis) : basis_(std::move(basis)), amps_(basis_->size()) {}

StateVector::StateVector(BasisPtr basis, std::vector<cplx> amps) : basis_(std::move(basis)), amps_(std::move(amps)) {
    if (amps_.size() != basis_->size()) {
        throw std::invalid_argument("amplitude count does not match basis size");
    }
}

double StateVector::norm() const noexcept {
    return std::sqrt(kernels::active().real_dot(amps_.data(), amps_.data(), amps_.size()));
}

namespace {

// sqrt(J(J+1) - m(m+1)) for m = k - J, i.e. <k+1| J_+ |k>.
double raising_factor(int big_n, int k) {
    const double j = 0.5 * big_n;
    const double m = k - j;
    return std::sqrt(std::max(0.0, j * (j + 1.0) - m * (m + 1.0)));
}

}  // namespace

DickeHamiltonian::DickeHamiltonian(BasisPtr basis) : basis_(std::move(basis)) {
    const Basis& b = *basis_;
    const ModelParams& p = b.params();
    const int big_n = p.n_qubits;
    const double g = 1.0 / std::sqrt(static_cast<double>(big_n));

    diag_.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        diag_[i] = p.qubit_freq * b[i].mz() + p.field_freq * b[i].n;
    }
    coupling_row_abs_.assign(b.size(), 0.0);

    // Couplings between excitation blocks k and k+1, photon number shifted by
    // +1 or -1, in both directions. Each (block pair, shift, direction) yields
    // index runs where source and destination both advance by one.
    for (int k = 0; k < big_n; ++k) {
        const double s = raising_factor(big_n, k) * g;
        for (int dn : {+1, -1}) {
            for (bool upward : {true, false}) {
                const int src_k = upward ? k : k + 1;
                const int dst_k = upward ? k + 1 : k;
                // Photon shift seen from the source block.
                const int shift = upward ? dn : -dn;
                const std::size_t src_begin = b.block_offset(src_k);
                const std::size_t src_size = b.block_size(src_k);
                std::optional<Run> open;
                for (std::size_t j = 0; j < src_size; ++j) {
                    const std::size_t src = src_begin + j;
                    const int n_src = b[src].n;
                    const int n_dst = n_src + shift;
                    const auto dst = b.index_of(2 * dst_k - big_n, n_dst);
                    const double fock = std::sqrt(static_cast<double>(std::max(n_src, n_dst)));
                    if (!dst || fock == 0.0) {
                        if (open) runs_.push_back(*open), open.reset();
                        continue;
                    }
                    if (open && open->src + open->len == src && open->dst + open->len == *dst) {
                        ++open->len;
                    } else {
                        if (open) runs_.push_back(*open);
                        open = Run{*dst, src, 1, weights_.size()};
                    }
                    weights_.push_back(s * fock);
                    coupling_row_abs_[*dst] += s * fock;
                }
                if (open) runs_.push_back(*open);
            }
        }
    }
}

void DickeHamiltonian::apply(double lambda, double shift, std::span<const cplx> in, std::span<cplx> out) const {
    const auto& kt = kernels::active();
    kt.diag_mul(out.data(), diag_.data(), shift, in.data(), diag_.size());
    if (lambda == 0.0) return;
    for (const Run& r : runs_) {
        kt.weighted_axpy(out.data() + r.dst, weights_.data() + r.weight_offset, lambda, in.data() + r.src, r.len);
    }
}

double DickeHamiltonian::spectral_bound(double lambda) const {
    double bound = 0.0;
    for (std::size_t i = 0; i < diag_.size(); ++i) {
        bound = std::max(bound, std::abs(diag_[i]) + std::abs(lambda) * coupling_row_abs_[i]);
    }
    return bound;
}

StateVector apply_hamiltonian(const Basis& basis, double lambda, const StateVector& psi) {
    if (&psi.basis() != &basis && !(psi.basis().params() == basis.params())) {
        throw std::invalid_argument("state vector belongs to a different basis");
    }
    DickeHamiltonian h(psi.basis_ptr());
    StateVector out(psi.basis_ptr());
    h.apply(lambda, 0.0, psi.amplitudes(), out.amplitudes());
    return out;
}

Eigen::SparseMatrix<double> hamiltonian_matrix(const Basis& basis, double lambda) {
    if (basis.size() > kMaxMatrixDimension) {
        throw std::invalid_argument("basis dimension " + std::to_string(basis.size()) +
                                    " exceeds the dense-diagnostic guard");
    }
    const ModelParams& p = basis.params();
    const double j = p.spin();
    const double g = 2.0 * lambda / std::sqrt(static_cast<double>(p.n_qubits));
    std::vector<Eigen::Triplet<double>> entries;
    for (std::size_t col = 0; col < basis.size(); ++col) {
        const double m = basis[col].mz();
        const int n = basis[col].n;
        entries.emplace_back(static_cast<int>(col), static_cast<int>(col), p.qubit_freq * m + p.field_freq * n);
        // J_x = (J_+ + J_-)/2, (a^dag + a).
        for (int dm : {+1, -1}) {
            const double jfac = 0.5 * std::sqrt(std::max(0.0, j * (j + 1.0) - m * (m + dm)));
            for (int dn : {+1, -1}) {
                const double afac = dn > 0 ? std::sqrt(n + 1.0) : std::sqrt(static_cast<double>(n));
                const auto row = basis.index_of(basis[col].two_mz + 2 * dm, n + dn);
                if (row && jfac * afac != 0.0) {
                    entries.emplace_back(static_cast<int>(*row), static_cast<int>(col), g * jfac * afac);
                }
            }
        }
    }
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Eigen::SparseMatrix<double> m(dim, dim);
    m.setFromTriplets(entries.begin(), entries.end());
    return m;
}

StateVector initial_state(const BasisPtr& basis) {
    StateVector psi(basis);
    const auto idx = basis->index_of(-basis->params().n_qubits, 0);
    if (!idx) throw std::invalid_argument("basis does not contain |-N/2, 0>");
    psi[*idx] = 1.0;
    return psi;
}

double parity_expectation(const StateVector& psi) {
    const Basis& b = psi.basis();
    const int big_n = b.params().n_qubits;
    double acc = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const int exponent = b[i].n + (b[i].two_mz + big_n) / 2;
        acc += ((exponent & 1) ? -1.0 : 1.0) * std::norm(psi[i]);
    }
    return acc;
}

double boundary_population(const StateVector& psi) {
    const Basis& b = psi.basis();
    const int chi = b.params().fock_cut;
    double acc = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i].n == chi) acc += std::norm(psi[i]);
    }
    return acc;
}

}  // namespace dicke
