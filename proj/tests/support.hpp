#pragma once

#include <complex>
#include <random>
#include <vector>

#include "dicke/model.hpp"

namespace testing {

using dicke::cplx;

inline std::vector<cplx> random_amplitudes(std::size_t n, std::mt19937_64& rng, bool normalize = true) {
    std::normal_distribution<double> g;
    std::vector<cplx> v(n);
    double s = 0.0;
    for (auto& a : v) {
        a = {g(rng), g(rng)};
        s += std::norm(a);
    }
    if (normalize)
        for (auto& a : v) a /= std::sqrt(s);
    return v;
}

inline dicke::StateVector random_state(const dicke::BasisPtr& basis, std::mt19937_64& rng) {
    return dicke::StateVector(basis, random_amplitudes(basis->size(), rng));
}

inline dicke::BasisPtr basis(int n_qubits, int fock_cut, dicke::Sector sector = dicke::Sector::parity_even) {
    return dicke::build_basis({n_qubits, 1.0, 1.0, fock_cut, sector});
}

// Unit amplitude on |m_z, n> with m_z given doubled.
inline dicke::StateVector basis_state(const dicke::BasisPtr& basis, int two_mz, int n) {
    dicke::StateVector psi(basis);
    psi[*basis->index_of(two_mz, n)] = 1.0;
    return psi;
}

inline double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace testing
