#include <doctest.h>

#include <bit>
#include <cmath>
#include <stdexcept>

#include "dicke/oracle.hpp"
#include "support.hpp"

using namespace dicke;
using testing::basis;

namespace {

// Isometry from the symmetric sector (full_product Dicke basis) into the product space.
Eigen::MatrixXd dicke_isometry(const Basis& b, const oracle::FullSpaceModel& fm) {
    const auto nf = static_cast<std::size_t>(fm.fock_cut + 1);
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(fm.dimension()),
                                              static_cast<Eigen::Index>(b.size()));
    for (std::size_t i = 0; i < b.size(); ++i) {
        const int k = (b[i].two_mz + fm.n_qubits) / 2;
        double count = 0.0;
        for (std::size_t c = 0; c < fm.configurations(); ++c) count += std::popcount(c) == k;
        for (std::size_t c = 0; c < fm.configurations(); ++c) {
            if (std::popcount(c) == k) {
                v(static_cast<Eigen::Index>(c * nf + static_cast<std::size_t>(b[i].n)),
                  static_cast<Eigen::Index>(i)) = 1.0 / std::sqrt(count);
            }
        }
    }
    return v;
}

std::vector<oracle::FullSpaceState> full_samples(const oracle::FullSpaceModel& fm, const RampProtocol& p,
                                                 const IntegratorSettings& s) {
    std::vector<oracle::FullSpaceState> out;
    oracle::full_evolve(fm, p, s, [&](const SamplePoint&, const oracle::FullSpaceState& st) { out.push_back(st); });
    return out;
}

}  // namespace

TEST_CASE("dimension guard") {
    CHECK_THROWS_AS(oracle::FullSpaceModel({6, 8}).check(), std::invalid_argument);
    CHECK_THROWS_AS(oracle::FullSpaceModel({2, 33}).check(), std::invalid_argument);
    CHECK_THROWS_AS(oracle::FullSpaceModel({0, 8}).check(), std::invalid_argument);
    CHECK_NOTHROW(oracle::FullSpaceModel({5, 32}).check());
    CHECK(oracle::FullSpaceModel({3, 4}).dimension() == 40);
}

TEST_CASE("projected Hamiltonian equals the symmetric-sector matrix") {
    for (int big_n : {1, 2, 3, 4}) {
        const oracle::FullSpaceModel fm{big_n, 6};
        const auto b = basis(big_n, 6, Sector::full_product);
        const Eigen::MatrixXd v = dicke_isometry(*b, fm);
        const oracle::FullSpaceHamiltonian hf(fm);
        for (double lambda : {0.0, 0.37, 1.0}) {
            const Eigen::MatrixXd projected = v.transpose() * hf.dense(lambda) * v;
            const Eigen::MatrixXd direct = Eigen::MatrixXd(hamiltonian_matrix(*b, lambda));
            CHECK((projected - direct).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("N = 2 ground state is stationary at zero coupling") {
    const oracle::FullSpaceModel fm{2, 6};
    IntegratorSettings s;
    s.sample_count = 5;
    double worst = 0.0;
    oracle::full_evolve(fm, RampProtocol::constant(0.0, 5.0), s, [&](const SamplePoint&, const oracle::FullSpaceState& st) {
        for (std::size_t i = 0; i < st.amps.size(); ++i) worst = std::max(worst, std::abs(std::abs(st.amps[i]) - (i == 0)));
    });
    CHECK(worst < 1e-12);
}

TEST_CASE("photon number agrees with the symmetric-sector evolution") {
    const auto p = RampProtocol::triangular(1.0 / 16.0);
    IntegratorSettings s;
    s.sample_count = 41;
    const auto full = full_samples({3, 14}, p, s);
    std::vector<StateVector> red;
    evolve(initial_state(basis(3, 14)), p, s, [&](const SamplePoint&, const StateVector& psi) { red.push_back(psi); });
    REQUIRE(full.size() == red.size());
    for (std::size_t i = 0; i < red.size(); ++i) {
        const ObservableRecord a = oracle::full_measure(full[i]);
        const ObservableRecord b = measure(red[i]);
        CHECK(std::abs(a.photons - b.photons) < 1e-7);
        CHECK(std::abs(a.j_squared - 3.75) < 1e-8);
        const StateVector proj = oracle::project_to_dicke(full[i], red[i].basis_ptr());
        CHECK(std::abs(proj.norm() - 1.0) < 1e-10);
    }
}

TEST_CASE("initial pair trace is the all-down projector") {
    const auto rho = oracle::partial_trace_pair(oracle::full_initial_state({4, 4}));
    TwoQubitRdm expect = TwoQubitRdm::Zero();
    expect(3, 3) = 1.0;
    CHECK((rho - expect).cwiseAbs().maxCoeff() < 1e-15);
    CHECK_THROWS_AS(oracle::partial_trace_pair(oracle::full_initial_state({1, 4})), std::invalid_argument);
}

TEST_CASE("pair RDM from correlators matches the explicit partial trace mid-pulse") {
    const auto p = RampProtocol::from_gamma(-3);
    IntegratorSettings s;
    s.sample_count = 21;
    const auto full = full_samples({4, 16}, p, s);
    std::vector<StateVector> red;
    evolve(initial_state(basis(4, 16)), p, s, [&](const SamplePoint&, const StateVector& psi) { red.push_back(psi); });
    REQUIRE(full.size() == red.size());
    for (std::size_t i = 0; i < red.size(); ++i) {
        const TwoQubitRdm a = two_qubit_rdm(collective_correlators(red[i]), 4);
        const TwoQubitRdm b = oracle::partial_trace_pair(full[i]);
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("direct Schmidt spectrum has rank at most N + 1 and matches the reduced one") {
    const auto p = RampProtocol::from_gamma(-2);
    IntegratorSettings s;
    s.sample_count = 11;
    const auto full = full_samples({3, 12}, p, s);
    std::vector<StateVector> red;
    evolve(initial_state(basis(3, 12)), p, s, [&](const SamplePoint&, const StateVector& psi) { red.push_back(psi); });
    for (std::size_t i = 0; i < red.size(); ++i) {
        const auto direct = oracle::schmidt_direct(full[i]);
        const auto reduced = schmidt_spectrum(CoefficientMatrix(red[i]));
        REQUIRE(reduced.size() == 4);
        for (std::size_t k = 0; k < direct.size(); ++k) {
            const double ref = k < reduced.size() ? reduced[k] : 0.0;
            CHECK(std::abs(direct[k] - ref) < 1e-9);
        }
    }
}

TEST_CASE("full measure agrees with the reduced measure") {
    const auto p = RampProtocol::from_gamma(-4);
    IntegratorSettings s;
    s.sample_count = 9;
    const auto full = full_samples({2, 16}, p, s);
    std::vector<StateVector> red;
    evolve(initial_state(basis(2, 16)), p, s, [&](const SamplePoint&, const StateVector& psi) { red.push_back(psi); });
    for (std::size_t i = 0; i < red.size(); ++i) {
        const ObservableRecord a = oracle::full_measure(full[i]);
        const ObservableRecord b = measure(red[i]);
        CHECK(std::abs(a.jz - b.jz) < 1e-7);
        CHECK(std::abs(a.xi_b2 - b.xi_b2) < 1e-7);
        CHECK(std::abs(a.c_w - b.c_w) < 1e-7);
        CHECK(std::abs(a.schmidt_gap - b.schmidt_gap) < 1e-7);
        CHECK(std::abs(a.j_squared - 2.0) < 1e-8);
    }
}
