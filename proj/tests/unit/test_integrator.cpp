#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "dicke/integrator.hpp"
#include "dicke/observables.hpp"
#include "dicke/oracle.hpp"
#include "support.hpp"

using namespace dicke;
using testing::basis;

namespace {

double energy(const StateVector& psi, double lambda) {
    const StateVector h = apply_hamiltonian(psi.basis(), lambda, psi);
    double e = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) e += (std::conj(psi[i]) * h[i]).real();
    return e;
}

double distance(const StateVector& a, const StateVector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

StateVector propagate(StateVector psi, double t, double h, int steps, const RampProtocol& p) {
    for (int k = 0; k < steps; ++k) psi = step_fixed(psi, t + k * h, h, p);
    return psi;
}

}  // namespace

TEST_CASE("settings validation") {
    IntegratorSettings s;
    CHECK_NOTHROW(s.validate());
    s.step = -1.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = {};
    s.tolerance = 0.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = {};
    s.sample_count = 1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    CHECK(parse_method("rk_adaptive") == Method::rk_adaptive);
    CHECK_THROWS_AS(parse_method("euler"), std::invalid_argument);
}

TEST_CASE("default step") {
    const auto b = basis(4, 10);
    const DickeHamiltonian h(b);
    const double slow = default_step(RampProtocol::from_gamma(-6), h);
    CHECK(slow <= 0.01);
    CHECK(slow <= kStepScale / h.spectral_bound(1.0) + 1e-15);
    const double fast = default_step(RampProtocol::from_gamma(3), h);
    CHECK(fast <= 0.01 / 8.0 + 1e-15);
}

TEST_CASE("sample grid and recorded lambda") {
    const auto p = RampProtocol::from_gamma(-2);
    IntegratorSettings s;
    s.sample_count = 9;
    std::vector<SamplePoint> seen;
    const auto traj = evolve(initial_state(basis(2, 6)), p, s, [&](const SamplePoint& sp, const StateVector&) {
        seen.push_back(sp);
    });
    REQUIRE(seen.size() == 9);
    CHECK(seen.front().t == 0.0);
    CHECK(seen.back().t == p.duration());
    for (std::size_t i = 0; i < seen.size(); ++i) {
        CHECK(seen[i].index == i);
        CHECK(seen[i].lambda == p.lambda_at(seen[i].t));
        CHECK(traj.summary.times[i] == seen[i].t);
        if (i) CHECK(seen[i].t > seen[i - 1].t);
    }
}

TEST_CASE("evolve rejects an unnormalized start") {
    const auto b = basis(2, 4);
    StateVector psi(b);
    psi[0] = 2.0;
    CHECK_THROWS_AS(evolve(psi, RampProtocol::from_gamma(0), {}, nullptr), std::invalid_argument);
}

TEST_CASE("eigenstate at zero coupling only acquires a phase") {
    for (int big_n : {1, 4, 7}) {
        const auto b = basis(big_n, 6);
        const auto p = RampProtocol::constant(0.0, 10.0);
        IntegratorSettings s;
        s.sample_count = 11;
        std::vector<double> photons;
        const auto traj = evolve(initial_state(b), p, s, [&](const SamplePoint&, const StateVector& psi) {
            photons.push_back(measure(psi).photons);
        });
        const cplx expect = std::polar(1.0, 0.5 * big_n * 10.0);  // exp(-i E0 t), E0 = -N/2
        const StateVector& psi = traj.final_state;
        CHECK(std::abs(psi[*b->index_of(-big_n, 0)] - expect) < 1e-10);
        for (double n : photons) CHECK(n == 0.0);
    }
}

TEST_CASE("energy is conserved under a static Hamiltonian") {
    const auto b = basis(4, 20);
    const auto p = RampProtocol::constant(0.2, 50.0);
    std::vector<double> e;
    evolve(initial_state(b), p, {}, [&](const SamplePoint&, const StateVector& psi) { e.push_back(energy(psi, 0.2)); });
    for (double x : e) CHECK(std::abs(x - e.front()) < 1e-8);
}

TEST_CASE("one step of an eigenstate is a pure phase") {
    const auto full = basis(3, 5, Sector::full_product);
    const auto p = RampProtocol::constant(0.0, 1.0);
    const StateVector e = testing::basis_state(full, 1, 3);
    const StateVector out = step_fixed(e, 0.0, 0.05, p);
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(std::abs(std::abs(out[i]) - std::abs(e[i])) < 1e-12);
    CHECK(std::abs(out[*full->index_of(1, 3)] - std::polar(1.0, -0.05 * 3.5)) < 1e-12);
}

TEST_CASE("rk4 step is fourth order on a random state") {
    std::mt19937_64 rng(21);
    const auto b = basis(3, 6);
    const StateVector psi = testing::random_state(b, rng);
    const auto p = RampProtocol::triangular(0.4);
    const double t = 0.3;
    auto error = [&](double h, int pieces) {
        const StateVector ref = propagate(psi, t, h / (10 * pieces), 10 * pieces, p);
        return distance(propagate(psi, t, h / pieces, pieces, p), ref);
    };
    const double h = 0.2;
    const double e1 = error(h, 1);
    const double e2 = error(h, 2);
    CAPTURE(e1);
    CAPTURE(e2);
    CHECK(e1 / e2 >= 12.0);
    CHECK(e1 / e2 <= 20.0);
}

TEST_CASE("norm error of one step shrinks at least like dt^5") {
    std::mt19937_64 rng(8);
    const auto b = basis(3, 6);
    const StateVector psi = testing::random_state(b, rng);
    const auto p = RampProtocol::triangular(0.4);
    // |R(i theta)|^2 - 1 = -theta^6/72 + theta^8/576 for the RK4 stability polynomial,
    // with theta at most the spectral width ||H - E|| h <= 2 ||H|| h.
    const double width = 2.0 * DickeHamiltonian(b).spectral_bound(1.0);
    double prev = 0.0;
    for (double h : {0.2, 0.1, 0.05}) {
        const double drift = std::abs(step_fixed(psi, 0.3, h, p).norm() - 1.0);
        CHECK(drift <= std::pow(width * h, 6) / 72.0);
        if (prev > 0.0) CHECK(drift <= prev / 16.0);
        prev = drift;
    }
}

TEST_CASE("norm drift over a full pulse at default settings") {
    const auto traj = evolve(initial_state(basis(4, 20)), RampProtocol::from_gamma(-6), {}, nullptr);
    CHECK(traj.summary.max_norm_drift <= 1e-9);
    CHECK(traj.summary.final_norm_drift <= 1e-9);
    CHECK_FALSE(traj.summary.renormalized);
}

TEST_CASE("renormalization keeps the norm at one") {
    IntegratorSettings s;
    s.renormalize = true;
    s.energy_shift = false;
    const auto traj = evolve(initial_state(basis(4, 20)), RampProtocol::from_gamma(-4), s, nullptr);
    CHECK(std::abs(traj.final_state.norm() - 1.0) < 1e-14);
    CHECK(traj.summary.renormalized);
}

TEST_CASE("excessive step aborts and names the step size") {
    IntegratorSettings s;
    s.step = 0.5;
    s.sample_count = 3;  // sample spacing 1, so the 0.5 step is taken as given
    s.energy_shift = false;
    try {
        evolve(initial_state(basis(4, 20)), RampProtocol::from_gamma(0), s, nullptr);
        FAIL("expected a norm-drift abort");
    } catch (const NumericalError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("step size 0.5") != std::string::npos);
        CHECK(msg.find("norm drift") != std::string::npos);
    }
}

TEST_CASE("energy-shifted and lab-frame propagation agree") {
    const auto p = RampProtocol::from_gamma(-3);
    IntegratorSettings a, b;
    a.step = b.step = 0.002;
    b.energy_shift = false;
    const auto ta = evolve(initial_state(basis(3, 16)), p, a, nullptr);
    const auto tb = evolve(initial_state(basis(3, 16)), p, b, nullptr);
    CHECK(distance(ta.final_state, tb.final_state) < 1e-8);
}

TEST_CASE("adaptive and fixed methods agree") {
    const auto p = RampProtocol::from_gamma(-4);
    IntegratorSettings s;
    s.method = Method::rk_adaptive;
    s.tolerance = 1e-12;
    const auto fixed = evolve(initial_state(basis(4, 20)), p, {}, nullptr);
    const auto adaptive = evolve(initial_state(basis(4, 20)), p, s, nullptr);
    CHECK(distance(fixed.final_state, adaptive.final_state) < 1e-7);
    CHECK(adaptive.summary.max_norm_drift < 1e-9);
}

TEST_CASE("final state matches the full product-space evolution") {
    const auto p = RampProtocol::from_gamma(-6);
    const auto b = basis(4, 20);
    const auto traj = evolve(initial_state(b), p, {}, nullptr);
    const auto full = oracle::full_evolve({4, 20, 1.0, 1.0}, p, {}, nullptr);
    const StateVector projected = oracle::project_to_dicke(full.final_state, b);
    CHECK(testing::max_abs_diff(traj.final_state.amplitudes(), projected.amplitudes()) < 1e-7);
}

TEST_CASE("parity is conserved in the full product sector") {
    const auto b = basis(3, 12, Sector::full_product);
    IntegratorSettings s;
    s.sample_count = 50;
    evolve(initial_state(b), RampProtocol::from_gamma(-3), s, [&](const SamplePoint&, const StateVector& psi) {
        CHECK(std::abs(parity_expectation(psi) - 1.0) < 1e-8);
    });
}

TEST_CASE("even-sector evolution equals the full product sector restricted to even states") {
    const auto even = basis(4, 14);
    const auto full = basis(4, 14, Sector::full_product);
    const auto p = RampProtocol::from_gamma(-3);
    IntegratorSettings s;
    s.step = 0.004;
    const auto te = evolve(initial_state(even), p, s, nullptr);
    const auto tf = evolve(initial_state(full), p, s, nullptr);
    double diff = 0.0, odd = 0.0;
    for (std::size_t i = 0; i < full->size(); ++i) {
        const BasisState st = (*full)[i];
        if (auto j = even->index_of(st.two_mz, st.n)) {
            diff = std::max(diff, std::abs(te.final_state[*j] - tf.final_state[i]));
        } else {
            odd = std::max(odd, std::abs(tf.final_state[i]));
        }
    }
    CHECK(diff < 1e-8);
    CHECK(odd < 1e-12);
}

TEST_CASE("slow pulse follows the ground state and retraces its populations") {
    const auto b = basis(8, 20);
    const auto p = RampProtocol::from_gamma(-14);
    std::vector<Populations> pops;
    double worst_overlap = 1.0;
    evolve(initial_state(b), p, {}, [&](const SamplePoint& sp, const StateVector& psi) {
        pops.push_back(subsystem_populations(CoefficientMatrix(psi)));
        if (sp.t > p.tau()) return;
        const Eigen::MatrixXd h = Eigen::MatrixXd(hamiltonian_matrix(*b, sp.lambda));
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
        const Eigen::VectorXd g = es.eigenvectors().col(0);
        cplx ov = 0.0;
        for (std::size_t i = 0; i < psi.size(); ++i) ov += g(static_cast<Eigen::Index>(i)) * psi[i];
        worst_overlap = std::min(worst_overlap, std::norm(ov));
    });
    CHECK(worst_overlap >= 0.99);

    double worst = 0.0;
    const std::size_t n = pops.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
        for (auto field : {&Populations::qubit, &Populations::boson}) {
            const auto& up = pops[i].*field;
            const auto& down = pops[n - 1 - i].*field;
            double tv = 0.0;
            for (std::size_t k = 0; k < up.size(); ++k) tv += std::abs(up[k] - down[k]);
            worst = std::max(worst, 0.5 * tv);
        }
    }
    CHECK(worst <= 0.05);
}
