#include "dicke/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include <Eigen/SVD>

namespace dicke::oracle {

void FullSpaceModel::check() const {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("oracle supports 1 <= N <= " + std::to_string(kMaxQubits));
    }
    if (fock_cut < 0 || fock_cut > kMaxFockCut) {
        throw std::invalid_argument("oracle supports 0 <= chi <= " + std::to_string(kMaxFockCut));
    }
}

Eigen::MatrixXcd FullSpaceState::matrix() const {
    const auto rows = static_cast<Eigen::Index>(model.configurations());
    const auto cols = static_cast<Eigen::Index>(model.fock_cut + 1);
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index c = 0; c < rows; ++c)
        for (Eigen::Index n = 0; n < cols; ++n) m(c, n) = amps[static_cast<std::size_t>(c * cols + n)];
    return m;
}

FullSpaceState full_initial_state(const FullSpaceModel& model) {
    model.check();
    FullSpaceState s{model, std::vector<cplx>(model.dimension())};
    s.amps[0] = 1.0;
    return s;
}

FullSpaceHamiltonian::FullSpaceHamiltonian(const FullSpaceModel& model) {
    model.check();
    const std::size_t nf = static_cast<std::size_t>(model.fock_cut) + 1;
    const std::size_t dim = model.dimension();
    const double g = 1.0 / std::sqrt(static_cast<double>(model.n_qubits));  // (2/sqrt N) * (1/2) from sigma_x / 2
    diag_.resize(dim);
    row_start_.reserve(dim + 1);
    for (std::size_t c = 0; c < model.configurations(); ++c) {
        const int ups = std::popcount(c);
        const double jz = ups - 0.5 * model.n_qubits;
        for (std::size_t n = 0; n < nf; ++n) {
            const std::size_t row = c * nf + n;
            diag_[row] = model.qubit_freq * jz + model.field_freq * static_cast<double>(n);
            row_start_.push_back(cols_.size());
            // sum_i sigma_x^(i) (a + a^dag)
            for (int i = 0; i < model.n_qubits; ++i) {
                const std::size_t flipped = c ^ (std::size_t{1} << i);
                if (n > 0) {
                    cols_.push_back(flipped * nf + n - 1);
                    vals_.push_back(g * std::sqrt(static_cast<double>(n)));
                }
                if (n + 1 < nf) {
                    cols_.push_back(flipped * nf + n + 1);
                    vals_.push_back(g * std::sqrt(static_cast<double>(n + 1)));
                }
            }
        }
    }
    row_start_.push_back(cols_.size());
}

void FullSpaceHamiltonian::apply(double lambda, double shift, std::span<const cplx> in, std::span<cplx> out) const {
    for (std::size_t r = 0; r < diag_.size(); ++r) {
        cplx acc = (diag_[r] - shift) * in[r];
        for (std::size_t e = row_start_[r]; e < row_start_[r + 1]; ++e) acc += lambda * vals_[e] * in[cols_[e]];
        out[r] = acc;
    }
}

double FullSpaceHamiltonian::spectral_bound(double lambda) const {
    double bound = 0.0;
    for (std::size_t r = 0; r < diag_.size(); ++r) {
        double row = std::abs(diag_[r]);
        for (std::size_t e = row_start_[r]; e < row_start_[r + 1]; ++e) row += std::abs(lambda * vals_[e]);
        bound = std::max(bound, row);
    }
    return bound;
}

Eigen::MatrixXd FullSpaceHamiltonian::dense(double lambda) const {
    const auto dim = static_cast<Eigen::Index>(diag_.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t r = 0; r < diag_.size(); ++r) {
        h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)) = diag_[r];
        for (std::size_t e = row_start_[r]; e < row_start_[r + 1]; ++e) {
            h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols_[e])) += lambda * vals_[e];
        }
    }
    return h;
}

FullTrajectory full_evolve(const FullSpaceModel& model, const RampProtocol& protocol,
                           const IntegratorSettings& settings, const FullSink& sink) {
    FullSpaceHamiltonian h(model);
    FullSpaceState state = full_initial_state(model);
    FullSpaceState view{model, {}};
    auto summary = evolve_amplitudes(h, state.amps, protocol, settings,
                                     [&](const SamplePoint& sp, std::span<const cplx> a) {
                                         view.amps.assign(a.begin(), a.end());
                                         if (sink) sink(sp, view);
                                     });
    return {std::move(summary), std::move(state)};
}

TwoQubitRdm partial_trace_pair(const FullSpaceState& state) {
    state.model.check();
    if (state.model.n_qubits < 2) throw std::invalid_argument("a qubit pair needs N >= 2");
    const Eigen::MatrixXcd m = state.matrix();
    // Pair index: qubit 0 is the left factor, up -> 0 and down -> 1.
    auto pair_index = [](std::size_t c) {
        return static_cast<int>(((c & 1u) ? 0 : 2) + ((c & 2u) ? 0 : 1));
    };
    TwoQubitRdm rho = TwoQubitRdm::Zero();
    const std::size_t rest = state.model.configurations() >> 2;
    for (std::size_t r = 0; r < rest; ++r) {
        for (std::size_t p = 0; p < 4; ++p) {
            for (std::size_t q = 0; q < 4; ++q) {
                const std::size_t cp = (r << 2) | p;
                const std::size_t cq = (r << 2) | q;
                rho(pair_index(cp), pair_index(cq)) +=
                    m.row(static_cast<Eigen::Index>(cp)).dot(m.row(static_cast<Eigen::Index>(cq)));
            }
        }
    }
    // dot() conjugates its first argument: rho(p, q) = sum_n conj(m_p) m_q; transpose to sum_n m_p conj(m_q).
    return rho.transpose().eval();
}

std::vector<double> schmidt_direct(const FullSpaceState& state) {
    state.model.check();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(state.matrix());
    const Eigen::VectorXd& sv = svd.singularValues();
    std::vector<double> out(sv.data(), sv.data() + sv.size());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

StateVector project_to_dicke(const FullSpaceState& state, const BasisPtr& basis) {
    const FullSpaceModel& fm = state.model;
    const ModelParams& p = basis->params();
    if (p.n_qubits != fm.n_qubits || p.fock_cut != fm.fock_cut) {
        throw std::invalid_argument("basis does not match the full-space model");
    }
    const std::size_t nf = static_cast<std::size_t>(fm.fock_cut) + 1;
    std::vector<double> binom(static_cast<std::size_t>(fm.n_qubits) + 1, 0.0);
    std::vector<std::vector<cplx>> proj(binom.size(), std::vector<cplx>(nf));
    for (std::size_t c = 0; c < fm.configurations(); ++c) {
        const auto k = static_cast<std::size_t>(std::popcount(c));
        binom[k] += 1.0;
        for (std::size_t n = 0; n < nf; ++n) proj[k][n] += state.amps[c * nf + n];
    }
    StateVector psi(basis);
    for (std::size_t i = 0; i < basis->size(); ++i) {
        const BasisState& s = (*basis)[i];
        const auto k = static_cast<std::size_t>((s.two_mz + fm.n_qubits) / 2);
        psi[i] = proj[k][static_cast<std::size_t>(s.n)] / std::sqrt(binom[k]);
    }
    return psi;
}

ObservableRecord full_measure(const FullSpaceState& state) {
    const FullSpaceModel& fm = state.model;
    fm.check();
    const int big_n = fm.n_qubits;
    const auto nconf = static_cast<Eigen::Index>(fm.configurations());
    const auto nf = static_cast<Eigen::Index>(fm.fock_cut + 1);
    const Eigen::MatrixXcd m = state.matrix();

    // Dense collective spin operators on the 2^N configurations.
    Eigen::MatrixXcd jx = Eigen::MatrixXcd::Zero(nconf, nconf);
    Eigen::MatrixXcd jy = Eigen::MatrixXcd::Zero(nconf, nconf);
    Eigen::MatrixXcd jz = Eigen::MatrixXcd::Zero(nconf, nconf);
    for (Eigen::Index c = 0; c < nconf; ++c) {
        jz(c, c) = std::popcount(static_cast<std::size_t>(c)) - 0.5 * big_n;
        for (int i = 0; i < big_n; ++i) {
            const Eigen::Index f = c ^ (Eigen::Index{1} << i);
            const bool up = (c >> i) & 1;
            jx(f, c) += 0.5;
            jy(f, c) += up ? cplx(0.0, 0.5) : cplx(0.0, -0.5);
        }
    }
    // Field annihilation operator.
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(nf, nf);
    for (Eigen::Index n = 1; n < nf; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));

    auto expect = [&](const Eigen::MatrixXcd& op_m) { return m.cwiseProduct(op_m.conjugate()).sum(); };
    // Operators on the field index act from the right: (O psi) = M O^T.
    const Eigen::MatrixXcd am = m * a.transpose();
    const Eigen::MatrixXcd a2m = m * (a * a).transpose();
    const cplx a1 = std::conj(expect(am));
    const cplx a2 = std::conj(expect(a2m));
    const double photons = am.squaredNorm();

    ObservableRecord r;
    r.photons = photons;
    r.order_parameter = photons / (0.5 * big_n);
    QuadratureMoments q;
    q.mean_x = std::sqrt(2.0) * a1.real();
    q.mean_p = std::sqrt(2.0) * a1.imag();
    q.var_x = (2.0 * a2.real() + 2.0 * photons + 1.0) / 2.0 - q.mean_x * q.mean_x;
    q.var_p = (-2.0 * a2.real() + 2.0 * photons + 1.0) / 2.0 - q.mean_p * q.mean_p;
    q.cov_xp = a2.imag() - q.mean_x * q.mean_p;
    r.xi_b2 = boson_squeezing(q);

    r.jz = expect(jz * m).real();
    r.j_squared = (jx * m).squaredNorm() + (jy * m).squaredNorm() + (jz * m).squaredNorm();
    if (big_n >= 2) {
        r.c_w = concurrence(partial_trace_pair(state));
        r.xi_q2 = spin_squeezing(r.c_w, big_n);
        r.monogamy_violated = (big_n - 1) * r.c_w > 1.0 + kMonogamyTolerance;
    } else {
        r.c_w = r.xi_q2 = std::nan("");
    }

    r.spectrum = schmidt_direct(state);
    r.spectrum.resize(static_cast<std::size_t>(std::min<Eigen::Index>(big_n + 1, nf)));
    r.s1_sq = r.spectrum[0] * r.spectrum[0];
    r.s2_sq = r.spectrum.size() > 1 ? r.spectrum[1] * r.spectrum[1] : 0.0;
    r.schmidt_gap = std::abs(r.s1_sq - r.s2_sq);

    r.norm = m.norm();
    r.populations.qubit.assign(static_cast<std::size_t>(big_n) + 1, 0.0);
    r.populations.boson.assign(static_cast<std::size_t>(nf), 0.0);
    double parity = 0.0;
    for (Eigen::Index c = 0; c < nconf; ++c) {
        const int ups = std::popcount(static_cast<std::size_t>(c));
        for (Eigen::Index n = 0; n < nf; ++n) {
            const double p = std::norm(m(c, n));
            r.populations.qubit[static_cast<std::size_t>(ups)] += p;
            r.populations.boson[static_cast<std::size_t>(n)] += p;
            parity += ((ups + n) & 1 ? -1.0 : 1.0) * p;
        }
    }
    r.parity = parity;
    r.boundary_population = r.populations.boson.back();
    return r;
}

}  // namespace dicke::oracle
