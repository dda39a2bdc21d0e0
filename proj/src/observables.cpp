#include "dicke/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace dicke {

CoefficientMatrix::CoefficientMatrix(const StateVector& psi) : n_qubits_(psi.basis().params().n_qubits) {
    const Basis& b = psi.basis();
    c_ = Eigen::MatrixXcd::Zero(n_qubits_ + 1, b.params().fock_cut + 1);
    for (std::size_t i = 0; i < b.size(); ++i) {
        c_((b[i].two_mz + n_qubits_) / 2, b[i].n) = psi[i];
    }
}

CoefficientMatrix::CoefficientMatrix(Eigen::MatrixXcd values, int n_qubits) : c_(std::move(values)), n_qubits_(n_qubits) {
    if (c_.rows() != n_qubits + 1) throw std::invalid_argument("coefficient matrix must have N+1 rows");
}

StateVector CoefficientMatrix::to_state(const BasisPtr& basis) const {
    const ModelParams& p = basis->params();
    if (p.n_qubits != n_qubits_ || p.fock_cut + 1 != c_.cols()) {
        throw std::invalid_argument("basis shape does not match the coefficient matrix");
    }
    StateVector psi(basis);
    for (std::size_t i = 0; i < basis->size(); ++i) {
        const BasisState& s = (*basis)[i];
        psi[i] = c_((s.two_mz + n_qubits_) / 2, s.n);
    }
    return psi;
}

Populations subsystem_populations(const CoefficientMatrix& c) {
    const Eigen::MatrixXd prob = c.values().cwiseAbs2();
    Populations pop;
    pop.qubit.resize(static_cast<std::size_t>(prob.rows()));
    pop.boson.resize(static_cast<std::size_t>(prob.cols()));
    Eigen::Map<Eigen::VectorXd>(pop.qubit.data(), prob.rows()) = prob.rowwise().sum();
    Eigen::Map<Eigen::VectorXd>(pop.boson.data(), prob.cols()) = prob.colwise().sum().transpose();
    return pop;
}

double mean_photon_number(const CoefficientMatrix& c) {
    const Eigen::MatrixXd prob = c.values().cwiseAbs2();
    double acc = 0.0;
    for (Eigen::Index n = 1; n < prob.cols(); ++n) acc += static_cast<double>(n) * prob.col(n).sum();
    return acc;
}

QuadratureMoments quadrature_moments(const CoefficientMatrix& c) {
    const Eigen::MatrixXcd& m = c.values();
    cplx a1{}, a2{};
    for (Eigen::Index n = 1; n < m.cols(); ++n) {
        a1 += std::sqrt(static_cast<double>(n)) * m.col(n - 1).dot(m.col(n));
        if (n >= 2) a2 += std::sqrt(static_cast<double>(n) * (n - 1)) * m.col(n - 2).dot(m.col(n));
    }
    const double photons = mean_photon_number(c);

    QuadratureMoments q;
    q.mean_x = std::sqrt(2.0) * a1.real();
    q.mean_p = std::sqrt(2.0) * a1.imag();
    const double x2 = a2.real() + photons + 0.5;
    const double p2 = -a2.real() + photons + 0.5;
    q.var_x = x2 - q.mean_x * q.mean_x;
    q.var_p = p2 - q.mean_p * q.mean_p;
    q.cov_xp = a2.imag() - q.mean_x * q.mean_p;
    return q;
}

QuadratureMoments quadrature_moments(const StateVector& psi) { return quadrature_moments(CoefficientMatrix(psi)); }

double boson_squeezing(const QuadratureMoments& m) {
    const double diff = m.var_x - m.var_p;
    return m.var_x + m.var_p - std::sqrt(diff * diff + 4.0 * m.cov_xp * m.cov_xp);
}

CollectiveCorrelators collective_correlators(const CoefficientMatrix& c) {
    const Eigen::MatrixXcd& m = c.values();
    const Eigen::Index rows = m.rows();
    const double j = 0.5 * c.n_qubits();

    // J_+ acting on the matter index: (J_+ C)[k+1] = s_k C[k].
    Eigen::MatrixXcd up = Eigen::MatrixXcd::Zero(rows, m.cols());
    Eigen::MatrixXcd down = Eigen::MatrixXcd::Zero(rows, m.cols());
    Eigen::MatrixXcd jz(rows, m.cols());
    for (Eigen::Index k = 0; k < rows; ++k) {
        const double mz = static_cast<double>(k) - j;
        jz.row(k) = mz * m.row(k);
        if (k + 1 < rows) {
            const double s = std::sqrt(std::max(0.0, j * (j + 1.0) - mz * (mz + 1.0)));
            up.row(k + 1) = s * m.row(k);
            down.row(k) = s * m.row(k + 1);
        }
    }
    const std::array<Eigen::MatrixXcd, 3> u{
        0.5 * (up + down),
        cplx(0.0, -0.5) * (up - down),
        std::move(jz),
    };

    CollectiveCorrelators corr;
    for (std::size_t a = 0; a < 3; ++a) {
        corr.mean[a] = m.cwiseProduct(u[a].conjugate()).sum().real();
        for (std::size_t b = a; b < 3; ++b) {
            // Re <J_a psi | J_b psi> = <{J_a, J_b}>/2 for Hermitian J_a, J_b.
            const double v = u[a].cwiseProduct(u[b].conjugate()).sum().real();
            corr.second[a][b] = v;
            corr.second[b][a] = v;
        }
    }
    return corr;
}

CollectiveCorrelators collective_correlators(const StateVector& psi) {
    return collective_correlators(CoefficientMatrix(psi));
}

namespace {

std::array<Eigen::Matrix2cd, 4> pauli() {
    Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    Eigen::Matrix2cd x, y, z;
    x << 0, 1, 1, 0;
    y << 0, cplx(0, -1), cplx(0, 1), 0;
    z << 1, 0, 0, -1;
    return {id, x, y, z};
}

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

}  // namespace

TwoQubitRdm two_qubit_rdm(const CollectiveCorrelators& corr, int n_qubits) {
    if (n_qubits < 2) throw std::invalid_argument("a qubit pair needs N >= 2");
    const double n = n_qubits;
    const auto s = pauli();

    // Pauli expectation table T_ab = <sigma^1_a sigma^2_b>, a, b in {0, x, y, z}.
    // Same-site terms are removed with sum_i sigma_ia sigma_ib = N delta_ab + (antisymmetric part).
    std::array<std::array<double, 4>, 4> t{};
    t[0][0] = 1.0;
    for (std::size_t a = 0; a < 3; ++a) {
        t[a + 1][0] = t[0][a + 1] = 2.0 * corr.mean[a] / n;
        for (std::size_t b = 0; b < 3; ++b) {
            t[a + 1][b + 1] = (4.0 * corr.second[a][b] - (a == b ? n : 0.0)) / (n * (n - 1.0));
        }
    }
    TwoQubitRdm rho = TwoQubitRdm::Zero();
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) rho += (0.25 * t[a][b]) * kron(s[a], s[b]);
    check_two_qubit_rdm(rho);
    return rho;
}

void check_two_qubit_rdm(const TwoQubitRdm& rho) {
    auto fail = [](const std::string& what, double value) {
        std::ostringstream msg;
        msg << "two-qubit density matrix " << what << " (" << value << ")";
        throw NumericalError(msg.str());
    };
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-10) fail("is not Hermitian", herm);
    const double trace_err = std::abs(rho.trace() - 1.0);
    if (trace_err > 1e-10) fail("does not have unit trace", trace_err);
    Eigen::Matrix4cd swap = Eigen::Matrix4cd::Zero();
    swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
    const double asym = (swap * rho * swap - rho).cwiseAbs().maxCoeff();
    if (asym > 1e-10) fail("is not exchange symmetric", asym);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -kPsdTolerance) fail("has a negative eigenvalue", min_eig);
}

double concurrence(const TwoQubitRdm& rho) {
    check_two_qubit_rdm(rho);
    const auto s = pauli();
    const Eigen::Matrix4cd yy = kron(s[2], s[2]);

    // Wootters' form: with rho = W W^dag over the non-negligible eigenvalues,
    // the square roots of eig(rho rho~) are the singular values of W^T (Y x Y) W.
    // Dropping round-off eigenvalues avoids square roots of noise.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
    Eigen::Matrix<cplx, 4, Eigen::Dynamic> w(4, 0);
    for (int i = 0; i < 4; ++i) {
        const double p = es.eigenvalues()[i];
        if (p <= kConcurrenceCutoff) continue;
        w.conservativeResize(Eigen::NoChange, w.cols() + 1);
        w.col(w.cols() - 1) = es.eigenvectors().col(i) * std::sqrt(p);
    }
    const Eigen::MatrixXcd tau = w.transpose() * yy * w;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(tau);
    const Eigen::VectorXd& mu = svd.singularValues();  // descending
    double c = mu.size() ? mu[0] : 0.0;
    for (Eigen::Index i = 1; i < mu.size(); ++i) c -= mu[i];
    return std::clamp(c, 0.0, 1.0);
}

double spin_squeezing(double c_w, int n_qubits) { return 1.0 - (n_qubits - 1) * c_w; }

std::vector<double> schmidt_spectrum(const CoefficientMatrix& c) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(c.values());
    if (svd.info() != Eigen::Success || !svd.singularValues().allFinite()) {
        std::ostringstream msg;
        msg << "singular value decomposition failed on a " << c.rows() << "x" << c.cols()
            << " coefficient matrix (Frobenius norm " << c.values().norm() << ")";
        throw NumericalError(msg.str());
    }
    const Eigen::VectorXd& sv = svd.singularValues();
    std::vector<double> out(sv.data(), sv.data() + sv.size());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

double schmidt_gap(const std::vector<double>& spectrum) {
    if (spectrum.size() < 2) throw std::invalid_argument("Schmidt gap needs at least two coefficients");
    return std::abs(spectrum[0] * spectrum[0] - spectrum[1] * spectrum[1]);
}

double order_parameter(const StateVector& psi) {
    return mean_photon_number(CoefficientMatrix(psi)) / psi.basis().params().spin();
}

ObservableRecord measure(const StateVector& psi) {
    const CoefficientMatrix c(psi);
    const int big_n = c.n_qubits();
    ObservableRecord r;
    r.photons = mean_photon_number(c);
    r.order_parameter = r.photons / (0.5 * big_n);
    r.xi_b2 = boson_squeezing(quadrature_moments(c));

    const CollectiveCorrelators corr = collective_correlators(c);
    r.jz = corr.mean[2];
    r.j_squared = corr.total_spin_squared();
    if (big_n >= 2) {
        r.c_w = concurrence(two_qubit_rdm(corr, big_n));
        r.xi_q2 = spin_squeezing(r.c_w, big_n);
        r.monogamy_violated = (big_n - 1) * r.c_w > 1.0 + kMonogamyTolerance;
    } else {
        r.c_w = std::numeric_limits<double>::quiet_NaN();
        r.xi_q2 = std::numeric_limits<double>::quiet_NaN();
    }

    r.spectrum = schmidt_spectrum(c);
    r.s1_sq = r.spectrum[0] * r.spectrum[0];
    r.s2_sq = r.spectrum.size() > 1 ? r.spectrum[1] * r.spectrum[1] : 0.0;
    r.schmidt_gap = std::abs(r.s1_sq - r.s2_sq);

    r.norm = psi.norm();
    r.parity = parity_expectation(psi);
    r.boundary_population = boundary_population(psi);
    r.populations = subsystem_populations(c);
    return r;
}

}  // namespace dicke
