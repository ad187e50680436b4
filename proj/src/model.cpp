#include "bjj/model.hpp"

#include <cmath>
#include <stdexcept>

namespace bjj::model {

void ModelParams::validate() const {
    if (N < 1) throw std::invalid_argument("ModelParams: N must be >= 1");
    if (!(J > 0)) throw std::invalid_argument("ModelParams: J must be > 0");
    if (U < 0) throw std::invalid_argument("ModelParams: U must be >= 0 (attractive regime out of scope)");
    if (!std::isfinite(epsilon)) throw std::invalid_argument("ModelParams: epsilon must be finite");
}

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::Rabi: return "rabi";
        case Regime::Josephson: return "josephson";
        case Regime::Fock: return "fock";
    }
    return "?";
}

CharacteristicParams characteristic_params(const ModelParams& p) {
    p.validate();
    CharacteristicParams c;
    c.u = p.N * p.U / p.J;
    c.xi = std::pow(1.0 + c.u, 0.25);
    c.omega_J = c.xi * c.xi * p.J; // = sqrt(J*(J + N*U))
    c.eps_c = c.u > 1.0 ? std::pow(std::pow(c.u, 2.0 / 3.0) - 1.0, 1.5) : 0.0;
    const double NN = static_cast<double>(p.N) * p.N;
    c.regime = c.u < 1.0 ? Regime::Rabi : (c.u < NN ? Regime::Josephson : Regime::Fock);
    return c;
}

VectorXd n_values(int N) {
    VectorXd n(N + 1);
    const double s = 0.5 * N;
    for (int k = 0; k <= N; ++k) n[k] = s - k;
    return n;
}

// Ladder amplitude sqrt(s(s+1) - n(n+1)) between k+1 (n) and k (n+1), n = s-k-1.
static VectorXd ladder_amplitudes(int N) {
    const double s = 0.5 * N;
    VectorXd c(N > 0 ? N : 0);
    for (int k = 0; k < N; ++k) {
        const double n = s - k - 1;
        c[k] = std::sqrt(s * (s + 1) - n * (n + 1));
    }
    return c;
}

SpinOperators build_spin_operators(int N) {
    if (N < 1) throw std::invalid_argument("build_spin_operators: N must be >= 1");
    const int dim = N + 1;
    SpinOperators ops;
    ops.S1 = MatrixXcd::Zero(dim, dim);
    ops.S2 = MatrixXcd::Zero(dim, dim);
    ops.S3 = MatrixXcd::Zero(dim, dim);
    const VectorXd n = n_values(N);
    const VectorXd c = ladder_amplitudes(N);
    for (int k = 0; k < dim; ++k) ops.S3(k, k) = n[k];
    for (int k = 0; k < N; ++k) {
        // S+ |s,n> = c |s,n+1>: element (k, k+1) of S+.
        ops.S1(k, k + 1) = 0.5 * c[k];
        ops.S1(k + 1, k) = 0.5 * c[k];
        ops.S2(k, k + 1) = std::complex<double>(0, -0.5) * c[k];
        ops.S2(k + 1, k) = std::complex<double>(0, 0.5) * c[k];
    }
    return ops;
}

MatrixXcd hopping_operator(int N) {
    const auto ops = build_spin_operators(N);
    return ops.S1 + std::complex<double>(0, 1) * ops.S2;
}

MatrixXd lowering_left(int Nfrom) {
    if (Nfrom < 1) throw std::invalid_argument("lowering_left: source sector must have N >= 1");
    MatrixXd a = MatrixXd::Zero(Nfrom, Nfrom + 1);
    for (int k = 0; k < Nfrom; ++k) a(k, k) = std::sqrt(static_cast<double>(Nfrom - k));
    return a;
}

MatrixXd lowering_right(int Nfrom) {
    if (Nfrom < 1) throw std::invalid_argument("lowering_right: source sector must have N >= 1");
    MatrixXd a = MatrixXd::Zero(Nfrom, Nfrom + 1);
    for (int k = 1; k <= Nfrom; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return a;
}

MatrixXd Hamiltonian::dense() const {
    const int dim = N + 1;
    MatrixXd h = MatrixXd::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) h(k, k) = diag[k];
    for (int k = 0; k < N; ++k) {
        h(k, k + 1) = off[k];
        h(k + 1, k) = off[k];
    }
    return h;
}

Hamiltonian build_hamiltonian(const ModelParams& p) {
    p.validate();
    Hamiltonian h;
    h.N = p.N;
    const VectorXd n = n_values(p.N);
    h.diag = p.epsilon * n.array() + p.U * n.array().square();
    h.off = -0.5 * p.J * ladder_amplitudes(p.N);
    return h;
}

Spectrum diagonalize(const Hamiltonian& h) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> solver;
    solver.computeFromTridiagonal(h.diag, h.off);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("diagonalize: tridiagonal eigensolver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

GroundState ground_state(const ModelParams& p) {
    const Hamiltonian h = build_hamiltonian(p);
    const Spectrum sp = diagonalize(h);
    GroundState g;
    g.energy = sp.energies[0];
    g.psi = sp.vectors.col(0);
    const int dim = p.N + 1;
    if (dim > 1) {
        const double width = sp.energies[dim - 1] - sp.energies[0];
        const double gap = sp.energies[1] - sp.energies[0];
        g.degenerate = gap <= 1e-12 * std::max(width, 1.0);
        if (g.degenerate) {
            // Parity maps n -> -n, i.e. reverses the coefficient vector. Pick
            // the even combination from the two lowest states.
            VectorXd even = g.psi + g.psi.reverse().eval();
            if (even.norm() < 1e-8) even = sp.vectors.col(1) + sp.vectors.col(1).reverse().eval();
            if (even.norm() > 1e-8) g.psi = even / even.norm();
        }
    }
    // Fix the overall sign so results are reproducible across eigensolvers.
    int imax;
    g.psi.cwiseAbs().maxCoeff(&imax);
    if (g.psi[imax] < 0) g.psi = -g.psi;
    return g;
}

MatrixXcd GroundState::density() const {
    return (psi * psi.transpose()).cast<std::complex<double>>();
}

MatrixXcd thermal_state(const ModelParams& p, double kBT) {
    if (kBT < 0) throw std::invalid_argument("thermal_state: kBT must be >= 0");
    if (kBT == 0) return ground_state(p).density();
    const Spectrum sp = diagonalize(build_hamiltonian(p));
    const VectorXd w = ((sp.energies.array() - sp.energies[0]) / (-kBT)).exp();
    const double z = w.sum();
    MatrixXd rho = sp.vectors * (w / z).asDiagonal() * sp.vectors.transpose();
    return rho.cast<std::complex<double>>();
}

double thermal_occupation(double omega, double kBT) {
    if (!(omega > 0)) throw std::invalid_argument("thermal_occupation: omega must be > 0");
    if (kBT <= 0) return 0.0;
    return 1.0 / std::expm1(omega / kBT);
}

double coherence_g1(const MatrixXcd& rho) {
    const int dim = static_cast<int>(rho.rows());
    if (dim < 2 || rho.cols() != dim)
        throw std::invalid_argument("coherence_g1: density matrix must be square with dim >= 2");
    const int N = dim - 1;
    const VectorXd n = n_values(N);
    const double s = 0.5 * N;
    double nl = 0, nr = 0;
    for (int k = 0; k < dim; ++k) {
        const double pk = rho(k, k).real();
        nl += pk * (s + n[k]);
        nr += pk * (s - n[k]);
    }
    // <a_L^dag a_R> = <S+> = sum_k c_k rho(k+1, k).
    std::complex<double> splus = 0;
    const VectorXd c = ladder_amplitudes(N);
    for (int k = 0; k < N; ++k) splus += c[k] * rho(k + 1, k);
    const double denom = nl * nr;
    if (denom <= 0)
        throw std::domain_error("coherence_g1: undefined when one well is empty");
    return std::abs(splus) / std::sqrt(denom);
}

double expect_real(const MatrixXcd& rho, const MatrixXcd& op) {
    return (op * rho).trace().real();
}

double hermiticity_error(const MatrixXcd& a) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

} // namespace bjj::model
