// model.hpp — two-mode Bose-Hubbard model in the collective spin basis
//
// Basis convention: a fixed total atom number N spans a spin s = N/2 sector of
// dimension N+1. Index k = 0..N labels |s, n> with n = s - k, i.e. k = 0 is all
// atoms in the left well (n_L = N - k, n_R = k). The imbalance operator S3 is
// diagonal, S1 couples neighbours, so the Hamiltonian
//     H = epsilon*S3 - J*S1 + U*S3^2
// is real symmetric tridiagonal in this basis.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>

namespace bjj::model {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

struct ModelParams {
    int N = 2;           // total atom number (>= 1)
    double J = 1.0;      // tunneling energy, sets the unit scale (> 0)
    double U = 0.0;      // on-site interaction (>= 0; attractive regime out of scope)
    double epsilon = 0.0;// well asymmetry energy per atom

    void validate() const; // throws std::invalid_argument
};

enum class Regime { Rabi, Josephson, Fock };

std::string regime_name(Regime r);

// Derived scales: u = N*U/J, xi = (1+u)^{1/4}, omega_J = xi^2 * J, and the
// critical asymmetry eps_c = (u^{2/3}-1)^{3/2} (in units of J; 0 for u <= 1).
// Regime boundaries: u < 1 Rabi, 1 <= u < N^2 Josephson, u >= N^2 Fock.
struct CharacteristicParams {
    double u = 0;
    double xi = 1;
    double omega_J = 1;
    double eps_c = 0;
    Regime regime = Regime::Rabi;
};

CharacteristicParams characteristic_params(const ModelParams& p);

// n quantum numbers (diagonal of S3): n_k = N/2 - k, k = 0..N.
VectorXd n_values(int N);

struct SpinOperators {
    MatrixXcd S1, S2, S3;
};

// Dense (N+1)x(N+1) spin-s matrices; S1, S2 tridiagonal, S3 diagonal.
SpinOperators build_spin_operators(int N);

// a_L^dag a_R on the sector (= S1 + i S2); used by coherence estimators.
MatrixXcd hopping_operator(int N);

// Annihilation maps between sectors: N' -> N'-1, shape N' x (N'+1).
// lowering_left[k,k] = sqrt(N'-k), lowering_right[k-1,k] = sqrt(k).
MatrixXd lowering_left(int Nfrom);
MatrixXd lowering_right(int Nfrom);

// Real symmetric tridiagonal Hamiltonian.
struct Hamiltonian {
    int N = 0;
    VectorXd diag; // epsilon*n + U*n^2
    VectorXd off;  // -J/2 * sqrt(s(s+1) - n(n+1)) between k and k+1
    MatrixXd dense() const;
};

Hamiltonian build_hamiltonian(const ModelParams& p);

struct Spectrum {
    VectorXd energies;  // ascending
    MatrixXd vectors;   // column j is the j-th eigenvector
};

Spectrum diagonalize(const Hamiltonian& h);

struct GroundState {
    double energy = 0;
    VectorXd psi;           // even-parity combination when degenerate
    bool degenerate = false;// lowest gap below 1e-12 * spectral width
    MatrixXcd density() const;
};

GroundState ground_state(const ModelParams& p);

// Gibbs state exp(-(H-E0)/kBT) / Z; kBT in the same energy units as J.
// kBT = 0 returns the ground-state projector.
MatrixXcd thermal_state(const ModelParams& p, double kBT);

// Bose occupation of the plasma mode at temperature kBT: 1/(exp(w/kBT)-1).
double thermal_occupation(double omega, double kBT);

// One-particle left-right coherence of a fixed-N state:
//     g1 = |<a_L^dag a_R>| / sqrt(<n_L><n_R>).
// Throws std::domain_error when <n_L><n_R> = 0.
double coherence_g1(const MatrixXcd& rho);

// Expectation helpers on a fixed-N sector block.
double expect_real(const MatrixXcd& rho, const MatrixXcd& op);

// max |A - A^dag| entry; 0 for exactly Hermitian matrices.
double hermiticity_error(const MatrixXcd& a);

} // namespace bjj::model
