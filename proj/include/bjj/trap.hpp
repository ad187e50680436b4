// trap.hpp — quasi-1D double-well solver and two-mode reduction
//
// Works in scaled units: lengths in micrometers, energies in Hz (E/h). The
// axial potential is a cosine barrier V0 cos^2(pi x / d) for |x| <= d/2
// (wells at x = +-d/2, barrier centered at 0) continued by harmonic walls
// (1/2) m omega_x^2 (|x| - d/2)^2 outside, so exactly one well pair survives.
//
// Two couplings are supported. With an explicit g1d the mean field is the
// plain quasi-1D surrogate g1d n(x). With a transverse frequency nu_perp the
// mean field is evaluated on the trap axis through a variational Gaussian
// whose width swells with the local line density,
//     MF(n) = 4 (hbar w_perp / h) a_s n / sqrt(1 + 2 a_s n),
// and the doublet splitting is averaged over transverse offsets: a tube of
// the cloud displaced by transverse energy v sees the mean field sunk by v,
// and offsets of a radial Gaussian are exponentially distributed with mean
// (hbar w_perp / h) sqrt(1 + 2 a_s n_peak) / 2. The averaged splitting
// reproduces the suppression of tunneling that a strictly 1D treatment
// misses, because most of the cloud sits off axis where the barrier is
// effectively taller.
//
// The condensate orbital comes from imaginary-time split-step relaxation of
// the 1D Gross-Pitaevskii equation followed by a self-consistent polish on
// the finite-difference operator, so the returned orbital is an eigenvector
// of T + V + MF(N phi^2) to machine precision. The wavefunction is
// symmetrized every iteration, which projects out the odd doublet partner
// and makes the effective relaxation gap the second excitation rather than
// the tunneling splitting. Junction parameters follow from the two lowest
// modes of the linear operator: J is the doublet splitting, U the on-site
// interaction of the left/right combinations.
#pragma once

#include "bjj/constants.hpp"

#include <Eigen/Dense>

#include <vector>

namespace bjj::trap {

struct Grid {
    int n = 2048;
    double length = 30.0; // micrometers, centered on 0
    double dx() const { return length / n; }
    Eigen::VectorXd x() const;
    void validate() const;
};

struct TrapPotential {
    double V0_Hz = 470;
    double d_um = 5;
    double omega_x_Hz = 200; // ordinary frequency of the harmonic walls
    double operator()(double x) const;
    Eigen::VectorXd evaluate(const Grid& g) const;
    void validate() const;
};

struct GpeProblem {
    int N = 200;
    double g1d_Hz_um = 0;    // plain surrogate coupling; used when nu_perp_Hz == 0
    double nu_perp_Hz = 500; // transverse confinement; enables the on-axis model
    double a_s_um = constants::a_scatter_rb87 * 1e6;
    TrapPotential pot;

    bool transverse() const { return nu_perp_Hz > 0; }
    double coupling_axis_Hz_um() const;              // 4 (hbar/h) w_perp a_s
    double swell(double n_per_um) const;             // sqrt(1 + 2 a_s n)
    double mean_field_Hz(double n_per_um) const;     // axial mean-field energy
    double coupling_pair_Hz_um(double n_per_um) const; // density-density weight
    void validate() const;
};

// g_1D = 2 hbar omega_perp a_s for tight transverse confinement, in Hz um.
double g1d_from_transverse(double nu_perp_Hz, double a_s_m);

struct GroundOptions {
    int max_iters = 40000;
    double tol = 1e-13; // relative density change per polish step
    bool throw_on_fail = true;
};

struct GroundSolution {
    Eigen::VectorXd phi; // real, even, normalized to integral 1
    Eigen::VectorXd mean_field_Hz;
    double mu_Hz = 0;
    int iterations = 0;
    double residual = 0; // sqrt(dx) L2 norm of (H_GP - mu) phi
    bool converged = false;
};

GroundSolution solve_ground(const GpeProblem& prob, const Grid& g, const GroundOptions& opt = {});

struct ModeSpectrum {
    Eigen::VectorXd energies_Hz; // lowest eigenvalues, ascending
    Eigen::MatrixXd vectors;     // first columns as grid functions, integral-normalized
};

// Finite-difference modes of T + V_eff with Dirichlet box ends. All requested
// eigenvalues come from the tridiagonal QR pass; only n_vectors eigenvectors
// are recovered, by shifted inverse iteration.
ModeSpectrum linear_modes(const Eigen::VectorXd& V_eff_Hz, const Grid& g, int n_energies,
                          int n_vectors);

// k smallest eigenvalues of the symmetric tridiagonal (diag, sub) by Sturm
// bisection; no vectors.
std::vector<double> tridiag_smallest(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub,
                                     int k);

struct TwoModeParams {
    double mu_Hz = 0;
    double mu_offset_Hz = 0; // transverse zero point, reported separately
    double J_Hz = 0;         // doublet splitting E1 - E0
    double U_Hz = 0;         // pair coupling integral of |phi_L|^4
    double U_cross_Hz = 0;   // neglected cross term, integral |phi_L|^2 |phi_R|^2
    double u = 0;            // N U / J
    double xi2 = 1;          // sqrt(1 + u)
    double nu_J_Hz = 0;      // sqrt(J (J + N U))
    Eigen::VectorXd gaps_Hz; // excitation energies above the lowest mode
    bool valid = false;         // V0 > mu
    bool fock_regime = false;   // xi^2 > N
    bool loss_enhanced = false; // xi^2 > 2 sqrt(N)
    Eigen::VectorXd phi_sym, phi_asym;
    Eigen::VectorXd dens_left, dens_right; // |phi_L|^2, |phi_R|^2 on the grid
};

TwoModeParams extract_two_mode(const GpeProblem& prob, const Grid& g,
                               const GroundSolution& ground, const ModeSpectrum& modes,
                               double splitting_Hz);

struct TrapAnalysis {
    Grid grid;
    Eigen::VectorXd potential_Hz;
    GroundSolution ground;
    ModeSpectrum modes;
    TwoModeParams two_mode;
};

TrapAnalysis characterize(const GpeProblem& prob, const Grid& g, const GroundOptions& opt = {});

struct SweepPoint {
    int N = 0;
    double V0_Hz = 0;
};

// Independent points run in parallel; rows land at their own indices, so the
// result does not depend on the thread count.
std::vector<TrapAnalysis> sweep_barrier(const GpeProblem& base, const std::vector<SweepPoint>& points,
                                        const Grid& g, const GroundOptions& opt = {});

} // namespace bjj::trap
