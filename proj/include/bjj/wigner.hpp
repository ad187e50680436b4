// wigner.hpp — truncated-Wigner phase-space sampler for the junction
//
// Points live on the Bloch sphere (theta, phi) with z = (N/2) cos(theta) the
// number imbalance. The mean-field flow
//     dphi/dt = eps + N U w + J w cos(phi)/sqrt(1-w^2),   w = cos(theta)
//     dw/dt   = -J sqrt(1-w^2) sin(phi)
// splits exactly into two rotations: a w-dependent twist about axis 3 and a
// rigid rotation about axis 1 at rate J. One step composes them in Strang
// order, so the map is symplectic (area preserving) with no secular energy
// drift. Collective noise enters as rigid stochastic rotations about the
// corresponding axis with angle ~ Normal(0, 2 gamma dt), applied after the
// flow within each substep.
//
// Every trajectory owns a counter-based RNG stream keyed by (seed,
// trajectory, interval) and partial sums are reduced in a fixed order, so
// results are bitwise identical for any thread count.
#pragma once

#include "bjj/liouvillian.hpp"
#include "bjj/model.hpp"

#include <cstdint>
#include <vector>

namespace bjj::wigner {

struct PhasePoint {
    double theta = 1.5707963267948966; // [0, pi]
    double phi = 0;                    // wrapped to (-pi, pi]
};

struct PhaseEnsemble {
    int N = 0;
    std::vector<PhasePoint> points;
    std::vector<std::uint8_t> pole_flagged; // clamped at |cos theta| > 1-1e-9
};

// Gaussian ground-state cloud at (pi/2, 0): var(phi) = xi^2/N and
// var(cos theta) = 1/(xi^2 N), i.e. var(n) = N/(4 xi^2). Throws
// std::domain_error in the Fock regime (u >= N^2) where the cloud wraps.
PhaseEnsemble sample_ground_wigner(const model::ModelParams& p, int M, std::uint64_t seed);

// One Strang-split symplectic step of the mean-field flow.
PhasePoint flow_step(const PhasePoint& pt, const model::ModelParams& p, double dt);

// Rigid rotation about axis (1, 2, or 3) by the given angle.
PhasePoint kick(const PhasePoint& pt, int axis, double angle);

// Mean-field energy in units of J (diagnostic; conserved by flow_step).
double energy(const PhasePoint& pt, const model::ModelParams& p);

struct CoherenceEstimate {
    double direct = 0;    // exp(1/N) * <sin(theta) cos(phi)>; the Weyl symbol of
                          // S1/s has radius s+1/2, hence the 1/N correction
    double gaussian = 0;  // exp[-(var_a + var_b - 2/N)/2], principal-axis variances
    double var_phi = 0;   // tangent-plane variances at the ensemble mean
    double var_n = 0;     // variance of n = (N/2) cos theta
    double stderr_direct = 0;
    long excluded = 0;              // pole-flagged points left out of the covariance
    bool estimators_disagree = false; // direct vs gaussian differ by > 5%
};

CoherenceEstimate ensemble_coherence(const PhaseEnsemble& e);

struct WignerOptions {
    double dt_factor = 0.02;      // substep = dt_factor / omega_J ...
    double kick_dt_factor = 0.1;  // ... capped at kick_dt_factor / gamma_max
};

struct WignerSeries {
    std::vector<double> t;
    std::vector<double> direct, gaussian;
    std::vector<double> var_phi, var_n;
    std::vector<double> stderr_direct;
};

// Samples the ground cloud, then alternates flow and kicks over the grid.
// Only the rotation noise channels are meaningful here; loss rates must be 0.
WignerSeries run_ensemble(const model::ModelParams& p, const lindblad::NoiseChannels& nc, int M,
                          std::uint64_t seed, const std::vector<double>& t_grid,
                          const WignerOptions& opt = {});

} // namespace bjj::wigner
