// dynamics.hpp — master-equation time evolution and decay-rate extraction
#pragma once

#include "bjj/liouvillian.hpp"
#include "bjj/model.hpp"
#include "bjj/sectors.hpp"

#include <vector>

namespace bjj::lindblad {

struct EvolveOptions {
    double tol = 1e-9;            // local error per step, in units of 1/J
    bool check_positivity = true; // abort when a sampled block dips below the budget
};

// Sampled observables on the requested grid. Gamma is the instantaneous
// coherence decay rate -d log g1 / dt (for lossless evolutions this equals
// -d log <S1>/dt); NaN where undefined.
struct EvolutionResult {
    std::vector<double> t;
    std::vector<double> S1, S2, S3, S3sq;
    std::vector<double> g1;
    std::vector<double> N_mean;
    std::vector<double> Gamma;
    SectoredDensityMatrix final_state;
    long steps_accepted = 0;
    long steps_rejected = 0;
};

// Evolves rho0 (a fixed-N block, Hermitian, unit trace, positive within
// 1e-10) over the strictly increasing time grid. Throws NumericalError on
// stiffness breakdown or positivity violation beyond 10*tol*max(1, elapsed).
EvolutionResult evolve(const model::ModelParams& p, const NoiseChannels& nc,
                       const MatrixXcd& rho0, const std::vector<double>& t_grid,
                       const EvolveOptions& opt = {});

// Centered log-derivative rate Gamma_i = -d log y/dt at t_i (one-sided at the
// ends and at the last sample before a non-positive y). Entries from the
// first non-positive y onward are NaN.
std::vector<double> instantaneous_rate(const std::vector<double>& t, const std::vector<double>& y);

} // namespace bjj::lindblad
