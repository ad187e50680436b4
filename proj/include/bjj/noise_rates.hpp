// noise_rates.hpp — magnetic-noise coupling rates and surface lifetime model
//
// Converts magnetic field noise above a conducting chip surface into the
// junction's collective rates. Dephasing couples through the difference of
// the potential felt by the left and right orbitals; for spatially correlated
// noise (correlation length lambda_c) the rate involves the double overlap
//     alpha_ij = integral e^{-|x-x'|/lambda_c} |phi_i(x)|^2 |phi_j(x')|^2
// so perfectly common-mode noise (flat spectrum, lambda_c -> infinity) drops
// out. Spin flips at the Larmor frequency empty the trap; the Johnson model
// for a thin metal layer gives a flip rate c1/z0^2 with
//     c1 = (3/8)^2 (nbar+1) (c/omega)^3 (2h/delta^2) / tau0,
//     1/tau0 = mu0 mu_t^2 omega^3 / (3 pi hbar c^3),  mu_t = kappa mu_F sqrt(F)
// and delta the skin depth at the Larmor frequency. kappa is a fixed moment
// calibration absorbing the transition bookkeeping of the F=2 cascade.
#pragma once

#include "bjj/trap.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace bjj::noise_rates {

enum class SpectrumKind { johnson_exp_corr, technical_slope, flat_spectrum };

const char* spectrum_name(SpectrumKind k);
SpectrumKind spectrum_from_name(const std::string& name);

struct NoiseSpec {
    SpectrumKind kind = SpectrumKind::johnson_exp_corr;
    double F = 2;
    double g_F = 0.5;
    double B_pp_T2_per_Hz = 0;     // parallel-field PSD at low frequency
    double lambda_c_um = 1;        // correlation length of the surface noise
    double B_mp_T2_per_Hz = 0;     // transverse PSD at the Larmor frequency
    double S_grad_T2_per_um2_Hz = 0; // gradient PSD (technical noise)
    void validate() const;
};

// Correlated double overlap of two normalized densities with an exponential
// kernel. Rows are integrated in parallel; the row sums are added serially in
// index order, so the value is independent of the thread count.
double overlap_alpha(const Eigen::VectorXd& dens_a, const Eigen::VectorXd& dens_b,
                     double lambda_um, const trap::Grid& g);

// Collective dephasing rate (1/s) of the left/right superposition.
double dephasing_rate(const NoiseSpec& spec, const Eigen::VectorXd& dens_left,
                      const Eigen::VectorXd& dens_right, const trap::Grid& g);

// Spin-flip rate (1/s) out of the trapped state.
double loss_rate(const NoiseSpec& spec);

// Observed trap lifetime; the cascade through intermediate Zeeman levels
// stretches the single-flip time by cascade_factor.
double trap_lifetime(const NoiseSpec& spec, double cascade_factor = 2.0);

struct SurfaceModel {
    double layer_h_um = 0.5;            // metal film thickness
    double T_K = 400;                   // film temperature
    double larmor_Hz = 500e3;           // ordinary spin-flip frequency
    double resistivity_per_K = 8.133e-11; // Ohm m per kelvin, rho(T) = rho' T
    double F = 2;
    double g_F = 0.5;
    double kappa = 1.0485;              // frozen moment calibration
    double cascade_factor = 2.0;

    double skin_depth_um() const;
    double nbar_thermal() const;
    double c1_um2_per_s() const;            // flip-rate coefficient, thick regime
    double flip_rate(double z0_um) const;   // c1 / (z0 (z0 + h)), thin layer
    double lifetime_s(double z0_um) const;  // cascade_factor / flip_rate
    double thin_layer_deviation(double z0_um) const; // h / (z0 + h)
    void validate() const;
};

struct LifetimeFit {
    double c_um2_per_s = 0;   // fixed-slope fit of 1/tau = c / z0^2
    double slope = 0;         // free-slope diagnostic, expect -2
    double intercept = 0;     // free-slope log10 intercept
    double c1_model_um2_per_s = 0;
    double c2_um2_per_s = 0;  // technical excess, c - c1_model
    bool johnson_dominated = false;
    double current_noise_A_per_sqrtHz = 0;
    bool current_noise_is_upper_bound = false;
};

// Power-law fit of measured (distance, lifetime) pairs against the surface
// model; the excess coefficient is converted to an equivalent wire current
// noise through B = mu0 I / (2 pi z).
LifetimeFit fit_lifetimes(const std::vector<double>& z0_um, const std::vector<double>& tau_s,
                          const SurfaceModel& model);

// Lifetime predicted from the Johnson coefficient plus a technical excess.
double combined_lifetime_s(const SurfaceModel& model, double c2_um2_per_s, double z0_um);

} // namespace bjj::noise_rates
