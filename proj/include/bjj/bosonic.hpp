// bosonic.hpp — linearized (Gaussian-mode) predictions for decay rates
//
// Around the coherent ground state the junction reduces to one harmonic mode
// of frequency omega_J whose quadratures are squeezed by xi = (1+u)^{1/4}.
// Collective noise then yields closed-form instantaneous coherence decay
// rates of the form base + amp*cos(2 omega_J t):
//   phase noise (S3):  Gamma(t) = g3 [cos^2(wt) + xi^-4 sin^2(wt)]  (suppressed)
//   number noise (S2): Gamma(t) = g2 [cos^2(wt) + xi^+4 sin^2(wt)]  (enhanced)
// Both reduce to the single-particle constant g at xi = 1, which pins the
// overall normalization (d<S1>/dt = -g<S1> exactly for u = 0).
#pragma once

#include "bjj/model.hpp"

#include <complex>
#include <vector>

namespace bjj::bosonic {

struct RatePrediction {
    double gamma_in = 0; // microscopic rate the law scales with
    double xi = 1;
    double omega_J = 1;
    double base = 0; // time average
    double amp = 0;  // cos(2 omega_J t) coefficient

    double at(double t) const;
    double integrated(double t) const; // int_0^t Gamma dt'
    double minimum() const { return base - std::abs(amp); }
    double maximum() const { return base + std::abs(amp); }
    double average() const { return base; }
};

RatePrediction phase_noise_rate(const model::ModelParams& p, double gamma3);
RatePrediction number_noise_rate(const model::ModelParams& p, double gamma2);

// Moments of the squeezed mode under number noise, from the linearized
// closed forms:  d<b'b>/dt = R,  d<b^2>/dt = -2i w <b^2> - R,
// R = gamma2 N xi^2 / 2, and the coherence via
// S1 = N/2 - [xi^2 (b+b')^2 - xi^-2 (b-b')^2 - 2]/4.
struct BosonicMoments {
    double nb = 0;                 // <b^dag b>
    std::complex<double> b2 = 0;   // <b^2>
    double S1 = 0;
    double g1 = 0;                 // 2 S1 / N
    bool linearization_valid = true; // nb <= N/10
};

BosonicMoments bosonic_moments(const model::ModelParams& p, double gamma2, double nb0,
                               std::complex<double> b2_0, double t);

// One-body loss scrambles the relative phase by +-(1 - 1/xi^2) per event,
// giving Gamma_dec(t) ~ gamma_loss (1 - xi^-2)/(2N) [c(t) + s(t) xi^4] with
// c, s -> 1/2 on average. Enhancement beyond the bare loss rate needs
// xi^4 / 2N > 1.
struct LossDecoherenceEstimate {
    double gamma_loss = 0;
    double xi = 1;
    double omega_J = 1;
    double prefactor = 0;     // gamma_loss (1 - xi^-2) / 2N
    double kick = 0;          // imbalance shift per loss event, (1 - 1/xi^2)
    double average = 0;       // prefactor (1 + xi^4)/2
    bool enhanced = false;    // xi^4/(2N) > 1

    double at(double t) const; // with c = cos^2, s = sin^2
};

LossDecoherenceEstimate loss_decoherence_estimate(const model::ModelParams& p, double gamma_loss);

// Least-squares fit of a sampled rate to A + B cos(2 omega t); NaN samples
// are skipped. c0_effective = (A+B)/prefactor recovers the effective c(0)
// weight of a loss-decoherence trace.
struct OscillationFit {
    double mean = 0; // A
    double amp = 0;  // B
};

OscillationFit fit_rate_oscillation(const std::vector<double>& t, const std::vector<double>& rate,
                                    double omega);

} // namespace bjj::bosonic
