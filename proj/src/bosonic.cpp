#include "bjj/bosonic.hpp"

#include <cmath>
#include <stdexcept>

namespace bjj::bosonic {

double RatePrediction::at(double t) const {
    return base + amp * std::cos(2.0 * omega_J * t);
}

double RatePrediction::integrated(double t) const {
    return base * t + amp * std::sin(2.0 * omega_J * t) / (2.0 * omega_J);
}

static RatePrediction make_rate(const model::ModelParams& p, double gamma, double exponent) {
    if (gamma < 0) throw std::invalid_argument("rate prediction: gamma must be >= 0");
    const auto c = model::characteristic_params(p);
    RatePrediction r;
    r.gamma_in = gamma;
    r.xi = c.xi;
    r.omega_J = c.omega_J;
    const double f = std::pow(c.xi, exponent); // xi^-4 (phase) or xi^4 (number)
    r.base = 0.5 * gamma * (1.0 + f);
    r.amp = 0.5 * gamma * (1.0 - f);
    return r;
}

RatePrediction phase_noise_rate(const model::ModelParams& p, double gamma3) {
    return make_rate(p, gamma3, -4.0);
}

RatePrediction number_noise_rate(const model::ModelParams& p, double gamma2) {
    return make_rate(p, gamma2, 4.0);
}

BosonicMoments bosonic_moments(const model::ModelParams& p, double gamma2, double nb0,
                               std::complex<double> b2_0, double t) {
    if (gamma2 < 0) throw std::invalid_argument("bosonic_moments: gamma2 must be >= 0");
    if (nb0 < 0) throw std::invalid_argument("bosonic_moments: nb0 must be >= 0");
    const auto c = model::characteristic_params(p);
    const double xi2 = c.xi * c.xi;
    const double R = 0.5 * gamma2 * p.N * xi2;
    const double w = c.omega_J;

    BosonicMoments m;
    m.nb = nb0 + R * t;
    const std::complex<double> rot = std::exp(std::complex<double>(0, -2.0 * w * t));
    const std::complex<double> drive(0, R / (2.0 * w));
    m.b2 = b2_0 * rot + drive * (1.0 - rot);
    const double quad_sum = xi2 + 1.0 / xi2;
    const double quad_diff = xi2 - 1.0 / xi2;
    m.S1 = 0.5 * p.N - 0.25 * (2.0 * quad_diff * m.b2.real() + 2.0 * quad_sum * m.nb + (quad_sum - 2.0));
    m.g1 = 2.0 * m.S1 / p.N;
    m.linearization_valid = m.nb <= 0.1 * p.N;
    return m;
}

double LossDecoherenceEstimate::at(double t) const {
    const double c = std::cos(omega_J * t), s = std::sin(omega_J * t);
    return prefactor * (c * c + s * s * xi * xi * xi * xi);
}

LossDecoherenceEstimate loss_decoherence_estimate(const model::ModelParams& p, double gamma_loss) {
    if (gamma_loss < 0) throw std::invalid_argument("loss_decoherence_estimate: gamma_loss must be >= 0");
    const auto c = model::characteristic_params(p);
    LossDecoherenceEstimate e;
    e.gamma_loss = gamma_loss;
    e.xi = c.xi;
    e.omega_J = c.omega_J;
    const double xi2 = c.xi * c.xi;
    const double xi4 = xi2 * xi2;
    e.kick = 1.0 - 1.0 / xi2;
    e.prefactor = gamma_loss * e.kick / (2.0 * p.N);
    e.average = e.prefactor * 0.5 * (1.0 + xi4);
    e.enhanced = xi4 / (2.0 * p.N) > 1.0;
    return e;
}

OscillationFit fit_rate_oscillation(const std::vector<double>& t, const std::vector<double>& rate,
                                    double omega) {
    if (t.size() != rate.size()) throw std::invalid_argument("fit_rate_oscillation: size mismatch");
    // Normal equations for [A, B] with basis {1, cos(2 w t)}.
    double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
    long n = 0;
    for (size_t i = 0; i < t.size(); ++i) {
        if (std::isnan(rate[i])) continue;
        const double x = std::cos(2.0 * omega * t[i]);
        s11 += 1;
        s12 += x;
        s22 += x * x;
        r1 += rate[i];
        r2 += rate[i] * x;
        ++n;
    }
    if (n < 2) throw std::invalid_argument("fit_rate_oscillation: need at least 2 finite samples");
    const double det = s11 * s22 - s12 * s12;
    if (std::abs(det) < 1e-12 * s11 * std::max(s22, 1.0))
        throw std::invalid_argument("fit_rate_oscillation: basis is degenerate on this grid");
    OscillationFit f;
    f.mean = (r1 * s22 - r2 * s12) / det;
    f.amp = (s11 * r2 - s12 * r1) / det;
    return f;
}

} // namespace bjj::bosonic
