#include "bjj/noise_rates.hpp"

#include "bjj/constants.hpp"
#include "bjj/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bjj::noise_rates {
namespace {

constexpr double kPi = 3.14159265358979323846;

// magnetic moment over hbar, 1/(T s)
double moment_over_hbar(double g_F, double F) {
    return g_F * constants::muB * F / constants::hbar;
}

double density_centroid(const Eigen::VectorXd& dens, const trap::Grid& g) {
    const Eigen::VectorXd xs = g.x();
    const double dx = g.dx();
    const double w = dens.sum() * dx;
    if (!(w > 0)) throw std::invalid_argument("density has no weight");
    return (xs.array() * dens.array()).sum() * dx / w;
}

} // namespace

const char* spectrum_name(SpectrumKind k) {
    switch (k) {
        case SpectrumKind::johnson_exp_corr: return "johnson_exp_corr";
        case SpectrumKind::technical_slope: return "technical_slope";
        case SpectrumKind::flat_spectrum: return "flat_spectrum";
    }
    return "unknown";
}

SpectrumKind spectrum_from_name(const std::string& name) {
    if (name == "johnson_exp_corr") return SpectrumKind::johnson_exp_corr;
    if (name == "technical_slope") return SpectrumKind::technical_slope;
    if (name == "flat_spectrum") return SpectrumKind::flat_spectrum;
    throw ConfigError("unknown noise spectrum '" + name + "'");
}

void NoiseSpec::validate() const {
    if (!(F > 0) || !(g_F > 0)) throw ConfigError("spin quantum numbers must be positive");
    if (B_pp_T2_per_Hz < 0 || B_mp_T2_per_Hz < 0 || S_grad_T2_per_um2_Hz < 0)
        throw ConfigError("spectral densities must be non-negative");
    if (kind == SpectrumKind::johnson_exp_corr && !(lambda_c_um > 0))
        throw ConfigError("correlation length must be positive");
}

double overlap_alpha(const Eigen::VectorXd& dens_a, const Eigen::VectorXd& dens_b,
                     double lambda_um, const trap::Grid& g) {
    g.validate();
    if (dens_a.size() != g.n || dens_b.size() != g.n)
        throw std::invalid_argument("density not sampled on this grid");
    if (!(lambda_um > 0)) throw std::invalid_argument("correlation length must be positive");

    const int n = g.n;
    const double dx = g.dx();
    Eigen::VectorXd row(n);

#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        double acc = 0;
        for (int j = 0; j < n; ++j)
            acc += std::exp(-std::abs(i - j) * dx / lambda_um) * dens_b[j];
        row[i] = acc;
    }

    double total = 0;
    for (int i = 0; i < n; ++i) total += dens_a[i] * row[i];
    return total * dx * dx;
}

double dephasing_rate(const NoiseSpec& spec, const Eigen::VectorXd& dens_left,
                      const Eigen::VectorXd& dens_right, const trap::Grid& g) {
    spec.validate();
    const double mo = moment_over_hbar(spec.g_F, spec.F);
    switch (spec.kind) {
        case SpectrumKind::flat_spectrum:
            return 0.0;
        case SpectrumKind::technical_slope: {
            const double d_sep =
                std::abs(density_centroid(dens_right, g) - density_centroid(dens_left, g));
            return 0.5 * mo * mo * spec.S_grad_T2_per_um2_Hz * d_sep * d_sep;
        }
        case SpectrumKind::johnson_exp_corr: {
            const double aLL = overlap_alpha(dens_left, dens_left, spec.lambda_c_um, g);
            const double aRR = overlap_alpha(dens_right, dens_right, spec.lambda_c_um, g);
            const double aLR = overlap_alpha(dens_left, dens_right, spec.lambda_c_um, g);
            const double gamma_N = mo * mo * spec.B_pp_T2_per_Hz;
            return 0.5 * gamma_N * (aLL + aRR - 2 * aLR);
        }
    }
    throw std::logic_error("unreachable spectrum kind");
}

double loss_rate(const NoiseSpec& spec) {
    spec.validate();
    const double mo = spec.g_F * constants::muB / constants::hbar;
    return mo * mo * spec.F * spec.B_mp_T2_per_Hz;
}

double trap_lifetime(const NoiseSpec& spec, double cascade_factor) {
    if (!(cascade_factor > 0)) throw std::invalid_argument("cascade factor must be positive");
    const double rate = loss_rate(spec);
    if (!(rate > 0)) return std::numeric_limits<double>::infinity();
    return cascade_factor / rate;
}

void SurfaceModel::validate() const {
    if (!(layer_h_um > 0)) throw ConfigError("layer thickness must be positive");
    if (!(T_K > 0)) throw ConfigError("temperature must be positive");
    if (!(larmor_Hz > 0)) throw ConfigError("Larmor frequency must be positive");
    if (!(resistivity_per_K > 0)) throw ConfigError("resistivity slope must be positive");
    if (!(F > 0) || !(g_F > 0)) throw ConfigError("spin quantum numbers must be positive");
    if (!(kappa > 0)) throw ConfigError("moment calibration must be positive");
    if (!(cascade_factor > 0)) throw ConfigError("cascade factor must be positive");
}

double SurfaceModel::skin_depth_um() const {
    const double omega = 2 * kPi * larmor_Hz;
    const double rho = resistivity_per_K * T_K;
    return std::sqrt(2 * rho / (constants::mu0 * omega)) * 1e6;
}

double SurfaceModel::nbar_thermal() const {
    const double omega = 2 * kPi * larmor_Hz;
    return constants::kB * T_K / (constants::hbar * omega);
}

double SurfaceModel::c1_um2_per_s() const {
    using namespace bjj::constants;
    const double omega = 2 * kPi * larmor_Hz;
    const double mu_t = kappa * g_F * muB * std::sqrt(F);
    const double inv_tau0 = mu0 * mu_t * mu_t * omega * omega * omega / (3 * kPi * hbar * c_light * c_light * c_light);
    const double wavelength3 = std::pow(c_light / omega, 3); // m^3
    const double delta_m = skin_depth_um() * 1e-6;
    const double layer_m = layer_h_um * 1e-6;
    const double c1_m2 = (3.0 / 8.0) * (3.0 / 8.0) * (nbar_thermal() + 1) * wavelength3 *
                         (2 * layer_m / (delta_m * delta_m)) * inv_tau0;
    return c1_m2 * 1e12;
}

double SurfaceModel::flip_rate(double z0_um) const {
    if (!(z0_um > 0)) throw std::invalid_argument("distance must be positive");
    return c1_um2_per_s() / (z0_um * (z0_um + layer_h_um));
}

double SurfaceModel::lifetime_s(double z0_um) const { return cascade_factor / flip_rate(z0_um); }

double SurfaceModel::thin_layer_deviation(double z0_um) const {
    if (!(z0_um > 0)) throw std::invalid_argument("distance must be positive");
    return layer_h_um / (z0_um + layer_h_um);
}

LifetimeFit fit_lifetimes(const std::vector<double>& z0_um, const std::vector<double>& tau_s,
                          const SurfaceModel& model) {
    model.validate();
    if (z0_um.size() != tau_s.size()) throw std::invalid_argument("mismatched fit arrays");
    if (z0_um.size() < 2) throw std::invalid_argument("need at least two lifetime points");
    for (std::size_t i = 0; i < z0_um.size(); ++i)
        if (!(z0_um[i] > 0) || !(tau_s[i] > 0))
            throw std::invalid_argument("distances and lifetimes must be positive");

    const std::size_t n = z0_um.size();

    // fixed slope: log10(1/tau) = log10(c) - 2 log10(z0)
    double acc = 0;
    for (std::size_t i = 0; i < n; ++i)
        acc += std::log10(1.0 / tau_s[i]) + 2 * std::log10(z0_um[i]);
    const double c_fixed = std::pow(10.0, acc / double(n));

    // free slope diagnostic
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log10(z0_um[i]);
        const double y = std::log10(1.0 / tau_s[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = double(n) * sxx - sx * sx;
    LifetimeFit fit;
    fit.c_um2_per_s = c_fixed;
    if (std::abs(denom) > 1e-300) {
        fit.slope = (double(n) * sxy - sx * sy) / denom;
        fit.intercept = (sy - fit.slope * sx) / double(n);
    } else {
        fit.slope = std::nan("");
        fit.intercept = std::nan("");
    }

    fit.c1_model_um2_per_s = model.c1_um2_per_s();
    fit.c2_um2_per_s = fit.c_um2_per_s - fit.c1_model_um2_per_s;
    fit.johnson_dominated = fit.c2_um2_per_s < fit.c1_model_um2_per_s;

    const double divisor = constants::mu0 * model.g_F * constants::muB /
                           (2 * kPi * constants::hbar); // m per (A s^-0.5) bookkeeping
    const double c_for_current = fit.c2_um2_per_s > 0 ? fit.c2_um2_per_s : fit.c_um2_per_s;
    fit.current_noise_is_upper_bound = !(fit.c2_um2_per_s > 0);
    fit.current_noise_A_per_sqrtHz = std::sqrt(c_for_current * 1e-12) / divisor;
    return fit;
}

double combined_lifetime_s(const SurfaceModel& model, double c2_um2_per_s, double z0_um) {
    if (!(z0_um > 0)) throw std::invalid_argument("distance must be positive");
    const double c_total = model.c1_um2_per_s() + c2_um2_per_s;
    if (!(c_total > 0)) return std::numeric_limits<double>::infinity();
    return z0_um * z0_um / c_total;
}

} // namespace bjj::noise_rates
