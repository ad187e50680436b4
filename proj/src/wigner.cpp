#include "bjj/wigner.hpp"

#include "bjj/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace bjj::wigner {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPoleMargin = 1e-9;
constexpr std::uint64_t kSampleTag = ~std::uint64_t{0};

// splitmix64: counter-based stream, one per (seed, trajectory, interval)
struct SplitMix64 {
    std::uint64_t state;
    using result_type = std::uint64_t;
    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }
    std::uint64_t operator()() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

SplitMix64 stream_rng(std::uint64_t seed, std::uint64_t traj, std::uint64_t interval) {
    return SplitMix64{mix64(mix64(mix64(seed) ^ traj) ^ interval)};
}

double wrap_angle(double phi) { return std::remainder(phi, 2 * kPi); }

struct Cartesian {
    double x, y, z;
};

Cartesian to_cartesian(const PhasePoint& pt) {
    const double s = std::sin(pt.theta);
    return {s * std::cos(pt.phi), s * std::sin(pt.phi), std::cos(pt.theta)};
}

PhasePoint from_cartesian(const Cartesian& c, bool* clamped) {
    double z = std::clamp(c.z, -1.0, 1.0);
    if (clamped && std::abs(z) > 1 - kPoleMargin) *clamped = true;
    PhasePoint pt;
    pt.theta = std::acos(z);
    pt.phi = (c.x == 0 && c.y == 0) ? 0.0 : std::atan2(c.y, c.x);
    return pt;
}

} // namespace

PhaseEnsemble sample_ground_wigner(const model::ModelParams& p, int M, std::uint64_t seed) {
    p.validate();
    if (M < 2) throw std::invalid_argument("ensemble needs at least 2 trajectories");
    const auto cp = model::characteristic_params(p);
    if (cp.regime == model::Regime::Fock)
        throw std::domain_error("Fock-regime ground state has no localized phase cloud");

    const double sigma_phi = cp.xi / std::sqrt(double(p.N));
    const double sigma_w = 1.0 / (cp.xi * std::sqrt(double(p.N)));

    PhaseEnsemble e;
    e.N = p.N;
    e.points.resize(M);
    e.pole_flagged.assign(M, 0);
    for (int m = 0; m < M; ++m) {
        auto rng = stream_rng(seed, std::uint64_t(m), kSampleTag);
        std::normal_distribution<double> unit(0.0, 1.0);
        const double phi = sigma_phi * unit(rng);
        double w = sigma_w * unit(rng);
        w = std::clamp(w, -1.0, 1.0);
        if (std::abs(w) > 1 - kPoleMargin) e.pole_flagged[m] = 1;
        e.points[m].theta = std::acos(w);
        e.points[m].phi = wrap_angle(phi);
    }
    return e;
}

PhasePoint flow_step(const PhasePoint& pt, const model::ModelParams& p, double dt) {
    // Strang order: half twist, full axis-1 rotation, half twist
    const double twist = p.epsilon + p.N * p.U * std::cos(pt.theta);
    PhasePoint out = pt;
    out.phi += 0.5 * dt * twist;

    out = kick(out, 1, -p.J * dt);

    const double twist2 = p.epsilon + p.N * p.U * std::cos(out.theta);
    out.phi = wrap_angle(out.phi + 0.5 * dt * twist2);
    return out;
}

PhasePoint kick(const PhasePoint& pt, int axis, double angle) {
    if (axis == 3) {
        PhasePoint out = pt;
        out.phi = wrap_angle(out.phi + angle);
        return out;
    }
    const double c = std::cos(angle), s = std::sin(angle);
    Cartesian v = to_cartesian(pt);
    Cartesian r = v;
    if (axis == 1) {
        r.y = v.y * c - v.z * s;
        r.z = v.z * c + v.y * s;
    } else if (axis == 2) {
        r.z = v.z * c + v.x * s;
        r.x = v.x * c - v.z * s;
    } else {
        throw std::invalid_argument("axis must be 1, 2, or 3");
    }
    return from_cartesian(r, nullptr);
}

double energy(const PhasePoint& pt, const model::ModelParams& p) {
    const double w = std::cos(pt.theta);
    const double s = std::sin(pt.theta);
    return 0.5 * p.N *
           ((p.epsilon / p.J) * w - s * std::cos(pt.phi) + (p.N * p.U / (2 * p.J)) * w * w);
}

CoherenceEstimate ensemble_coherence(const PhaseEnsemble& e) {
    const long M = long(e.points.size());
    if (M < 2) throw std::invalid_argument("ensemble needs at least 2 trajectories");

    double sum_y = 0, sum_y2 = 0;
    double sum_cos = 0, sum_sin = 0, sum_w = 0;
    long usable = 0;
    for (long m = 0; m < M; ++m) {
        const auto& pt = e.points[m];
        const double y = std::sin(pt.theta) * std::cos(pt.phi);
        sum_y += y;
        sum_y2 += y * y;
        if (e.pole_flagged[m]) continue;
        sum_cos += std::cos(pt.phi);
        sum_sin += std::sin(pt.phi);
        sum_w += std::cos(pt.theta);
        ++usable;
    }

    CoherenceEstimate out;
    out.excluded = M - usable;
    const double weyl = std::exp(1.0 / e.N);
    const double mean_y = sum_y / double(M);
    out.direct = weyl * mean_y;
    const double vary = std::max(0.0, (sum_y2 - double(M) * mean_y * mean_y) / double(M - 1));
    out.stderr_direct = weyl * std::sqrt(vary / double(M));

    if (usable < 2) {
        out.var_phi = out.var_n = out.gaussian = std::nan("");
        out.estimators_disagree = true;
        return out;
    }

    const double phi_bar = std::atan2(sum_sin, sum_cos); // circular mean
    const double w_bar = sum_w / double(usable);
    double spp = 0, sww = 0, spw = 0, sp = 0, sw = 0;
    for (long m = 0; m < M; ++m) {
        if (e.pole_flagged[m]) continue;
        const double dp = wrap_angle(e.points[m].phi - phi_bar);
        const double dw = std::cos(e.points[m].theta) - w_bar;
        sp += dp;
        sw += dw;
        spp += dp * dp;
        sww += dw * dw;
        spw += dp * dw;
    }
    const double n = double(usable);
    const double a = spp / n - (sp / n) * (sp / n);
    const double c = sww / n - (sw / n) * (sw / n);
    const double b = spw / n - (sp / n) * (sw / n);
    const double disc = std::sqrt(std::max(0.0, (a - c) * (a - c) + 4 * b * b));
    const double lam_hi = 0.5 * (a + c + disc);
    const double lam_lo = 0.5 * (a + c - disc);
    out.var_phi = a;
    out.var_n = 0.25 * double(e.N) * double(e.N) * c;
    out.gaussian = std::exp(-0.5 * (lam_hi + lam_lo - 2.0 / e.N));
    out.estimators_disagree =
        std::abs(out.direct - out.gaussian) > 0.05 * std::max(std::abs(out.direct), std::abs(out.gaussian));
    return out;
}

WignerSeries run_ensemble(const model::ModelParams& p, const lindblad::NoiseChannels& nc, int M,
                          std::uint64_t seed, const std::vector<double>& t_grid,
                          const WignerOptions& opt) {
    p.validate();
    nc.validate();
    if (nc.has_loss())
        throw ConfigError("the phase-space sampler supports rotation noise only; loss rates must be zero");
    if (t_grid.empty()) throw std::invalid_argument("empty time grid");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1])) throw std::invalid_argument("time grid must be strictly increasing");
    if (opt.dt_factor <= 0 || opt.kick_dt_factor <= 0) throw std::invalid_argument("step factors must be positive");

    const auto cp = model::characteristic_params(p);
    double dt_target = opt.dt_factor / cp.omega_J;
    const double gmax = std::max({nc.gamma1, nc.gamma2, nc.gamma3});
    if (gmax > 0) dt_target = std::min(dt_target, opt.kick_dt_factor / gmax);

    PhaseEnsemble ens = sample_ground_wigner(p, M, seed);

    const int axes[3] = {1, 2, 3};
    const double rates[3] = {nc.gamma1, nc.gamma2, nc.gamma3};

    WignerSeries series;
    auto record = [&](double t) {
        const auto est = ensemble_coherence(ens);
        series.t.push_back(t);
        series.direct.push_back(est.direct);
        series.gaussian.push_back(est.gaussian);
        series.var_phi.push_back(est.var_phi);
        series.var_n.push_back(est.var_n);
        series.stderr_direct.push_back(est.stderr_direct);
    };
    record(t_grid[0]);

    for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
        const double span = t_grid[i + 1] - t_grid[i];
        const int nsub = std::max(1, int(std::ceil(span / dt_target)));
        const double dt = span / nsub;

#pragma omp parallel for schedule(static)
        for (int m = 0; m < M; ++m) {
            auto rng = stream_rng(seed, std::uint64_t(m), std::uint64_t(i));
            std::normal_distribution<double> unit(0.0, 1.0);
            PhasePoint pt = ens.points[m];
            bool flagged = ens.pole_flagged[m] != 0;
            for (int sub = 0; sub < nsub; ++sub) {
                pt = flow_step(pt, p, dt);
                for (int ax = 0; ax < 3; ++ax) {
                    if (rates[ax] <= 0) continue;
                    const double delta = std::sqrt(2 * rates[ax] * dt) * unit(rng);
                    if (axes[ax] == 3) {
                        pt.phi = wrap_angle(pt.phi + delta);
                    } else {
                        const double c = std::cos(delta), s = std::sin(delta);
                        Cartesian v = to_cartesian(pt);
                        Cartesian r = v;
                        if (axes[ax] == 1) {
                            r.y = v.y * c - v.z * s;
                            r.z = v.z * c + v.y * s;
                        } else {
                            r.z = v.z * c + v.x * s;
                            r.x = v.x * c - v.z * s;
                        }
                        pt = from_cartesian(r, &flagged);
                    }
                }
            }
            ens.points[m] = pt;
            ens.pole_flagged[m] = flagged ? 1 : 0;
        }
        record(t_grid[i + 1]);
    }
    return series;
}

} // namespace bjj::wigner
