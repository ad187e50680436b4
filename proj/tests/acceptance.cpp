// Acceptance gate: one pass/fail line per numbered criterion, exit code is
// the number of failures. Tolerances are pinned in-line; change them only
// with a matching change to the documented contract.
#include "bjj/bosonic.hpp"
#include "bjj/dynamics.hpp"
#include "bjj/liouvillian.hpp"
#include "bjj/model.hpp"
#include "bjj/noise_rates.hpp"
#include "bjj/sectors.hpp"
#include "bjj/trap.hpp"
#include "bjj/wigner.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <iterator>
#include <random>
#include <string>
#include <vector>

using namespace bjj;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = a + (b - a) * i / (n - 1);
    return t;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
    void close(double got, double want, double rel, const std::string& name) {
        require(std::abs(got - want) <= rel * std::abs(want),
                name + " = " + std::to_string(got) + ", want " + std::to_string(want) +
                    " within " + std::to_string(100 * rel) + "%");
    }
};

double mean_over(const std::vector<double>& t, const std::vector<double>& y, double t0,
                 double t1) {
    double acc = 0;
    int n = 0;
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t0 || t[i] > t1 || !std::isfinite(y[i])) continue;
        acc += y[i];
        ++n;
    }
    return n ? acc / n : std::nan("");
}

// Mean spacing of upward mean-crossings of y(t) inside [t0, t1]; NaN when
// fewer than three crossings are found.
double oscillation_period(const std::vector<double>& t, const std::vector<double>& y, double t0,
                          double t1) {
    std::vector<double> tw, yw;
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t0 || t[i] > t1 || !std::isfinite(y[i])) continue;
        tw.push_back(t[i]);
        yw.push_back(y[i]);
    }
    if (yw.size() < 8) return std::nan("");
    double mean = 0;
    for (double v : yw) mean += v;
    mean /= double(yw.size());
    std::vector<double> crossings;
    for (size_t i = 1; i < yw.size(); ++i) {
        const double a = yw[i - 1] - mean, b = yw[i] - mean;
        if (a < 0 && b >= 0) crossings.push_back(tw[i - 1] + (tw[i] - tw[i - 1]) * (-a) / (b - a));
    }
    if (crossings.size() < 3) return std::nan("");
    return (crossings.back() - crossings.front()) / double(crossings.size() - 1);
}

// Dense sector-structured Lindblad right-hand side, built operator by
// operator; the production kernels never see this code path.
lindblad::SectoredDensityMatrix dense_rhs(const model::ModelParams& p,
                                          const lindblad::NoiseChannels& nc,
                                          const lindblad::SectoredDensityMatrix& in) {
    using Eigen::MatrixXcd;
    const std::complex<double> I(0, 1);
    auto out = lindblad::SectoredDensityMatrix::zero(in.layout.n_min, in.layout.n_max);
    for (int m = in.layout.n_min; m <= in.layout.n_max; ++m) {
        const MatrixXcd rho = in.block(m);
        MatrixXcd acc = MatrixXcd::Zero(m + 1, m + 1);
        if (m >= 1) {
            model::ModelParams pm = p;
            pm.N = m;
            const Eigen::MatrixXd H = model::build_hamiltonian(pm).dense();
            acc += -I * (H * rho - rho * H);
            const auto ops = model::build_spin_operators(m);
            const MatrixXcd* S[3] = {&ops.S1, &ops.S2, &ops.S3};
            const double g[3] = {nc.gamma1, nc.gamma2, nc.gamma3};
            for (int a = 0; a < 3; ++a) {
                if (g[a] == 0) continue;
                const MatrixXcd S2 = (*S[a]) * (*S[a]);
                acc -= g[a] * (S2 * rho + rho * S2 - 2.0 * (*S[a]) * rho * (*S[a]));
            }
        }
        if (nc.has_loss()) {
            for (int k = 0; k <= m; ++k)
                for (int l = 0; l <= m; ++l) {
                    const double nk = nc.gammaL * (m - k) + nc.gammaR * k;
                    const double nl = nc.gammaL * (m - l) + nc.gammaR * l;
                    acc(k, l) -= 0.5 * (nk + nl) * rho(k, l);
                }
            if (m + 1 <= in.layout.n_max) {
                const MatrixXcd above = in.block(m + 1);
                const Eigen::MatrixXd aL = model::lowering_left(m + 1);
                const Eigen::MatrixXd aR = model::lowering_right(m + 1);
                acc += nc.gammaL * (aL * above * aL.transpose());
                acc += nc.gammaR * (aR * above * aR.transpose());
            }
        }
        out.block(m) = acc;
    }
    return out;
}

Eigen::MatrixXcd dense_superoperator(const model::ModelParams& p,
                                     const lindblad::NoiseChannels& nc,
                                     const lindblad::StateLayout& layout) {
    const int D = layout.total_size();
    Eigen::MatrixXcd L(D, D);
    auto basis = lindblad::SectoredDensityMatrix::zero(layout.n_min, layout.n_max);
    for (int j = 0; j < D; ++j) {
        basis.data.setZero();
        basis.data[j] = 1.0;
        L.col(j) = dense_rhs(p, nc, basis).data;
    }
    return L;
}

Check criterion_1() {
    Check c;
    const auto t0 = Clock::now();
    model::ModelParams p;
    p.N = 50;
    p.J = 1;
    p.U = 0.25;
    const auto a = model::characteristic_params(p);
    p.U = 0.2;
    const auto b = model::characteristic_params(p);
    p.U = 1.0;
    const auto d = model::characteristic_params(p);
    const double elapsed = seconds_since(t0);

    c.require(std::abs(a.xi - 1.92) <= 0.005, "xi = " + std::to_string(a.xi));
    c.require(std::abs(a.omega_J - 3.67) <= 0.005, "omega_J = " + std::to_string(a.omega_J));
    c.require(std::abs(b.omega_J - 3.32) <= 0.005,
              "omega_J(U=0.2) = " + std::to_string(b.omega_J));
    c.require(std::abs(d.omega_J - 7.14) <= 0.005, "omega_J(U=1) = " + std::to_string(d.omega_J));
    c.require(elapsed < 1e-3, "took " + std::to_string(elapsed * 1e3) + " ms");
    return c;
}

Check criterion_2() {
    Check c;
    model::ModelParams p;
    p.N = 50;
    p.J = 1;
    p.U = 0;
    lindblad::NoiseChannels nc;
    nc.gamma3 = 0.01;
    lindblad::EvolveOptions opt;
    opt.tol = 1e-11;
    const auto rho0 = model::ground_state(p).density();
    const auto res = lindblad::evolve(p, nc, rho0, linspace(0, 10, 51), opt);
    double worst = 0;
    for (size_t i = 0; i < res.t.size(); ++i) {
        const double want = std::exp(-nc.gamma3 * res.t[i]);
        worst = std::max(worst, std::abs(res.g1[i] - want) / want);
    }
    c.require(worst <= 1e-6, "worst relative error " + std::to_string(worst));
    return c;
}

Check criterion_3() {
    Check c;
    const auto t0 = Clock::now();
    model::ModelParams p;
    p.N = 50;
    p.J = 1;
    p.U = 0.25; // u = 12.5
    lindblad::NoiseChannels nc;
    nc.gamma3 = 0.01;
    lindblad::EvolveOptions opt;
    opt.tol = 1e-10;
    const auto rho0 = model::ground_state(p).density();
    const auto res = lindblad::evolve(p, nc, rho0, linspace(0, 10, 1601), opt);

    const double xi2 = std::sqrt(1.0 + 12.5);
    const double target = nc.gamma3 * (1.0 + 1.0 / (xi2 * xi2)) / 2.0; // 0.537 gamma3
    const double avg = mean_over(res.t, res.Gamma, 2, 10);
    c.close(avg, target, 0.10, "mean suppressed rate");

    const double omega_J = model::characteristic_params(p).omega_J;
    const double period = oscillation_period(res.t, res.Gamma, 2, 10);
    c.require(std::isfinite(period), "no oscillation found");
    if (std::isfinite(period)) {
        const double measured = 2 * 3.14159265358979323846 / period;
        c.close(measured, 2 * omega_J, 0.05, "oscillation frequency");
    }
    c.require(seconds_since(t0) < 60, "took " + std::to_string(seconds_since(t0)) + " s");
    return c;
}

Check criterion_4() {
    Check c;
    model::ModelParams p;
    p.N = 50;
    p.J = 1;
    p.U = 0.25;
    lindblad::NoiseChannels nc;
    nc.gamma2 = 0.01;
    lindblad::EvolveOptions opt;
    opt.tol = 1e-10;
    const auto rho0 = model::ground_state(p).density();
    const auto res = lindblad::evolve(p, nc, rho0, linspace(0, 20, 4001), opt);

    const double xi2 = std::sqrt(1.0 + 12.5);
    const double xi4 = xi2 * xi2; // 13.5

    // the rate equals gamma2 exactly at t=0 (double-commutator identity),
    // anchoring the envelope floor
    c.close(res.Gamma[0], nc.gamma2, 0.01, "initial rate");

    // early-time envelope over the first three swings; the floor alone is the
    // small difference of two much larger numbers (the first dip undershoots
    // the linearized floor), so bound the well-conditioned midline and
    // half-width of the swing instead of the raw minimum
    const double period = oscillation_period(res.t, res.Gamma, 0, 3);
    c.require(std::isfinite(period), "no rate oscillation found");
    const double early = 3 * (std::isfinite(period) ? period : 1.0);
    double mn = 1e300, mx = -1e300, acc = 0;
    int n = 0;
    for (size_t i = 0; i < res.t.size(); ++i) {
        if (res.g1[i] < 0.3) break;
        if (!std::isfinite(res.Gamma[i])) continue;
        if (res.t[i] <= early) {
            mn = std::min(mn, res.Gamma[i]);
            mx = std::max(mx, res.Gamma[i]);
        }
        acc += res.Gamma[i];
        ++n;
    }
    c.require(n > 100, "window too short");
    c.close(mx, nc.gamma2 * xi4, 0.15, "envelope ceiling");
    c.close(0.5 * (mx + mn), nc.gamma2 * (1.0 + xi4) / 2.0, 0.15, "envelope midline");
    c.close(0.5 * (mx - mn), nc.gamma2 * (xi4 - 1.0) / 2.0, 0.15, "envelope half-width");
    c.close(acc / n, nc.gamma2 * (1.0 + xi4) / 2.0, 0.15, "mean enhanced rate");
    return c;
}

Check criterion_5() {
    Check c;
    lindblad::NoiseChannels nc;
    nc.gammaL = nc.gammaR = 0.08;
    lindblad::EvolveOptions opt;
    opt.tol = 1e-10;

    model::ModelParams p0;
    p0.N = 50;
    p0.J = 1;
    p0.U = 0;
    const auto res0 = lindblad::evolve(p0, nc, model::ground_state(p0).density(),
                                       linspace(0, 10, 101), opt);
    c.require(std::abs(res0.N_mean.back() / 50.0 - std::exp(-0.8)) <= 1e-4,
              "survival " + std::to_string(res0.N_mean.back() / 50.0) + ", want exp(-0.8)");
    double worst_g1 = 0;
    for (double g : res0.g1) worst_g1 = std::max(worst_g1, std::abs(g - 1.0));
    c.require(worst_g1 <= 1e-6, "noninteracting g1 drifted by " + std::to_string(worst_g1));

    model::ModelParams p1;
    p1.N = 50;
    p1.J = 1;
    p1.U = 1.0; // u = 50
    lindblad::EvolveOptions opt1;
    opt1.tol = 1e-9;
    const auto res1 = lindblad::evolve(p1, nc, model::ground_state(p1).density(),
                                       linspace(0, 10, 2001), opt1);

    // losses shrink N(t) and with it the plasma frequency; <N>(t) = N e^{-gt}
    // is pinned separately above, so compare the early-time period against
    // omega_J at the analytic mean atom number over the measurement window
    const double t_win = 2.0;
    const double N_bar = 50.0 * (1.0 - std::exp(-0.08 * t_win)) / (0.08 * t_win);
    const double omega_bar = std::sqrt(p1.J * (p1.J + N_bar * p1.U));
    const double period = oscillation_period(res1.t, res1.Gamma, 0, t_win);
    c.require(std::isfinite(period), "no rate oscillation found");
    if (std::isfinite(period))
        c.close(period, 3.14159265358979323846 / omega_bar, 0.10, "rate period");

    const double avg = mean_over(res1.t, res1.Gamma, 2, 10);
    const double target = bosonic::loss_decoherence_estimate(p1, 0.08).average;
    c.require(avg >= 0.5 * target && avg <= 2.0 * target,
              "mean loss-driven rate " + std::to_string(avg) + " vs estimate " +
                  std::to_string(target));
    return c;
}

Check criterion_6() {
    Check c;
    model::ModelParams p;
    p.N = 50;
    p.J = 1;
    p.U = 0.25;
    lindblad::NoiseChannels nc;
    nc.gamma3 = 0.01;
    const double omega_J = model::characteristic_params(p).omega_J;
    const auto grid = linspace(0, 3 * 2 * 3.14159265358979323846 / omega_J, 52);

    lindblad::EvolveOptions opt;
    opt.tol = 1e-10;
    const auto exact = lindblad::evolve(p, nc, model::ground_state(p).density(), grid, opt);
    const auto twa = wigner::run_ensemble(p, nc, 10000, 424242, grid);

    double worst = 0;
    size_t worst_i = 0;
    for (size_t i = 0; i < grid.size(); ++i) {
        const double rel = std::abs(twa.direct[i] - exact.g1[i]) / exact.g1[i];
        if (rel > worst) {
            worst = rel;
            worst_i = i;
        }
    }
    c.require(worst <= 0.05, "worst mismatch " + std::to_string(worst) + " at t=" +
                                 std::to_string(grid[worst_i]));
    return c;
}

Check criterion_7() {
    Check c;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uu(0, 20), ug(0, 0.2), ul(0, 0.3), ut(0.5, 2.5),
        u01(0, 1);
    std::uniform_int_distribution<int> uN(2, 4);

    double worst = 0;
    for (int trial = 0; trial < 50 && c.ok; ++trial) {
        model::ModelParams p;
        p.N = uN(rng);
        p.J = 1;
        p.U = uu(rng) * p.J / p.N;
        lindblad::NoiseChannels nc;
        nc.gamma1 = u01(rng) < 0.3 ? 0.0 : ug(rng);
        nc.gamma2 = u01(rng) < 0.3 ? 0.0 : ug(rng);
        nc.gamma3 = u01(rng) < 0.3 ? 0.0 : ug(rng);
        if (u01(rng) < 0.5) {
            nc.gammaL = ul(rng);
            nc.gammaR = ul(rng);
        }
        const double tf = ut(rng);

        // random density matrix on the top sector
        Eigen::MatrixXcd G(p.N + 1, p.N + 1);
        std::normal_distribution<double> gauss;
        for (int i = 0; i <= p.N; ++i)
            for (int j = 0; j <= p.N; ++j) G(i, j) = std::complex<double>(gauss(rng), gauss(rng));
        Eigen::MatrixXcd rho0 = G * G.adjoint();
        rho0 /= rho0.trace().real();

        const auto start =
            lindblad::SectoredDensityMatrix::from_sector(rho0, p.N, nc.has_loss());
        const auto L = dense_superoperator(p, nc, start.layout);
        const Eigen::VectorXcd want = (L * tf).exp() * start.data;

        lindblad::EvolveOptions opt;
        opt.tol = 1e-10;
        const auto res = lindblad::evolve(p, nc, rho0, {0.0, tf / 2, tf}, opt);

        const double diff = (res.final_state.data - want).cwiseAbs().maxCoeff();
        worst = std::max(worst, diff);
        c.require(diff <= 1e-8, "trial " + std::to_string(trial) + ": max deviation " +
                                    std::to_string(diff));
    }
    if (c.ok) c.detail = "worst deviation " + std::to_string(worst);
    return c;
}

Check criterion_8() {
    Check c;
    const trap::Grid g{2048, 30.0};
    trap::GpeProblem prob; // the benchmark double well

    const auto t0 = Clock::now();
    const auto a = trap::characterize(prob, g);
    const double per_point = seconds_since(t0);

    c.close(a.two_mode.mu_Hz, 425.0, 0.10, "chemical potential (Hz)");
    c.require(a.two_mode.J_Hz >= 0.5 && a.two_mode.J_Hz <= 2.0,
              "splitting " + std::to_string(a.two_mode.J_Hz) + " Hz, want 1 Hz within factor 2");
    c.require(per_point < 60, "characterization took " + std::to_string(per_point) + " s");

    std::vector<trap::SweepPoint> pts;
    for (int i = 0; i < 6; ++i) pts.push_back({200, 400.0 + 15.0 * i});
    const auto rows = trap::sweep_barrier(prob, pts, g);
    bool crossing = false;
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& tm = rows[i].two_mode;
        if (i > 0 && !rows[i - 1].two_mode.valid && tm.valid) crossing = true;
        if (tm.valid)
            c.require(tm.nu_J_Hz <= 30.0,
                      "plasma frequency " + std::to_string(tm.nu_J_Hz) + " Hz above 30 Hz");
    }
    c.require(crossing, "no validity crossing along the barrier sweep");
    return c;
}

Check criterion_9() {
    Check c;
    const noise_rates::SurfaceModel m;
    const double c1 = m.c1_um2_per_s();
    c.require(c1 >= 8.5 / 2 && c1 <= 8.5 * 2,
              "surface coefficient " + std::to_string(c1) + " um^2/s, want 8.5 within factor 2");

    const double c_true = c1 + 56.0;
    const std::vector<double> z{2, 3, 4, 5, 6};
    std::vector<double> tau;
    for (double zi : z) tau.push_back(zi * zi / c_true);
    const auto fit = noise_rates::fit_lifetimes(z, tau, m);
    c.close(fit.c_um2_per_s, c_true, 0.01, "recovered coefficient");

    const double nA = fit.current_noise_A_per_sqrtHz * 1e9;
    c.require(nA >= 0.45 && nA <= 1.8,
              "current noise " + std::to_string(nA) + " nA/sqrt(Hz), want 0.9 within factor 2");
    return c;
}

Check criterion_10() {
    Check c;
    lindblad::EvolveOptions opt;
    opt.tol = 1e-10; // hermiticity drift scales with the local error budget
    const auto grid = linspace(0, 3, 7);

    for (int N : {10, 30, 50}) {
        for (double u : {0.0, 1.0, 12.5}) {
            for (int kind = 0; kind < 3 && c.ok; ++kind) {
                model::ModelParams p;
                p.N = N;
                p.J = 1;
                p.U = u * p.J / N;
                lindblad::NoiseChannels nc;
                if (kind == 0) nc.gamma3 = 0.02;
                if (kind == 1) nc.gamma2 = 0.02;
                if (kind == 2) nc.gammaL = nc.gammaR = 0.05;

                const std::string tag = "N=" + std::to_string(N) + " u=" + std::to_string(u) +
                                        " kind=" + std::to_string(kind);
                const auto rho0 = model::ground_state(p).density();
                const auto res = lindblad::evolve(p, nc, rho0, grid, opt);

                c.require(std::abs(res.final_state.trace() - 1.0) <= 1e-7, tag + ": trace");
                const double herm = res.final_state.hermiticity_error();
                c.require(herm <= 1e-9, tag + ": hermiticity error " + sci(herm));
                c.require(res.final_state.min_eigenvalue() >= -1e-7, tag + ": positivity");

                for (double s3 : res.S3)
                    c.require(std::abs(s3) <= 1e-7, tag + ": parity broke, <S3> = " +
                                                        std::to_string(s3));

                if (!nc.has_loss()) {
                    const auto ops = model::build_spin_operators(N);
                    const Eigen::MatrixXcd S2tot =
                        ops.S1 * ops.S1 + ops.S2 * ops.S2 + ops.S3 * ops.S3;
                    const double got =
                        model::expect_real(Eigen::MatrixXcd(res.final_state.block(N)), S2tot);
                    const double s = N / 2.0;
                    c.require(std::abs(got - s * (s + 1)) <= 1e-6 * s * (s + 1),
                              tag + ": Casimir drifted to " + std::to_string(got));
                }

                const auto res2 = lindblad::evolve(p, nc, rho0, grid, opt);
                c.require(res2.g1 == res.g1 && res2.S1 == res.S1 && res2.N_mean == res.N_mean &&
                              res2.steps_accepted == res.steps_accepted,
                          tag + ": rerun differed");
            }
        }
    }
    return c;
}

} // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        std::function<Check()> run;
    };
    const Entry entries[] = {
        {1, "characteristic parameters", criterion_1},
        {2, "single-particle dephasing limit", criterion_2},
        {3, "phase-noise suppression", criterion_3},
        {4, "number-noise enhancement", criterion_4},
        {5, "loss scenario", criterion_5},
        {6, "semiclassical vs exact coherence", criterion_6},
        {7, "small-instance exponential oracle", criterion_7},
        {8, "trap extraction", criterion_8},
        {9, "lifetime fit and noise budget", criterion_9},
        {10, "invariant suite", criterion_10},
    };

    int failures = 0;
    for (const auto& e : entries) {
        Check c;
        std::string note;
        const auto t0 = Clock::now();
        try {
            c = e.run();
        } catch (const std::exception& ex) {
            c.ok = false;
            c.detail = std::string("exception: ") + ex.what();
        }
        const double dt = seconds_since(t0);
        if (c.ok) {
            std::printf("[PASS] %2d %s (%.2f s)\n", e.id, e.name, dt);
        } else {
            std::printf("[FAIL] %2d %s: %s\n", e.id, e.name, c.detail.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    if (failures == 0)
        std::printf("acceptance: all %zu criteria passed\n", std::size(entries));
    else
        std::printf("acceptance: %d of %zu criteria FAILED\n", failures, std::size(entries));
    return failures;
}
