#include "bjj/dynamics.hpp"

#include <cstdio>

#include "bjj/integrate.hpp"

#include <cmath>
#include <limits>

namespace bjj::lindblad {

static void validate_initial_state(const MatrixXcd& rho0) {
    const double scale = std::max(1.0, rho0.cwiseAbs().maxCoeff());
    if (model::hermiticity_error(rho0) > 1e-10 * scale)
        throw std::invalid_argument("evolve: initial state is not Hermitian");
    if (std::abs(rho0.trace().real() - 1.0) > 1e-10)
        throw std::invalid_argument("evolve: initial state must have unit trace");
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (rho0 + rho0.adjoint()), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw std::invalid_argument("evolve: initial state is not positive semidefinite");
}

EvolutionResult evolve(const model::ModelParams& p, const NoiseChannels& nc,
                       const MatrixXcd& rho0, const std::vector<double>& t_grid,
                       const EvolveOptions& opt) {
    p.validate();
    nc.validate();
    if (rho0.rows() != p.N + 1 || rho0.cols() != p.N + 1)
        throw std::invalid_argument("evolve: initial block must have dimension N+1");
    validate_initial_state(rho0);

    const Liouvillian liouv(p, nc);
    SectoredDensityMatrix state = SectoredDensityMatrix::from_sector(rho0, p.N, nc.has_loss());

    EvolutionResult res;
    const size_t ns = t_grid.size();
    res.t = t_grid;
    res.S1.resize(ns);
    res.S2.resize(ns);
    res.S3.resize(ns);
    res.S3sq.resize(ns);
    res.g1.resize(ns);
    res.N_mean.resize(ns);

    SectoredDensityMatrix sample = state; // reused as an observable view
    const double t0 = t_grid.front();
    auto observer = [&](int idx, double t, const VectorXcd& y) {
        sample.data = y;
        res.S1[idx] = sample.expect_S1();
        res.S2[idx] = sample.expect_S2();
        res.S3[idx] = sample.expect_S3();
        res.S3sq[idx] = sample.expect_S3sq();
        res.g1[idx] = sample.coherence_g1();
        res.N_mean[idx] = sample.number_mean();
        if (opt.check_positivity) {
            const double budget = 10.0 * opt.tol * std::max(1.0, t - t0);
            const double lo = sample.min_eigenvalue();
            if (lo < -budget) {
                char msg[160];
                std::snprintf(msg, sizeof msg,
                              "evolve: positivity violated at t=%g (min eigenvalue %.3e, budget %.3e)",
                              t, lo, budget);
                throw NumericalError(msg);
            }
        }
    };

    ode::Options oopt;
    oopt.tol = opt.tol;
    auto rhs = [&](double, const VectorXcd& y, VectorXcd& dy) { liouv.apply_flat(y, dy); };
    const ode::Stats st = ode::integrate(rhs, state.data, t_grid, oopt, observer);

    res.Gamma = instantaneous_rate(res.t, res.g1);
    res.final_state = std::move(state);
    res.steps_accepted = st.steps_accepted;
    res.steps_rejected = st.steps_rejected;
    return res;
}

std::vector<double> instantaneous_rate(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size()) throw std::invalid_argument("instantaneous_rate: size mismatch");
    const size_t n = t.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> rate(n, nan);
    if (n < 2) return rate;

    size_t first_bad = n;
    for (size_t i = 0; i < n; ++i) {
        if (!(y[i] > 0)) {
            first_bad = i;
            break;
        }
    }
    auto ok = [&](size_t i) { return i < first_bad; };
    for (size_t i = 0; i < n; ++i) {
        if (!ok(i)) break;
        if (i == 0) {
            if (ok(1)) rate[0] = -(std::log(y[1]) - std::log(y[0])) / (t[1] - t[0]);
        } else if (i + 1 == n || !ok(i + 1)) {
            rate[i] = -(std::log(y[i]) - std::log(y[i - 1])) / (t[i] - t[i - 1]);
        } else {
            rate[i] = -(std::log(y[i + 1]) - std::log(y[i - 1])) / (t[i + 1] - t[i - 1]);
        }
    }
    return rate;
}

} // namespace bjj::lindblad
