#include "bjj/trap.hpp"

#include "bjj/constants.hpp"
#include "bjj/errors.hpp"
#include "bjj/model.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace bjj::trap {
namespace {

constexpr double kPi = 3.14159265358979323846;

// hbar^2/(2 m) expressed in Hz um^2 (energies as E/h, lengths in um)
double kinetic_coeff() {
    using namespace bjj::constants;
    return hbar * hbar / (2 * mass_rb87 * h_planck) * 1e12;
}

// harmonic wall curvature (1/2) m (2 pi nu)^2 in Hz/um^2
double wall_coeff(double nu_Hz) {
    using namespace bjj::constants;
    const double omega = 2 * kPi * nu_Hz;
    return 0.5 * mass_rb87 * omega * omega / h_planck * 1e-12;
}

Eigen::VectorXd fft_wavenumbers(const Grid& g) {
    Eigen::VectorXd k(g.n);
    const double dk = 2 * kPi / g.length;
    for (int j = 0; j < g.n; ++j) k[j] = dk * (j <= g.n / 2 ? j : j - g.n);
    return k;
}

void symmetrize(Eigen::VectorXd& psi) {
    const int n = int(psi.size());
    for (int m = 1; m < n - m; ++m) {
        const double avg = 0.5 * (psi[m] + psi[n - m]);
        psi[m] = avg;
        psi[n - m] = avg;
    }
}

void normalize(Eigen::VectorXd& psi, double dx) {
    const double nrm = std::sqrt(dx * psi.squaredNorm());
    if (nrm <= 0) throw NumericalError("wavefunction collapsed during relaxation");
    psi /= nrm;
}

// solve (T - sigma I) x = b for symmetric tridiagonal T, partial pivoting
void shifted_tridiag_solve(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub, double sigma,
                           Eigen::VectorXd& x) {
    const int n = int(diag.size());
    Eigen::VectorXd a(n), b(n), c(n), d(n); // diag, upper, upper2, rhs
    for (int i = 0; i < n; ++i) a[i] = diag[i] - sigma;
    for (int i = 0; i + 1 < n; ++i) b[i] = sub[i];
    b[n - 1] = 0;
    c.setZero();
    d = x;

    const double scale = a.cwiseAbs().maxCoeff() + 2 * sub.cwiseAbs().maxCoeff();
    const double tiny = 1e-14 * std::max(scale, 1.0);

    Eigen::VectorXd lower(n);
    for (int i = 0; i + 1 < n; ++i) lower[i] = sub[i];

    for (int i = 0; i + 1 < n; ++i) {
        double piv = a[i], low = lower[i];
        if (std::abs(low) > std::abs(piv)) { // swap rows i, i+1
            std::swap(a[i], lower[i]);
            const double bi = b[i];
            b[i] = a[i + 1];
            a[i + 1] = bi;
            c[i] = b[i + 1];
            b[i + 1] = 0;
            std::swap(d[i], d[i + 1]);
            piv = a[i];
            low = lower[i];
        }
        if (std::abs(piv) < tiny) piv = a[i] = (piv < 0 ? -tiny : tiny);
        const double f = low / piv;
        a[i + 1] -= f * b[i];
        b[i + 1] -= f * c[i];
        d[i + 1] -= f * d[i];
    }
    if (std::abs(a[n - 1]) < tiny) a[n - 1] = (a[n - 1] < 0 ? -tiny : tiny);

    x[n - 1] = d[n - 1] / a[n - 1];
    x[n - 2] = (d[n - 2] - b[n - 2] * x[n - 1]) / a[n - 2];
    for (int i = n - 3; i >= 0; --i) x[i] = (d[i] - b[i] * x[i + 1] - c[i] * x[i + 2]) / a[i];
}

int sturm_count_below(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub, double lambda) {
    const int n = int(diag.size());
    double q = diag[0] - lambda;
    int cnt = q < 0 ? 1 : 0;
    for (int i = 1; i < n; ++i) {
        double den = q;
        if (std::abs(den) < 1e-300) den = den < 0 ? -1e-300 : 1e-300;
        q = (diag[i] - lambda) - sub[i - 1] * sub[i - 1] / den;
        if (q < 0) ++cnt;
    }
    return cnt;
}

// tridiagonal apply y = T x
void tridiag_apply(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub,
                   const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    const int n = int(diag.size());
    y.resize(n);
    for (int i = 0; i < n; ++i) {
        double v = diag[i] * x[i];
        if (i > 0) v += sub[i - 1] * x[i - 1];
        if (i + 1 < n) v += sub[i] * x[i + 1];
        y[i] = v;
    }
}

struct LaguerreNode {
    double x, w;
};

// 16-point Gauss-Laguerre rule for integrals of exp(-x) f(x) over [0, inf)
constexpr LaguerreNode kLaguerre16[] = {
    {0.08764941047892776, 0.2061517149578049},
    {0.4626963289150804, 0.3310578549508783},
    {1.1410577748312265, 0.2657957776442144},
    {2.1292836450983805, 0.13629693429637874},
    {3.4370866338932067, 0.04732892869412563},
    {5.078018614549768, 0.011299900080339598},
    {7.070338535048234, 0.0018490709435263271},
    {9.438314336391938, 0.0002042719153082809},
    {12.21422336886616, 1.4844586873981502e-05},
    {15.441527368781617, 6.828319330871331e-07},
    {19.180156856753136, 1.8810248410797222e-08},
    {23.515905693991908, 2.862350242973897e-10},
    {28.57872974288214, 2.1270790332241214e-12},
    {34.58339870228662, 6.29796700251788e-15},
    {41.94045264768833, 5.050473700035608e-18},
    {51.70116033954332, 4.161462370372851e-22},
};

// doublet splitting averaged over transverse offsets of the cloud
double tube_averaged_splitting(const GpeProblem& prob, const Eigen::VectorXd& V,
                               const GroundSolution& ground, const Grid& g) {
    const double dx = g.dx();
    const double t = kinetic_coeff() / (dx * dx);
    const Eigen::VectorXd sub = Eigen::VectorXd::Constant(g.n - 1, -t);

    const double n_pk = prob.N * ground.phi.array().square().maxCoeff();
    const double e_bar = prob.nu_perp_Hz * prob.swell(n_pk) / 2;

    double acc = 0, wsum = 0;
    Eigen::VectorXd diag(g.n);
    for (const auto& node : kLaguerre16) {
        const double v = e_bar * node.x;
        for (int i = 0; i < g.n; ++i)
            diag[i] = V[i] + std::max(ground.mean_field_Hz[i] - v, 0.0) + 2 * t;
        const auto lowest = tridiag_smallest(diag, sub, 2);
        acc += node.w * (lowest[1] - lowest[0]);
        wsum += node.w;
    }
    return acc / wsum;
}

} // namespace

Eigen::VectorXd Grid::x() const {
    Eigen::VectorXd out(n);
    for (int m = 0; m < n; ++m) out[m] = -0.5 * length + m * dx();
    return out;
}

void Grid::validate() const {
    if (n < 16 || n % 2 != 0) throw ConfigError("grid size must be an even number >= 16");
    if (!(length > 0)) throw ConfigError("grid length must be positive");
}

double TrapPotential::operator()(double x) const {
    const double half = 0.5 * d_um;
    if (std::abs(x) <= half) {
        const double c = std::cos(kPi * x / d_um);
        return V0_Hz * c * c;
    }
    const double r = std::abs(x) - half;
    return wall_coeff(omega_x_Hz) * r * r;
}

Eigen::VectorXd TrapPotential::evaluate(const Grid& g) const {
    const Eigen::VectorXd xs = g.x();
    Eigen::VectorXd out(g.n);
    for (int m = 0; m < g.n; ++m) out[m] = (*this)(xs[m]);
    return out;
}

void TrapPotential::validate() const {
    if (!(V0_Hz >= 0)) throw ConfigError("barrier height must be non-negative");
    if (!(d_um > 0)) throw ConfigError("well spacing must be positive");
    if (!(omega_x_Hz > 0)) throw ConfigError("axial wall frequency must be positive");
}

double GpeProblem::coupling_axis_Hz_um() const {
    using namespace bjj::constants;
    return 4.0 * (hbar / h_planck) * (2 * kPi * nu_perp_Hz) * a_s_um;
}

double GpeProblem::swell(double n_per_um) const {
    return std::sqrt(1.0 + 2.0 * a_s_um * n_per_um);
}

double GpeProblem::mean_field_Hz(double n_per_um) const {
    if (transverse()) return coupling_axis_Hz_um() * n_per_um / swell(n_per_um);
    return g1d_Hz_um * n_per_um;
}

double GpeProblem::coupling_pair_Hz_um(double n_per_um) const {
    if (transverse()) return 0.5 * coupling_axis_Hz_um() / swell(n_per_um);
    return g1d_Hz_um;
}

void GpeProblem::validate() const {
    if (N < 1) throw ConfigError("atom number must be at least 1");
    if (!(g1d_Hz_um >= 0)) throw ConfigError("interaction strength must be non-negative");
    if (!(nu_perp_Hz >= 0)) throw ConfigError("transverse frequency must be non-negative");
    if (!(a_s_um >= 0)) throw ConfigError("scattering length must be non-negative");
    if (transverse() && g1d_Hz_um > 0)
        throw ConfigError("give either a direct 1D coupling or a transverse frequency, not both");
    pot.validate();
}

double g1d_from_transverse(double nu_perp_Hz, double a_s_m) {
    using namespace bjj::constants;
    if (!(nu_perp_Hz > 0) || !(a_s_m > 0)) throw ConfigError("transverse frequency and scattering length must be positive");
    return 2 * hbar * (2 * kPi * nu_perp_Hz) * a_s_m / h_planck * 1e6;
}

GroundSolution solve_ground(const GpeProblem& prob, const Grid& g, const GroundOptions& opt) {
    prob.validate();
    g.validate();

    const double dx = g.dx();
    const double kappa = kinetic_coeff();
    const double wall_len = std::sqrt(kappa / wall_coeff(prob.pot.omega_x_Hz)); // sqrt(hbar/(m w_x))
    if (0.5 * g.length - 0.5 * prob.pot.d_um < 3 * wall_len)
        throw ConfigError("grid must extend at least three harmonic lengths beyond the wells");

    const Eigen::VectorXd V = prob.pot.evaluate(g);
    const Eigen::VectorXd k2 = fft_wavenumbers(g).array().square();

    auto mean_field = [&](const Eigen::ArrayXd& dens) -> Eigen::ArrayXd {
        if (prob.transverse())
            return prob.coupling_axis_Hz_um() * dens / (1.0 + 2.0 * prob.a_s_um * dens).sqrt();
        return prob.g1d_Hz_um * dens;
    };

    Eigen::VectorXd psi(g.n);
    {
        const Eigen::VectorXd xs = g.x();
        const double width = 0.6 * prob.pot.d_um;
        for (int m = 0; m < g.n; ++m) psi[m] = std::exp(-xs[m] * xs[m] / (2 * width * width));
    }
    normalize(psi, dx);

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spec(g.n);
    std::vector<double> work(g.n);

    auto kinetic_filter_apply = [&](Eigen::VectorXd& f, const Eigen::VectorXd& filter) {
        std::copy(f.data(), f.data() + g.n, work.begin());
        fft.fwd(spec, work);
        for (int j = 0; j < g.n; ++j) spec[j] *= filter[j];
        fft.inv(work, spec);
        std::copy(work.begin(), work.end(), f.data());
    };

    auto chemical_potential = [&](const Eigen::VectorXd& f) {
        std::copy(f.data(), f.data() + g.n, work.begin());
        fft.fwd(spec, work);
        double kin = 0;
        for (int j = 0; j < g.n; ++j) kin += k2[j] * std::norm(spec[j]);
        kin *= kappa * dx / g.n;
        const Eigen::ArrayXd dens = double(prob.N) * f.array().square();
        const double pot = dx * (V.array() * f.array().square()).sum();
        const double inter = dx * (mean_field(dens) * f.array().square()).sum();
        return kin + pot + inter;
    };

    const double e_ref =
        std::max({prob.pot.V0_Hz, 200.0,
                  prob.mean_field_Hz(prob.N * psi.array().square().maxCoeff())});
    GroundSolution sol;
    double mu_prev = chemical_potential(psi);

    // stage one: imaginary-time split-step relaxation
    int total_iters = 0;
    {
        const double dtau = 0.1 / e_ref;
        Eigen::VectorXd filter(g.n);
        for (int j = 0; j < g.n; ++j) filter[j] = std::exp(-dtau * kappa * k2[j]);

        for (int it = 0; it < opt.max_iters; ++it, ++total_iters) {
            const Eigen::ArrayXd half =
                (-0.5 * dtau *
                 (V.array() + mean_field(double(prob.N) * psi.array().square())))
                    .exp();
            psi.array() *= half;
            kinetic_filter_apply(psi, filter);
            psi.array() *=
                (-0.5 * dtau *
                 (V.array() + mean_field(double(prob.N) * psi.array().square())))
                    .exp();
            symmetrize(psi);
            normalize(psi, dx);

            if (it % 20 == 19) {
                const double mu = chemical_potential(psi);
                if (std::abs(mu - mu_prev) < 1e-8 * std::max(1.0, std::abs(mu))) {
                    mu_prev = mu;
                    break;
                }
                mu_prev = mu;
            }
        }
    }

    // stage two: self-consistent polish on the finite-difference operator,
    // inverse iteration in the even-parity subspace with damped density mixing
    const double t = kappa / (dx * dx);
    const Eigen::VectorXd sub = Eigen::VectorXd::Constant(g.n - 1, -t);
    Eigen::VectorXd w = psi * std::sqrt(dx); // unit 2-norm
    w /= w.norm();
    Eigen::ArrayXd dens = double(prob.N) / dx * w.array().square();
    Eigen::VectorXd diag(g.n), hw(g.n);
    double mu = mu_prev;
    double alpha = 0.3, delta_prev = std::numeric_limits<double>::infinity();
    bool converged = false;

    for (int it = 0; it < opt.max_iters; ++it, ++total_iters) {
        diag = V.array() + mean_field(dens) + 2 * t;
        for (int inner = 0; inner < 2; ++inner) {
            shifted_tridiag_solve(diag, sub, mu, w);
            symmetrize(w);
            const double nrm = w.norm();
            if (!(nrm > 0)) throw NumericalError("inverse iteration broke down");
            w /= nrm;
        }
        tridiag_apply(diag, sub, w, hw);
        mu = w.dot(hw);

        const Eigen::ArrayXd dens_new = double(prob.N) / dx * w.array().square();
        const double scale = std::max(dens.maxCoeff(), 1e-300);
        const double delta = (dens_new - dens).abs().maxCoeff() / scale;
        dens += alpha * (dens_new - dens);
        alpha = delta > delta_prev ? std::max(0.05, 0.5 * alpha) : std::min(0.5, 1.05 * alpha);
        delta_prev = delta;
        if (delta < opt.tol) {
            converged = true;
            break;
        }
    }

    sol.phi = w / std::sqrt(dx);
    const Eigen::ArrayXd dens_final = double(prob.N) * sol.phi.array().square();
    sol.mean_field_Hz = mean_field(dens_final).matrix();
    diag = V.array() + sol.mean_field_Hz.array() + 2 * t;
    tridiag_apply(diag, sub, w, hw);
    sol.mu_Hz = w.dot(hw);
    sol.residual = (hw - sol.mu_Hz * w).norm();
    sol.iterations = total_iters;
    sol.converged = converged;

    const double mf_pk = sol.mean_field_Hz.maxCoeff();
    if (mf_pk > 0 && dx > 0.5 * std::sqrt(kappa / mf_pk))
        throw ConfigError("grid spacing does not resolve the healing length");

    if (!sol.converged && opt.throw_on_fail)
        throw NumericalError("ground-state relaxation did not converge");
    if (sol.residual > 1e-8 && opt.throw_on_fail)
        throw NumericalError("ground-state residual above tolerance");
    return sol;
}

std::vector<double> tridiag_smallest(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub,
                                     int k) {
    const int n = int(diag.size());
    if (k < 1 || k > n) throw std::invalid_argument("bad eigenvalue count");

    double lo = diag[0], hi = diag[0];
    for (int i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::abs(sub[i - 1]) : 0.0) + (i + 1 < n ? std::abs(sub[i]) : 0.0);
        lo = std::min(lo, diag[i] - r);
        hi = std::max(hi, diag[i] + r);
    }

    std::vector<double> out(k);
    for (int j = 0; j < k; ++j) {
        double a = lo, b = hi;
        for (int it = 0; it < 200 && b - a > 1e-15 * std::max({1.0, std::abs(a), std::abs(b)});
             ++it) {
            const double mid = 0.5 * (a + b);
            if (sturm_count_below(diag, sub, mid) > j)
                b = mid;
            else
                a = mid;
        }
        out[j] = 0.5 * (a + b);
    }
    return out;
}

ModeSpectrum linear_modes(const Eigen::VectorXd& V_eff_Hz, const Grid& g, int n_energies,
                          int n_vectors) {
    g.validate();
    if (V_eff_Hz.size() != g.n) throw std::invalid_argument("potential not sampled on this grid");
    if (n_energies < 1 || n_vectors < 0 || n_vectors > n_energies)
        throw std::invalid_argument("bad mode counts");

    const double dx = g.dx();
    const double t = kinetic_coeff() / (dx * dx);
    Eigen::VectorXd diag = V_eff_Hz.array() + 2 * t;
    Eigen::VectorXd sub = Eigen::VectorXd::Constant(g.n - 1, -t);

    const auto evals = tridiag_smallest(diag, sub, std::min(n_energies, g.n));

    ModeSpectrum out;
    out.energies_Hz = Eigen::Map<const Eigen::VectorXd>(evals.data(), long(evals.size()));
    out.vectors.resize(g.n, n_vectors);

    for (int k = 0; k < n_vectors; ++k) {
        Eigen::VectorXd v(g.n);
        for (int i = 0; i < g.n; ++i) v[i] = std::sin((k + 1) * kPi * (i + 1) / (g.n + 1));
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 0; j < k; ++j) v -= out.vectors.col(j).dot(v) * out.vectors.col(j);
        v.normalize();

        const double sigma = out.energies_Hz[k];
        Eigen::VectorXd v_prev = v;
        for (int it = 0; it < 50; ++it) {
            shifted_tridiag_solve(diag, sub, sigma, v);
            for (int pass = 0; pass < 2; ++pass)
                for (int j = 0; j < k; ++j) v -= out.vectors.col(j).dot(v) * out.vectors.col(j);
            const double nrm = v.norm();
            if (!(nrm > 0)) throw NumericalError("inverse iteration broke down");
            v /= nrm;
            if (std::abs(std::abs(v.dot(v_prev)) - 1) < 1e-14) break;
            v_prev = v;
        }
        out.vectors.col(k) = v;
    }

    // convert unit vectors to grid functions with integral normalization
    out.vectors /= std::sqrt(dx);
    return out;
}

TwoModeParams extract_two_mode(const GpeProblem& prob, const Grid& g,
                               const GroundSolution& ground, const ModeSpectrum& modes,
                               double splitting_Hz) {
    if (modes.vectors.cols() < 2 || modes.energies_Hz.size() < 2)
        throw std::invalid_argument("need at least two modes");

    const double dx = g.dx();
    const Eigen::VectorXd xs = g.x();

    Eigen::VectorXd phi0 = modes.vectors.col(0);
    Eigen::VectorXd phi1 = modes.vectors.col(1);
    if (phi0.sum() < 0) phi0 = -phi0;
    double right_weight = 0;
    for (int m = 0; m < g.n; ++m)
        if (xs[m] > 0) right_weight += phi1[m];
    if (right_weight < 0) phi1 = -phi1;

    TwoModeParams out;
    out.mu_Hz = ground.mu_Hz;
    out.mu_offset_Hz = prob.transverse() ? prob.nu_perp_Hz : 0.0;
    out.phi_sym = phi0;
    out.phi_asym = phi1;

    const Eigen::VectorXd phiL = (phi0 - phi1) / std::sqrt(2.0);
    const Eigen::VectorXd phiR = (phi0 + phi1) / std::sqrt(2.0);
    out.dens_left = phiL.array().square();
    out.dens_right = phiR.array().square();

    const int n_gaps = int(modes.energies_Hz.size()) - 1;
    out.gaps_Hz.resize(n_gaps);
    out.gaps_Hz[0] = splitting_Hz;
    for (int k = 1; k < n_gaps; ++k) out.gaps_Hz[k] = modes.energies_Hz[k + 1] - modes.energies_Hz[0];

    out.J_Hz = splitting_Hz;
    double U = 0, cross = 0;
    for (int m = 0; m < g.n; ++m) {
        const double n1 = prob.N * ground.phi[m] * ground.phi[m];
        const double gp = prob.coupling_pair_Hz_um(n1);
        const double l2 = out.dens_left[m], r2 = out.dens_right[m];
        U += gp * 0.5 * (l2 * l2 + r2 * r2);
        cross += gp * l2 * r2;
    }
    out.U_Hz = U * dx;
    out.U_cross_Hz = cross * dx;

    if (out.J_Hz > 0) {
        model::ModelParams mp;
        mp.N = prob.N;
        mp.J = out.J_Hz;
        mp.U = out.U_Hz;
        const auto cp = model::characteristic_params(mp);
        out.u = cp.u;
        out.xi2 = cp.xi * cp.xi;
        out.nu_J_Hz = cp.omega_J;
    } else {
        out.u = std::numeric_limits<double>::infinity();
        out.xi2 = std::numeric_limits<double>::infinity();
        out.nu_J_Hz = 0;
    }
    out.valid = prob.pot.V0_Hz > out.mu_Hz;
    out.fock_regime = out.xi2 > prob.N;
    out.loss_enhanced = out.xi2 > 2.0 * std::sqrt(double(prob.N));
    return out;
}

TrapAnalysis characterize(const GpeProblem& prob, const Grid& g, const GroundOptions& opt) {
    prob.validate();
    g.validate();

    TrapAnalysis a;
    a.grid = g;
    a.potential_Hz = prob.pot.evaluate(g);
    a.ground = solve_ground(prob, g, opt);

    const Eigen::VectorXd V_eff = a.potential_Hz + a.ground.mean_field_Hz;
    a.modes = linear_modes(V_eff, g, 4, 2);

    const double axis_split = a.modes.energies_Hz[1] - a.modes.energies_Hz[0];
    const double splitting = prob.transverse()
                                 ? tube_averaged_splitting(prob, a.potential_Hz, a.ground, g)
                                 : axis_split;
    a.two_mode = extract_two_mode(prob, g, a.ground, a.modes, splitting);
    return a;
}

std::vector<TrapAnalysis> sweep_barrier(const GpeProblem& base, const std::vector<SweepPoint>& points,
                                        const Grid& g, const GroundOptions& opt) {
    base.validate();
    g.validate();
    std::vector<TrapAnalysis> rows(points.size());
    std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < long(points.size()); ++i) {
        try {
            GpeProblem p = base;
            p.N = points[i].N;
            p.pot.V0_Hz = points[i].V0_Hz;
            rows[i] = characterize(p, g, opt);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

} // namespace bjj::trap
