#include "bjj/config.hpp"

#include "bjj/bosonic.hpp"
#include "bjj/constants.hpp"
#include "bjj/csv.hpp"
#include "bjj/dynamics.hpp"
#include "bjj/model.hpp"
#include "bjj/noise_rates.hpp"
#include "bjj/trap.hpp"
#include "bjj/wigner.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace bjj::config {

namespace fs = std::filesystem;

const json Section::empty_ = json::object();

json load_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    json j;
    try {
        j = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config file '" + path + "' must hold a JSON object");
    return j;
}

Section::Section(const json& j, std::string path) : j_(&j), path_(std::move(path)) {
    if (!j_->is_object()) fail("must be a JSON object");
}

void Section::fail(const std::string& msg) const { throw ConfigError(path_ + ": " + msg); }

bool Section::has(const char* key) const { return j_->contains(key); }

const json& Section::fetch(const char* key) {
    auto it = j_->find(key);
    if (it == j_->end()) fail(std::string("missing key '") + key + "'");
    seen_.push_back(key);
    return *it;
}

double Section::number(const char* key) {
    const json& v = fetch(key);
    if (!v.is_number()) fail(std::string("key '") + key + "' must be a number");
    return v.get<double>();
}

double Section::number_or(const char* key, double fallback) {
    return has(key) ? number(key) : fallback;
}

long long Section::integer(const char* key) {
    const json& v = fetch(key);
    if (!v.is_number_integer()) fail(std::string("key '") + key + "' must be an integer");
    return v.get<long long>();
}

long long Section::integer_or(const char* key, long long fallback) {
    return has(key) ? integer(key) : fallback;
}

bool Section::flag_or(const char* key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = fetch(key);
    if (!v.is_boolean()) fail(std::string("key '") + key + "' must be true or false");
    return v.get<bool>();
}

std::string Section::text(const char* key) {
    const json& v = fetch(key);
    if (!v.is_string()) fail(std::string("key '") + key + "' must be a string");
    return v.get<std::string>();
}

std::string Section::text_or(const char* key, const std::string& fallback) {
    return has(key) ? text(key) : fallback;
}

std::vector<double> Section::number_list(const char* key) {
    const json& v = fetch(key);
    if (!v.is_array()) fail(std::string("key '") + key + "' must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number()) fail(std::string("key '") + key + "' must contain only numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

Section Section::child(const char* key) {
    const json& v = fetch(key);
    if (!v.is_object()) fail(std::string("key '") + key + "' must be an object section");
    return Section(v, path_ + "." + key);
}

Section Section::child_or_empty(const char* key) {
    if (!has(key)) return Section(empty_, path_ + "." + key);
    return child(key);
}

void Section::done() {
    for (auto it = j_->begin(); it != j_->end(); ++it) {
        if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end())
            fail("unknown key '" + it.key() + "'");
    }
}

void apply_thread_count(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

namespace {

void write_text_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ConfigError("cannot open '" + p.string() + "' for writing");
    f << text;
    if (!f) throw ConfigError("failed writing '" + p.string() + "'");
}

void write_json_file(const fs::path& p, const json& j) { write_text_file(p, j.dump(2) + "\n"); }

fs::path prepare_out_dir(const RunContext& ctx, const json& cfg) {
    fs::path dir(ctx.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + ctx.out_dir + "': " + ec.message());
    write_json_file(dir / "config.json", cfg);
    return dir;
}

model::ModelParams parse_model(Section& s) {
    model::ModelParams p;
    const long long N = s.integer("N");
    if (N < 1 || N > 4000) throw ConfigError(s.path() + ": N must be in [1, 4000]");
    p.N = int(N);
    p.J = s.number_or("J_per_s", 1.0);
    const bool has_u = s.has("u");
    const bool has_U = s.has("U_per_s");
    if (has_u && has_U) throw ConfigError(s.path() + ": give either 'u' or 'U_per_s', not both");
    if (has_u) {
        const double u = s.number("u");
        if (u < 0) throw ConfigError(s.path() + ": u must be non-negative");
        p.U = u * p.J / double(p.N);
    } else if (has_U) {
        p.U = s.number("U_per_s");
    }
    p.epsilon = s.number_or("epsilon_per_s", 0.0);
    try {
        p.validate();
    } catch (const std::exception& e) {
        throw ConfigError(s.path() + ": " + e.what());
    }
    return p;
}

lindblad::NoiseChannels parse_noise(Section& s) {
    lindblad::NoiseChannels nc;
    nc.gamma1 = s.number_or("gamma1_per_s", 0.0);
    nc.gamma2 = s.number_or("gamma2_per_s", 0.0);
    nc.gamma3 = s.number_or("gamma3_per_s", 0.0);
    nc.gammaL = s.number_or("loss_left_per_s", 0.0);
    nc.gammaR = s.number_or("loss_right_per_s", 0.0);
    try {
        nc.validate();
    } catch (const std::exception& e) {
        throw ConfigError(s.path() + ": " + e.what());
    }
    return nc;
}

std::vector<double> parse_time_grid(Section& s) {
    const double t0 = s.number_or("t_start_s", 0.0);
    const double tf = s.number("t_final_s");
    const long long samples = s.integer_or("samples", 201);
    if (!(tf > t0)) throw ConfigError(s.path() + ": t_final_s must exceed t_start_s");
    if (samples < 2 || samples > 2000000)
        throw ConfigError(s.path() + ": samples must be in [2, 2000000]");
    auto t = std::vector<double>(std::size_t(samples));
    for (long long i = 0; i < samples; ++i)
        t[std::size_t(i)] = t0 + (tf - t0) * double(i) / double(samples - 1);
    return t;
}

struct TrapSetup {
    trap::GpeProblem prob;
    trap::Grid grid;
};

TrapSetup parse_trap(Section& trap_s, Section& atoms_s) {
    TrapSetup ts;
    ts.prob.pot.d_um = trap_s.number("d_um");
    ts.prob.pot.omega_x_Hz = trap_s.number("omega_x_Hz");

    const bool has_g = trap_s.has("g1d_Hz_um");
    const bool has_perp = trap_s.has("nu_perp_Hz");
    if (has_g == has_perp)
        throw ConfigError(trap_s.path() + ": give exactly one of 'g1d_Hz_um' or 'nu_perp_Hz'");
    if (has_g) {
        if (trap_s.has("a_s_m"))
            throw ConfigError(trap_s.path() + ": a_s_m only applies with nu_perp_Hz");
        ts.prob.g1d_Hz_um = trap_s.number("g1d_Hz_um");
        ts.prob.nu_perp_Hz = 0;
    } else {
        ts.prob.nu_perp_Hz = trap_s.number("nu_perp_Hz");
        if (!(ts.prob.nu_perp_Hz > 0))
            throw ConfigError(trap_s.path() + ": nu_perp_Hz must be positive");
        ts.prob.a_s_um = trap_s.number_or("a_s_m", constants::a_scatter_rb87) * 1e6;
        ts.prob.g1d_Hz_um = 0;
    }

    const long long n = trap_s.integer_or("grid_points", 2048);
    if (n < 64 || n > 65536 || n % 2 != 0)
        throw ConfigError(trap_s.path() + ": grid_points must be even and in [64, 65536]");
    const double extent = trap_s.number_or("extent_wells", 6.0);
    if (!(extent >= 3))
        throw ConfigError(trap_s.path() + ": extent_wells must be at least 3 well spacings");
    ts.grid.n = int(n);
    ts.grid.length = extent * ts.prob.pot.d_um;

    const long long N = atoms_s.integer("N");
    if (N < 1 || N > 1000000000) throw ConfigError(atoms_s.path() + ": N must be in [1, 1e9]");
    ts.prob.N = int(N);
    return ts;
}

noise_rates::NoiseSpec parse_spectrum(Section& s) {
    noise_rates::NoiseSpec spec;
    spec.kind = noise_rates::spectrum_from_name(s.text("kind"));
    spec.F = s.number_or("F", 2.0);
    spec.g_F = s.number_or("g_F", 0.5);
    spec.B_pp_T2_per_Hz = s.number_or("B_pp_T2_per_Hz", 0.0);
    spec.lambda_c_um = s.number_or("lambda_c_um", 1.0);
    spec.B_mp_T2_per_Hz = s.number_or("B_mp_T2_per_Hz", 0.0);
    spec.S_grad_T2_per_um2_Hz = s.number_or("S_grad_T2_per_um2_Hz", 0.0);
    try {
        spec.validate();
    } catch (const std::exception& e) {
        throw ConfigError(s.path() + ": " + e.what());
    }
    return spec;
}

json junction_json(const trap::TwoModeParams& tm) {
    json j;
    j["mu_Hz"] = tm.mu_Hz;
    j["mu_transverse_offset_Hz"] = tm.mu_offset_Hz;
    j["J_Hz"] = tm.J_Hz;
    j["U_Hz"] = tm.U_Hz;
    j["U_cross_Hz"] = tm.U_cross_Hz;
    j["u"] = tm.u;
    j["xi2"] = tm.xi2;
    j["nu_J_Hz"] = tm.nu_J_Hz;
    j["valid"] = tm.valid;
    j["fock_regime"] = tm.fock_regime;
    j["loss_enhanced"] = tm.loss_enhanced;
    return j;
}

} // namespace

int run_ground(const json& cfg, const RunContext& ctx) {
    Section root(cfg, "config");
    Section model_s = root.child("model");
    const model::ModelParams p = parse_model(model_s);
    model_s.done();
    root.done();

    const fs::path dir = prepare_out_dir(ctx, cfg);

    const auto cp = model::characteristic_params(p);
    const auto gs = model::ground_state(p);
    const auto spectrum = model::diagonalize(model::build_hamiltonian(p));
    const Eigen::MatrixXcd rho = gs.density();

    const auto ops = model::build_spin_operators(p.N);
    const double S1 = model::expect_real(rho, ops.S1);
    const double S3 = model::expect_real(rho, ops.S3);
    const double S3sq = model::expect_real(rho, Eigen::MatrixXcd(ops.S3 * ops.S3));

    json out;
    out["N"] = p.N;
    out["J_per_s"] = p.J;
    out["U_per_s"] = p.U;
    out["epsilon_per_s"] = p.epsilon;
    out["u"] = cp.u;
    out["xi"] = cp.xi;
    out["omega_J_per_s"] = cp.omega_J;
    out["eps_c_over_J"] = cp.eps_c;
    out["regime"] = model::regime_name(cp.regime);
    out["energy_per_s"] = gs.energy;
    out["gap_per_s"] = spectrum.energies[1] - spectrum.energies[0];
    out["degenerate"] = gs.degenerate;
    out["g1"] = model::coherence_g1(rho);
    out["S1"] = S1;
    out["S3"] = S3;
    out["var_S3"] = S3sq - S3 * S3;
    write_json_file(dir / "ground.json", out);

    csv::Table spec_t;
    spec_t.columns = {"index", "energy_per_s"};
    for (int i = 0; i < spectrum.energies.size(); ++i)
        spec_t.add_row({double(i), spectrum.energies[i]});
    csv::write_file(spec_t, (dir / "spectrum.csv").string());

    const Eigen::VectorXd n = model::n_values(p.N);
    csv::Table amp_t;
    amp_t.columns = {"k", "n", "amplitude"};
    for (int k = 0; k <= p.N; ++k) amp_t.add_row({double(k), n[k], gs.psi[k]});
    csv::write_file(amp_t, (dir / "amplitudes.csv").string());
    return 0;
}

int run_evolve(const json& cfg, const RunContext& ctx) {
    Section root(cfg, "config");
    Section model_s = root.child("model");
    const model::ModelParams p = parse_model(model_s);
    model_s.done();

    Section noise_s = root.child("noise");
    const lindblad::NoiseChannels nc = parse_noise(noise_s);
    noise_s.done();

    Section grid_s = root.child("grid");
    const std::vector<double> t_grid = parse_time_grid(grid_s);
    grid_s.done();

    Section init_s = root.child_or_empty("initial");
    const std::string state = init_s.text_or("state", "ground");
    Eigen::MatrixXcd rho0;
    if (state == "ground") {
        rho0 = model::ground_state(p).density();
    } else if (state == "thermal") {
        const double kBT = init_s.number("kBT_per_s");
        if (!(kBT >= 0)) throw ConfigError("initial: kBT_per_s must be non-negative");
        rho0 = model::thermal_state(p, kBT);
    } else {
        throw ConfigError("initial: state must be 'ground' or 'thermal'");
    }
    init_s.done();

    Section solver_s = root.child_or_empty("solver");
    lindblad::EvolveOptions opt;
    opt.tol = solver_s.number_or("tol", 1e-9);
    opt.check_positivity = solver_s.flag_or("check_positivity", true);
    if (!(opt.tol > 0 && opt.tol < 1e-2)) throw ConfigError("solver: tol must be in (0, 1e-2)");
    solver_s.done();
    root.done();

    const fs::path dir = prepare_out_dir(ctx, cfg);

    const auto res = lindblad::evolve(p, nc, rho0, t_grid, opt);

    csv::Table t;
    t.columns = {"t_s", "S1", "S2", "S3", "S3sq", "g1", "N_mean", "Gamma_per_s"};
    for (std::size_t i = 0; i < res.t.size(); ++i)
        t.add_row({res.t[i], res.S1[i], res.S2[i], res.S3[i], res.S3sq[i], res.g1[i],
                   res.N_mean[i], res.Gamma[i]});
    csv::write_file(t, (dir / "evolve.csv").string());

    json out;
    out["steps_accepted"] = res.steps_accepted;
    out["steps_rejected"] = res.steps_rejected;
    json fin;
    fin["t_s"] = res.t.back();
    fin["g1"] = res.g1.back();
    fin["S1"] = res.S1.back();
    fin["N_mean"] = res.N_mean.back();
    fin["survival"] = res.N_mean.back() / double(p.N);
    out["final"] = fin;

    const bool rotations_only = !nc.has_loss();
    if (rotations_only && nc.gamma1 == 0 && (nc.gamma2 > 0) != (nc.gamma3 > 0)) {
        const auto pred = nc.gamma3 > 0 ? bosonic::phase_noise_rate(p, nc.gamma3)
                                        : bosonic::number_noise_rate(p, nc.gamma2);
        json pj;
        pj["base_per_s"] = pred.base;
        pj["amplitude_per_s"] = pred.amp;
        pj["omega_J_per_s"] = pred.omega_J;
        out["predicted_rate"] = pj;
    }
    if (nc.has_loss() && nc.gammaL == nc.gammaR && nc.gamma1 == 0 && nc.gamma2 == 0 &&
        nc.gamma3 == 0) {
        const auto est = bosonic::loss_decoherence_estimate(p, nc.gammaL);
        json lj;
        lj["prefactor_per_s"] = est.prefactor;
        lj["kick"] = est.kick;
        lj["average_per_s"] = est.average;
        lj["enhanced"] = est.enhanced;
        out["loss_decoherence"] = lj;
    }
    write_json_file(dir / "evolve.json", out);
    return 0;
}

int run_semiclassical(const json& cfg, const RunContext& ctx) {
    Section root(cfg, "config");
    Section model_s = root.child("model");
    const model::ModelParams p = parse_model(model_s);
    model_s.done();

    Section noise_s = root.child("noise");
    const lindblad::NoiseChannels nc = parse_noise(noise_s);
    noise_s.done();

    Section grid_s = root.child("grid");
    const std::vector<double> t_grid = parse_time_grid(grid_s);
    grid_s.done();

    Section ens_s = root.child_or_empty("ensemble");
    const long long M = ens_s.integer_or("trajectories", 10000);
    if (M < 2 || M > 10000000)
        throw ConfigError("ensemble: trajectories must be in [2, 1e7]");
    ens_s.done();
    root.done();

    const fs::path dir = prepare_out_dir(ctx, cfg);

    const auto series = wigner::run_ensemble(p, nc, int(M), ctx.seed, t_grid);

    csv::Table t;
    t.columns = {"t_s", "coherence_direct", "coherence_gaussian", "var_phi", "var_n",
                 "stderr_direct"};
    for (std::size_t i = 0; i < series.t.size(); ++i)
        t.add_row({series.t[i], series.direct[i], series.gaussian[i], series.var_phi[i],
                   series.var_n[i], series.stderr_direct[i]});
    csv::write_file(t, (dir / "semiclassical.csv").string());

    json out;
    out["trajectories"] = M;
    out["seed"] = ctx.seed;
    const double d = series.direct.back(), g = series.gaussian.back();
    out["final_direct"] = d;
    out["final_gaussian"] = g;
    out["estimators_disagree"] =
        !(std::abs(d - g) <= 0.05 * std::max(std::abs(d), std::abs(g)));
    write_json_file(dir / "semiclassical.json", out);
    return 0;
}

int run_sweep(const json& cfg, const RunContext& ctx) {
    Section root(cfg, "config");
    Section trap_s = root.child("trap");
    Section atoms_s = root.child("atoms");
    TrapSetup ts = parse_trap(trap_s, atoms_s);
    trap_s.done();
    atoms_s.done();

    Section sweep_s = root.child("sweep");
    const double v_min = sweep_s.number("V0_min_Hz");
    const double v_max = sweep_s.number("V0_max_Hz");
    const long long steps = sweep_s.integer("V0_steps");
    if (!(v_min >= 0) || !(v_max >= v_min))
        throw ConfigError("sweep: need 0 <= V0_min_Hz <= V0_max_Hz");
    if (steps < 1 || steps > 10000) throw ConfigError("sweep: V0_steps must be in [1, 10000]");
    std::vector<long long> n_values{ts.prob.N};
    if (sweep_s.has("N_values")) {
        n_values.clear();
        for (double v : sweep_s.number_list("N_values")) {
            if (v < 1 || v != std::floor(v))
                throw ConfigError("sweep: N_values must hold positive integers");
            n_values.push_back((long long)(v));
        }
    }
    sweep_s.done();
    root.done();

    const fs::path dir = prepare_out_dir(ctx, cfg);

    std::vector<trap::SweepPoint> points;
    for (long long N : n_values)
        for (long long i = 0; i < steps; ++i) {
            const double V0 =
                steps == 1 ? v_min : v_min + (v_max - v_min) * double(i) / double(steps - 1);
            points.push_back({int(N), V0});
        }

    const auto rows = trap::sweep_barrier(ts.prob, points, ts.grid);

    csv::Table t;
    t.columns = {"N",    "V0_Hz",      "mu_Hz", "E1_Hz", "E2_Hz",   "E3_Hz", "J_Hz",
                 "U_Hz", "U_cross_Hz", "u",     "xi2",   "nu_J_Hz", "valid", "fock_regime",
                 "loss_enhanced"};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& tm = rows[i].two_mode;
        t.add_row({double(points[i].N), points[i].V0_Hz, tm.mu_Hz, tm.gaps_Hz[0], tm.gaps_Hz[1],
                   tm.gaps_Hz[2], tm.J_Hz, tm.U_Hz, tm.U_cross_Hz, tm.u, tm.xi2, tm.nu_J_Hz,
                   tm.valid ? 1.0 : 0.0, tm.fock_regime ? 1.0 : 0.0,
                   tm.loss_enhanced ? 1.0 : 0.0});
    }
    csv::write_file(t, (dir / "sweep.csv").string());

    json out;
    out["points"] = rows.size();
    out["mu_transverse_offset_Hz"] = ts.prob.transverse() ? ts.prob.nu_perp_Hz : 0.0;
    json by_n = json::array();
    for (long long N : n_values) {
        json entry;
        entry["N"] = N;
        entry["V0_first_valid_Hz"] = nullptr;
        entry["nu_J_at_first_valid_Hz"] = nullptr;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (points[i].N != N || !rows[i].two_mode.valid) continue;
            entry["V0_first_valid_Hz"] = points[i].V0_Hz;
            entry["nu_J_at_first_valid_Hz"] = rows[i].two_mode.nu_J_Hz;
            break;
        }
        by_n.push_back(entry);
    }
    out["by_N"] = by_n;
    write_json_file(dir / "sweep.json", out);
    return 0;
}

int run_rates(const json& cfg, const RunContext& ctx) {
    Section root(cfg, "config");
    Section trap_s = root.child("trap");
    Section atoms_s = root.child("atoms");
    TrapSetup ts = parse_trap(trap_s, atoms_s);
    trap_s.done();
    atoms_s.done();

    Section barrier_s = root.child("barrier");
    ts.prob.pot.V0_Hz = barrier_s.number("V0_Hz");
    barrier_s.done();

    Section spec_s = root.child("noise_spectrum");
    const noise_rates::NoiseSpec spec = parse_spectrum(spec_s);
    spec_s.done();

    const double cascade = root.number_or("cascade_factor", 2.0);
    if (!(cascade > 0)) throw ConfigError("cascade_factor must be positive");
    root.done();

    const fs::path dir = prepare_out_dir(ctx, cfg);

    const auto analysis = trap::characterize(ts.prob, ts.grid);
    const auto& tm = analysis.two_mode;

    json out;
    out["junction"] = junction_json(tm);
    json sj;
    sj["kind"] = noise_rates::spectrum_name(spec.kind);
    sj["F"] = spec.F;
    sj["g_F"] = spec.g_F;
    out["spectrum"] = sj;

    if (spec.kind == noise_rates::SpectrumKind::johnson_exp_corr) {
        json ov;
        ov["alpha_LL"] = noise_rates::overlap_alpha(tm.dens_left, tm.dens_left, spec.lambda_c_um, ts.grid);
        ov["alpha_RR"] = noise_rates::overlap_alpha(tm.dens_right, tm.dens_right, spec.lambda_c_um, ts.grid);
        ov["alpha_LR"] = noise_rates::overlap_alpha(tm.dens_left, tm.dens_right, spec.lambda_c_um, ts.grid);
        out["overlaps"] = ov;
    }

    json rates;
    rates["gamma_phase_per_s"] = noise_rates::dephasing_rate(spec, tm.dens_left, tm.dens_right, ts.grid);
    rates["gamma_loss_per_s"] = noise_rates::loss_rate(spec);
    const double tau = noise_rates::trap_lifetime(spec, cascade);
    if (std::isfinite(tau))
        rates["trap_lifetime_s"] = tau;
    else
        rates["trap_lifetime_s"] = nullptr;
    out["rates"] = rates;
    write_json_file(dir / "rates.json", out);
    return 0;
}

int run_lifetime(const json& cfg, const RunContext& ctx) {
    Section root(cfg, "config");
    Section surf_s = root.child_or_empty("surface");
    noise_rates::SurfaceModel model;
    model.layer_h_um = surf_s.number_or("layer_h_um", model.layer_h_um);
    model.T_K = surf_s.number_or("T_K", model.T_K);
    model.larmor_Hz = surf_s.number_or("larmor_Hz", model.larmor_Hz);
    model.resistivity_per_K = surf_s.number_or("resistivity_per_K", model.resistivity_per_K);
    model.F = surf_s.number_or("F", model.F);
    model.g_F = surf_s.number_or("g_F", model.g_F);
    model.kappa = surf_s.number_or("kappa", model.kappa);
    model.cascade_factor = surf_s.number_or("cascade_factor", model.cascade_factor);
    surf_s.done();
    try {
        model.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("surface: ") + e.what());
    }

    Section data_s = root.child("data");
    const std::vector<double> z0 = data_s.number_list("z0_um");
    const std::vector<double> tau = data_s.number_list("tau_s");
    data_s.done();
    if (z0.size() != tau.size() || z0.size() < 2)
        throw ConfigError("data: z0_um and tau_s must be equal-length lists with >= 2 points");

    std::vector<double> predict;
    if (root.has("predict_z0_um")) predict = root.number_list("predict_z0_um");
    root.done();

    const fs::path dir = prepare_out_dir(ctx, cfg);

    noise_rates::LifetimeFit fit;
    try {
        fit = noise_rates::fit_lifetimes(z0, tau, model);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("data: ") + e.what());
    }

    json out;
    json sm;
    sm["skin_depth_um"] = model.skin_depth_um();
    sm["nbar_thermal"] = model.nbar_thermal();
    sm["c1_model_um2_per_s"] = fit.c1_model_um2_per_s;
    sm["cascade_factor"] = model.cascade_factor;
    out["surface"] = sm;

    json fj;
    fj["c_um2_per_s"] = fit.c_um2_per_s;
    fj["slope"] = fit.slope;
    fj["intercept_log10"] = fit.intercept;
    fj["c2_um2_per_s"] = fit.c2_um2_per_s;
    fj["johnson_dominated"] = fit.johnson_dominated;
    fj["current_noise_A_per_sqrtHz"] = fit.current_noise_A_per_sqrtHz;
    fj["current_noise_is_upper_bound"] = fit.current_noise_is_upper_bound;
    out["fit"] = fj;

    json preds = json::array();
    for (double z : predict) {
        if (!(z > 0)) throw ConfigError("predict_z0_um: distances must be positive");
        json pj;
        pj["z0_um"] = z;
        pj["tau_combined_s"] = noise_rates::combined_lifetime_s(model, fit.c2_um2_per_s, z);
        pj["tau_johnson_s"] = model.lifetime_s(z);
        pj["thin_layer_deviation"] = model.thin_layer_deviation(z);
        preds.push_back(pj);
    }
    out["predictions"] = preds;
    write_json_file(dir / "lifetime.json", out);

    csv::Table t;
    t.columns = {"z0_um", "tau_meas_s", "tau_fit_s", "tau_johnson_s"};
    for (std::size_t i = 0; i < z0.size(); ++i)
        t.add_row({z0[i], tau[i], z0[i] * z0[i] / fit.c_um2_per_s, model.lifetime_s(z0[i])});
    csv::write_file(t, (dir / "lifetime.csv").string());
    return 0;
}

} // namespace bjj::config
