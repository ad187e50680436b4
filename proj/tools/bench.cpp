// Benchmark: structured sector kernel vs dense serial reference, plus
// phase-space ensemble throughput. Wall-clock numbers go to stdout.
#include "bjj/liouvillian.hpp"
#include "bjj/model.hpp"
#include "bjj/sectors.hpp"
#include "bjj/wigner.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cstdio>
#include <random>

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

bjj::lindblad::SectoredDensityMatrix random_state(const bjj::lindblad::StateLayout& layout,
                                                  unsigned seed) {
    auto s = bjj::lindblad::SectoredDensityMatrix::zero(layout.n_min, layout.n_max);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    for (Eigen::Index i = 0; i < s.data.size(); ++i) s.data[i] = {u(rng), u(rng)};
    return s;
}

} // namespace

int main(int argc, char** argv) {
    int N = 60;
    int reps = argc > 1 ? std::atoi(argv[1]) : 50;
    if (reps < 1) reps = 1;

    bjj::model::ModelParams p;
    p.N = N;
    p.J = 1.0;
    p.U = 12.5 / N;
    bjj::lindblad::NoiseChannels nc;
    nc.gamma2 = 1e-3;
    nc.gamma3 = 1e-2;
    nc.gammaL = nc.gammaR = 5e-3;

    bjj::lindblad::Liouvillian L(p, nc);
    auto in = random_state(L.layout(), 7);
    auto out = bjj::lindblad::SectoredDensityMatrix::zero(L.layout().n_min, L.layout().n_max);

    std::printf("state size: %ld complex numbers over %d sectors (N = %d)\n",
                long(in.data.size()), L.layout().n_max - L.layout().n_min + 1, N);

#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: not enabled\n");
#endif

    {
        L.apply(in, out); // warm up scratch buffers
        auto t0 = Clock::now();
        for (int r = 0; r < reps; ++r) L.apply(in, out);
        const double dt = seconds_since(t0) / reps;
        std::printf("structured apply:  %10.3f us/call\n", dt * 1e6);
    }
    {
        const int ref_reps = std::max(1, reps / 10);
        L.apply_reference(in, out);
        auto t0 = Clock::now();
        for (int r = 0; r < ref_reps; ++r) L.apply_reference(in, out);
        const double dt = seconds_since(t0) / ref_reps;
        std::printf("dense reference:   %10.3f us/call\n", dt * 1e6);
    }
    {
        bjj::model::ModelParams wp;
        wp.N = 50;
        wp.U = 12.5 / wp.N;
        bjj::lindblad::NoiseChannels wn;
        wn.gamma3 = 0.01;
        std::vector<double> grid{0.0, 5.0};
        const int M = 2000;
        auto t0 = Clock::now();
        auto series = bjj::wigner::run_ensemble(wp, wn, M, 1234, grid);
        const double dt = seconds_since(t0);
        std::printf("ensemble:          %10.3f us/trajectory (M = %d, final = %.4f)\n",
                    dt / M * 1e6, M, series.direct.back());
    }
    return 0;
}
