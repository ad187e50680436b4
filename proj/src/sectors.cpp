#include "bjj/sectors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bjj::lindblad {

StateLayout StateLayout::make(int n_min, int n_max) {
    if (n_min < 0 || n_max < n_min)
        throw std::invalid_argument("StateLayout: need 0 <= n_min <= n_max");
    StateLayout l;
    l.n_min = n_min;
    l.n_max = n_max;
    l.offsets.resize(n_max - n_min + 2);
    int off = 0;
    for (int m = n_min; m <= n_max; ++m) {
        l.offsets[m - n_min] = off;
        off += (m + 1) * (m + 1);
    }
    l.offsets.back() = off;
    return l;
}

SectoredDensityMatrix SectoredDensityMatrix::zero(int n_min, int n_max) {
    SectoredDensityMatrix s;
    s.layout = StateLayout::make(n_min, n_max);
    s.data = VectorXcd::Zero(s.layout.total_size());
    return s;
}

SectoredDensityMatrix SectoredDensityMatrix::from_sector(const MatrixXcd& rho, int N, bool with_loss) {
    if (rho.rows() != N + 1 || rho.cols() != N + 1)
        throw std::invalid_argument("from_sector: block dimension must be N+1");
    SectoredDensityMatrix s = zero(with_loss ? 0 : N, N);
    s.block(N) = rho;
    return s;
}

Eigen::Map<MatrixXcd> SectoredDensityMatrix::block(int m) {
    const int d = layout.dim(m);
    return {data.data() + layout.offset(m), d, d};
}

Eigen::Map<const MatrixXcd> SectoredDensityMatrix::block(int m) const {
    const int d = layout.dim(m);
    return {data.data() + layout.offset(m), d, d};
}

double SectoredDensityMatrix::trace() const {
    double tr = 0;
    for (int m = layout.n_min; m <= layout.n_max; ++m) tr += block(m).trace().real();
    return tr;
}

double SectoredDensityMatrix::sector_probability(int m) const {
    return block(m).trace().real();
}

// Off-diagonal sums with the spin-ladder amplitudes c_k(m).
static void ladder_sums(const SectoredDensityMatrix& s, double& re, double& im) {
    re = im = 0;
    for (int m = std::max(1, s.layout.n_min); m <= s.layout.n_max; ++m) {
        const auto b = s.block(m);
        const double sp = 0.5 * m;
        for (int k = 0; k < m; ++k) {
            const double n = sp - k - 1;
            const double c = std::sqrt(sp * (sp + 1) - n * (n + 1));
            re += c * b(k + 1, k).real();
            im += c * b(k + 1, k).imag();
        }
    }
}

double SectoredDensityMatrix::expect_S1() const {
    double re, im;
    ladder_sums(*this, re, im);
    return re;
}

double SectoredDensityMatrix::expect_S2() const {
    double re, im;
    ladder_sums(*this, re, im);
    return im;
}

double SectoredDensityMatrix::expect_S3() const {
    double v = 0;
    for (int m = layout.n_min; m <= layout.n_max; ++m) {
        const auto b = block(m);
        const double sp = 0.5 * m;
        for (int k = 0; k <= m; ++k) v += (sp - k) * b(k, k).real();
    }
    return v;
}

double SectoredDensityMatrix::expect_S3sq() const {
    double v = 0;
    for (int m = layout.n_min; m <= layout.n_max; ++m) {
        const auto b = block(m);
        const double sp = 0.5 * m;
        for (int k = 0; k <= m; ++k) v += (sp - k) * (sp - k) * b(k, k).real();
    }
    return v;
}

double SectoredDensityMatrix::number_mean() const {
    double v = 0;
    for (int m = layout.n_min; m <= layout.n_max; ++m) v += m * sector_probability(m);
    return v;
}

double SectoredDensityMatrix::coherence_g1() const {
    double nl = 0, nr = 0;
    for (int m = layout.n_min; m <= layout.n_max; ++m) {
        const auto b = block(m);
        const double sp = 0.5 * m;
        for (int k = 0; k <= m; ++k) {
            const double pk = b(k, k).real();
            nl += pk * (sp + (sp - k));
            nr += pk * (sp - (sp - k));
        }
    }
    const double denom = nl * nr;
    if (!(denom > 1e-300)) return std::numeric_limits<double>::quiet_NaN();
    double re, im;
    ladder_sums(*this, re, im);
    return std::hypot(re, im) / std::sqrt(denom);
}

double SectoredDensityMatrix::hermiticity_error() const {
    double e = 0;
    for (int m = layout.n_min; m <= layout.n_max; ++m) {
        const auto b = block(m);
        e = std::max(e, (b - b.adjoint()).cwiseAbs().maxCoeff());
    }
    return e;
}

double SectoredDensityMatrix::min_eigenvalue() const {
    double lo = std::numeric_limits<double>::infinity();
    for (int m = layout.n_min; m <= layout.n_max; ++m) {
        const MatrixXcd h = 0.5 * (block(m) + block(m).adjoint());
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h, Eigen::EigenvaluesOnly);
        lo = std::min(lo, es.eigenvalues().minCoeff());
    }
    return lo;
}

} // namespace bjj::lindblad
