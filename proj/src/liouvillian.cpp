#include "bjj/liouvillian.hpp"

#include <cmath>
#include <stdexcept>

namespace bjj::lindblad {

using Eigen::VectorXd;
using Eigen::VectorXcd;
using Eigen::MatrixXd;

void NoiseChannels::validate() const {
    for (double g : {gamma1, gamma2, gamma3, gammaL, gammaR})
        if (!(g >= 0) || !std::isfinite(g))
            throw std::invalid_argument("NoiseChannels: rates must be finite and >= 0");
}

double NoiseChannels::max_rate() const {
    return std::max({gamma1, gamma2, gamma3, gammaL, gammaR});
}

Liouvillian::Liouvillian(const model::ModelParams& p, const NoiseChannels& nc) : p_(p), nc_(nc) {
    p.validate();
    nc.validate();
    layout_ = StateLayout::make(nc.has_loss() ? 0 : p.N, p.N);
    sectors_.resize(layout_.n_max - layout_.n_min + 1);
    for (int m = layout_.n_min; m <= layout_.n_max; ++m) {
        SectorData& sd = sectors_[m - layout_.n_min];
        const int d = m + 1;
        const VectorXd n = model::n_values(m);
        const double sp = 0.5 * m;
        VectorXd c(std::max(m, 0));
        for (int k = 0; k < m; ++k) {
            const double nk = sp - k - 1;
            c[k] = std::sqrt(sp * (sp + 1) - nk * (nk + 1));
        }
        sd.hdiag = p.epsilon * n.array() + p.U * n.array().square();
        sd.c = c;
        // Elementwise mask decay(k,l) = v_k + v_l - 2*gamma3*n_k*n_l with
        // v_k = gamma3 n_k^2 + (gammaL n_L(k) + gammaR n_R(k))/2; kept in
        // rank-1 form (vectors) so large sectors need no d x d mask storage.
        VectorXd v = nc.gamma3 * n.array().square()
                   + 0.5 * (nc.gammaL * (sp + n.array()) + nc.gammaR * (sp - n.array()));
        sd.gainL.resize(d);
        sd.gainR.resize(d);
        for (int k = 0; k < d; ++k) {
            sd.gainL[k] = std::sqrt(static_cast<double>(m + 1 - k));
            sd.gainR[k] = std::sqrt(static_cast<double>(k + 1));
        }
        sd.t1.resize(d, d);
        sd.t2.resize(d, d);
        sd.t3.resize(d, d);
        // Complex-cast copies so Eigen column ops need no per-call casting.
        sd.v_c = v.cast<std::complex<double>>();
        sd.n_c = n.cast<std::complex<double>>();
        sd.hdiag_c = sd.hdiag.cast<std::complex<double>>();
        sd.hoff_c = (-0.5 * p.J * c).cast<std::complex<double>>();
        sd.halfc_c = (0.5 * c).cast<std::complex<double>>();
        sd.nhalfc_c = (-0.5 * c).cast<std::complex<double>>();
        sd.gainL_c = sd.gainL.cast<std::complex<double>>();
        sd.gainR_c = sd.gainR.cast<std::complex<double>>();
        sd.v = v;
        sd.n = n;
    }
}

namespace {

using CMap = Eigen::Map<const MatrixXcd>;
using MMap = Eigen::Map<MatrixXcd>;

// out = T in, where T has upper band up_k at (k,k+1) and lower band lo_k at (k+1,k).
void band_left(const VectorXcd& up, const VectorXcd& lo, const Eigen::Ref<const MatrixXcd>& in,
               MatrixXcd& out) {
    const int d = static_cast<int>(in.rows());
    const int m = d - 1;
    out.setZero();
    if (m <= 0) return;
    for (int j = 0; j < d; ++j) {
        out.col(j).head(m).array() += up.array() * in.col(j).tail(m).array();
        out.col(j).tail(m).array() += lo.array() * in.col(j).head(m).array();
    }
}

// out = in T.
void band_right(const Eigen::Ref<const MatrixXcd>& in, const VectorXcd& up, const VectorXcd& lo,
                MatrixXcd& out) {
    const int d = static_cast<int>(in.rows());
    const int m = d - 1;
    out.setZero();
    if (m <= 0) return;
    for (int l = 0; l < d; ++l) {
        if (l > 0) out.col(l) += in.col(l - 1) * up[l - 1];
        if (l < m) out.col(l) += in.col(l + 1) * lo[l];
    }
}

} // namespace

void Liouvillian::apply_sector(int m, const VectorXcd& y, VectorXcd& dy) const {
    const SectorData& sd = sectors_[m - layout_.n_min];
    const int d = m + 1;
    CMap in(y.data() + layout_.offset(m), d, d);
    MMap out(dy.data() + layout_.offset(m), d, d);

    // -i[H, rho] and the elementwise decay mask, fused column by column.
    const std::complex<double> mi(0, -1);
    for (int l = 0; l < d; ++l) {
        // (H rho)(:,l)
        sd.t1.col(0).array() = sd.hdiag_c.array() * in.col(l).array();
        if (m > 0) {
            sd.t1.col(0).head(m).array() += sd.hoff_c.array() * in.col(l).tail(m).array();
            sd.t1.col(0).tail(m).array() += sd.hoff_c.array() * in.col(l).head(m).array();
        }
        // (rho H)(:,l)
        sd.t2.col(0) = in.col(l) * sd.hdiag_c[l];
        if (l > 0) sd.t2.col(0) += in.col(l - 1) * sd.hoff_c[l - 1];
        if (l < m) sd.t2.col(0) += in.col(l + 1) * sd.hoff_c[l];
        out.col(l) = mi * (sd.t1.col(0) - sd.t2.col(0));
        // decay(k,l) = v_k + v_l - 2 g3 n_k n_l
        out.col(l).array() -= sd.v_c.array() * in.col(l).array();
        out.col(l) -= in.col(l) * sd.v_c[l];
        out.col(l).array() += (2.0 * nc_.gamma3) * sd.n_c[l] * sd.n_c.array() * in.col(l).array();
    }

    // Collective rotation dissipators with tridiagonal S1 and S2 = i A:
    //   -g1 (S1^2 rho + rho S1^2 - 2 S1 rho S1),  +g2 (A^2 rho + rho A^2 - 2 A rho A).
    auto accumulate = [&](const VectorXcd& up, const VectorXcd& lo, double coeff) {
        band_left(up, lo, in, sd.t1);        // X rho
        band_left(up, lo, sd.t1, sd.t2);     // X^2 rho
        out += coeff * sd.t2;
        band_right(sd.t1, up, lo, sd.t3);    // X rho X
        out -= 2.0 * coeff * sd.t3;
        band_right(in, up, lo, sd.t1);       // rho X
        band_right(sd.t1, up, lo, sd.t2);    // rho X^2
        out += coeff * sd.t2;
    };
    if (m > 0 && nc_.gamma1 > 0) accumulate(sd.halfc_c, sd.halfc_c, -nc_.gamma1);
    if (m > 0 && nc_.gamma2 > 0) accumulate(sd.nhalfc_c, sd.halfc_c, nc_.gamma2);

    // Loss recycling from sector m+1.
    if (m < layout_.n_max && nc_.has_loss()) {
        const int du = d + 1;
        CMap up(y.data() + layout_.offset(m + 1), du, du);
        for (int l = 0; l < d; ++l) {
            if (nc_.gammaL > 0)
                out.col(l).array() += (nc_.gammaL * sd.gainL[l]) * sd.gainL_c.array() * up.col(l).head(d).array();
            if (nc_.gammaR > 0)
                out.col(l).array() += (nc_.gammaR * sd.gainR[l]) * sd.gainR_c.array() * up.col(l + 1).segment(1, d).array();
        }
    }
}

void Liouvillian::apply_flat(const VectorXcd& y, VectorXcd& dy) const {
    if (y.size() != layout_.total_size())
        throw std::invalid_argument("Liouvillian::apply_flat: state size does not match layout");
    dy.resize(y.size());
    const int lo = layout_.n_min, hi = layout_.n_max;
#pragma omp parallel for schedule(dynamic)
    for (int m = hi; m >= lo; --m) apply_sector(m, y, dy);
}

void Liouvillian::apply(const SectoredDensityMatrix& in, SectoredDensityMatrix& out) const {
    if (!(in.layout == layout_))
        throw std::invalid_argument("Liouvillian::apply: state layout mismatch");
    out.layout = layout_;
    apply_flat(in.data, out.data);
}

void Liouvillian::apply_reference(const SectoredDensityMatrix& in, SectoredDensityMatrix& out) const {
    if (!(in.layout == layout_))
        throw std::invalid_argument("Liouvillian::apply_reference: state layout mismatch");
    out = SectoredDensityMatrix::zero(layout_.n_min, layout_.n_max);
    const std::complex<double> i1(0, 1);
    for (int m = layout_.n_min; m <= layout_.n_max; ++m) {
        const MatrixXcd rho = in.block(m);
        MatrixXcd d = MatrixXcd::Zero(m + 1, m + 1);
        const double sp = 0.5 * m;
        const VectorXd n = model::n_values(m);
        if (m >= 1) {
            const auto ops = model::build_spin_operators(m);
            const model::ModelParams pm{m, p_.J, p_.U, p_.epsilon};
            const MatrixXcd H = model::build_hamiltonian(pm).dense().cast<std::complex<double>>();
            d -= i1 * (H * rho - rho * H);
            const double g[3] = {nc_.gamma1, nc_.gamma2, nc_.gamma3};
            const MatrixXcd* S[3] = {&ops.S1, &ops.S2, &ops.S3};
            for (int a = 0; a < 3; ++a) {
                if (g[a] == 0) continue;
                const MatrixXcd& X = *S[a];
                d -= g[a] * (X * X * rho + rho * X * X - 2.0 * X * rho * X);
            }
        }
        if (nc_.has_loss()) {
            Eigen::VectorXd nl = (sp + n.array()), nr = (sp - n.array());
            for (int k = 0; k <= m; ++k)
                for (int l = 0; l <= m; ++l)
                    d(k, l) -= 0.5 * (nc_.gammaL * (nl[k] + nl[l]) + nc_.gammaR * (nr[k] + nr[l])) * rho(k, l);
            if (m < layout_.n_max) {
                const MatrixXcd up = in.block(m + 1);
                const MatrixXd aL = model::lowering_left(m + 1);
                const MatrixXd aR = model::lowering_right(m + 1);
                if (nc_.gammaL > 0) d += nc_.gammaL * (aL * up * aL.transpose());
                if (nc_.gammaR > 0) d += nc_.gammaR * (aR * up * aR.transpose());
            }
        }
        out.block(m) = d;
    }
}

} // namespace bjj::lindblad
