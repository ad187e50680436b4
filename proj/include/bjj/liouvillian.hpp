// liouvillian.hpp — right-hand side of the master equation
//
//   drho/dt = -i[H, rho]
//             - sum_a gamma_a (S_a^2 rho + rho S_a^2 - 2 S_a rho S_a)
//             - sum_{j=L,R} gamma_j/2 (n_j rho + rho n_j - 2 a_j rho a_j^dag)
//
// The collective-rotation dissipators act within each atom-number sector; the
// loss recycling term a_j rho a_j^dag feeds sector m+1 into sector m.
//
// apply() exploits the tridiagonal structure of H, S1, S2 and the fact that
// the S3 dissipator and the loss anticommutator are elementwise masks in this
// basis; sectors are processed in an OpenMP parallel loop where each thread
// writes only its own output block, so results are bitwise identical for any
// thread count. apply_reference() is a plain dense-matrix implementation kept
// as the serial reference for tests and benchmarks.
#pragma once

#include "bjj/model.hpp"
#include "bjj/sectors.hpp"

#include <vector>

namespace bjj::lindblad {

struct NoiseChannels {
    double gamma1 = 0; // collective S1 rotation noise
    double gamma2 = 0; // collective S2 rotation noise (number-like)
    double gamma3 = 0; // collective S3 rotation noise (phase-like)
    double gammaL = 0; // one-body loss, left well
    double gammaR = 0; // one-body loss, right well

    void validate() const;
    bool has_loss() const { return gammaL > 0 || gammaR > 0; }
    double max_rate() const;
};

class Liouvillian {
  public:
    Liouvillian(const model::ModelParams& p, const NoiseChannels& nc);

    const StateLayout& layout() const { return layout_; }
    bool lossless() const { return !nc_.has_loss(); }

    // dy = L y on flat sector storage. Not reentrant on the same instance.
    void apply_flat(const VectorXcd& y, VectorXcd& dy) const;

    void apply(const SectoredDensityMatrix& in, SectoredDensityMatrix& out) const;
    void apply_reference(const SectoredDensityMatrix& in, SectoredDensityMatrix& out) const;

  private:
    model::ModelParams p_;
    NoiseChannels nc_;
    StateLayout layout_;

    struct SectorData {
        Eigen::VectorXd hdiag;   // Hamiltonian diagonal
        Eigen::VectorXd c;       // ladder amplitudes, length m
        Eigen::VectorXd v;       // rank-1 part of the elementwise decay mask
        Eigen::VectorXd n;       // S3 quantum numbers
        Eigen::VectorXd gainL;   // sqrt(m+1-k), loss gain from sector m+1
        Eigen::VectorXd gainR;   // sqrt(k+1)
        // complex-cast copies used by the column kernels
        VectorXcd hdiag_c, hoff_c, halfc_c, nhalfc_c, v_c, n_c, gainL_c, gainR_c;
        mutable MatrixXcd t1, t2, t3; // scratch for the band sandwiches
    };
    std::vector<SectorData> sectors_;

    void apply_sector(int m, const VectorXcd& y, VectorXcd& dy) const;
};

} // namespace bjj::lindblad
