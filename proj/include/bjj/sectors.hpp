// sectors.hpp — block-diagonal density matrix over atom-number sectors
//
// One-body loss couples sectors only downward and never creates coherences
// between different total atom numbers, so the state is stored as a direct sum
// of (m+1)x(m+1) blocks for m = n_min..n_max. Blocks are concatenated
// column-major in one flat vector so integrators can treat the state as a
// plain vector.
#pragma once

#include "bjj/model.hpp"

#include <Eigen/Dense>
#include <vector>

namespace bjj::lindblad {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

struct StateLayout {
    int n_min = 0;
    int n_max = 0;
    std::vector<int> offsets; // offsets[m - n_min], plus one past-the-end entry

    static StateLayout make(int n_min, int n_max);
    int dim(int m) const { return m + 1; }
    int offset(int m) const { return offsets[m - n_min]; }
    int total_size() const { return offsets.back(); }
    bool operator==(const StateLayout& o) const = default;
};

struct SectoredDensityMatrix {
    StateLayout layout;
    VectorXcd data;

    // Zero state over sectors n_min..n_max.
    static SectoredDensityMatrix zero(int n_min, int n_max);
    // Embeds a fixed-N block; with_loss extends the sector range down to 0.
    static SectoredDensityMatrix from_sector(const MatrixXcd& rho, int N, bool with_loss);

    Eigen::Map<MatrixXcd> block(int m);
    Eigen::Map<const MatrixXcd> block(int m) const;

    double trace() const;
    double sector_probability(int m) const;

    // Observables summed over sectors.
    double expect_S1() const;
    double expect_S2() const;
    double expect_S3() const;
    double expect_S3sq() const;
    double number_mean() const;   // <n_L + n_R>
    // g1 = |sum_m tr(rho_m S+_m)| / sqrt(<n_L><n_R>); NaN when a well empties.
    double coherence_g1() const;

    double hermiticity_error() const;
    double min_eigenvalue() const; // over Hermitized blocks
};

} // namespace bjj::lindblad
