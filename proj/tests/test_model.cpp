#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bjj/model.hpp"

#include <cmath>
#include <complex>

using namespace bjj;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Independent construction straight from two bosonic modes: basis |n_L, n_R>
// with n_L = N - k, n_R = k, matrix elements of a_L^dag a_R etc. written out
// longhand. Everything in test scope is cross-checked against this.
struct FockOracle {
    int N;
    MatrixXd hop_LR; // a_L^dag a_R
    MatrixXd hop_RL; // a_R^dag a_L
    MatrixXd nL, nR;

    explicit FockOracle(int N_) : N(N_) {
        const int d = N + 1;
        hop_LR = MatrixXd::Zero(d, d);
        hop_RL = MatrixXd::Zero(d, d);
        nL = MatrixXd::Zero(d, d);
        nR = MatrixXd::Zero(d, d);
        for (int k = 0; k <= N; ++k) {
            nL(k, k) = N - k;
            nR(k, k) = k;
            // a_L^dag a_R |N-k, k> = sqrt((N-k+1) k) |N-k+1, k-1>
            if (k >= 1) hop_LR(k - 1, k) = std::sqrt(double(N - k + 1) * k);
            if (k < N) hop_RL(k + 1, k) = std::sqrt(double(k + 1) * (N - k));
        }
    }

    MatrixXd S1() const { return 0.5 * (hop_LR + hop_RL); }
    MatrixXd S3() const { return 0.5 * (nL - nR); }
    MatrixXd S2() const {
        // (hop_LR - hop_RL) / 2i is real antisymmetric/i; return the real matrix
        // multiplying -i, handled at the comparison site.
        return 0.5 * (hop_LR - hop_RL);
    }
    MatrixXd hamiltonian(const model::ModelParams& p) const {
        const MatrixXd s3 = S3();
        return p.epsilon * s3 - p.J * S1() + p.U * s3 * s3;
    }
};

} // namespace

TEST_CASE("spin operators match the two-mode Fock construction") {
    for (int N : {1, 2, 3, 7, 12}) {
        const FockOracle f(N);
        const auto ops = model::build_spin_operators(N);
        CHECK((ops.S1.real() - f.S1()).cwiseAbs().maxCoeff() < 1e-13);
        CHECK((ops.S3.real() - f.S3()).cwiseAbs().maxCoeff() < 1e-13);
        CHECK(ops.S1.imag().cwiseAbs().maxCoeff() == 0.0);
        CHECK(ops.S3.imag().cwiseAbs().maxCoeff() == 0.0);
        // S2 = (hop_LR - hop_RL)/(2i)
        const MatrixXcd s2_oracle = std::complex<double>(0, -1) * f.S2();
        CHECK((ops.S2 - s2_oracle).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("spin operators close the su(2) algebra") {
    const auto ops = model::build_spin_operators(9);
    const std::complex<double> i(0, 1);
    auto comm = [](const MatrixXcd& a, const MatrixXcd& b) { return MatrixXcd(a * b - b * a); };
    CHECK((comm(ops.S1, ops.S2) - i * ops.S3).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((comm(ops.S2, ops.S3) - i * ops.S1).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((comm(ops.S3, ops.S1) - i * ops.S2).cwiseAbs().maxCoeff() < 1e-12);

    // Casimir S^2 = s(s+1)
    const double s = 4.5;
    const MatrixXcd cas = ops.S1 * ops.S1 + ops.S2 * ops.S2 + ops.S3 * ops.S3;
    CHECK((cas - s * (s + 1) * MatrixXcd::Identity(10, 10)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("hamiltonian matches the Fock oracle for random parameters") {
    const model::ModelParams cases[] = {
        {2, 1.0, 0.0, 0.0}, {5, 1.0, 0.3, 0.0}, {8, 2.0, 0.1, 0.4}, {13, 0.7, 0.05, -1.2}};
    for (const auto& p : cases) {
        const FockOracle f(p.N);
        const MatrixXd dense = model::build_hamiltonian(p).dense();
        CHECK((dense - f.hamiltonian(p)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("diagonalize agrees with a dense eigensolver") {
    const model::ModelParams p{20, 1.0, 0.12, 0.3};
    const auto h = model::build_hamiltonian(p);
    const auto sp = model::diagonalize(h);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(h.dense());
    REQUIRE(sp.energies.size() == 21);
    for (int j = 0; j <= 20; ++j) {
        CHECK(sp.energies[j] == doctest::Approx(es.eigenvalues()[j]).epsilon(1e-12));
        // eigenvectors defined up to sign
        const double overlap = std::abs(sp.vectors.col(j).dot(es.eigenvectors().col(j)));
        CHECK(overlap == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("characteristic parameters at the reference points") {
    // N=50, U/J=0.25: u=12.5
    const auto c = model::characteristic_params({50, 1.0, 0.25, 0.0});
    CHECK(c.u == doctest::Approx(12.5).epsilon(1e-15));
    CHECK(c.xi == doctest::Approx(1.9168293127388174).epsilon(1e-14));
    CHECK(c.omega_J == doctest::Approx(3.6742346141747673).epsilon(1e-14));
    CHECK(c.omega_J == doctest::Approx(std::sqrt(1.0 * (1.0 + 50 * 0.25))).epsilon(1e-14));
    CHECK(c.regime == model::Regime::Josephson);
    // eps_c = (u^{2/3} - 1)^{3/2}
    CHECK(c.eps_c == doctest::Approx(std::pow(std::pow(12.5, 2.0 / 3) - 1, 1.5)).epsilon(1e-14));

    const auto c10 = model::characteristic_params({50, 1.0, 0.2, 0.0});
    CHECK(c10.omega_J == doctest::Approx(std::sqrt(11.0)).epsilon(1e-14)); // 3.3166
    const auto c50 = model::characteristic_params({50, 1.0, 1.0, 0.0});
    CHECK(c50.omega_J == doctest::Approx(std::sqrt(51.0)).epsilon(1e-14)); // 7.1414

    CHECK(model::characteristic_params({50, 1.0, 0.0, 0.0}).regime == model::Regime::Rabi);
    CHECK(model::characteristic_params({3, 1.0, 4.0, 0.0}).regime == model::Regime::Fock);
    CHECK(model::characteristic_params({50, 1.0, 0.0, 0.0}).eps_c == 0.0);
}

TEST_CASE("ground state frozen reference at N=50, u=12.5") {
    const model::ModelParams p{50, 1.0, 0.25, 0.0};
    const auto gs = model::ground_state(p);
    const auto sp = model::diagonalize(model::build_hamiltonian(p));
    CHECK(gs.energy == doctest::Approx(-23.665076307380016).epsilon(1e-12));
    CHECK(sp.energies[1] - sp.energies[0] == doctest::Approx(3.6309897923566226).epsilon(1e-10));
    CHECK_FALSE(gs.degenerate);

    const MatrixXcd rho = gs.density();
    CHECK(model::coherence_g1(rho) == doctest::Approx(0.9803455311723768).epsilon(1e-12));

    const auto ops = model::build_spin_operators(p.N);
    const double S3 = model::expect_real(rho, ops.S3);
    const double S3sq = model::expect_real(rho, MatrixXcd(ops.S3 * ops.S3));
    CHECK(std::abs(S3) < 1e-12);
    CHECK(S3sq - S3 * S3 == doctest::Approx(3.3742478877178446).epsilon(1e-10));
    // number squeezing: var(S3) < N/4 (coherent-state value)
    CHECK(S3sq < 12.5);
}

TEST_CASE("ground state of the noninteracting junction is the spin coherent state") {
    const model::ModelParams p{40, 1.0, 0.0, 0.0};
    const auto gs = model::ground_state(p);
    // binomial amplitudes sqrt(C(N,k)) / 2^{N/2}
    double log_norm = -0.5 * 40 * std::log(2.0);
    for (int k = 0; k <= 40; ++k) {
        double log_c = 0.5 * (std::lgamma(41.0) - std::lgamma(k + 1.0) - std::lgamma(41.0 - k));
        CHECK(gs.psi[k] == doctest::Approx(std::exp(log_c + log_norm)).epsilon(1e-9));
    }
    CHECK(model::coherence_g1(gs.density()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ground state is even under left-right exchange") {
    for (double U : {0.0, 0.1, 2.0}) {
        const model::ModelParams p{17, 1.0, U, 0.0};
        const auto gs = model::ground_state(p);
        for (int k = 0; k <= 17; ++k)
            CHECK(gs.psi[k] == doctest::Approx(gs.psi[17 - k]).epsilon(1e-10));
    }
}

TEST_CASE("thermal state reduces to the projector at kBT=0 and to identity at high T") {
    const model::ModelParams p{12, 1.0, 0.2, 0.0};
    const MatrixXcd cold = model::thermal_state(p, 0.0);
    const MatrixXcd proj = model::ground_state(p).density();
    CHECK((cold - proj).cwiseAbs().maxCoeff() < 1e-12);

    const MatrixXcd hot = model::thermal_state(p, 1e9);
    CHECK(std::abs(hot.trace().real() - 1.0) < 1e-12);
    for (int k = 0; k <= 12; ++k)
        CHECK(hot(k, k).real() == doctest::Approx(1.0 / 13).epsilon(1e-6));
}

TEST_CASE("thermal occupation follows the Bose function") {
    CHECK(model::thermal_occupation(1.0, 0.0) == 0.0);
    const double w = 2.0, T = 3.0;
    CHECK(model::thermal_occupation(w, T) ==
          doctest::Approx(1.0 / (std::exp(w / T) - 1.0)).epsilon(1e-14));
}

TEST_CASE("asymmetry tilts the ground state toward the deeper well") {
    const model::ModelParams p{20, 1.0, 0.5, -2.0}; // epsilon < 0 favors n > 0
    const auto gs = model::ground_state(p);
    const auto ops = model::build_spin_operators(p.N);
    CHECK(model::expect_real(gs.density(), ops.S3) > 0.1);
}

TEST_CASE("coherence requires both wells occupied") {
    // all atoms in the left well: <n_R> = 0
    MatrixXcd rho = MatrixXcd::Zero(3, 3);
    rho(0, 0) = 1.0;
    CHECK_THROWS_AS((void)model::coherence_g1(rho), std::domain_error);
}

TEST_CASE("lowering maps decrease the atom number consistently") {
    const int N = 6;
    const MatrixXd aL = model::lowering_left(N);
    const MatrixXd aR = model::lowering_right(N);
    REQUIRE(aL.rows() == N);
    REQUIRE(aL.cols() == N + 1);

    // number balance: a_L^dag a_L + a_R^dag a_R = N on the upper sector
    const MatrixXd total = aL.transpose() * aL + aR.transpose() * aR;
    CHECK((total - double(N) * MatrixXd::Identity(N + 1, N + 1)).cwiseAbs().maxCoeff() < 1e-12);

    // removing a left atom from |n_L, n_R> keeps n_R: check on basis columns
    const FockOracle top(N);
    const FockOracle bottom(N - 1);
    // S3 block commutation: aL S3_top - (S3_bot + 1/2) aL = 0
    const MatrixXd s3t = top.S3(), s3b = bottom.S3();
    CHECK((aL * s3t - (s3b + 0.5 * MatrixXd::Identity(N, N)) * aL).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((aR * s3t - (s3b - 0.5 * MatrixXd::Identity(N, N)) * aR).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("hopping operator equals S1 + i S2") {
    const auto ops = model::build_spin_operators(5);
    const MatrixXcd hop = model::hopping_operator(5);
    CHECK((hop - (ops.S1 + std::complex<double>(0, 1) * ops.S2)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("parameter validation rejects out-of-domain input") {
    CHECK_THROWS_AS(model::ModelParams({0, 1.0, 0.0, 0.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(model::ModelParams({2, 0.0, 0.0, 0.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(model::ModelParams({2, 1.0, -0.1, 0.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(model::ModelParams({2, 1.0, 0.0, NAN}).validate(), std::invalid_argument);
}

TEST_CASE("hermiticity error measures the antisymmetric part") {
    MatrixXcd a = MatrixXcd::Zero(2, 2);
    a(0, 1) = std::complex<double>(1, 2);
    a(1, 0) = std::complex<double>(1, -2);
    CHECK(model::hermiticity_error(a) == 0.0);
    a(1, 0) = std::complex<double>(1, -1);
    CHECK(model::hermiticity_error(a) == doctest::Approx(1.0).epsilon(1e-14));
}
