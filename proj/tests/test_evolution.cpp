#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "tclqem/evolution.hpp"

using namespace tclqem;

namespace {

Matrix4cd random_density(std::mt19937& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix4cd a;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a(i, j) = c64(n(rng), n(rng));
    Matrix4cd rho = a * a.adjoint();
    rho /= rho.trace().real();
    return rho;
}

} // namespace

TEST_CASE("zero kernel gives the identity superoperator") {
    for (const MultipletBasis& basis : {identity_basis(), cnot_basis()}) {
        const TransitionTensor m = transition_tensor(basis);
        const EvolutionSuperoperator v = build_superoperator(m, basis.energies, {0.0, 0.0}, 0.7);
        REQUIRE((v.v - Matrix16cd::Identity()).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("identity-gate diagonal block reproduces the linear population law") {
    const MultipletBasis basis = identity_basis();
    for (PauliAxes axes : {PauliAxes::xyz, PauliAxes::xy}) {
        const TransitionTensor m = transition_tensor(basis, axes);
        const double alpha = 0.0123;
        const EvolutionSuperoperator v =
            build_superoperator(m, basis.energies, {alpha, 0.0}, 0.0);
        REQUIRE(v.v(0, 0).real() == Catch::Approx(1.0 - 2.0 * alpha).margin(1e-14));   // V_11,11
        REQUIRE(v.v(5, 0).real() == Catch::Approx(alpha).margin(1e-14));               // V_22,11
        REQUIRE(std::abs(v.v(10, 0)) < 1e-14);                                         // V_33,11
        REQUIRE(v.v(15, 0).real() == Catch::Approx(alpha).margin(1e-14));              // V_44,11
    }
}

TEST_CASE("population restriction is column stochastic") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ad(0.0, 0.3);
    for (int trial = 0; trial < 40; ++trial) {
        const MultipletBasis basis = (trial % 2 == 0) ? identity_basis() : cnot_basis();
        const PauliAxes axes = (trial % 4 < 2) ? PauliAxes::xyz : PauliAxes::xy;
        const PopulationMatrix pm = gate_population_matrix(basis, ad(rng), axes);
        for (int c = 0; c < 4; ++c) {
            REQUIRE(pm.p.col(c).sum() == Catch::Approx(1.0).margin(1e-13));
            for (int a = 0; a < 4; ++a) {
                REQUIRE(pm.p(a, c) >= -1e-14);
                REQUIRE(pm.p(a, c) <= 1.0 + 1e-14);
            }
        }
    }
    // entries stay in [0,1] all the way to the alpha = 1/2 boundary
    const PopulationMatrix half = gate_population_matrix(cnot_basis(), 0.5, PauliAxes::xy);
    for (int c = 0; c < 4; ++c)
        for (int a = 0; a < 4; ++a) {
            REQUIRE(half.p(a, c) >= -1e-14);
            REQUIRE(half.p(a, c) <= 1.0 + 1e-14);
        }
}

TEST_CASE("population matrix rejects complex diagonal blocks") {
    // The construction above cannot produce one (the k/k* pairing keeps the
    // diagonal block real for any real tensor), so tamper with the map itself.
    const TransitionTensor m = transition_tensor(cnot_basis());
    EvolutionSuperoperator v = build_superoperator(m, {0, 0, 0, 0}, {0.05, 0.0}, 1.0);
    v.v(2 * 4 + 2, 1 * 4 + 1) += c64(0.0, 1e-3);
    REQUIRE_THROWS_AS(population_matrix(v), ValidationError);
}

TEST_CASE("closed-form CNOT population matrix") {
    const PopulationMatrix p0 = cnot_population_closed_form(0.0);
    REQUIRE((p0.p - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() == 0.0);

    const double a = 0.07;
    const PopulationMatrix p = cnot_population_closed_form(a);
    const Eigen::Vector4d col3(a / 2, a / 2, 1 - 1.5 * a, a / 2);
    REQUIRE((p.p.col(2) - col3).cwiseAbs().maxCoeff() < 1e-15);
    REQUIRE_THROWS_AS(cnot_population_closed_form(-0.1), std::domain_error);
}

TEST_CASE("superoperator reconstruction matches the closed form (transverse axes)") {
    const MultipletBasis basis = cnot_basis();
    for (double alpha : {0.0, 0.01, 0.1, 0.25}) {
        const Eigen::Matrix4d built = gate_population_matrix(basis, alpha, PauliAxes::xy).p;
        const Eigen::Matrix4d closed = cnot_population_closed_form(alpha).p;
        INFO("alpha = " << alpha);
        REQUIRE((built - closed).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("isotropic axes deviate from the closed form only in the 3-4 block") {
    // The Z contributions move weight between the two basis states that share
    // a computational footprint: diagonal entries 3,4 read 1-2a instead of
    // 1-3a/2 and the 3<->4 transfer reads a instead of a/2.
    const double alpha = 0.08;
    const Eigen::Matrix4d built = gate_population_matrix(cnot_basis(), alpha, PauliAxes::xyz).p;
    const Eigen::Matrix4d closed = cnot_population_closed_form(alpha).p;
    const Eigen::Matrix4d diff = built - closed;
    REQUIRE(diff.topLeftCorner<2, 4>().cwiseAbs().maxCoeff() < 1e-13);
    REQUIRE(diff.bottomLeftCorner<2, 2>().cwiseAbs().maxCoeff() < 1e-13);
    REQUIRE(diff(2, 2) == Catch::Approx(-alpha / 2).margin(1e-13));
    REQUIRE(diff(3, 3) == Catch::Approx(-alpha / 2).margin(1e-13));
    REQUIRE(diff(3, 2) == Catch::Approx(alpha / 2).margin(1e-13));
    REQUIRE(diff(2, 3) == Catch::Approx(alpha / 2).margin(1e-13));

    // and identically zero difference in every computational outcome
    for (int init = 0; init < 4; ++init) {
        const auto pa = evolve_populations(static_cast<MultipletIndex>(init), alpha, cnot_basis(),
                                           PauliAxes::xyz);
        const auto pb = evolve_populations(static_cast<MultipletIndex>(init), alpha, cnot_basis(),
                                           PauliAxes::xy);
        REQUIRE((pa - pb).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("computational outcome probabilities for the gate cases") {
    const double a = 0.0375;

    const auto id_m1 = evolve_populations(MultipletIndex::m1, a, identity_basis());
    REQUIRE(id_m1[0] == Catch::Approx(1 - 2 * a).margin(1e-13));
    REQUIRE(id_m1[1] == Catch::Approx(a).margin(1e-13));
    REQUIRE(id_m1[2] == Catch::Approx(a).margin(1e-13));
    REQUIRE(std::abs(id_m1[3]) < 1e-13);

    const auto cx_m2 = evolve_populations(MultipletIndex::m2, a, cnot_basis());
    REQUIRE(cx_m2[0] == Catch::Approx(a).margin(1e-13));
    REQUIRE(cx_m2[1] == Catch::Approx(1 - 2 * a).margin(1e-13));
    REQUIRE(cx_m2[2] == Catch::Approx(a / 2).margin(1e-13));
    REQUIRE(cx_m2[3] == Catch::Approx(a / 2).margin(1e-13));

    const auto cx_m3 = evolve_populations(MultipletIndex::m3, a, cnot_basis());
    REQUIRE(cx_m3[0] == Catch::Approx(a / 2).margin(1e-13));
    REQUIRE(cx_m3[1] == Catch::Approx(a / 2).margin(1e-13));
    REQUIRE(cx_m3[2] == Catch::Approx((1 - a) / 2).margin(1e-13));
    REQUIRE(cx_m3[3] == Catch::Approx((1 - a) / 2).margin(1e-13));

    for (double alpha : {0.0, 0.1, 0.3}) {
        const auto p = evolve_populations(MultipletIndex::m4, alpha, cnot_basis());
        REQUIRE(p.sum() == Catch::Approx(1.0).margin(1e-12));
        for (int i = 0; i < 4; ++i) REQUIRE(p[i] >= -1e-12);
    }

    REQUIRE_THROWS_AS(evolve_populations(MultipletIndex::m1, -0.01, identity_basis()),
                      std::domain_error);
    REQUIRE_THROWS_AS(evolve_populations(MultipletIndex::m1, 0.51, identity_basis()),
                      std::domain_error);
}

TEST_CASE("phase factors never touch diagonal populations") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> e(-2.0, 2.0);
    MultipletBasis basis = cnot_basis();
    const TransitionTensor m = transition_tensor(basis);
    const KernelValue k{0.04, 0.01};
    const EvolutionSuperoperator flat = build_superoperator(m, {0, 0, 0, 0}, k, 1.3);
    for (int trial = 0; trial < 10; ++trial) {
        const std::array<double, 4> energies{e(rng), e(rng), e(rng), e(rng)};
        const EvolutionSuperoperator v = build_superoperator(m, energies, k, 1.3);
        const PopulationMatrix a = population_matrix(v);
        const PopulationMatrix b = population_matrix(flat);
        REQUIRE((a.p - b.p).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("trace and Hermiticity are preserved") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ad(0.0, 0.3);
    std::uniform_real_distribution<double> dd(-0.15, 0.15);
    for (int trial = 0; trial < 60; ++trial) {
        const MultipletBasis basis = (trial % 2 == 0) ? identity_basis() : cnot_basis();
        const TransitionTensor m =
            transition_tensor(basis, (trial % 4 < 2) ? PauliAxes::xyz : PauliAxes::xy);
        const KernelValue k{ad(rng), dd(rng)};
        const EvolutionSuperoperator v = build_superoperator(m, {0.3, -0.1, 0.7, 0.0}, k, 0.9);
        const DensityMatrix rho = make_density_matrix(random_density(rng), StateBasis::multiplet);
        const DensityMatrix out = apply(v, rho);
        REQUIRE(std::abs(out.rho.trace().real() - 1.0) < 1e-12);
        REQUIRE(std::abs(out.rho.trace().imag()) < 1e-12);
        REQUIRE(hermiticity_error(out.rho) < 1e-12);
    }
}

TEST_CASE("density matrix validation") {
    Matrix4cd rho = Matrix4cd::Zero();
    rho(0, 0) = 0.9;
    REQUIRE_THROWS_AS(make_density_matrix(rho, StateBasis::multiplet), ValidationError);
    rho(0, 0) = 1.0;
    rho(0, 1) = c64(0.0, 0.3);  // not Hermitian unless mirrored
    REQUIRE_THROWS_AS(make_density_matrix(rho, StateBasis::multiplet), ValidationError);
    rho(1, 0) = c64(0.0, -0.3);
    REQUIRE_NOTHROW(make_density_matrix(rho, StateBasis::multiplet));
    REQUIRE(min_eigenvalue(rho) < -1e-9);  // coherence without population
}
