#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tclqem/qem.hpp"

using namespace tclqem;

namespace {

// Independent bisection for the smallest positive root of the closed-form
// recovery denominator.
double denominator_root() {
    double lo = 0.2, hi = 0.45;
    REQUIRE(recovery_denominator(lo) > 0.0);
    REQUIRE(recovery_denominator(hi) < 0.0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (recovery_denominator(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("numeric recovery inverts the population matrix") {
    const RecoveryOperator r0 = recovery_numeric(cnot_population_closed_form(0.0));
    REQUIRE((r0.r - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-14);

    const PopulationMatrix p = cnot_population_closed_form(0.01);
    const RecoveryOperator r = recovery_numeric(p);
    REQUIRE((r.r * p.p - Eigen::Matrix4d::Identity()).norm() < 1e-12);

    for (double alpha = 0.0; alpha <= 0.3 + 1e-12; alpha += 0.01) {
        const PopulationMatrix pm = cnot_population_closed_form(alpha);
        const RecoveryOperator rm = recovery_numeric(pm);
        INFO("alpha = " << alpha);
        REQUIRE((rm.r * pm.p - Eigen::Matrix4d::Identity()).norm() < 1e-10);
    }
}

TEST_CASE("numeric recovery fails at the singular point") {
    const double root = denominator_root();
    REQUIRE(std::abs(root - 1.0 / 3.0) < 1e-12);  // the root is exactly 1/3

    try {
        recovery_numeric(cnot_population_closed_form(root));
        FAIL("expected InversionError");
    } catch (const InversionError& e) {
        REQUIRE(e.smallest_singular_value() < 1e-8);
    }

    // the ill-conditioned band is localized: within 1e-3 of the root the
    // inversion error fires, just outside it inversion succeeds
    auto inverts = [](double alpha) {
        try {
            recovery_numeric(cnot_population_closed_form(alpha));
            return true;
        } catch (const InversionError&) {
            return false;
        }
    };
    REQUIRE(!inverts(root));
    REQUIRE(inverts(root - 1e-3));
    REQUIRE(inverts(root + 1e-3));
}

TEST_CASE("closed-form recovery structure") {
    const RecoveryOperator r0 = recovery_closed_form(0.0);
    REQUIRE((r0.r - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() == 0.0);

    const RecoveryOperator r = recovery_closed_form(0.01);
    REQUIRE(r.r(0, 1) == r.r(1, 0));
    REQUIRE(r.r(2, 3) == r.r(3, 2));
    REQUIRE(r.r(0, 0) == r.r(1, 1));
    REQUIRE(r.r(2, 2) == r.r(3, 3));
    REQUIRE(r.r(0, 2) == r.r(3, 0));

    // The closed form is not the inverse: the gap at alpha = 0.01 sits in the
    // lower-right block and is three orders above rounding. The true inverse
    // satisfies F = B exactly; the closed form separates them at O(alpha^2).
    const Eigen::Matrix4d num = recovery_numeric(cnot_population_closed_form(0.01)).r;
    const double dev = (num - r.r).cwiseAbs().maxCoeff();
    REQUIRE(dev > 1e-3);
    REQUIRE(dev < 1e-2);
    const RecoveryEntries e01 = recovery_closed_form_entries(0.1);
    REQUIRE(std::abs(e01.f - e01.b) > 1e-3);
    REQUIRE(std::abs(num(2, 3) - num(0, 2)) < 1e-13);  // F = B in the inverse
}

TEST_CASE("closed-form recovery rejects a vanishing denominator") {
    REQUIRE(std::abs(recovery_denominator(1.0 / 3.0)) < 1e-15);
    REQUIRE_THROWS_AS(recovery_closed_form(1.0 / 3.0), std::domain_error);
    REQUIRE_THROWS_AS(cost_closed_form(1.0 / 3.0), std::domain_error);
    REQUIRE_NOTHROW(recovery_closed_form(0.32));
}

TEST_CASE("expansion over Pauli products") {
    RecoveryOperator identity;
    identity.r = Eigen::Matrix4d::Identity();
    identity.alpha = 0.0;
    const DiracExpansion e0 = dirac_expand(identity);
    REQUIRE(e0.mu[0] == Catch::Approx(1.0).margin(1e-15));
    for (int i = 1; i < 16; ++i) REQUIRE(std::abs(e0.mu[i]) < 1e-15);

    const double alpha = 0.01;
    const RecoveryOperator r = recovery_closed_form(alpha);
    const RecoveryEntries en = recovery_closed_form_entries(alpha);
    const DiracExpansion e = dirac_expand(r);

    // nonzero coefficients land exactly on the six stated products
    REQUIRE(e.mu[0] == Catch::Approx((en.c + en.e) / 2).margin(1e-14));          // I (x) I
    REQUIRE(e.mu[1] == Catch::Approx((en.d + en.f) / 2).margin(1e-14));          // I (x) s1
    REQUIRE(e.mu[4] == Catch::Approx(en.b).margin(1e-14));                       // s1 (x) I
    REQUIRE(e.mu[5] == Catch::Approx(en.b).margin(1e-14));                       // s1 (x) s1
    REQUIRE(e.mu[12] == Catch::Approx((en.c - en.e) / 2).margin(1e-14));         // s3 (x) I
    REQUIRE(e.mu[13] == Catch::Approx(-(en.f - en.d) / 2).margin(1e-14));        // s3 (x) s1
    for (int i : {2, 3, 6, 7, 8, 9, 10, 11, 14, 15}) REQUIRE(std::abs(e.mu[i]) < 1e-14);

    // the projection on I (x) s1 is (D+F)/2, not D: the stated coefficient
    // list misallocates weight between I (x) s1 and s1 (x) I (their sum is
    // consistent). Document the gap.
    REQUIRE(std::abs(e.mu[1] - en.d) > 1e-3);
    REQUIRE(e.mu[1] + e.mu[4] ==
            Catch::Approx(en.d + (en.f + 2 * en.b - en.d) / 2).margin(1e-13));

    // reconstruction and Parseval (tr[E^dag E] = 4)
    REQUIRE((e.reconstruct() - r.r).cwiseAbs().maxCoeff() < 1e-12);
    double mu2 = 0.0;
    for (double m : e.mu) mu2 += m * m;
    REQUIRE(4.0 * mu2 == Catch::Approx(r.r.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("cost from expansion") {
    RecoveryOperator identity;
    identity.r = Eigen::Matrix4d::Identity();
    const CostResult c0 = cost_from_expansion(dirac_expand(identity));
    REQUIRE(c0.cost == 1.0);
    REQUIRE(c0.quasiprobabilities[0] == 1.0);
    REQUIRE(c0.signs[0] == 1);
    for (int i = 1; i < 16; ++i) REQUIRE(c0.signs[i] == 0);

    const CostResult c = cost_from_expansion(dirac_expand(recovery_closed_form(0.02)));
    double psum = 0.0;
    for (double p : c.quasiprobabilities) {
        REQUIRE(p >= 0.0);
        psum += p;
    }
    REQUIRE(psum == Catch::Approx(1.0).margin(1e-14));

    DiracExpansion zero;
    REQUIRE_THROWS_AS(cost_from_expansion(zero), std::domain_error);
}

TEST_CASE("cost baseline, monotonicity and the two routes") {
    REQUIRE(cost_numeric(0.0) == 1.0);
    REQUIRE(cost_closed_form(0.0) == 1.0);

    double prev_n = 1.0, prev_c = 1.0;
    bool strictly_above_one = true;
    for (int i = 1; i <= 100; ++i) {
        const double alpha = 1e-3 * i;
        const double cn = cost_numeric(alpha);
        const double cc = cost_closed_form(alpha);
        REQUIRE(cn >= prev_n);
        REQUIRE(cc >= prev_c);
        strictly_above_one = strictly_above_one && cn > 1.0;
        prev_n = cn;
        prev_c = cc;
    }
    REQUIRE(strictly_above_one);  // cost exceeds 1 whenever recovery != identity

    // the two routes differ by ~alpha/2 at small alpha (the |D| + |F-D| vs
    // |D+F|/2 + |D-F|/2 weighting); both stay first-class
    const double gap = cost_closed_form(0.01) - cost_numeric(0.01);
    REQUIRE(gap > 4e-3);
    REQUIRE(gap < 7e-3);
}
