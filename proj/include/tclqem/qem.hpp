#pragma once

// Quasiprobability recovery of the ideal population map, the Pauli-product
// expansion of the recovery operator, and the sampling-overhead cost
// function c = sum |mu_i|.

#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "tclqem/evolution.hpp"

namespace tclqem {

enum class RecoverySource { numeric_inverse, closed_form };

struct RecoveryOperator {
    Eigen::Matrix4d r;
    double alpha = 0.0;
    RecoverySource source = RecoverySource::numeric_inverse;
};

/// R = ideal * P^-1, so that R * P = ideal. Rejects population matrices
/// with condition number above 1e8, reporting the smallest singular value.
inline RecoveryOperator recovery_numeric(const PopulationMatrix& p,
                                         const Eigen::Matrix4d& ideal = Eigen::Matrix4d::Identity()) {
    Eigen::JacobiSVD<Eigen::Matrix4d> svd(p.p);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (!(smin > 0.0) || smax / smin > 1e8)
        throw InversionError("recovery_numeric: population matrix is singular or ill-conditioned",
                             smin);
    RecoveryOperator out;
    out.alpha = p.alpha;
    out.source = RecoverySource::numeric_inverse;
    out.r = ideal * p.p.inverse();
    return out;
}

/// Denominator of the closed-form recovery entries; its smallest positive
/// root is exactly 1/3, where the population matrix itself turns singular.
inline double recovery_denominator(double alpha) {
    const double a = alpha;
    return 1.0 - 5.5 * a + 8.3125 * a * a - 1.5 * a * a * a - 2.8125 * a * a * a * a;
}

/// Entry values of the closed-form CNOT recovery matrix
///   [ C D B B ]
///   [ D C B B ]
///   [ B B E F ]
///   [ B B F E ]
struct RecoveryEntries {
    double b, c, d, e, f;
};

inline RecoveryEntries recovery_closed_form_entries(double alpha) {
    const double a = alpha;
    const double den = recovery_denominator(a);
    if (std::abs(den) < 1e-15)
        throw std::domain_error("recovery_closed_form: denominator vanishes");
    RecoveryEntries r;
    r.b = (-0.5 * a + 2.125 * a * a - 1.875 * a * a * a) / den;
    r.c = (1.0 - 3.5 * a + 2.8125 * a * a) / den;
    r.d = (-a + 2.0 * a * a - 0.9375 * a * a * a) / den;
    r.e = (1.0 - 4.75 * a + 5.5 * a * a - 0.75 * a * a * a) / den;
    r.f = (-0.5 * a + 2.5 * a * a - 3.0 * a * a * a) / den;
    return r;
}

/// Literal closed-form recovery operator. It is close
/// to but not identical with the numeric inverse of the closed-form
/// population matrix; the discrepancy report quantifies the gap.
inline RecoveryOperator recovery_closed_form(double alpha) {
    const RecoveryEntries e = recovery_closed_form_entries(alpha);
    RecoveryOperator out;
    out.alpha = alpha;
    out.source = RecoverySource::closed_form;
    out.r << e.c, e.d, e.b, e.b,
             e.d, e.c, e.b, e.b,
             e.b, e.b, e.e, e.f,
             e.b, e.b, e.f, e.e;
    return out;
}

namespace detail {

/// The 16 products sigma_i (x) sigma_j, flat index 4*i + j, sigma_0 = I.
inline const std::array<Matrix4cd, 16>& pauli_products() {
    static const std::array<Matrix4cd, 16> table = [] {
        std::array<Eigen::Matrix2cd, 4> s;
        s[0] << 1, 0, 0, 1;
        s[1] << 0, 1, 1, 0;
        s[2] << c64(0, 0), c64(0, -1), c64(0, 1), c64(0, 0);
        s[3] << 1, 0, 0, -1;
        std::array<Matrix4cd, 16> t;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                Matrix4cd k;
                for (int r = 0; r < 2; ++r)
                    for (int cc = 0; cc < 2; ++cc) k.block<2, 2>(2 * r, 2 * cc) = s[i](r, cc) * s[j];
                t[i * 4 + j] = k;
            }
        return t;
    }();
    return table;
}

} // namespace detail

/// Coefficients over the 16 Pauli products; normalization tr[E^dag E] = 4,
/// so mu_i = tr[E_i^dag R]/4 and sum_i mu_i E_i reconstructs R exactly.
struct DiracExpansion {
    std::array<double, 16> mu{};

    Eigen::Matrix4d reconstruct() const {
        Matrix4cd acc = Matrix4cd::Zero();
        const auto& basis = detail::pauli_products();
        for (int i = 0; i < 16; ++i) acc += mu[i] * basis[i];
        return acc.real();
    }
};

inline DiracExpansion dirac_expand(const RecoveryOperator& r) {
    DiracExpansion e;
    const auto& basis = detail::pauli_products();
    const Matrix4cd rc = r.r.cast<c64>();
    for (int i = 0; i < 16; ++i) {
        const c64 mu = (basis[i].adjoint() * rc).trace() / 4.0;
        if (std::abs(mu.imag()) > 1e-12)
            throw ValidationError("dirac_expand: expansion coefficient has imaginary part");
        e.mu[i] = mu.real();
    }
    return e;
}

/// c = sum |mu_i| >= 1, p_i = |mu_i|/c, signs in {-1, 0, +1}.
struct CostResult {
    double cost = 0.0;
    std::array<double, 16> quasiprobabilities{};
    std::array<int, 16> signs{};
};

inline CostResult cost_from_expansion(const DiracExpansion& e) {
    double c = 0.0;
    for (double m : e.mu) c += std::abs(m);
    if (c == 0.0) throw std::domain_error("cost_from_expansion: all-zero expansion");
    CostResult out;
    out.cost = c;
    for (int i = 0; i < 16; ++i) {
        out.quasiprobabilities[i] = std::abs(e.mu[i]) / c;
        out.signs[i] = (e.mu[i] > 0.0) - (e.mu[i] < 0.0);
    }
    return out;
}

/// Cost along the numeric route: expand the numeric inverse of the
/// closed-form population matrix. This is the canonical cost path.
inline double cost_numeric(double alpha) {
    return cost_from_expansion(dirac_expand(recovery_numeric(cnot_population_closed_form(alpha))))
        .cost;
}

/// Literal closed-form cost
///   |C+E|/2 + |C-E|/2 + 2|B| + |D| + |F-D|.
/// Its last two terms do not coincide with the l1 weight of the projection
/// coefficients (|D+F|/2 + |D-F|/2); both routes are kept and compared.
inline double cost_closed_form(double alpha) {
    const RecoveryEntries r = recovery_closed_form_entries(alpha);
    return 0.5 * std::abs(r.c + r.e) + 0.5 * std::abs(r.c - r.e) + 2.0 * std::abs(r.b) +
           std::abs(r.d) + std::abs(r.f - r.d);
}

} // namespace tclqem
