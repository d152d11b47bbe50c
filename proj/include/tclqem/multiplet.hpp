#pragma once

// Two-qubit state algebra: gate-adapted multiplet bases, the rank-4
// transition tensor of spin matrix elements, and the operator-basis overlap
// between multiplet and computational representations.
//
// Computational basis order is fixed as (|00>, |01>, |10>, |11>) everywhere.

#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "tclqem/errors.hpp"

namespace tclqem {

using c64 = std::complex<double>;
using Matrix4cd = Eigen::Matrix4cd;
using Vector4cd = Eigen::Vector4cd;
using Matrix16cd = Eigen::Matrix<c64, 16, 16>;

enum class MultipletIndex { m1 = 0, m2 = 1, m3 = 2, m4 = 3 };

struct TwoQubitState {
    Vector4cd amplitudes;   // over (|00>, |01>, |10>, |11>)

    double norm_error() const {
        double s = 0.0;
        for (int i = 0; i < 4; ++i) s += std::norm(amplitudes[i]);
        return std::abs(s - 1.0);
    }
};

/// Four orthonormal two-qubit states plus per-state energies (hbar = 1).
/// Energies default to zero; diagonal populations never depend on them.
struct MultipletBasis {
    std::array<TwoQubitState, 4> states;
    std::array<double, 4> energies{0.0, 0.0, 0.0, 0.0};

    /// 4x4 matrix whose columns are the basis states in computational
    /// coordinates; unitary iff the basis is orthonormal.
    Matrix4cd state_matrix() const {
        Matrix4cd u;
        for (int a = 0; a < 4; ++a)
            for (int i = 0; i < 4; ++i) u(i, a) = states[a].amplitudes[i];
        return u;
    }

    double orthonormality_error() const {
        const Matrix4cd u = state_matrix();
        return (u.adjoint() * u - Matrix4cd::Identity()).cwiseAbs().maxCoeff();
    }
};

inline void validate(const MultipletBasis& basis) {
    if (basis.orthonormality_error() > 1e-12)
        throw ValidationError("MultipletBasis: states are not orthonormal to 1e-12");
}

/// Basis adapted to the identity gate:
///   {|00>, (|01>+|10>)/sqrt2, |11>, (|01>-|10>)/sqrt2}
inline MultipletBasis identity_basis() {
    const double s = 1.0 / std::sqrt(2.0);
    MultipletBasis b;
    b.states[0].amplitudes << 1, 0, 0, 0;
    b.states[1].amplitudes << 0, s, s, 0;
    b.states[2].amplitudes << 0, 0, 0, 1;
    b.states[3].amplitudes << 0, s, -s, 0;
    return b;
}

/// Basis adapted to the CNOT gate:
///   {|00>, |01>, (|10>+|11>)/sqrt2, (|10>-|11>)/sqrt2}
inline MultipletBasis cnot_basis() {
    const double s = 1.0 / std::sqrt(2.0);
    MultipletBasis b;
    b.states[0].amplitudes << 1, 0, 0, 0;
    b.states[1].amplitudes << 0, 1, 0, 0;
    b.states[2].amplitudes << 0, 0, s, s;
    b.states[3].amplitudes << 0, 0, s, -s;
    return b;
}

/// Which Pauli axes enter the coupling sum of the transition tensor.
///   xyz : all three axes per qubit (the stated interaction model);
///         completeness sum_{a'} M(a,a',a',a) = 3/2
///   xy  : transverse (bit-flip) restriction; this is the contraction that
///         reproduces the closed-form gate population matrices exactly, so the
///         gate channels of record use it. completeness sum = 1.
enum class PauliAxes { xyz, xy };

/// Rank-4 tensor M(a,b,c,d) = sum_{i,j} <a|S_i^j|b><c|S_i^j|d> with
/// S = sigma/2 on each qubit. Real for real-amplitude bases.
struct TransitionTensor {
    std::array<double, 256> m{};
    PauliAxes axes = PauliAxes::xyz;

    double operator()(int a, int b, int c, int d) const { return m[((a * 4 + b) * 4 + c) * 4 + d]; }
    double& at(int a, int b, int c, int d) { return m[((a * 4 + b) * 4 + c) * 4 + d]; }

    /// sum_{a'} M(a,a',a',c)
    double pair_sum(int a, int c) const {
        double s = 0.0;
        for (int ap = 0; ap < 4; ++ap) s += (*this)(a, ap, ap, c);
        return s;
    }
};

namespace detail {

inline std::array<Matrix4cd, 6> spin_operators() {
    Eigen::Matrix2cd X, Y, Z, I;
    X << 0, 1, 1, 0;
    Y << c64(0, 0), c64(0, -1), c64(0, 1), c64(0, 0);
    Z << 1, 0, 0, -1;
    I.setIdentity();
    auto kron = [](const Eigen::Matrix2cd& A, const Eigen::Matrix2cd& B) {
        Matrix4cd K;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) K.block<2, 2>(2 * i, 2 * j) = A(i, j) * B;
        return K;
    };
    // Order: X1 Y1 Z1 X2 Y2 Z2, each with the spin-1/2 factor.
    return {0.5 * kron(X, I), 0.5 * kron(Y, I), 0.5 * kron(Z, I),
            0.5 * kron(I, X), 0.5 * kron(I, Y), 0.5 * kron(I, Z)};
}

} // namespace detail

inline TransitionTensor transition_tensor(const MultipletBasis& basis,
                                          PauliAxes axes = PauliAxes::xyz) {
    validate(basis);
    const Matrix4cd u = basis.state_matrix();
    const auto spins = detail::spin_operators();
    TransitionTensor t;
    t.axes = axes;
    std::array<c64, 256> acc{};
    for (int op = 0; op < 6; ++op) {
        if (axes == PauliAxes::xy && (op % 3) == 2) continue;  // skip Z1, Z2
        const Matrix4cd el = u.adjoint() * spins[op] * u;      // el(a,b) = <a|S|b>
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c)
                    for (int d = 0; d < 4; ++d)
                        acc[((a * 4 + b) * 4 + c) * 4 + d] += el(a, b) * el(c, d);
    }
    double max_imag = 0.0;
    for (int i = 0; i < 256; ++i) {
        max_imag = std::max(max_imag, std::abs(acc[i].imag()));
        t.m[i] = acc[i].real();
    }
    if (max_imag > 1e-12)
        throw ValidationError("transition_tensor: tensor has non-real entries for this basis");
    return t;
}

/// Operator-basis overlap C[(alpha,beta),(a,b)] = tr(e_c(alpha,beta)^dag e_m(a,b))
/// = U(alpha,a) * conj(U(beta,b)). Applying it to multiplet components of a
/// density matrix yields computational components: rho_c = U rho_m U^dag.
struct BasisChange {
    Matrix16cd c;
    Matrix4cd u;

    Matrix4cd to_computational(const Matrix4cd& rho_multiplet) const {
        return u * rho_multiplet * u.adjoint();
    }
    Matrix4cd to_multiplet(const Matrix4cd& rho_computational) const {
        return u.adjoint() * rho_computational * u;
    }
};

inline BasisChange basis_change(const MultipletBasis& basis) {
    validate(basis);
    BasisChange bc;
    bc.u = basis.state_matrix();
    for (int al = 0; al < 4; ++al)
        for (int be = 0; be < 4; ++be)
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    bc.c(al * 4 + be, a * 4 + b) = bc.u(al, a) * std::conj(bc.u(be, b));
    return bc;
}

} // namespace tclqem
