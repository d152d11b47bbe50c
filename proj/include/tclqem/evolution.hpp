#pragma once

// Noisy evolution superoperator V(t) built from the transition tensor and
// the kernel, its diagonal (population) restriction, and the closed-form
// gate population matrices.

#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "tclqem/kernel.hpp"
#include "tclqem/multiplet.hpp"

namespace tclqem {

enum class StateBasis { multiplet, computational };

struct DensityMatrix {
    Matrix4cd rho;
    StateBasis basis = StateBasis::multiplet;
};

inline double hermiticity_error(const Matrix4cd& rho) {
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

inline DensityMatrix make_density_matrix(const Matrix4cd& rho, StateBasis basis) {
    if (hermiticity_error(rho) > 1e-12)
        throw ValidationError("DensityMatrix: not Hermitian to 1e-12");
    if (std::abs(rho.trace().real() - 1.0) > 1e-12 || std::abs(rho.trace().imag()) > 1e-12)
        throw ValidationError("DensityMatrix: trace != 1 to 1e-12");
    return {rho, basis};
}

/// Smallest eigenvalue of a Hermitian 4x4. The first-order map is not
/// completely positive, so slightly negative values are possible; callers
/// report values below -1e-9 as warnings rather than errors.
inline double min_eigenvalue(const Matrix4cd& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix4cd> es(rho);
    return es.eigenvalues().minCoeff();
}

/// Dense 16x16 map on 4x4 density matrices, row index (a,b), column (c,d):
///   rho'(a,b) = sum_{c,d} V[(a,b),(c,d)] rho(c,d).
struct EvolutionSuperoperator {
    Matrix16cd v;
    double alpha = 0.0;   // Re k used at build time
    double im_k = 0.0;
    PauliAxes axes = PauliAxes::xyz;
};

/// V(a,b,c,d) = exp[-i t (E_a - E_b)] { delta_ac delta_bd
///              - [delta_bd sum_{a'} M(a,a',a',c) - M(a,c,d,b)] k
///              - [delta_ac sum_{a'} M(d,a',a',b) - M(a,c,d,b)] k* }.
/// The second bracket carries the left index of the pair sum on d; this is
/// what trace and Hermiticity preservation require.
inline EvolutionSuperoperator build_superoperator(const TransitionTensor& m,
                                                  const std::array<double, 4>& energies,
                                                  KernelValue k, double t) {
    const c64 kc(k.re, k.im);
    const c64 kcc = std::conj(kc);
    EvolutionSuperoperator out;
    out.alpha = k.re;
    out.im_k = k.im;
    out.axes = m.axes;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            const c64 phase = std::exp(c64(0.0, -t * (energies[a] - energies[b])));
            for (int c = 0; c < 4; ++c) {
                for (int d = 0; d < 4; ++d) {
                    c64 val = (a == c && b == d) ? c64(1.0, 0.0) : c64(0.0, 0.0);
                    const double cross = m(a, c, d, b);
                    if (b == d) val -= (m.pair_sum(a, c) - cross) * kc;
                    else val += cross * kc;
                    if (a == c) val -= (m.pair_sum(d, b) - cross) * kcc;
                    else val += cross * kcc;
                    out.v(a * 4 + b, c * 4 + d) = phase * val;
                }
            }
        }
    }
    return out;
}

inline DensityMatrix apply(const EvolutionSuperoperator& v, const DensityMatrix& rho) {
    if (rho.basis != StateBasis::multiplet)
        throw ValidationError("apply: superoperator acts on multiplet-basis density matrices");
    Matrix4cd out = Matrix4cd::Zero();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            c64 s(0.0, 0.0);
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) s += v.v(a * 4 + b, c * 4 + d) * rho.rho(c, d);
            out(a, b) = s;
        }
    return {out, StateBasis::multiplet};
}

/// Diagonal-to-diagonal restriction of V; column-stochastic for the gate
/// bases. Entries in [0,1] for alpha in [0, 1/2].
struct PopulationMatrix {
    Eigen::Matrix4d p;
    double alpha = 0.0;
};

inline PopulationMatrix population_matrix(const EvolutionSuperoperator& v) {
    PopulationMatrix out;
    out.alpha = v.alpha;
    for (int a = 0; a < 4; ++a)
        for (int c = 0; c < 4; ++c) {
            const c64 val = v.v(a * 4 + a, c * 4 + c);
            if (std::abs(val.imag()) > 1e-12)
                throw ValidationError("population_matrix: diagonal block has imaginary part");
            out.p(a, c) = val.real();
        }
    return out;
}

/// Closed-form CNOT population matrix; regression target for the
/// superoperator built from the transverse (xy) transition tensor.
inline PopulationMatrix cnot_population_closed_form(double alpha) {
    if (!(alpha >= 0.0)) throw std::domain_error("cnot_population_closed_form: alpha must be >= 0");
    PopulationMatrix out;
    out.alpha = alpha;
    const double a = alpha;
    out.p << 1 - 2 * a, a,         a / 2,         a / 2,
             a,         1 - 2 * a, a / 2,         a / 2,
             a / 2,     a / 2,     1 - 1.5 * a,   a / 2,
             a / 2,     a / 2,     a / 2,         1 - 1.5 * a;
    return out;
}

/// Population matrix of a gate basis at decoherence strength alpha,
/// reconstructed from the transition tensor (transverse axes by default:
/// the contraction matching the closed forms above).
inline PopulationMatrix gate_population_matrix(const MultipletBasis& basis, double alpha,
                                               PauliAxes axes = PauliAxes::xy) {
    const TransitionTensor m = transition_tensor(basis, axes);
    return population_matrix(build_superoperator(m, basis.energies, {alpha, 0.0}, 0.0));
}

/// Computational-outcome probabilities after evolving one multiplet basis
/// state: population transfer followed by the basis change. Probabilities
/// sum to 1 by column stochasticity.
inline Eigen::Vector4d evolve_populations(MultipletIndex initial, double alpha,
                                          const MultipletBasis& basis,
                                          PauliAxes axes = PauliAxes::xy) {
    if (!(alpha >= 0.0 && alpha <= 0.5))
        throw std::domain_error("evolve_populations: alpha must lie in [0, 1/2]");
    const PopulationMatrix pm = gate_population_matrix(basis, alpha, axes);
    const int col = static_cast<int>(initial);
    const Matrix4cd u = basis.state_matrix();
    Eigen::Vector4d probs = Eigen::Vector4d::Zero();
    for (int outcome = 0; outcome < 4; ++outcome)
        for (int a = 0; a < 4; ++a)
            probs[outcome] += std::norm(u(outcome, a)) * pm.p(a, col);
    return probs;
}

} // namespace tclqem
