#pragma once

// Decoherence kernel k(t) of the two-qubit bath model and the underlying
// bath correlation functions. All internals are dimensionless: absolute
// times convert to x = t/tau_s at the API boundary, and correlation values
// are reported multiplied by tau_s.

#include <cmath>
#include <stdexcept>

#include "tclqem/specfun.hpp"

namespace tclqem {

/// Bath/coupling parameters that fully determine k(t).
///   gamma0         : dimensionless decoherence scale
///   delta0         : dimensionless coherent-shift scale
///   omega_c_tau_s  : dimensionless high-frequency cutoff omega_c * tau_s
///   tau_s          : switching time in seconds (only used to form x = t/tau_s)
struct NoiseParams {
    double gamma0 = 0.0;
    double delta0 = 0.0;
    double omega_c_tau_s = 100.0;
    double tau_s = 1.0;
};

inline void validate(const NoiseParams& p) {
    if (!(p.gamma0 >= 0.0) || !(p.delta0 >= 0.0))
        throw ValidationError("NoiseParams: gamma0 and delta0 must be >= 0");
    if (!(p.omega_c_tau_s > 0.0) || !(p.tau_s > 0.0))
        throw ValidationError("NoiseParams: omega_c_tau_s and tau_s must be > 0");
}

/// k(x) = re + i*im. re drives population transfer, im drives coherent shifts.
struct KernelValue {
    double re = 0.0;
    double im = 0.0;
};

/// Dimensionless bath correlation at x = t/tau_s: gamma = tau_s*Gamma(t),
/// delta = tau_s*Delta(t).
struct BathCorrelation {
    double gamma = 0.0;
    double delta = 0.0;
};

namespace detail {

// sin(y)/y with series fallback near zero (K3: avoids cancellation).
inline double sinc_raw(double y) {
    if (std::abs(y) < 1e-4) {
        const double y2 = y * y;
        return 1.0 - y2 / 6.0 + y2 * y2 / 120.0;
    }
    return std::sin(y) / y;
}

// (cos(y) - 1) without cancellation.
inline double cos_minus_one(double y) {
    const double s = std::sin(0.5 * y);
    return -2.0 * s * s;
}

} // namespace detail

/// The two normalizations of the dissipative part that circulate for this
/// model. They differ by a constant factor pi^2/4:
///   closed_form      : tau_s*Gamma = (pi/2)  * gamma0 * sin(w'c x)/x
///   high_temperature : tau_s*Gamma = (2/pi)  * gamma0 * sin(w'c x)/x,
/// the latter being the high-T limit of the ohmic spectral-density integral.
/// kernel_k below is exactly the iterated time integral of the
/// high-temperature form; the discrepancy report quantifies the mismatch.
enum class BathNorm { closed_form, high_temperature };

inline BathCorrelation bath_correlation(double t_over_tau_s, const NoiseParams& p,
                                        BathNorm norm = BathNorm::closed_form) {
    validate(p);
    const double x = t_over_tau_s;
    if (!(x > 0.0)) throw std::domain_error("bath_correlation: requires t/tau_s > 0");
    const double wc = p.omega_c_tau_s;
    const double y = wc * x;
    const double pref = (norm == BathNorm::closed_form) ? (kPi / 2.0) : (2.0 / kPi);
    BathCorrelation r;
    r.gamma = pref * p.gamma0 * wc * detail::sinc_raw(y);
    // tau_s*Delta = -(delta0/x) [sinc(y) - cos(y)], series-protected for small y
    if (std::abs(y) < 1e-4) {
        const double y2 = y * y;
        r.delta = -p.delta0 * wc * y * (1.0 / 3.0 - y2 / 30.0);
    } else {
        r.delta = -(p.delta0 / x) * (detail::sinc_raw(y) - std::cos(y));
    }
    return r;
}

/// Limit x -> 0+ of the dimensionless correlation (removable singularity).
inline BathCorrelation bath_correlation_limit0(const NoiseParams& p,
                                               BathNorm norm = BathNorm::closed_form) {
    validate(p);
    const double pref = (norm == BathNorm::closed_form) ? (kPi / 2.0) : (2.0 / kPi);
    return {pref * p.gamma0 * p.omega_c_tau_s, 0.0};
}

/// I2(x) = int_0^x sin(w'c u)/u du and I1(x) = int_0^x Si(w'c u) du, in the
/// standard Si convention. These are the building blocks of the kernel; the
/// I1 closed form follows from integration by parts.
inline double kernel_i2(double x, double omega_c_tau_s) {
    return si_standard(omega_c_tau_s * x);
}

inline double kernel_i1(double x, double omega_c_tau_s) {
    const double y = omega_c_tau_s * x;
    return x * si_standard(y) + detail::cos_minus_one(y) / omega_c_tau_s;
}

/// Two evaluation paths for k(x):
///   iterated_integral      : k as the double time integral of the bath
///                            correlation (self-consistent; the default)
///   shifted_si_closed_form : the closed-form variant written in the shifted
///                            Si convention, which carries an extra
///                            (pi/2)(w'c - 1) x term in I1 and a constant
///                            offset in I2. Kept for comparison only.
enum class KernelVariant { iterated_integral, shifted_si_closed_form };

inline KernelValue kernel_k(double t_over_tau_s, const NoiseParams& p,
                            KernelVariant variant = KernelVariant::iterated_integral) {
    validate(p);
    const double x = t_over_tau_s;
    if (!(x >= 0.0)) throw std::domain_error("kernel_k: requires t/tau_s >= 0");
    if (x == 0.0 && variant == KernelVariant::iterated_integral) return {0.0, 0.0};
    const double wc = p.omega_c_tau_s;
    double i1 = kernel_i1(x, wc);
    double i2 = kernel_i2(x, wc);
    if (variant == KernelVariant::shifted_si_closed_form) {
        i1 += (kPi / 2.0) * (wc - 1.0) * x;
        i2 += (kPi / 2.0) * (wc - 1.0);
    }
    KernelValue k;
    k.re = (2.0 / kPi) * p.gamma0 * i1;
    k.im = p.delta0 * (x - i2 / wc);
    return k;
}

/// Quadratic small-time approximation of Re k:
///   (2/pi) * gamma0 * w'c * (x + x^2/2)
inline double kernel_k_quadratic(double t_over_tau_s, const NoiseParams& p) {
    validate(p);
    const double x = t_over_tau_s;
    if (!(x >= 0.0)) throw std::domain_error("kernel_k_quadratic: requires t/tau_s >= 0");
    return (2.0 / kPi) * p.gamma0 * p.omega_c_tau_s * (x + 0.5 * x * x);
}

/// Gaussian form of the leading population: exp(e) * exp(-e (x+1)^2) with
/// e = (2/pi) gamma0 w'c, folded into one exponential so x = 0 gives exactly
/// 1. Identical to exp(-2 * kernel_k_quadratic(x)).
inline double gaussian_rho11(double t_over_tau_s, const NoiseParams& p) {
    validate(p);
    const double x = t_over_tau_s;
    if (!(x >= 0.0)) throw std::domain_error("gaussian_rho11: requires t/tau_s >= 0");
    const double e = (2.0 / kPi) * p.gamma0 * p.omega_c_tau_s;
    return std::exp(-e * x * (x + 2.0));
}

} // namespace tclqem
