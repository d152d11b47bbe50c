#pragma once

// Sine/cosine integrals and deterministic adaptive quadrature. These are the
// numerical ground truth for every closed form in kernel.hpp, so they aim for
// ~1e-12 absolute / 1e-10 relative accuracy over the whole argument range.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "tclqem/errors.hpp"

namespace tclqem {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

struct QuadratureConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 10000;
};

namespace detail {

// Power series, good to machine precision for |x| <= ~8; used for |x| <= 4.
//   Si(x) = sum_k (-1)^k x^(2k+1) / ((2k+1)(2k+1)!)
inline double si_series(double x) {
    double term = x;        // x^(2k+1)/(2k+1)!
    double sum = x;         // k = 0 contribution: term/(2k+1) with 2k+1 = 1
    const double x2 = x * x;
    for (int k = 1; k < 60; ++k) {
        const double n = 2.0 * k + 1.0;
        term *= -x2 / ((n - 1.0) * n);
        const double contrib = term / n;
        sum += contrib;
        if (std::abs(contrib) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

//   Cin(x) = sum_{k>=1} (-1)^(k+1) x^(2k) / ((2k)(2k)!),  Ci = gamma + ln x - Cin
inline double cin_series(double x) {
    const double x2 = x * x;
    double term = x2 / 2.0;   // x^(2k)/(2k)! at k = 1
    double sum = term / 2.0;  // contribution term/(2k)
    double sign = -1.0;
    for (int k = 2; k < 60; ++k) {
        const double n = 2.0 * k;
        term *= x2 / ((n - 1.0) * n);
        const double contrib = sign * term / n;
        sum += contrib;
        sign = -sign;
        if (std::abs(contrib) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

// Large-argument evaluation through the exponential integral of imaginary
// argument: E1(ix) = -Ci(x) + i*(Si(x) - pi/2) for x > 0. The continued
// fraction (modified Lentz) plays the role of the auxiliary-function
// expansion but converges to machine precision already at x = 4, where a
// raw asymptotic series cannot reach 1e-10.
inline std::pair<double, double> ci_si_shifted_large(double x) {
    using cd = std::complex<double>;
    const cd z(0.0, x);
    const double tiny = 1e-290;
    cd b = z + 1.0;
    cd c = cd(1.0 / tiny, 0.0);
    cd d = 1.0 / b;
    cd h = d;
    for (int i = 1; i <= 500; ++i) {
        const double a = -static_cast<double>(i) * static_cast<double>(i);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const cd del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 4e-17) {
            const cd e1 = h * std::exp(-z);
            return {-e1.real(), e1.imag()};
        }
    }
    throw ConvergenceError("continued fraction for Ci/Si did not converge", 0.0, 0.0);
}

} // namespace detail

/// Standard sine integral Si(x) = int_0^x sin(t)/t dt. Odd in x.
inline double si_standard(double x) {
    if (!std::isfinite(x)) throw std::domain_error("si_standard: non-finite argument");
    const double ax = std::abs(x);
    double r;
    if (ax <= 4.0) {
        r = detail::si_series(ax);
    } else {
        r = kPi / 2.0 + detail::ci_si_shifted_large(ax).second;
    }
    return x < 0.0 ? -r : r;
}

/// Shifted convention: si_shifted(x) = Si(x) - pi/2, which tends to 0 as
/// x -> +inf. Downstream kernel formulas state explicitly which convention
/// they consume; keeping both avoids silent factor errors.
inline double si_shifted(double x) {
    return si_standard(x) - kPi / 2.0;
}

/// Cosine integral Ci(x) = -int_x^inf cos(t)/t dt, x > 0 (log singularity at 0).
inline double ci(double x) {
    if (!std::isfinite(x)) throw std::domain_error("ci: non-finite argument");
    if (x <= 0.0) throw std::domain_error("ci: argument must be positive");
    if (x <= 4.0) return kEulerGamma + std::log(x) - detail::cin_series(x);
    return detail::ci_si_shifted_large(x).first;
}

namespace detail {

struct Segment {
    double a, b;
    double fa, fm, fb;
    double s;    // Simpson estimate over [a, b]
    double tol;
};

inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

} // namespace detail

/// Adaptive Simpson quadrature with interval bisection. Deterministic for a
/// fixed config. Exact for polynomials of degree <= 3 by construction.
/// Throws ConvergenceError (carrying the best estimate and an error bound)
/// when the subdivision budget is exhausted.
template <class F>
double integrate_adaptive(F&& f, double a, double b, QuadratureConfig cfg = {}) {
    if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0) || cfg.max_subdivisions < 1)
        throw std::invalid_argument("integrate_adaptive: bad QuadratureConfig");
    if (!std::isfinite(a) || !std::isfinite(b) || a > b)
        throw std::domain_error("integrate_adaptive: need finite a <= b");
    if (a == b) return 0.0;

    auto eval = [&](double t) {
        const double v = f(t);
        if (!std::isfinite(v)) throw std::domain_error("integrate_adaptive: integrand not finite");
        return v;
    };

    const double fa = eval(a);
    const double m0 = 0.5 * (a + b);
    const double fm = eval(m0);
    const double fb = eval(b);
    const double s0 = detail::simpson(a, b, fa, fm, fb);
    const double tol0 = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(s0));

    std::vector<detail::Segment> stack;
    stack.push_back({a, b, fa, fm, fb, s0, tol0});

    double acc = 0.0;
    int splits = 0;
    while (!stack.empty()) {
        const detail::Segment seg = stack.back();
        stack.pop_back();
        const double m = 0.5 * (seg.a + seg.b);
        const double lm = 0.5 * (seg.a + m);
        const double rm = 0.5 * (m + seg.b);
        const double flm = eval(lm);
        const double frm = eval(rm);
        const double sl = detail::simpson(seg.a, m, seg.fa, flm, seg.fm);
        const double sr = detail::simpson(m, seg.b, seg.fm, frm, seg.fb);
        const double defect = sl + sr - seg.s;
        // Machine-width intervals cannot be split further; accept them.
        const bool too_narrow = (m <= seg.a || m >= seg.b);
        if (std::abs(defect) <= 15.0 * seg.tol || too_narrow) {
            acc += sl + sr + defect / 15.0;
            continue;
        }
        if (++splits > cfg.max_subdivisions) {
            double best = acc + sl + sr + defect / 15.0;
            double bound = std::abs(defect);
            for (const auto& rest : stack) {
                best += rest.s;
                bound += 15.0 * rest.tol;
            }
            throw ConvergenceError("integrate_adaptive: subdivision budget exhausted", best, bound);
        }
        stack.push_back({m, seg.b, seg.fm, frm, seg.fb, sr, 0.5 * seg.tol});
        stack.push_back({seg.a, m, seg.fa, flm, seg.fm, sl, 0.5 * seg.tol});
    }
    return acc;
}

} // namespace tclqem
