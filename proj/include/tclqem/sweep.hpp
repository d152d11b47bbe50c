#pragma once

// Parameter sweeps behind the CLI: kernel curves, Gaussian population decay
// and cost curves over normalized time, serialized as CSV or JSON. Outputs
// are deterministic: fixed grids, fixed formatting (12 significant digits,
// '.' decimal separator, '\n' line endings).

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tclqem/kernel.hpp"
#include "tclqem/qem.hpp"

namespace tclqem {

struct SweepSpec {
    double x_start = 0.0;
    double x_end = 3.0;
    int steps = 121;
    std::vector<NoiseParams> params;  // one curve per entry
};

inline void validate(const SweepSpec& spec) {
    if (!(spec.x_start >= 0.0) || !(spec.x_end > spec.x_start) || spec.steps < 2)
        throw ValidationError("SweepSpec: need x_start >= 0, x_end > x_start, steps >= 2");
    if (spec.params.empty()) throw ValidationError("SweepSpec: at least one params entry");
    for (const auto& p : spec.params) validate(p);
}

/// Default curve family: 7 log-spaced couplings from 7.0e-4 to 7.0e-3
/// at omega_c_tau_s = 100 and delta0 = 0.
inline std::vector<NoiseParams> default_sweep_params(double omega_c_tau_s = 100.0,
                                                     double delta0 = 0.0) {
    std::vector<NoiseParams> out;
    for (int i = 0; i < 7; ++i) {
        const double coupling = 7e-4 * std::pow(10.0, i / 6.0);
        out.push_back({coupling / omega_c_tau_s, delta0, omega_c_tau_s, 1.0});
    }
    return out;
}

inline double sweep_x(const SweepSpec& spec, int i) {
    return spec.x_start + (spec.x_end - spec.x_start) * static_cast<double>(i) /
                              static_cast<double>(spec.steps - 1);
}

struct KernelRow {
    double coupling, x, re_k, im_k, re_k_quadratic;
};

inline std::vector<KernelRow> kernel_sweep(const SweepSpec& spec) {
    validate(spec);
    std::vector<KernelRow> rows;
    rows.reserve(static_cast<std::size_t>(spec.steps) * spec.params.size());
    for (const auto& p : spec.params) {
        const double coupling = p.gamma0 * p.omega_c_tau_s;
        for (int i = 0; i < spec.steps; ++i) {
            const double x = sweep_x(spec, i);
            const KernelValue k = kernel_k(x, p);
            rows.push_back({coupling, x, k.re, k.im, kernel_k_quadratic(x, p)});
        }
    }
    return rows;
}

struct GaussianRow {
    double coupling, x, rho11_gaussian, rho11_linear;
};

inline std::vector<GaussianRow> gaussian_sweep(const SweepSpec& spec) {
    validate(spec);
    std::vector<GaussianRow> rows;
    for (const auto& p : spec.params) {
        const double coupling = p.gamma0 * p.omega_c_tau_s;
        for (int i = 0; i < spec.steps; ++i) {
            const double x = sweep_x(spec, i);
            rows.push_back({coupling, x, gaussian_rho11(x, p),
                            1.0 - 2.0 * kernel_k_quadratic(x, p)});
        }
    }
    return rows;
}

struct CostRow {
    double coupling, x, alpha;
    double cost_numeric = std::numeric_limits<double>::quiet_NaN();
    double cost_closed_form = std::numeric_limits<double>::quiet_NaN();
    bool singular = false;  // alpha at/near the recovery singularity
};

inline std::vector<CostRow> cost_sweep(const SweepSpec& spec) {
    validate(spec);
    std::vector<CostRow> rows;
    for (const auto& p : spec.params) {
        const double coupling = p.gamma0 * p.omega_c_tau_s;
        for (int i = 0; i < spec.steps; ++i) {
            const double x = sweep_x(spec, i);
            CostRow row{coupling, x, kernel_k(x, p).re};
            try {
                row.cost_numeric = cost_numeric(row.alpha);
                row.cost_closed_form = cost_closed_form(row.alpha);
            } catch (const InversionError&) {
                row.singular = true;  // NaN sentinel stays in the cost columns
            } catch (const std::domain_error&) {
                row.singular = true;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

namespace detail {

inline std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace detail

inline std::string to_csv(const std::vector<KernelRow>& rows) {
    std::string out = "gamma0_omega_c_tau_s,x,re_k,im_k,re_k_quadratic\n";
    for (const auto& r : rows)
        out += detail::fmt12(r.coupling) + "," + detail::fmt12(r.x) + "," + detail::fmt12(r.re_k) +
               "," + detail::fmt12(r.im_k) + "," + detail::fmt12(r.re_k_quadratic) + "\n";
    return out;
}

inline std::string to_csv(const std::vector<GaussianRow>& rows) {
    std::string out = "gamma0_omega_c_tau_s,x,rho11_gaussian,rho11_linear\n";
    for (const auto& r : rows)
        out += detail::fmt12(r.coupling) + "," + detail::fmt12(r.x) + "," +
               detail::fmt12(r.rho11_gaussian) + "," + detail::fmt12(r.rho11_linear) + "\n";
    return out;
}

inline std::string to_csv(const std::vector<CostRow>& rows) {
    std::string out = "gamma0_omega_c_tau_s,x,alpha,cost_numeric,cost_paper_eq39\n";
    for (const auto& r : rows)
        out += detail::fmt12(r.coupling) + "," + detail::fmt12(r.x) + "," + detail::fmt12(r.alpha) +
               "," + (r.singular ? "nan" : detail::fmt12(r.cost_numeric)) + "," +
               (r.singular ? "nan" : detail::fmt12(r.cost_closed_form)) + "\n";
    return out;
}

inline nlohmann::json to_json(const std::vector<KernelRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows)
        arr.push_back({{"gamma0_omega_c_tau_s", r.coupling},
                       {"x", r.x},
                       {"re_k", r.re_k},
                       {"im_k", r.im_k},
                       {"re_k_quadratic", r.re_k_quadratic}});
    return arr;
}

inline nlohmann::json to_json(const std::vector<GaussianRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows)
        arr.push_back({{"gamma0_omega_c_tau_s", r.coupling},
                       {"x", r.x},
                       {"rho11_gaussian", r.rho11_gaussian},
                       {"rho11_linear", r.rho11_linear}});
    return arr;
}

inline nlohmann::json to_json(const std::vector<CostRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json o = {{"gamma0_omega_c_tau_s", r.coupling}, {"x", r.x}, {"alpha", r.alpha}};
        if (r.singular) {
            o["cost_numeric"] = nullptr;
            o["cost_paper_eq39"] = nullptr;
            o["singular"] = true;
        } else {
            o["cost_numeric"] = r.cost_numeric;
            o["cost_paper_eq39"] = r.cost_closed_form;
        }
        arr.push_back(o);
    }
    return arr;
}

} // namespace tclqem
