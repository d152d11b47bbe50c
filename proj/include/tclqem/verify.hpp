#pragma once

// Cross-checks every closed form against its first-principles
// counterpart and reports quantitative deviations. Mismatches are data, not
// failures: the report exists precisely because the closed forms and the
// reconstructions do not all agree.

#include <string>
#include <utility>
#include <vector>

#include "tclqem/calibration.hpp"
#include "tclqem/qem.hpp"
#include "tclqem/sweep.hpp"

namespace tclqem {

struct ComparisonEntry {
    std::string id;
    std::string description;
    std::string status;  // "match" | "mismatch"
    double max_abs_deviation = 0.0;
    std::vector<std::pair<std::string, double>> details;
};

struct DiscrepancyReport {
    std::vector<ComparisonEntry> entries;

    const ComparisonEntry* find(const std::string& id) const {
        for (const auto& e : entries)
            if (e.id == id) return &e;
        return nullptr;
    }
};

namespace detail {

inline ComparisonEntry compare_kernel_variants() {
    ComparisonEntry e;
    e.id = "kernel_closed_form_variants";
    e.description =
        "kernel closed-form variant (shifted-Si convention, extra linear term) "
        "vs the iterated-integral kernel";
    NoiseParams p{2.548e-5, 1e-3, 100.0, 1.0};
    double max_re = 0.0, max_im = 0.0;
    for (int i = 0; i <= 60; ++i) {
        const double x = 3.0 * i / 60.0;
        const KernelValue a = kernel_k(x, p, KernelVariant::iterated_integral);
        const KernelValue b = kernel_k(x, p, KernelVariant::shifted_si_closed_form);
        max_re = std::max(max_re, std::abs(a.re - b.re));
        max_im = std::max(max_im, std::abs(a.im - b.im));
    }
    const KernelValue at0 = kernel_k(0.0, p, KernelVariant::shifted_si_closed_form);
    e.details = {{"max_re_deviation", max_re},
                 {"max_im_deviation", max_im},
                 {"variant_im_at_x0", at0.im},
                 {"bath_prefactor_ratio_closed_over_high_t", kPi * kPi / 4.0}};
    e.max_abs_deviation = std::max(max_re, max_im);
    e.status = e.max_abs_deviation <= 1e-12 ? "match" : "mismatch";
    return e;
}

inline ComparisonEntry compare_quadratic_kernel() {
    ComparisonEntry e;
    e.id = "kernel_quadratic_approximation";
    e.description = "quadratic small-time approximation vs the iterated-integral kernel";
    NoiseParams p{2.548e-5, 0.0, 100.0, 1.0};
    double max_dev = 0.0;
    for (int i = 0; i <= 60; ++i) {
        const double x = 3.0 * i / 60.0;
        max_dev = std::max(max_dev,
                           std::abs(kernel_k_quadratic(x, p) - kernel_k(x, p).re));
    }
    e.max_abs_deviation = max_dev;
    e.details = {{"quadratic_at_x1", kernel_k_quadratic(1.0, p)},
                 {"kernel_at_x1", kernel_k(1.0, p).re}};
    e.status = max_dev <= 1e-12 ? "match" : "mismatch";
    return e;
}

inline ComparisonEntry compare_cnot_population() {
    ComparisonEntry e;
    e.id = "cnot_population_closed_form";
    e.description =
        "closed-form CNOT population matrix vs superoperator reconstruction "
        "(transverse axes; isotropic deviation reported separately)";
    const MultipletBasis basis = cnot_basis();
    double max_xy = 0.0, max_xyz = 0.0;
    for (double alpha : {0.0, 0.005, 0.01, 0.05, 0.1}) {
        const Eigen::Matrix4d closed = cnot_population_closed_form(alpha).p;
        max_xy = std::max(max_xy, (gate_population_matrix(basis, alpha, PauliAxes::xy).p - closed)
                                      .cwiseAbs()
                                      .maxCoeff());
        max_xyz = std::max(max_xyz, (gate_population_matrix(basis, alpha, PauliAxes::xyz).p - closed)
                                        .cwiseAbs()
                                        .maxCoeff());
    }
    e.max_abs_deviation = max_xy;
    e.details = {{"max_deviation_transverse", max_xy}, {"max_deviation_isotropic", max_xyz}};
    e.status = max_xy <= 1e-12 ? "match" : "mismatch";
    return e;
}

inline ComparisonEntry compare_recovery() {
    ComparisonEntry e;
    e.id = "recovery_closed_form";
    e.description = "closed-form recovery operator vs numeric inverse of the population matrix";
    double max_dev = 0.0;
    for (double alpha : {0.01, 0.05, 0.1}) {
        const Eigen::Matrix4d num = recovery_numeric(cnot_population_closed_form(alpha)).r;
        const Eigen::Matrix4d cf = recovery_closed_form(alpha).r;
        const double dev = (num - cf).cwiseAbs().maxCoeff();
        e.details.emplace_back("max_entry_deviation_alpha_" + detail::fmt12(alpha), dev);
        const double resid =
            (cf * cnot_population_closed_form(alpha).p - Eigen::Matrix4d::Identity()).norm();
        e.details.emplace_back("closed_form_residual_fro_alpha_" + detail::fmt12(alpha), resid);
        max_dev = std::max(max_dev, dev);
    }
    e.max_abs_deviation = max_dev;
    e.status = max_dev <= 1e-12 ? "match" : "mismatch";
    return e;
}

inline ComparisonEntry compare_cost() {
    ComparisonEntry e;
    e.id = "cost_closed_form";
    e.description = "closed-form cost vs l1 weight of the numeric recovery expansion";
    double max_dev = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double alpha = 0.001 * i;
        max_dev = std::max(max_dev, std::abs(cost_closed_form(alpha) - cost_numeric(alpha)));
    }
    e.max_abs_deviation = max_dev;
    e.details = {{"cost_numeric_alpha_0.01", cost_numeric(0.01)},
                 {"cost_closed_form_alpha_0.01", cost_closed_form(0.01)}};
    e.status = max_dev <= 1e-12 ? "match" : "mismatch";
    return e;
}

/// One entry per conversion rule: the rule constant, and the deviation of
/// the rule's prediction from the reference (alpha, coupling) pairings.
inline std::vector<ComparisonEntry> compare_conversions() {
    struct Pairing {
        ConversionRule rule;
        double alpha, quoted_coupling;
    };
    // identity table pairing (6e-3 -> 2.548e-3) and the CNOT tables pairing
    // (8e-3 -> 3.5e-3); the quadratic-prefactor rule has no reference pairing
    // of its own, so it is compared against the identity table numbers.
    const std::vector<Pairing> pairings = {
        {ConversionRule::eq32_prefactor, 6e-3, 2.548e-3},
        {ConversionRule::table1_implied, 6e-3, 2.548e-3},
        {ConversionRule::si_tables_implied, 8e-3, 3.5e-3},
    };
    std::vector<ComparisonEntry> out;
    for (const auto& pr : pairings) {
        ComparisonEntry e;
        e.id = std::string("conversion_") + to_string(pr.rule);
        e.description = "coupling conversion rule vs reference pairing";
        const double predicted = coupling_from_alpha(pr.alpha, pr.rule);
        const double dev = std::abs(predicted - pr.quoted_coupling);
        e.max_abs_deviation = dev;
        e.details = {{"rule_constant_coupling_per_alpha", coupling_from_alpha(1.0, pr.rule)},
                     {"alpha", pr.alpha},
                     {"predicted_coupling", predicted},
                     {"quoted_coupling", pr.quoted_coupling}};
        e.status = (dev <= 1e-2 * pr.quoted_coupling) ? "match" : "mismatch";
        out.push_back(e);
    }
    return out;
}

} // namespace detail

inline DiscrepancyReport build_discrepancy_report() {
    DiscrepancyReport rep;
    rep.entries.push_back(detail::compare_kernel_variants());
    rep.entries.push_back(detail::compare_quadratic_kernel());
    rep.entries.push_back(detail::compare_cnot_population());
    rep.entries.push_back(detail::compare_recovery());
    rep.entries.push_back(detail::compare_cost());
    for (auto& e : detail::compare_conversions()) rep.entries.push_back(std::move(e));
    return rep;
}

inline nlohmann::json to_json(const DiscrepancyReport& rep) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : rep.entries) {
        nlohmann::json details = nlohmann::json::object();
        for (const auto& [k, v] : e.details) details[k] = v;
        entries.push_back({{"id", e.id},
                           {"description", e.description},
                           {"status", e.status},
                           {"max_abs_deviation", e.max_abs_deviation},
                           {"details", details}});
    }
    return {{"entries", entries}};
}

} // namespace tclqem
