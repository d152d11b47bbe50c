// Command-line front-end: parameter sweeps, single-gate evolution, cost
// curves, counts calibration and the closed-form discrepancy report.
// Emits CSV/JSON for external plotting.
//
// Exit codes: 0 success, 1 data error, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tclqem/calibration.hpp"
#include "tclqem/sweep.hpp"
#include "tclqem/verify.hpp"

namespace {

using tclqem::Gate;
using tclqem::MultipletIndex;
using tclqem::NoiseParams;
using tclqem::SweepSpec;

struct CommonOpts {
    double x_start = 0.0;
    double x_end = 3.0;
    int steps = 121;
    std::vector<double> couplings;  // gamma0 * omega_c_tau_s per curve
    double omega_c_tau_s = 100.0;
    double delta0 = 0.0;
    std::string out;
    std::string format = "csv";
};

// TCLQEM_CONFIG points to a key=value file; flags take precedence over it,
// and it takes precedence over built-in defaults.
std::map<std::string, std::string> load_config() {
    std::map<std::string, std::string> cfg;
    const char* path = std::getenv("TCLQEM_CONFIG");
    if (!path || !*path) return cfg;
    std::ifstream in(path);
    if (!in) throw tclqem::ParseError("cannot open config file", path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw tclqem::ParseError("expected key=value",
                                     std::string(path) + ":" + std::to_string(lineno));
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        cfg[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return cfg;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

// Apply config values for options the user did not pass on the command line.
void apply_config(const CLI::App& cmd, const std::map<std::string, std::string>& cfg,
                  CommonOpts& o) {
    auto unset = [&](const std::string& flag) {
        const CLI::Option* opt = cmd.get_option_no_throw(flag);
        return opt != nullptr && opt->count() == 0;
    };
    auto get = [&](const char* key) -> std::optional<std::string> {
        auto it = cfg.find(key);
        if (it == cfg.end()) return std::nullopt;
        return it->second;
    };
    if (auto v = get("x-start"); v && unset("--x-start")) o.x_start = std::stod(*v);
    if (auto v = get("x-end"); v && unset("--x-end")) o.x_end = std::stod(*v);
    if (auto v = get("steps"); v && unset("--steps")) o.steps = std::stoi(*v);
    if (auto v = get("gamma0-omega-tau"); v && unset("--gamma0-omega-tau"))
        o.couplings = parse_double_list(*v);
    if (auto v = get("omega-c-tau-s"); v && unset("--omega-c-tau-s"))
        o.omega_c_tau_s = std::stod(*v);
    if (auto v = get("delta0"); v && unset("--delta0")) o.delta0 = std::stod(*v);
    if (auto v = get("out"); v && unset("--out")) o.out = *v;
    if (auto v = get("format"); v && unset("--format")) o.format = *v;
}

SweepSpec make_spec(const CommonOpts& o) {
    SweepSpec spec;
    spec.x_start = o.x_start;
    spec.x_end = o.x_end;
    spec.steps = o.steps;
    if (o.couplings.empty()) {
        spec.params = tclqem::default_sweep_params(o.omega_c_tau_s, o.delta0);
    } else {
        for (double c : o.couplings)
            spec.params.push_back({c / o.omega_c_tau_s, o.delta0, o.omega_c_tau_s, 1.0});
    }
    return spec;
}

int emit(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open output file '" << out << "'\n";
        return 1;
    }
    f << text;
    return 0;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_format = true) {
    cmd->add_option("--x-start", o.x_start, "start of the t/tau_s range");
    cmd->add_option("--x-end", o.x_end, "end of the t/tau_s range");
    cmd->add_option("--steps", o.steps, "number of grid points (>= 2)");
    cmd->add_option("--gamma0-omega-tau", o.couplings,
                    "gamma0*omega_c*tau_s, one curve per value (repeatable)");
    cmd->add_option("--omega-c-tau-s", o.omega_c_tau_s, "dimensionless cutoff omega_c*tau_s");
    cmd->add_option("--delta0", o.delta0, "coherent-shift scale delta0");
    cmd->add_option("--out", o.out, "output file (stdout when absent)");
    if (with_format)
        cmd->add_option("--format", o.format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
}

Gate parse_gate_arg(const std::string& s) {
    if (s == "identity") return Gate::identity;
    if (s == "cnot") return Gate::cnot;
    throw CLI::ValidationError("--gate", "must be 'identity' or 'cnot'");
}

MultipletIndex parse_state_arg(const std::string& s) {
    if (s == "m1") return MultipletIndex::m1;
    if (s == "m2") return MultipletIndex::m2;
    if (s == "m3") return MultipletIndex::m3;
    if (s == "m4") return MultipletIndex::m4;
    throw CLI::ValidationError("--initial-state", "must be one of m1..m4");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-Markovian two-qubit noise model: kernel sweeps, gate evolution, "
                 "QEM cost curves and counts calibration"};
    app.require_subcommand(1);

    CommonOpts kern_o, gauss_o, cost_o;
    auto* kern = app.add_subcommand("kernel-sweep", "decoherence kernel Re/Im k over t/tau_s");
    add_common(kern, kern_o);
    auto* gauss = app.add_subcommand("gaussian-sweep", "leading population decay over t/tau_s");
    add_common(gauss, gauss_o);
    auto* cost = app.add_subcommand("cost-sweep", "QEM cost function over t/tau_s");
    add_common(cost, cost_o);

    std::string ev_gate = "identity", ev_state = "m1", ev_out;
    double ev_alpha = -1.0, ev_x = -1.0;
    CommonOpts ev_o;
    auto* evolve = app.add_subcommand("evolve", "computational outcome probabilities for one gate");
    evolve->add_option("--gate", ev_gate, "identity | cnot");
    evolve->add_option("--initial-state", ev_state, "m1 | m2 | m3 | m4");
    evolve->add_option("--alpha", ev_alpha, "decoherence strength Re k (overrides --x)");
    evolve->add_option("--x", ev_x, "t/tau_s at which to evaluate the kernel");
    evolve->add_option("--gamma0-omega-tau", ev_o.couplings, "gamma0*omega_c*tau_s for --x mode");
    evolve->add_option("--omega-c-tau-s", ev_o.omega_c_tau_s, "dimensionless cutoff");
    evolve->add_option("--delta0", ev_o.delta0, "coherent-shift scale");
    evolve->add_option("--out", ev_out, "output file (stdout when absent)");

    std::string cal_counts, cal_out;
    auto* cal = app.add_subcommand("calibrate", "estimate alpha and coupling from counts");
    cal->add_option("--counts", cal_counts, "counts JSON file")->required();
    cal->add_option("--out", cal_out, "output file (stdout when absent)");

    std::string ver_out;
    auto* ver = app.add_subcommand("verify", "closed-form vs first-principles discrepancy report");
    ver->add_option("--out", ver_out, "output file (stdout when absent)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        const auto cfg = load_config();

        if (kern->parsed() || gauss->parsed() || cost->parsed()) {
            CLI::App* cmd = kern->parsed() ? kern : gauss->parsed() ? gauss : cost;
            CommonOpts& o = kern->parsed() ? kern_o : gauss->parsed() ? gauss_o : cost_o;
            apply_config(*cmd, cfg, o);
            SweepSpec spec;
            try {
                spec = make_spec(o);
                tclqem::validate(spec);
            } catch (const std::exception& e) {
                std::cerr << "usage error: " << e.what() << "\n";
                return 2;
            }
            std::string text;
            if (kern->parsed()) {
                const auto rows = tclqem::kernel_sweep(spec);
                text = o.format == "json" ? tclqem::to_json(rows).dump(2) + "\n"
                                          : tclqem::to_csv(rows);
            } else if (gauss->parsed()) {
                const auto rows = tclqem::gaussian_sweep(spec);
                text = o.format == "json" ? tclqem::to_json(rows).dump(2) + "\n"
                                          : tclqem::to_csv(rows);
            } else {
                const auto rows = tclqem::cost_sweep(spec);
                text = o.format == "json" ? tclqem::to_json(rows).dump(2) + "\n"
                                          : tclqem::to_csv(rows);
            }
            return emit(text, o.out);
        }

        if (evolve->parsed()) {
            Gate g;
            MultipletIndex st;
            try {
                g = parse_gate_arg(ev_gate);
                st = parse_state_arg(ev_state);
            } catch (const CLI::ValidationError& e) {
                std::cerr << "usage error: " << e.what() << "\n";
                return 2;
            }
            double alpha = ev_alpha;
            nlohmann::json extra;
            if (alpha < 0.0) {
                if (ev_x < 0.0 || ev_o.couplings.empty()) {
                    std::cerr << "usage error: evolve needs --alpha, or --x with "
                                 "--gamma0-omega-tau\n";
                    return 2;
                }
                const NoiseParams p{ev_o.couplings[0] / ev_o.omega_c_tau_s, ev_o.delta0,
                                    ev_o.omega_c_tau_s, 1.0};
                alpha = tclqem::kernel_k(ev_x, p).re;
                extra["x"] = ev_x;
            }
            if (alpha > 0.5) {
                std::cerr << "usage error: alpha must lie in [0, 1/2]\n";
                return 2;
            }
            const auto probs = tclqem::model_probabilities(g, st, alpha);
            const auto pm = tclqem::gate_population_matrix(tclqem::gate_basis(g), alpha);
            nlohmann::json jpm = nlohmann::json::array();
            for (int r = 0; r < 4; ++r) {
                nlohmann::json row = nlohmann::json::array();
                for (int c = 0; c < 4; ++c) row.push_back(pm.p(r, c));
                jpm.push_back(row);
            }
            nlohmann::json out = {{"gate", ev_gate},
                                  {"initial_state", ev_state},
                                  {"alpha", alpha},
                                  {"probabilities", {probs[0], probs[1], probs[2], probs[3]}},
                                  {"population_matrix", jpm}};
            // first-order map: slightly negative weights are a warning, not an error
            if (probs.minCoeff() < -1e-9) out["positivity_warning"] = true;
            for (auto& [k, v] : extra.items()) out[k] = v;
            return emit(out.dump(2) + "\n", ev_out);
        }

        if (cal->parsed()) {
            std::vector<tclqem::CountsRecord> records;
            try {
                records = tclqem::load_counts(cal_counts);
            } catch (const tclqem::ParseError& e) {
                std::cerr << "data error: " << e.what() << "\n";
                return 1;
            }
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& rec : records) {
                const auto ls = tclqem::estimate_alpha(rec, tclqem::AlphaEstimator::least_squares);
                const auto ro =
                    tclqem::estimate_alpha(rec, tclqem::AlphaEstimator::designated_outcome);
                nlohmann::json couplings;
                for (auto rule : {tclqem::ConversionRule::eq32_prefactor,
                                  tclqem::ConversionRule::table1_implied,
                                  tclqem::ConversionRule::si_tables_implied})
                    couplings[tclqem::to_string(rule)] =
                        tclqem::coupling_from_alpha(ls.alpha_hat, rule);
                arr.push_back({{"device", rec.device},
                               {"gate", rec.gate == Gate::identity ? "identity" : "cnot"},
                               {"initial_state",
                                std::string("m") +
                                    std::to_string(static_cast<int>(rec.initial_state) + 1)},
                               {"alpha_hat", ls.alpha_hat},
                               {"alpha_hat_designated_outcome", ro.alpha_hat},
                               {"residuals",
                                {ls.residuals[0], ls.residuals[1], ls.residuals[2],
                                 ls.residuals[3]}},
                               {"clamped", ls.clamped},
                               {"accepted", ls.accepted},
                               {"couplings", couplings}});
            }
            return emit(nlohmann::json{{"records", arr}}.dump(2) + "\n", cal_out);
        }

        if (ver->parsed()) {
            const auto rep = tclqem::build_discrepancy_report();
            return emit(tclqem::to_json(rep).dump(2) + "\n", ver_out);
        }
    } catch (const tclqem::ParseError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
