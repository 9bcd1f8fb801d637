#pragma once

// Command implementations behind the fhenon executable. Each returns a process exit code:
// 0 ok, 1 validation checks failed, 2 rejected configuration, 3 solver failure, 4 I/O.

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "fhenon/errors.hpp"
#include "fhenon/kernel.hpp"
#include "fhenon/operator.hpp"
#include "fhenon/params.hpp"
#include "fhenon/radial.hpp"
#include "fhenon/solver.hpp"
#include "fhenon/validate.hpp"

namespace fhenon::cli {

inline constexpr int schema_version = 1;

enum class Command { Solve, Kernel, Validate };
enum class Format { Json, Csv };

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int checks_failed = 1;
inline constexpr int rejected = 2;
inline constexpr int solver_failure = 3;
inline constexpr int io_error = 4;
}  // namespace exit_code

inline const char* to_string(Command c) {
    switch (c) {
        case Command::Solve: return "solve";
        case Command::Kernel: return "kernel";
        case Command::Validate: return "validate";
    }
    return "unknown";
}

inline const char* to_string(Format f) { return f == Format::Json ? "json" : "csv"; }

struct RunConfig {
    Command command = Command::Solve;
    int N = 3;
    double s = 0.5;
    double alpha = 0.0;
    double L = 30.0;
    double h = 0.05;
    double t_max = 30.0;
    double tol = 1e-10;
    bool refine_L = false;
    std::string output_path;  ///< empty writes to stdout
    Format format = Format::Json;

    /// Throws DomainError / AdmissibilityError before any computation.
    void validate() const {
        fhenon::detail::check_order_and_dimension(N, s);
        if (command == Command::Solve) {
            const auto cls = classify_admissibility(N, s, alpha);
            if (cls != AdmissibilityClass::ClassicalRange && cls != AdmissibilityClass::WeakRange)
                throw AdmissibilityError(admissibility_message(N, s, alpha));
        }
        if (!(tol > 0.0)) throw DomainError("--tol must be positive");
        if (!(t_max > 1.0)) throw DomainError("--t-max must exceed 1");
        if (command != Command::Kernel) {
            Grid1D::make(L, h);
            if (4.0 * h > 0.5) throw DomainError("--h must not exceed 0.125");
        }
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["command"] = to_string(command);
        j["N"] = N;
        j["s"] = s;
        j["alpha"] = alpha;
        j["L"] = L;
        j["h"] = h;
        j["t_max"] = t_max;
        j["tol"] = tol;
        j["refine_L"] = refine_L;
        j["format"] = to_string(format);
        return j;
    }
};

namespace detail {

/// Shortest round-trip decimal, independent of the C++ locale.
inline std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline nlohmann::ordered_json num_or_null(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

inline std::string csv_config_comment(const RunConfig& cfg) {
    std::ostringstream os;
    os << "# schema_version=" << schema_version << "\n";
    os << "# config " << cfg.to_json().dump() << "\n";
    return os.str();
}

/// Writes text to the configured path (or stdout); false on I/O failure.
inline bool emit(const RunConfig& cfg, const std::string& text, std::ostream& err) {
    if (cfg.output_path.empty()) {
        std::cout << text;
        std::cout.flush();
        return static_cast<bool>(std::cout);
    }
    std::ofstream out(cfg.output_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        err << "error: cannot open output file '" << cfg.output_path << "'\n";
        return false;
    }
    out << text;
    out.close();
    if (!out) {
        err << "error: failed writing output file '" << cfg.output_path << "'\n";
        return false;
    }
    return true;
}

inline nlohmann::ordered_json report_json(const SolveReport& r, const std::optional<DecayReport>& d,
                                          AdmissibilityClass cls) {
    nlohmann::ordered_json j;
    j["admissibility"] = fhenon::to_string(cls);
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    j["final_residual"] = r.final_residual;
    j["energy"] = r.energy;
    j["decay_rate_fit"] = num_or_null(r.decay_rate_fit);
    j["decay_window"] = {r.decay_window_lo, r.decay_window_hi};
    j["decay_ok"] = r.decay_ok;
    j["positivity"] = r.positivity;
    j["zero_solution"] = r.zero_solution;
    j["L_refinement_delta"] = r.L_refinement_delta ? num_or_null(*r.L_refinement_delta) : nullptr;
    j["residual_history"] = r.residual_history;
    j["alpha_path"] = r.alpha_path;
    if (d) {
        nlohmann::ordered_json dj;
        dj["c1"] = d->c1;
        dj["c2"] = d->c2;
        dj["exponent_fit"] = d->exponent_fit;
        dj["window"] = {d->window_lo, d->window_hi};
        dj["ok"] = d->ok;
        dj["exponent0_fit"] = d->exponent0_fit;
        dj["window0"] = {d->window0_lo, d->window0_hi};
        dj["ok0"] = d->ok0;
        j["decay"] = dj;
    } else {
        j["decay"] = nullptr;
    }
    return j;
}

}  // namespace detail

inline int cmd_solve(const RunConfig& cfg, std::ostream& err = std::cerr) {
    try {
        cfg.validate();
    } catch (const DomainError& e) {
        err << "rejected: " << e.what() << "\n";
        return exit_code::rejected;
    }
    const FracHenonParams P = FracHenonParams::make(cfg.N, cfg.s, cfg.alpha);
    const AdmissibilityClass cls = classify_admissibility(cfg.N, cfg.s, cfg.alpha);
    Profile prof;
    SolveReport rep;
    try {
        const KernelTable tab = build_table(P, cfg.t_max);
        const ReducedOperator op(Grid1D::make(cfg.L, cfg.h), tab);
        SolveOptions opts;
        opts.newton_tol = cfg.tol;
        opts.check_L_refinement = cfg.refine_L;
        std::tie(prof, rep) = solve_bubble(P, op, opts);
    } catch (const SolverError& e) {
        err << "solver failure: " << e.what() << "\n";
        return exit_code::solver_failure;
    } catch (const std::runtime_error& e) {
        err << "solver failure: " << e.what() << "\n";
        return exit_code::solver_failure;
    } catch (const ResolutionError& e) {
        err << "rejected: " << e.what() << "\n";
        return exit_code::rejected;
    }

    const RadialFunction u = reconstruct_u(prof);
    std::optional<DecayReport> decay;
    try {
        decay = decay_bounds(u);
    } catch (const WindowUnderflowError& e) {
        err << "warning: decay bounds unavailable: " << e.what() << "\n";
    }

    std::string text;
    if (cfg.format == Format::Json) {
        nlohmann::ordered_json j;
        j["schema_version"] = schema_version;
        j["config"] = cfg.to_json();
        j["nodes"] = prof.grid.nodes();
        j["values"] = prof.values;
        nlohmann::ordered_json samples = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < prof.grid.n; i += 10)
            samples.push_back({{"r", std::exp(u.log_nodes[i])}, {"u", u.values[i]}});
        j["u_samples"] = samples;
        j["report"] = detail::report_json(rep, decay, cls);
        text = j.dump(1) + "\n";
    } else {
        std::ostringstream os;
        os << detail::csv_config_comment(cfg);
        os << "# report " << detail::report_json(rep, decay, cls).dump() << "\n";
        os << "k,vbar,r,u\n";
        for (std::size_t i = 0; i < prof.grid.n; ++i) {
            os << detail::num(u.log_nodes[i]) << ',' << detail::num(prof.values[i]) << ','
               << detail::num(std::exp(u.log_nodes[i])) << ',' << detail::num(u.values[i]) << '\n';
        }
        text = os.str();
    }
    return detail::emit(cfg, text, err) ? exit_code::ok : exit_code::io_error;
}

inline int cmd_kernel(const RunConfig& cfg, std::ostream& err = std::cerr) {
    try {
        cfg.validate();
    } catch (const DomainError& e) {
        err << "rejected: " << e.what() << "\n";
        return exit_code::rejected;
    }
    const FracHenonParams P = FracHenonParams::make(cfg.N, cfg.s, 0.0);
    KernelTable tab;
    try {
        tab = build_table(P, cfg.t_max);
    } catch (const std::runtime_error& e) {
        err << "kernel failure: " << e.what() << "\n";
        return exit_code::solver_failure;
    }
    const SpectralConstants sc = SpectralConstants::compute(cfg.N, cfg.s);
    const double e = 1.0 + 2.0 * cfg.s, q = tab.decay_exponent();
    const double t_small = 1e-3, t_large = 12.0;
    const double sing_dev = std::abs(std::pow(t_small, e) * kernel_K(t_small, P) / tab.kappa0 - 1.0);
    const double tail_dev = std::abs(std::exp(q * t_large) * kernel_K(t_large, P) / tab.c_inf - 1.0);

    nlohmann::ordered_json diag;
    diag["kappa0"] = tab.kappa0;
    diag["kappa0_closed_form"] = sc.kappa0;
    diag["c_inf"] = tab.c_inf;
    diag["c_inf_closed_form"] = sc.c_inf;
    diag["decay_exponent"] = q;
    diag["singular_window_t"] = t_small;
    diag["singular_window_rel_dev"] = sing_dev;
    diag["tail_window_t"] = t_large;
    diag["tail_window_rel_dev"] = tail_dev;

    std::string text;
    if (cfg.format == Format::Csv) {
        std::ostringstream os;
        os << detail::csv_config_comment(cfg);
        for (const auto& [k, v] : diag.items()) os << "# " << k << "=" << detail::num(v.get<double>()) << "\n";
        os << "t,K\n";
        for (std::size_t i = 0; i < tab.nodes.size(); ++i)
            os << detail::num(tab.nodes[i]) << ',' << detail::num(tab.values[i]) << '\n';
        text = os.str();
    } else {
        nlohmann::ordered_json j;
        j["schema_version"] = schema_version;
        j["config"] = cfg.to_json();
        j["diagnostics"] = diag;
        j["t"] = tab.nodes;
        j["K"] = tab.values;
        text = j.dump(1) + "\n";
    }
    return detail::emit(cfg, text, err) ? exit_code::ok : exit_code::io_error;
}

inline int cmd_validate(const RunConfig& cfg, std::ostream& err = std::cerr, std::ostream& table = std::cerr) {
    try {
        cfg.validate();
    } catch (const DomainError& e) {
        err << "rejected: " << e.what() << "\n";
        return exit_code::rejected;
    }
    ValidationConfig vc;
    vc.N = cfg.N;
    vc.s = cfg.s;
    vc.L = cfg.L;
    vc.h = cfg.h;
    vc.t_max = cfg.t_max;
    std::vector<ValidationRow> rows;
    try {
        rows = run_validation(vc);
    } catch (const std::runtime_error& e) {
        err << "validation failure: " << e.what() << "\n";
        return exit_code::solver_failure;
    } catch (const std::domain_error& e) {
        err << "rejected: " << e.what() << "\n";
        return exit_code::rejected;
    }
    bool all = true;
    for (const auto& r : rows) {
        all = all && r.pass;
        char line[160];
        std::snprintf(line, sizeof line, "%-32s %12.3e  < %8.1e  %s\n", r.name.c_str(), r.measured, r.tolerance,
                      r.pass ? "PASS" : "FAIL");
        table << line;
    }

    std::string text;
    if (cfg.format == Format::Csv) {
        std::ostringstream os;
        os << detail::csv_config_comment(cfg);
        os << "check,measured,tolerance,pass\n";
        for (const auto& r : rows)
            os << r.name << ',' << detail::num(r.measured) << ',' << detail::num(r.tolerance) << ','
               << (r.pass ? 1 : 0) << '\n';
        text = os.str();
    } else {
        nlohmann::ordered_json j;
        j["schema_version"] = schema_version;
        j["config"] = cfg.to_json();
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& r : rows)
            arr.push_back({{"check", r.name}, {"measured", r.measured}, {"tolerance", r.tolerance}, {"pass", r.pass}});
        j["checks"] = arr;
        j["all_pass"] = all;
        text = j.dump(1) + "\n";
    }
    if (!detail::emit(cfg, text, err)) return exit_code::io_error;
    return all ? exit_code::ok : exit_code::checks_failed;
}

inline int run(const RunConfig& cfg, std::ostream& err = std::cerr) {
    switch (cfg.command) {
        case Command::Solve: return cmd_solve(cfg, err);
        case Command::Kernel: return cmd_kernel(cfg, err);
        case Command::Validate: return cmd_validate(cfg, err, err);
    }
    return exit_code::rejected;
}

}  // namespace fhenon::cli
