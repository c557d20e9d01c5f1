#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hexlat/io.hpp"
#include "hexlat/moduli.hpp"
#include "hexlat/perturbation.hpp"
#include "hexlat/shells.hpp"
#include "hexlat/variational.hpp"
#include "hexlat/verify.hpp"

namespace hexlat {

enum class OutputFormat { csv, json };

// exit codes shared by every subcommand
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitInvalidInput = 2;

struct RunConfig {
    double r_max = 8.0;
    long long kl_bound = 100;
    double fd_grad_step = 1e-5;
    double fd_hess_step = 1e-4;
    int directions = 16;
    std::vector<double> d_grid = {1e-2, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4};
    std::string kernel_spec = "default";
    double kernel_c = 6.0;
    double kernel_nbhd = 0.05;
    int coarse_n = 64;
    int refine_iters = 6;
    long long seed = 0;
    OutputFormat format = OutputFormat::csv;
    std::string out_path;  // empty = stdout
    unsigned threads = 0;  // 0 = hardware, capped by HEXLAT_THREADS
};

inline std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        const double v = std::stod(item, &pos);
        if (pos != item.size()) throw std::invalid_argument("bad number in list: " + item);
        out.push_back(v);
    }
    return out;
}

// Kernel specs: "default", "ramp:<a>:<support>", "zero[:support]",
// "gauss[:support]", "poly:<support>:<c0>,<c1>,...".
inline RadialKernel kernel_from_spec(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.empty()) throw std::invalid_argument("empty kernel spec");
    const std::string& name = parts[0];
    if (name == "default") {
        if (parts.size() != 1) throw std::invalid_argument("default kernel takes no parameters");
        return RadialKernel::default_kernel();
    }
    if (name == "ramp") {
        if (parts.size() != 3) throw std::invalid_argument("ramp kernel needs ramp:<a>:<support>");
        return RadialKernel::linear_ramp(std::stod(parts[1]), std::stod(parts[2]));
    }
    if (name == "zero")
        return RadialKernel::zero(parts.size() > 1 ? std::stod(parts[1]) : 2.0);
    if (name == "gauss")
        return RadialKernel::truncated_gaussian(parts.size() > 1 ? std::stod(parts[1]) : 2.0);
    if (name == "poly") {
        if (parts.size() != 3)
            throw std::invalid_argument("poly kernel needs poly:<support>:<c0>,<c1>,...");
        const double support = std::stod(parts[1]);
        return {"poly", {{0.0, support, parse_double_list(parts[2])}}, support};
    }
    throw std::invalid_argument("unknown kernel spec: " + spec);
}

// Flat key = value file, '#' starts a comment line.
inline void apply_config_line(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "r_max") cfg.r_max = std::stod(value);
    else if (key == "kl_bound") cfg.kl_bound = std::stoll(value);
    else if (key == "fd_grad_step") cfg.fd_grad_step = std::stod(value);
    else if (key == "fd_hess_step") cfg.fd_hess_step = std::stod(value);
    else if (key == "directions") cfg.directions = std::stoi(value);
    else if (key == "d_grid") cfg.d_grid = parse_double_list(value);
    else if (key == "kernel") cfg.kernel_spec = value;
    else if (key == "kernel_c") cfg.kernel_c = std::stod(value);
    else if (key == "kernel_nbhd") cfg.kernel_nbhd = std::stod(value);
    else if (key == "coarse_n") cfg.coarse_n = std::stoi(value);
    else if (key == "refine_iters") cfg.refine_iters = std::stoi(value);
    else if (key == "seed") cfg.seed = std::stoll(value);
    else if (key == "threads") cfg.threads = static_cast<unsigned>(std::stoul(value));
    else if (key == "format") {
        if (value == "csv") cfg.format = OutputFormat::csv;
        else if (value == "json") cfg.format = OutputFormat::json;
        else throw std::invalid_argument("format must be csv or json");
    } else if (key == "out") cfg.out_path = value;
    else throw std::invalid_argument("unknown config key: " + key);
}

inline void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw std::invalid_argument("bad config line: " + line);
            continue;
        }
        const auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        apply_config_line(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

inline std::vector<std::string> validate_config(const RunConfig& cfg) {
    std::vector<std::string> errors;
    if (!(cfg.r_max > 0.0)) errors.push_back("r_max must be positive");
    if (cfg.kl_bound < 0) errors.push_back("kl_bound must be nonnegative");
    if (!(cfg.fd_grad_step >= kMinFiniteDifferenceStep))
        errors.push_back("fd_grad_step below 1e-12");
    if (!(cfg.fd_hess_step >= kMinFiniteDifferenceStep))
        errors.push_back("fd_hess_step below 1e-12");
    if (cfg.directions < 1) errors.push_back("directions must be positive");
    if (cfg.d_grid.empty()) errors.push_back("d_grid must not be empty");
    for (std::size_t i = 0; i < cfg.d_grid.size(); ++i) {
        if (!(cfg.d_grid[i] > 0.0)) {
            errors.push_back("d_grid entries must be positive");
            break;
        }
        if (i > 0 && !(cfg.d_grid[i] < cfg.d_grid[i - 1])) {
            errors.push_back("d_grid must be strictly decreasing");
            break;
        }
    }
    if (!(cfg.kernel_c > 0.0)) errors.push_back("kernel_c must be positive");
    if (!(cfg.kernel_nbhd > 0.0)) errors.push_back("kernel_nbhd must be positive");
    if (cfg.coarse_n < 16) errors.push_back("coarse_n must be at least 16");
    if (cfg.refine_iters < 0) errors.push_back("refine_iters must be nonnegative");
    try {
        kernel_from_spec(cfg.kernel_spec);
    } catch (const std::exception& e) {
        errors.push_back(e.what());
    }
    return errors;
}

inline unsigned resolve_threads(const RunConfig& cfg) {
    unsigned n = cfg.threads != 0 ? cfg.threads : default_thread_count();
    if (const char* env = std::getenv("HEXLAT_THREADS")) {
        const unsigned cap = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
        if (cap > 0) n = std::min(n, cap);
    }
    return std::max(1u, n);
}

inline ConfigEcho config_echo(const RunConfig& cfg, const std::string& command) {
    ConfigEcho kv;
    kv.push_back({"command", command});
    kv.push_back({"r_max", fmt_real(cfg.r_max)});
    kv.push_back({"kl_bound", std::to_string(cfg.kl_bound)});
    kv.push_back({"fd_grad_step", fmt_real(cfg.fd_grad_step)});
    kv.push_back({"fd_hess_step", fmt_real(cfg.fd_hess_step)});
    kv.push_back({"directions", std::to_string(cfg.directions)});
    std::string dg;
    for (std::size_t i = 0; i < cfg.d_grid.size(); ++i)
        dg += (i ? "," : "") + fmt_real(cfg.d_grid[i]);
    kv.push_back({"d_grid", dg});
    kv.push_back({"kernel", cfg.kernel_spec});
    kv.push_back({"kernel_c", fmt_real(cfg.kernel_c)});
    kv.push_back({"kernel_nbhd", fmt_real(cfg.kernel_nbhd)});
    kv.push_back({"coarse_n", std::to_string(cfg.coarse_n)});
    kv.push_back({"refine_iters", std::to_string(cfg.refine_iters)});
    kv.push_back({"seed", std::to_string(cfg.seed)});
    return kv;
}

inline nlohmann::json config_json(const ConfigEcho& echo) {
    nlohmann::json j;
    for (const auto& [k, v] : echo) j[k] = v;
    return j;
}

class OutputTarget {
public:
    explicit OutputTarget(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::invalid_argument("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

// ---- subcommands -----------------------------------------------------------

inline int cmd_shells(const RunConfig& cfg, std::ostream& diag) {
    const std::vector<ShellIndexSet> shells = enumerate_shells(cfg.r_max);
    OutputTarget target(cfg.out_path);
    const ConfigEcho echo = config_echo(cfg, "shells");
    if (cfg.format == OutputFormat::csv) {
        write_shell_table_csv(target.stream(), shells, echo);
    } else {
        nlohmann::json j = {{"config", config_json(echo)}, {"records", shell_table_json(shells)}};
        target.stream() << j.dump(2) << "\n";
    }
    std::size_t members = 0;
    for (const ShellIndexSet& s : shells) members += s.size();
    diag << "shells: " << shells.size() << " shells, " << members << " members, r_max "
         << fmt_real(cfg.r_max) << "\n";
    return kExitOk;
}

inline int cmd_verify_hessian(const RunConfig& cfg, std::ostream& diag) {
    const unsigned threads = resolve_threads(cfg);
    bool ok = true;

    // squared case: exact integer decision of the eigenvalue floor
    const SquaredScanResult sq = scan_squared_exact(cfg.kl_bound);
    const double lambda_floor = 4.0 / std::sqrt(3.0) - 2.0 / 3.0;
    const bool equality_expected =
        sq.equality_set == std::vector<IndexPair>{{0, 0}, {0, 1}, {1, 0}};
    if (!sq.floor_holds || !sq.strict_positivity_holds) {
        ok = false;
        diag << "FAIL squared eigenvalue floor, min q = " << sq.min_q << "\n";
    }
    if (cfg.kl_bound >= 1 && !equality_expected) {
        ok = false;
        diag << "FAIL squared equality set differs from {(0,0),(1,0),(0,1)}\n";
        for (const IndexPair& w : sq.equality_set) diag << "  witness (" << w.k << "," << w.l << ")\n";
    }

    // squared case: finite differences against the closed form
    const long long fd_bound = std::min<long long>(cfg.kl_bound, 20);
    const double fd_dev = scan_squared_fd_vs_closed<quad>(fd_bound, cfg.fd_hess_step, threads);
    if (!(fd_dev <= 1e-6)) {
        ok = false;
        diag << "FAIL squared FD vs closed form, rel dev " << fmt_real(fd_dev) << "\n";
    }

    // linear case: FD scan against the exact first-orbit minimum
    const double linear_bound = (9.0 - std::sqrt(21.0)) / (std::pow(2.0, 1.5) * std::pow(3.0, 0.75));
    const LinearScanResult lin =
        scan_linear_fd<quad>(cfg.kl_bound, cfg.fd_hess_step, /*keep_records=*/true, threads);
    if (!(lin.min_lambda >= linear_bound - 1e-6)) {
        ok = false;
        diag << "FAIL linear lambda_min " << fmt_real(lin.min_lambda) << " below bound at ("
             << lin.argmin.k << "," << lin.argmin.l << ")\n";
    }
    if (cfg.kl_bound >= 1 && !(std::abs(lin.min_lambda - linear_bound) <= 1e-4)) {
        ok = false;
        diag << "FAIL linear lambda_min " << fmt_real(lin.min_lambda)
             << " not within 1e-4 of " << fmt_real(linear_bound) << "\n";
    }

    // critical point: gradients vanish at the hexagonal parameters
    const long long grad_bound = std::min<long long>(cfg.kl_bound, 50);
    const GradientScanResult gsq =
        scan_gradient_norm<quad>(EnergyKind::squared, grad_bound, 1e-8, threads);
    const GradientScanResult glin =
        scan_gradient_norm<quad>(EnergyKind::linear, grad_bound, 1e-8, threads);
    if (!(gsq.max_norm <= 1e-8 && glin.max_norm <= 1e-8)) {
        ok = false;
        diag << "FAIL gradient at hexagonal point: squared " << fmt_real(gsq.max_norm)
             << " at (" << gsq.argmax.k << "," << gsq.argmax.l << "), linear "
             << fmt_real(glin.max_norm) << " at (" << glin.argmax.k << "," << glin.argmax.l
             << ")\n";
    }

    // polar limits of the linear Hessian
    const double asym_dev = asymptotic_max_rel_dev(1e3, 64, cfg.fd_hess_step);
    if (!(asym_dev <= 0.02)) {
        ok = false;
        diag << "FAIL asymptotic h1 limit, rel dev " << fmt_real(asym_dev) << "\n";
    }

    // emit records
    std::vector<std::pair<std::string, HessianRecord>> recs;
    recs.reserve(static_cast<std::size_t>((2 * cfg.kl_bound + 1) * (2 * cfg.kl_bound + 1)) * 2);
    for (long long k = -cfg.kl_bound; k <= cfg.kl_bound; ++k)
        for (long long l = -cfg.kl_bound; l <= cfg.kl_bound; ++l)
            recs.push_back({"squared", closed_form_hessian_squared(k, l)});
    for (const auto& [pair, m] : lin.records) {
        HessianRecord r;
        r.k = pair.k;
        r.l = pair.l;
        r.h1 = m.h1;
        r.h2 = m.h2;
        r.h3 = m.h3;
        const auto ev = m.eigenvalues();
        r.lambda_min = ev[0];
        r.lambda_max = ev[1];
        recs.push_back({"linear", r});
    }
    OutputTarget target(cfg.out_path);
    ConfigEcho echo = config_echo(cfg, "verify-hessian");
    echo.push_back({"min_lambda_min_linear", fmt_real(lin.min_lambda)});
    echo.push_back({"min_q_squared", std::to_string(sq.min_q)});
    echo.push_back({"max_gradient_norm", fmt_real(std::max(gsq.max_norm, glin.max_norm))});
    echo.push_back({"asymptotic_rel_dev_r1e3", fmt_real(asym_dev)});
    if (cfg.format == OutputFormat::csv) {
        write_hessian_records_csv(target.stream(), recs, echo);
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [label, r] : recs) arr.push_back(hessian_record_json(label, r));
        nlohmann::json j = {{"config", config_json(echo)}, {"records", arr}};
        target.stream() << j.dump(2) << "\n";
    }

    diag << "verify-hessian: squared floor " << fmt_real(lambda_floor) << " holds "
         << (sq.floor_holds && equality_expected ? "yes" : "NO") << ", linear min "
         << fmt_real(lin.min_lambda) << " vs " << fmt_real(linear_bound) << ", max grad "
         << fmt_real(std::max(gsq.max_norm, glin.max_norm)) << ", asym dev "
         << fmt_real(asym_dev) << "\n";
    return ok ? kExitOk : kExitVerificationFailed;
}

inline int cmd_perturb(const RunConfig& cfg, std::ostream& diag) {
    const std::vector<ShellIndexSet> shells = enumerate_shells(cfg.r_max);
    const std::vector<Vec2d> dirs = unit_directions(cfg.directions);

    std::vector<CoercivityRecord> records;
    bool floor_warning = false;
    bool gaps_positive = true;
    bool slopes_ok = true;
    for (const EnergyKind kind : {EnergyKind::linear, EnergyKind::squared}) {
        const PerturbationReport rep = coercivity_fit(shells, dirs, cfg.d_grid, kind);
        floor_warning = floor_warning || rep.floor_warning;
        for (const CoercivityRecord& r : rep.records) {
            records.push_back(r);
            if (r.floor_warning) continue;  // below numerical floor: warn, do not gate
            if (!(r.min_gap > 0.0)) gaps_positive = false;
            if (!(std::abs(r.slope - 2.0) <= 0.1)) slopes_ok = false;
        }
    }

    OutputTarget target(cfg.out_path);
    ConfigEcho echo = config_echo(cfg, "perturb");
    echo.push_back({"floor_warning", floor_warning ? "1" : "0"});
    echo.push_back({"all_gaps_positive", gaps_positive ? "1" : "0"});
    echo.push_back({"slopes_within_tolerance", slopes_ok ? "1" : "0"});
    if (cfg.format == OutputFormat::csv) {
        write_coercivity_csv(target.stream(), records, echo);
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const CoercivityRecord& r : records) arr.push_back(coercivity_record_json(r));
        nlohmann::json j = {{"config", config_json(echo)}, {"records", arr}};
        target.stream() << j.dump(2) << "\n";
    }
    diag << "perturb: " << records.size() << " records, gaps positive "
         << (gaps_positive ? "yes" : "NO") << ", slopes 2 +/- 0.1 " << (slopes_ok ? "yes" : "NO")
         << (floor_warning ? ", numerical-floor warning" : "") << "\n";
    return (gaps_positive && slopes_ok) ? kExitOk : kExitVerificationFailed;
}

inline int cmd_variational(const RunConfig& cfg, std::ostream& diag) {
    const RadialKernel kernel = kernel_from_spec(cfg.kernel_spec);
    LocalMaxScanOptions opts;
    opts.coarse_n = cfg.coarse_n;
    opts.refine_iters = cfg.refine_iters;
    opts.admissibility_c = cfg.kernel_c;
    opts.admissibility_nbhd = cfg.kernel_nbhd;
    opts.threads = resolve_threads(cfg);
    const LocalMaxScanReport report = local_max_scan(kernel, cfg.directions, cfg.d_grid, opts);

    OutputTarget target(cfg.out_path);
    ConfigEcho echo = config_echo(cfg, "variational");
    echo.push_back({"admissibility_pass", report.certificate.pass ? "1" : "0"});
    if (!report.certificate.pass) {
        echo.push_back({"admissibility_condition", std::to_string(report.certificate.failed_condition)});
        echo.push_back({"violating_r", fmt_real(report.certificate.violating_r)});
    }
    echo.push_back({"precondition_ok", report.precondition_ok ? "1" : "0"});
    echo.push_back({"precondition_distance", fmt_real(report.precondition_distance)});
    echo.push_back({"hexagonal_minimum", fmt_real(report.hexagonal_minimum.value)});
    echo.push_back({"all_negative", report.all_negative ? "1" : "0"});
    echo.push_back({"ratios_quadratic", report.ratios_quadratic ? "1" : "0"});
    if (cfg.format == OutputFormat::csv) {
        write_scan_csv(target.stream(), report, echo);
    } else {
        nlohmann::json j = {{"config", config_json(echo)}, {"report", scan_report_json(report)}};
        target.stream() << j.dump(2) << "\n";
    }

    if (report.refused) {
        diag << "variational: refused, " << report.refusal_reason;
        if (!report.certificate.pass)
            diag << " (condition " << report.certificate.failed_condition << " at r = "
                 << fmt_real(report.certificate.violating_r) << ")";
        else
            diag << " (argmin at " << fmt_real(report.hexagonal_minimum.argmin.x) << ", "
                 << fmt_real(report.hexagonal_minimum.argmin.y) << ")";
        diag << "\n";
        return kExitVerificationFailed;
    }
    diag << "variational: " << report.rows.size() << " rows, all negative "
         << (report.all_negative ? "yes" : "NO") << ", quadratic ratios "
         << (report.ratios_quadratic ? "yes" : "NO") << "\n";
    return report.pass() ? kExitOk : kExitVerificationFailed;
}

}  // namespace hexlat
