#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "hexlat/cli.hpp"

namespace {

struct CliState {
    hexlat::RunConfig cfg;
    std::string config_path;
    std::string d_grid_text;
    std::string format_text;
};

void add_common_flags(CLI::App* sub, CliState& st) {
    sub->add_option("--config", st.config_path, "flat key = value config file");
    sub->add_option("--r-max", st.cfg.r_max, "largest shell radius");
    sub->add_option("--kl-bound", st.cfg.kl_bound, "scan window |k|,|l| <= bound");
    sub->add_option("--directions", st.cfg.directions, "number of perturbation directions");
    sub->add_option("--d-grid", st.d_grid_text, "comma-separated perturbation sizes, decreasing");
    sub->add_option("--kernel", st.cfg.kernel_spec, "radial kernel spec");
    sub->add_option("--kernel-c", st.cfg.kernel_c, "admissibility constant c");
    sub->add_option("--kernel-nbhd", st.cfg.kernel_nbhd, "admissibility neighborhood half-width");
    sub->add_option("--fd-grad-step", st.cfg.fd_grad_step, "finite-difference gradient step");
    sub->add_option("--fd-hess-step", st.cfg.fd_hess_step, "finite-difference Hessian step");
    sub->add_option("--coarse-n", st.cfg.coarse_n, "coarse grid resolution for cell minimization");
    sub->add_option("--refine-iters", st.cfg.refine_iters, "grid refinement rounds");
    sub->add_option("--format", st.format_text, "output format: csv or json");
    sub->add_option("--out", st.cfg.out_path, "output file (default stdout)");
    sub->add_option("--seed", st.cfg.seed, "recorded in the output header");
    sub->add_option("--threads", st.cfg.threads, "worker threads (0 = hardware)");
}

int finalize_config(CliState& st) {
    if (!st.config_path.empty()) {
        // file first, then flags override: re-parse happens in main via defaults,
        // so load the file into a fresh config and re-apply textual options
        hexlat::RunConfig file_cfg;
        hexlat::load_config_file(file_cfg, st.config_path);
        // flags that were left at defaults take the file values
        hexlat::RunConfig defaults;
        const auto pick = [](auto flag_value, auto default_value, auto file_value) {
            return flag_value == default_value ? file_value : flag_value;
        };
        st.cfg.r_max = pick(st.cfg.r_max, defaults.r_max, file_cfg.r_max);
        st.cfg.kl_bound = pick(st.cfg.kl_bound, defaults.kl_bound, file_cfg.kl_bound);
        st.cfg.fd_grad_step = pick(st.cfg.fd_grad_step, defaults.fd_grad_step, file_cfg.fd_grad_step);
        st.cfg.fd_hess_step = pick(st.cfg.fd_hess_step, defaults.fd_hess_step, file_cfg.fd_hess_step);
        st.cfg.directions = pick(st.cfg.directions, defaults.directions, file_cfg.directions);
        st.cfg.kernel_spec = pick(st.cfg.kernel_spec, defaults.kernel_spec, file_cfg.kernel_spec);
        st.cfg.kernel_c = pick(st.cfg.kernel_c, defaults.kernel_c, file_cfg.kernel_c);
        st.cfg.kernel_nbhd = pick(st.cfg.kernel_nbhd, defaults.kernel_nbhd, file_cfg.kernel_nbhd);
        st.cfg.coarse_n = pick(st.cfg.coarse_n, defaults.coarse_n, file_cfg.coarse_n);
        st.cfg.refine_iters = pick(st.cfg.refine_iters, defaults.refine_iters, file_cfg.refine_iters);
        st.cfg.seed = pick(st.cfg.seed, defaults.seed, file_cfg.seed);
        st.cfg.threads = pick(st.cfg.threads, defaults.threads, file_cfg.threads);
        if (st.cfg.out_path.empty()) st.cfg.out_path = file_cfg.out_path;
        if (st.d_grid_text.empty()) st.cfg.d_grid = file_cfg.d_grid;
        if (st.format_text.empty()) st.cfg.format = file_cfg.format;
    }
    if (!st.d_grid_text.empty()) st.cfg.d_grid = hexlat::parse_double_list(st.d_grid_text);
    if (!st.format_text.empty()) {
        if (st.format_text == "csv") st.cfg.format = hexlat::OutputFormat::csv;
        else if (st.format_text == "json") st.cfg.format = hexlat::OutputFormat::json;
        else {
            std::cerr << "error: format must be csv or json\n";
            return hexlat::kExitInvalidInput;
        }
    }
    const std::vector<std::string> errors = hexlat::validate_config(st.cfg);
    if (!errors.empty()) {
        for (const std::string& e : errors) std::cerr << "error: " << e << "\n";
        return hexlat::kExitInvalidInput;
    }
    return hexlat::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hexlat: desk-scale checks of the extremal property of the hexagonal lattice"};
    app.require_subcommand(1);

    CliState st;
    CLI::App* shells = app.add_subcommand("shells", "enumerate shells around the deep hole");
    CLI::App* verify = app.add_subcommand("verify-hessian", "eigenvalue bounds and critical-point checks");
    CLI::App* perturb = app.add_subcommand("perturb", "shell-gap sweep and quadratic coercivity fits");
    CLI::App* variational = app.add_subcommand("variational", "admissibility, precondition and local-max scan");
    for (CLI::App* sub : {shells, verify, perturb, variational}) add_common_flags(sub, st);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) != 0 ? hexlat::kExitInvalidInput : hexlat::kExitOk;
    }

    try {
        if (const int rc = finalize_config(st); rc != hexlat::kExitOk) return rc;
        if (shells->parsed()) return hexlat::cmd_shells(st.cfg, std::cerr);
        if (verify->parsed()) return hexlat::cmd_verify_hessian(st.cfg, std::cerr);
        if (perturb->parsed()) return hexlat::cmd_perturb(st.cfg, std::cerr);
        if (variational->parsed()) return hexlat::cmd_variational(st.cfg, std::cerr);
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return hexlat::kExitInvalidInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return hexlat::kExitInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return hexlat::kExitVerificationFailed;
    }
    return hexlat::kExitInvalidInput;
}
