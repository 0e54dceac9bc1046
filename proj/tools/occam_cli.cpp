// occam: command-line harness for OCCAM network generation, fitting,
// scoring, and the simulation sweeps.
//
// Exit codes: 0 success, 1 usage or runtime error, 2 sweep finished with
// failed rows.

#include <CLI11.hpp>

#include "occam/occam.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace occam;

OverlapProfile profile_from_name(const std::string& name) {
    if (name == "A" || name == "a") return OverlapProfile::preset_a();
    if (name == "B" || name == "b") return OverlapProfile::preset_b();
    if (name == "A-caption") return OverlapProfile::preset_a_caption();
    if (name == "pure") return OverlapProfile::pure(3);
    throw CLI::ValidationError("--profile", "unknown profile '" + name + "'");
}

ThetaLaw theta_from_name(const std::string& name) {
    if (name == "nohub") return ThetaLaw::point_mass_one();
    if (name == "hub") return ThetaLaw::hub_default();
    throw CLI::ValidationError("--theta", "unknown theta setting '" + name + "'");
}

struct CommonModelFlags {
    int n = 500;
    int k = 3;
    double rho = 0.1;
    std::string profile = "A";
    std::string theta = "nohub";
    double degree = 40.0;
    std::uint64_t seed = 0;
    bool multinomial = false;
};

void add_model_flags(CLI::App* cmd, CommonModelFlags& flags) {
    cmd->add_option("--n", flags.n, "number of nodes")->check(CLI::PositiveNumber);
    cmd->add_option("--k", flags.k, "number of communities")->check(CLI::PositiveNumber);
    cmd->add_option("--rho", flags.rho, "planted-partition off-diagonal")
        ->check(CLI::Range(0.0, 0.999999));
    cmd->add_option("--profile", flags.profile, "overlap profile: A, B, A-caption, or pure");
    cmd->add_option("--theta", flags.theta, "degree law: nohub or hub");
    cmd->add_option("--degree", flags.degree, "target expected average degree")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", flags.seed, "master seed");
    cmd->add_flag("--multinomial", flags.multinomial,
                  "draw block sizes multinomially instead of deterministically");
}

SamplerConfig sampler_config(const CommonModelFlags& flags) {
    return SamplerConfig{flags.n,
                         flags.k,
                         profile_from_name(flags.profile),
                         theta_from_name(flags.theta),
                         planted_partition_b(flags.k, flags.rho),
                         flags.degree,
                         flags.seed,
                         flags.multinomial ? Allocation::Multinomial
                                           : Allocation::Deterministic};
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& writer) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    writer(out);
}

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> values;
    std::istringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) values.push_back(std::stod(cell));
    return values;
}

/// Applies a flat key=value spec file as defaults: keys matching sweep
/// flags take effect only when the flag was not given on the command line.
void apply_spec_defaults(const std::string& path, CLI::App* cmd, CommonModelFlags& flags,
                         int& reps, std::string& out, std::vector<double>& grid,
                         double& ctau, std::string& degree_mode) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open spec file " + path);
    const auto kv = read_key_values(in);
    auto unset = [&](const std::string& name) {
        return cmd->get_option_no_throw(name) != nullptr && cmd->count(name) == 0;
    };
    for (const auto& [key, value] : kv) {
        if (key == "n" && unset("--n")) flags.n = std::stoi(value);
        else if (key == "k" && unset("--k")) flags.k = std::stoi(value);
        else if (key == "rho" && unset("--rho")) flags.rho = std::stod(value);
        else if (key == "profile" && unset("--profile")) flags.profile = value;
        else if (key == "theta" && unset("--theta")) flags.theta = value;
        else if (key == "degree" && unset("--degree")) flags.degree = std::stod(value);
        else if (key == "seed" && unset("--seed")) flags.seed = std::stoull(value);
        else if (key == "multinomial" && unset("--multinomial"))
            flags.multinomial = (value == "1" || value == "true");
        else if (key == "reps" && unset("--reps")) reps = std::stoi(value);
        else if (key == "out" && unset("--out")) out = value;
        else if (key == "grid" && unset("--grid") && grid.empty()) grid = parse_grid(value);
        else if (key == "n-grid" && unset("--n-grid") && grid.empty()) grid = parse_grid(value);
        else if (key == "c-tau" && unset("--c-tau")) ctau = std::stod(value);
        else if (key == "degree-mode" && unset("--degree-mode")) degree_mode = value;
        else if (key == "n" || key == "k" || key == "rho" || key == "profile" ||
                 key == "theta" || key == "degree" || key == "seed" || key == "reps" ||
                 key == "out" || key == "grid" || key == "n-grid" || key == "c-tau" ||
                 key == "degree-mode" || key == "multinomial") {
            // valid key, overridden on the command line
        } else {
            throw Error("unknown key '" + key + "' in spec file " + path);
        }
    }
}

int emit_sweep(const ExperimentOutcome& outcome, const std::string& out_path,
               bool include_timing) {
    if (out_path.empty()) {
        write_rows_csv(std::cout, outcome, include_timing);
    } else {
        write_file(out_path,
                   [&](std::ostream& os) { write_rows_csv(os, outcome, include_timing); });
    }
    std::cerr << outcome.rows.size() << " rows, " << outcome.failed_count << " failed\n";
    return outcome.failed_count > 0 ? 2 : 0;
}

int run_generate(const CommonModelFlags& flags, const std::string& out_prefix) {
    const SamplerConfig cfg = sampler_config(flags);
    const GeneratedNetwork net = generate_network(cfg);
    write_file(out_prefix + ".edges", [&](std::ostream& os) { write_edge_list(os, net.a); });
    write_file(out_prefix + ".z.csv",
               [&](std::ostream& os) { write_matrix_csv(os, net.z.entries()); });
    write_file(out_prefix + ".theta.csv",
               [&](std::ostream& os) { write_matrix_csv(os, net.theta.theta()); });
    write_file(out_prefix + ".meta", [&](std::ostream& os) {
        write_key_values(os, {{"n", std::to_string(cfg.n)},
                              {"k", std::to_string(cfg.k)},
                              {"rho", format_double(flags.rho)},
                              {"profile", flags.profile},
                              {"theta", flags.theta},
                              {"target_degree", format_double(cfg.target_degree)},
                              {"seed", std::to_string(cfg.seed)},
                              {"alpha", format_double(net.alpha)},
                              {"edges", std::to_string(net.a.edge_count())}});
    });
    std::cerr << "wrote " << out_prefix << ".{edges,z.csv,theta.csv,meta}\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OCCAM overlapping-community toolkit"};
    app.require_subcommand(1);

    // generate ---------------------------------------------------------
    CommonModelFlags gen_flags;
    std::string gen_out = "network";
    auto* generate = app.add_subcommand("generate", "sample a synthetic network");
    add_model_flags(generate, gen_flags);
    generate->add_option("--out", gen_out, "output path prefix");

    // fit ----------------------------------------------------------------
    std::string fit_graph;
    int fit_k = 3;
    double fit_ctau = 0.1;
    std::optional<double> fit_tau;
    std::optional<double> fit_threshold;
    std::uint64_t fit_seed = 0;
    std::string fit_out = "fit";
    auto* fit_cmd = app.add_subcommand("fit", "fit OCCAM to an edge-list graph");
    fit_cmd->add_option("graph", fit_graph, "edge-list file (0-based 'i j' lines)")
        ->required();
    fit_cmd->add_option("--k", fit_k, "number of communities")->check(CLI::PositiveNumber);
    fit_cmd->add_option("--c-tau", fit_ctau, "regularizer constant C_tau");
    fit_cmd->add_option("--tau", fit_tau, "override the regularizer entirely");
    fit_cmd->add_option("--threshold", fit_threshold, "binarization threshold (default 1/K)");
    fit_cmd->add_option("--seed", fit_seed, "seed for K-medians restarts");
    fit_cmd->add_option("--out", fit_out, "output path prefix");

    // eval ---------------------------------------------------------------
    std::string eval_truth, eval_estimate;
    std::optional<double> eval_threshold;
    auto* eval_cmd =
        app.add_subcommand("eval", "score an estimated membership against the truth");
    eval_cmd->add_option("truth", eval_truth, "true membership CSV")->required();
    eval_cmd->add_option("estimate", eval_estimate, "estimated membership CSV")->required();
    eval_cmd->add_option("--threshold", eval_threshold,
                         "binarization threshold for exNVI (default 1/K)");

    // sweeps ---------------------------------------------------------------
    CommonModelFlags sweep_flags;
    int reps = 50;
    std::string sweep_out;
    std::vector<double> grid;
    bool timing = false;
    int threads = 0;
    double sweep_ctau = 0.1;
    std::string degree_mode = "fixed-alpha";

    auto add_sweep_flags = [&](CLI::App* cmd) {
        add_model_flags(cmd, sweep_flags);
        cmd->add_option("--reps", reps, "replications per grid point")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--out", sweep_out, "CSV output path (default stdout)");
        cmd->add_flag("--timing", timing, "include wall_time_ms column (breaks byte determinism)");
        cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
        cmd->set_config("--spec", "", "flat key=value file with defaults for these flags");
    };

    auto* sweep_ctau_cmd =
        app.add_subcommand("sweep-ctau", "sweep the regularizer constant C_tau");
    add_sweep_flags(sweep_ctau_cmd);
    sweep_ctau_cmd->add_option("--grid", grid, "C_tau grid (default 2^-12..2^12)")
        ->delimiter(',');

    auto* sweep_rho_cmd = app.add_subcommand("sweep-rho", "sweep the planted-partition rho");
    add_sweep_flags(sweep_rho_cmd);
    sweep_rho_cmd->add_option("--grid", grid, "rho grid (default 0,0.05,...,0.5)")
        ->delimiter(',');
    sweep_rho_cmd->add_option("--c-tau", sweep_ctau, "regularizer constant C_tau");

    auto* trend_cmd = app.add_subcommand("trend-n", "error trend across network sizes");
    add_sweep_flags(trend_cmd);
    trend_cmd->add_option("--n-grid", grid, "n grid (default 250,500,1000,2000)")
        ->delimiter(',');
    trend_cmd->add_option("--c-tau", sweep_ctau, "regularizer constant C_tau");
    trend_cmd->add_option("--degree-mode", degree_mode,
                          "fixed-alpha (degree scales with n) or fixed-degree");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (generate->parsed()) return run_generate(gen_flags, gen_out);

        if (fit_cmd->parsed()) {
            OccamOptions opts;
            opts.c_tau = fit_ctau;
            opts.tau_override = fit_tau;
            opts.threshold = fit_threshold;
            opts.seed = fit_seed;
            const auto files = run_single_fit(fit_graph, fit_k, opts, fit_out);
            std::cerr << "wrote " << files.zhat_path << ", " << files.gamma_path << ", "
                      << files.meta_path << "\n";
            return 0;
        }

        if (eval_cmd->parsed()) {
            std::ifstream truth_in(eval_truth), est_in(eval_estimate);
            if (!truth_in) throw Error("cannot open " + eval_truth);
            if (!est_in) throw Error("cannot open " + eval_estimate);
            const Matrix truth = read_matrix_csv(truth_in);
            const Matrix estimate = read_matrix_csv(est_in);
            const double t = eval_threshold ? *eval_threshold
                                            : 1.0 / static_cast<double>(truth.cols());
            const MembershipMatrix z_true(truth), z_est(estimate);
            const auto score = exnvi(BinaryMembership(threshold_binary(z_true, t)),
                                     BinaryMembership(threshold_binary(z_est, t)));
            write_key_values(std::cout,
                             {{"exnvi", format_double(score.value)},
                              {"membership_error", format_double(membership_error(z_est, z_true))},
                              {"threshold", format_double(t)}});
            return 0;
        }

        ExperimentSpec spec{ExperimentKind::CtauSweep,
                            {},
                            reps,
                            sampler_config(sweep_flags),
                            OccamOptions{},
                            sweep_flags.seed,
                            sweep_out,
                            timing,
                            threads,
                            TrendDegree::FixedDegree};
        spec.opts.c_tau = sweep_ctau;

        if (sweep_ctau_cmd->parsed()) {
            spec.kind = ExperimentKind::CtauSweep;
            spec.grid = grid.empty() ? default_ctau_grid() : grid;
            return emit_sweep(run_ctau_sweep(spec), sweep_out, timing);
        }
        if (sweep_rho_cmd->parsed()) {
            spec.kind = ExperimentKind::RhoSweep;
            spec.grid = grid.empty() ? default_rho_grid() : grid;
            return emit_sweep(run_rho_sweep(spec), sweep_out, timing);
        }
        if (trend_cmd->parsed()) {
            spec.kind = ExperimentKind::NTrend;
            spec.grid = grid.empty() ? std::vector<double>{250, 500, 1000, 2000} : grid;
            if (degree_mode == "fixed-alpha")
                spec.trend_degree = TrendDegree::FixedAlpha;
            else if (degree_mode == "fixed-degree")
                spec.trend_degree = TrendDegree::FixedDegree;
            else
                throw Error("unknown --degree-mode '" + degree_mode + "'");
            return emit_sweep(run_n_trend(spec), sweep_out, timing);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
