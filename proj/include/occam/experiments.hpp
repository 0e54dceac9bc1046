#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "occam/fit.hpp"
#include "occam/io.hpp"
#include "occam/metrics.hpp"
#include "occam/sampler.hpp"

namespace occam {

// Simulation harness. Every (grid point, replication) cell owns an rng
// stream keyed by (master seed, grid index, replication index), so output
// is byte-identical regardless of how many threads execute the sweep, and
// one diverged replication is recorded as a failed row without aborting
// the rest.

enum class ExperimentKind { CtauSweep, RhoSweep, NTrend, SingleFit };

/// Degree handling along an n trend. FixedDegree keeps the target degree
/// constant, which keeps n * alpha_n constant (the boundary regime where
/// the consistency rate does not improve); FixedAlpha scales the target
/// degree proportionally to n, holding alpha_n fixed so n * alpha_n grows.
enum class TrendDegree { FixedDegree, FixedAlpha };

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::CtauSweep;
    std::vector<double> grid;
    int replications = 50;
    SamplerConfig base;
    OccamOptions opts;
    std::uint64_t master_seed = 0;
    std::string output_path;
    bool include_timing = false;  // wall time varies run to run; off by default
    int threads = 0;              // 0 = hardware concurrency
    TrendDegree trend_degree = TrendDegree::FixedDegree;
};

struct ExperimentRow {
    double swept_value = 0.0;
    int replication_index = 0;
    bool ok = false;
    double exnvi_value = 0.0;
    double membership_error_value = 0.0;
    double alpha_hat = 0.0;
    double tau = 0.0;
    double wall_time_ms = 0.0;
    std::string error;
};

struct ExperimentOutcome {
    std::vector<ExperimentRow> rows;  // ordered by (grid index, replication)
    int failed_count = 0;
};

/// Default C_tau grid: {2^-12, 2^-10, ..., 2^10, 2^12}.
inline std::vector<double> default_ctau_grid() {
    std::vector<double> grid;
    for (int e = -12; e <= 12; e += 2) grid.push_back(std::pow(2.0, e));
    return grid;
}

/// Default rho grid: 0, 0.05, ..., 0.5.
inline std::vector<double> default_rho_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(0.05 * i);
    return grid;
}

namespace detail {

using RowConfigure = std::function<void(SamplerConfig&, OccamOptions&, double)>;

inline ExperimentRow run_row(const ExperimentSpec& spec, const RowConfigure& configure,
                             int grid_index, int rep) {
    ExperimentRow row;
    row.swept_value = spec.grid[static_cast<std::size_t>(grid_index)];
    row.replication_index = rep;
    const auto start = std::chrono::steady_clock::now();
    try {
        SamplerConfig cfg = spec.base;
        OccamOptions opts = spec.opts;
        configure(cfg, opts, row.swept_value);
        const std::uint64_t row_seed = derive_seed(
            spec.master_seed, static_cast<std::uint64_t>(grid_index), static_cast<std::uint64_t>(rep));
        cfg.seed = derive_seed(row_seed, 0, 0);
        opts.seed = derive_seed(row_seed, 1, 0);

        const GeneratedNetwork net = generate_network(cfg);
        const OccamResult result = fit(net.a, cfg.k, opts);

        const double threshold = opts.threshold ? *opts.threshold : 1.0 / cfg.k;
        const BinaryMembership truth(threshold_binary(net.z, threshold));
        const BinaryMembership estimate(result.binary);
        row.exnvi_value = exnvi(truth, estimate).value;
        row.membership_error_value = membership_error(result.z_hat, net.z);
        row.alpha_hat = result.alpha_hat;
        row.tau = result.tau;
        row.ok = true;
    } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
    }
    row.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    return row;
}

inline ExperimentOutcome run_grid(const ExperimentSpec& spec, const RowConfigure& configure) {
    if (spec.grid.empty()) throw InvalidProfile("experiment grid is empty");
    if (spec.replications < 1) throw InvalidProfile("need at least one replication");

    const std::size_t total = spec.grid.size() * static_cast<std::size_t>(spec.replications);
    ExperimentOutcome outcome;
    outcome.rows.resize(total);

    unsigned workers = spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= total) return;
            const int grid_index = static_cast<int>(idx / spec.replications);
            const int rep = static_cast<int>(idx % spec.replications);
            outcome.rows[idx] = run_row(spec, configure, grid_index, rep);
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (const auto& row : outcome.rows)
        if (!row.ok) ++outcome.failed_count;
    return outcome;
}

inline std::string sanitize_csv_field(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

}  // namespace detail

/// Sweep of the regularization constant C_tau; each cell regenerates its
/// network, fits with the swept constant, thresholds both memberships at
/// 1/K, and records exNVI and membership error.
inline ExperimentOutcome run_ctau_sweep(const ExperimentSpec& spec) {
    return detail::run_grid(
        spec, [](SamplerConfig&, OccamOptions& opts, double swept) { opts.c_tau = swept; });
}

/// Sweep of the planted-partition off-diagonal rho; tau comes from the
/// recommended rule with the configured C_tau.
inline ExperimentOutcome run_rho_sweep(const ExperimentSpec& spec) {
    return detail::run_grid(spec, [](SamplerConfig& cfg, OccamOptions&, double swept) {
        cfg.b = planted_partition_b(cfg.k, swept);
    });
}

/// Trend in n at fixed model configuration. In FixedAlpha mode the target
/// degree scales as dbar * n / base_n, holding the density parameter fixed.
inline ExperimentOutcome run_n_trend(const ExperimentSpec& spec) {
    for (std::size_t i = 1; i < spec.grid.size(); ++i)
        if (spec.grid[i] <= spec.grid[i - 1])
            throw InvalidProfile("n grid must be strictly increasing");
    const int base_n = spec.base.n;
    const double base_degree = spec.base.target_degree;
    const TrendDegree mode = spec.trend_degree;
    return detail::run_grid(
        spec, [base_n, base_degree, mode](SamplerConfig& cfg, OccamOptions&, double swept) {
            cfg.n = static_cast<int>(swept);
            if (mode == TrendDegree::FixedAlpha)
                cfg.target_degree = base_degree * swept / base_n;
        });
}

/// CSV with a versioned schema line. Failed rows keep their place with
/// empty metric fields and the sanitized error message.
inline void write_rows_csv(std::ostream& out, const ExperimentOutcome& outcome,
                           bool include_timing) {
    out << "# schema=1\n";
    out << "swept_value,replication,status,exnvi,membership_error,alpha_hat,tau";
    if (include_timing) out << ",wall_time_ms";
    out << ",error\n";
    for (const auto& row : outcome.rows) {
        out << format_double(row.swept_value) << ',' << row.replication_index << ','
            << (row.ok ? "ok" : "failed") << ',';
        if (row.ok) {
            out << format_double(row.exnvi_value) << ',' << format_double(row.membership_error_value)
                << ',' << format_double(row.alpha_hat) << ',' << format_double(row.tau);
        } else {
            out << ",,,";
        }
        if (include_timing) out << ',' << format_double(row.wall_time_ms);
        out << ',' << detail::sanitize_csv_field(row.error) << '\n';
    }
}

inline std::string rows_to_csv(const ExperimentOutcome& outcome, bool include_timing = false) {
    std::ostringstream ss;
    write_rows_csv(ss, outcome, include_timing);
    return ss.str();
}

/// Output files produced by a single fit.
struct SingleFitFiles {
    std::string zhat_path;
    std::string gamma_path;
    std::string meta_path;
};

/// Fits one graph from an edge-list file and writes Z-hat, Gamma-hat, and
/// a key=value metadata block next to `out_prefix`.
inline SingleFitFiles run_single_fit(const std::string& graph_path, int k,
                                     const OccamOptions& opts, const std::string& out_prefix) {
    std::ifstream in(graph_path);
    if (!in) throw Error("cannot open graph file: " + graph_path);
    const AdjacencyMatrix a = read_edge_list(in);
    const OccamResult result = fit(a, k, opts);

    SingleFitFiles files{out_prefix + ".zhat.csv", out_prefix + ".gamma.csv",
                         out_prefix + ".meta"};
    {
        std::ofstream z(files.zhat_path);
        if (!z) throw Error("cannot write " + files.zhat_path);
        write_matrix_csv(z, result.z_hat.entries());
    }
    {
        std::ofstream g(files.gamma_path);
        if (!g) throw Error("cannot write " + files.gamma_path);
        write_binary_csv(g, result.binary);
    }
    {
        std::ofstream m(files.meta_path);
        if (!m) throw Error("cannot write " + files.meta_path);
        std::string eigs;
        for (Eigen::Index i = 0; i < result.x_hat.eigenvalues.size(); ++i) {
            if (i) eigs += ' ';
            eigs += format_double(result.x_hat.eigenvalues(i));
        }
        const double threshold = opts.threshold ? *opts.threshold : 1.0 / k;
        write_key_values(m, {{"n", std::to_string(a.nodes())},
                             {"k", std::to_string(k)},
                             {"alpha_hat", format_double(result.alpha_hat)},
                             {"tau", format_double(result.tau)},
                             {"loss", format_double(result.loss)},
                             {"eigenvalues", eigs},
                             {"threshold", format_double(threshold)},
                             {"seed", std::to_string(opts.seed)}});
    }
    return files;
}

}  // namespace occam
