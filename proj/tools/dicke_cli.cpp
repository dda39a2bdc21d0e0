// Command-line runner.
//
//   dicke run      one pulse, records.csv (+ sidecars)
//   dicke sweep    one pulse per gamma on a grid, per-gamma records and matrices
//   dicke scan     gap-closure table from sweep records (runs the sweep if --from is absent)
//   dicke converge rerun over a list of Fock cuts and compare
//   dicke lzs      Landau-Zener-Stuckelberg estimates on the gamma grid
//
// Exit codes: 0 success, 1 config error, 2 numerical-invariant violation,
// 3 partial sweep failure.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dicke/config.hpp"
#include "dicke/lzs.hpp"
#include "dicke/pipeline.hpp"

namespace fs = std::filesystem;
using namespace dicke;

namespace {

enum Exit { kOk = 0, kConfigError = 1, kNumericalError = 2, kPartialSweep = 3 };

struct Common {
    std::string config_path;
    std::optional<double> gamma;
    std::optional<int> n_qubits;
    std::optional<int> fock_cut;
    std::string out = ".";
    unsigned threads = 0;
    std::optional<std::uint64_t> seed;
    std::optional<double> gamma_min, gamma_max, gamma_step;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "JSON run configuration");
    cmd->add_option("--gamma", c.gamma, "log2 of the annealing velocity");
    cmd->add_option("--n-qubits", c.n_qubits, "number of qubits N");
    cmd->add_option("--fock-cut", c.fock_cut, "Fock cut chi");
    cmd->add_option("--out", c.out, "output directory")->capture_default_str();
    cmd->add_option("--threads", c.threads, "worker threads, 0 = one per core")->capture_default_str();
    cmd->add_option("--seed", c.seed, "reserved; the dynamics is deterministic");
}

void add_grid(CLI::App* cmd, Common& c) {
    cmd->add_option("--gamma-min", c.gamma_min, "first gamma of the grid");
    cmd->add_option("--gamma-max", c.gamma_max, "last gamma of the grid");
    cmd->add_option("--gamma-step", c.gamma_step, "grid spacing");
}

// Defaults, then the file, then flags.
RunConfig resolve(const Common& c, bool needs_grid) {
    RunConfig cfg = c.config_path.empty() ? RunConfig{} : load_config(c.config_path);
    if (c.gamma) {
        cfg.gamma = c.gamma;
        cfg.velocity.reset();
    }
    if (c.n_qubits) cfg.model.n_qubits = *c.n_qubits;
    if (c.fock_cut) cfg.model.fock_cut = *c.fock_cut;
    if (needs_grid || c.gamma_min || c.gamma_max || c.gamma_step) {
        SweepGrid grid = cfg.sweep.value_or(SweepGrid{});
        if (c.gamma_min) grid.gamma_min = *c.gamma_min;
        if (c.gamma_max) grid.gamma_max = *c.gamma_max;
        if (c.gamma_step) grid.gamma_step = *c.gamma_step;
        cfg.sweep = grid;
    }
    cfg.validate();
    return cfg;
}

int report_sweep(const SweepOutcome& sweep) {
    for (const SweepRow& row : sweep.rows) {
        if (!row.result) std::cerr << "gamma " << format_number(row.gamma) << " failed: " << row.cause << '\n';
    }
    const std::size_t failed = sweep.failures();
    std::cout << "sweep: " << sweep.rows.size() - failed << "/" << sweep.rows.size() << " rows ok\n";
    return failed ? kPartialSweep : kOk;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw std::invalid_argument("cannot write " + path.string());
    body(os);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Driven Dicke model: pulse dynamics, entanglement and squeezing diagnostics"};
    app.require_subcommand(1);
    Common c;

    bool use_oracle = false;
    auto* run = app.add_subcommand("run", "propagate one pulse and write its record");
    add_common(run, c);
    run->add_flag("--oracle", use_oracle, "use the full product-space reference model")->group("");

    auto* sweep = app.add_subcommand("sweep", "one pulse per gamma; record files and matrices");
    add_common(sweep, c);
    add_grid(sweep, c);

    std::string from;
    auto* scan = app.add_subcommand("scan", "gap closure and squeezing maxima per gamma");
    add_common(scan, c);
    add_grid(scan, c);
    scan->add_option("--from", from, "directory with gamma_*.csv records from an earlier sweep");

    std::vector<int> chi_list;
    auto* converge = app.add_subcommand("converge", "compare trajectories over increasing Fock cuts");
    add_common(converge, c);
    converge->add_option("--chi-list", chi_list, "ascending Fock cuts (default: chi, chi+20)")->delimiter(',');

    double gap = lzs::kDefaultGap;
    auto* lzs_cmd = app.add_subcommand("lzs", "LZS transition estimates on the gamma grid");
    add_common(lzs_cmd, c);
    add_grid(lzs_cmd, c);
    lzs_cmd->add_option("--gap", gap, "minimum gap of the avoided crossing")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        const fs::path out = c.out;
        if (run->parsed()) {
            const RunConfig cfg = resolve(c, false);
            const RunResult r = run_single(cfg, out, use_oracle);
            std::cout << (out / cfg.outputs.record_csv).string() << ": " << r.rows.size() << " samples, "
                      << r.summary.steps << " steps, " << format_number(r.wall_seconds) << " s\n";
            if (r.monogamy_flags) std::cerr << "warning: (N-1) c_w > 1 at " << r.monogamy_flags << " samples\n";
            return kOk;
        }
        if (sweep->parsed()) {
            const RunConfig cfg = resolve(c, true);
            const SweepOutcome s = run_sweep(cfg, c.threads, out);
            write_sweep_matrices(out, cfg, s);
            return report_sweep(s);
        }
        if (scan->parsed()) {
            const RunConfig cfg = resolve(c, true);
            std::vector<GapClosure> table;
            int code = kOk;
            if (!from.empty()) {
                table = gap_closure_scan(fs::path(from), cfg.gap_threshold);
            } else {
                const SweepOutcome s = run_sweep(cfg, c.threads, out);
                write_sweep_matrices(out, cfg, s);
                code = report_sweep(s);
                table = gap_closure_scan(s, cfg.gap_threshold);
            }
            write_file(out / "gap_closure.csv", [&](std::ostream& os) { write_gap_closure(os, table); });
            write_gap_closure(std::cout, table);
            return code;
        }
        if (converge->parsed()) {
            const RunConfig cfg = resolve(c, false);
            if (chi_list.empty()) chi_list = {cfg.model.fock_cut, cfg.model.fock_cut + 20};
            const ConvergenceReport rep = convergence_check(cfg, chi_list);
            write_file(out / "convergence.csv", [&](std::ostream& os) { write_convergence(os, rep); });
            write_convergence(std::cout, rep);
            if (!rep.passed()) {
                std::cerr << "convergence check failed: max change " << format_number(rep.worst_change())
                          << " (tolerance " << format_number(rep.tolerance) << ")\n";
                return kNumericalError;
            }
            return kOk;
        }
        if (lzs_cmd->parsed()) {
            const RunConfig cfg = resolve(c, true);
            const auto table = lzs_table(cfg.sweep->values(), gap);
            write_file(out / "lzs.csv", [&](std::ostream& os) { write_lzs(os, table); });
            write_lzs(std::cout, table);
            return kOk;
        }
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    return kConfigError;
}
