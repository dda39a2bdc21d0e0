#pragma once
// Batch drivers behind the command-line tool: single trajectories, velocity
// sweeps, gap-closure tables, Fock-cut convergence checks and LZS tables.

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dicke/config.hpp"
#include "dicke/records.hpp"

namespace dicke {

inline constexpr double kParityTolerance = 1e-8;
// Largest acceptable population on the Fock boundary n = chi.
inline constexpr double kBoundaryLimit = 1e-8;

struct RunResult {
    double gamma = 0.0;
    std::vector<RecordRow> rows;
    std::vector<std::vector<double>> qubit_populations;
    std::vector<std::vector<double>> boson_populations;
    std::vector<std::vector<double>> spectra;
    TrajectorySummary summary;
    std::size_t monogamy_flags = 0;
    double wall_seconds = 0.0;
};

// Propagates one pulse and measures every sample. Invariant violations throw
// NumericalError with the offending sample time in the message. With
// use_oracle the full product-space model is used instead (small N only).
RunResult simulate(const ModelParams& model, const RampProtocol& protocol, const IntegratorSettings& settings,
                   bool use_oracle = false);
RunResult simulate(const RunConfig& config, bool use_oracle = false);

std::vector<std::pair<std::string, std::string>> run_metadata(const RunConfig& config, const RunResult& result);

// Writes the record file and the optional sidecars next to it.
void write_run(const std::filesystem::path& record_path, const RunConfig& config, const RunResult& result);

// Runs the configured trajectory and writes <out_dir>/<outputs.record_csv>.
RunResult run_single(const RunConfig& config, const std::filesystem::path& out_dir, bool use_oracle = false);

struct SweepRow {
    double gamma = 0.0;
    std::optional<RunResult> result;  // empty when the row failed
    std::string cause;
};

struct SweepOutcome {
    std::vector<double> lambdas;  // shared by every row: lambda depends only on the sample index
    std::vector<SweepRow> rows;

    std::size_t failures() const;
};

std::string gamma_tag(double gamma);

// Rows run independently on a pool of worker threads (0: one per core). A
// failed row keeps its cause and the remaining rows continue. With an output
// directory every worker also writes its own gamma_<G>.csv record file.
SweepOutcome run_sweep(const RunConfig& config, unsigned threads,
                       const std::optional<std::filesystem::path>& out_dir = std::nullopt);
// Assembled matrix_*.csv files and optional heatmaps, written after the join.
void write_sweep_matrices(const std::filesystem::path& out_dir, const RunConfig& config, const SweepOutcome& sweep);

// Matrices as written by write_sweep_matrices: one row per gamma, one column per sample.
struct SweepMatrix {
    std::vector<double> lambdas;
    std::vector<double> gammas;
    std::vector<std::vector<double>> values;  // NaN for missing rows
};
SweepMatrix sweep_matrix(const SweepOutcome& sweep, std::string_view column);

struct GapClosure {
    double gamma = 0.0;
    std::optional<double> lambda_close;  // empty: gap stays open on the up-branch
    double lambda_max_boson_squeeze = 0.0;
    double lambda_max_spin_squeeze = 0.0;
    double gap_at_turn = 0.0;
    double gap_at_end = 0.0;
};

// Up-branch analysis of one record (samples with t <= tau).
GapClosure gap_closure(double gamma, const std::vector<RecordRow>& rows, double gap_threshold);
std::vector<GapClosure> gap_closure_scan(const SweepOutcome& sweep, double gap_threshold);
std::vector<GapClosure> gap_closure_scan(const std::filesystem::path& sweep_dir, double gap_threshold);
void write_gap_closure(std::ostream& os, const std::vector<GapClosure>& table);

inline constexpr std::array<std::string_view, 9> kConvergenceColumns{
    "photons", "jz", "order_parameter", "xi_b2", "c_w", "xi_q2", "schmidt_gap", "s1_sq", "s2_sq",
};

struct ConvergenceStep {
    int chi_from = 0;
    int chi_to = 0;
    std::vector<double> max_change;  // per kConvergenceColumns entry
};

struct ConvergenceReport {
    std::vector<int> chis;
    std::vector<double> peak_boundary;  // per chi
    std::vector<ConvergenceStep> steps;
    double tolerance = 1e-4;

    double worst_change() const;
    bool passed(double boundary_limit = kBoundaryLimit) const;
};

// Reruns the configured trajectory for each chi (ascending, at least two).
ConvergenceReport convergence_check(const RunConfig& config, const std::vector<int>& chis);
ConvergenceReport compare_runs(const std::vector<int>& chis, const std::vector<RunResult>& runs, double tolerance);
void write_convergence(std::ostream& os, const ConvergenceReport& report);

struct LzsRow {
    double gamma;
    double velocity;
    double p_lz;
    double p_plus_avg;
};
std::vector<LzsRow> lzs_table(const std::vector<double>& gammas, double gap);
void write_lzs(std::ostream& os, const std::vector<LzsRow>& table);

}  // namespace dicke
