#include "dicke/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dicke/kernels.hpp"
#include "dicke/lzs.hpp"
#include "dicke/oracle.hpp"
#include "dicke/svg.hpp"

#ifndef DICKE_VERSION
#define DICKE_VERSION "unknown"
#endif

namespace dicke {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string at_time(double t) {
    std::ostringstream s;
    s.precision(10);
    s << " (sample t=" << t << ")";
    return s.str();
}

void record_sample(RunResult& out, const SamplePoint& sp, int n_qubits, ObservableRecord&& obs) {
    if (std::abs(obs.parity - 1.0) > kParityTolerance) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "parity " << obs.parity << " deviates from +1 by more than " << kParityTolerance;
        throw NumericalError(msg.str() + at_time(sp.t));
    }
    if (std::abs(obs.norm - 1.0) > kNormDriftAbort) {
        std::ostringstream msg;
        msg << "norm drift " << std::abs(obs.norm - 1.0) << " exceeds " << kNormDriftAbort;
        throw NumericalError(msg.str() + at_time(sp.t));
    }
    if (obs.monogamy_violated) ++out.monogamy_flags;
    out.rows.push_back(make_row(sp.t, sp.lambda, out.gamma, n_qubits, obs));
    out.qubit_populations.push_back(std::move(obs.populations.qubit));
    out.boson_populations.push_back(std::move(obs.populations.boson));
    out.spectra.push_back(std::move(obs.spectrum));
}

template <typename Measure>
auto guarded(const SamplePoint& sp, Measure&& m) {
    try {
        return m();
    } catch (const NumericalError& e) {
        throw NumericalError(e.what() + at_time(sp.t));
    }
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot write " + path.string());
    return os;
}

fs::path sibling(const fs::path& record_path, std::string_view suffix) {
    fs::path p = record_path;
    p.replace_filename(record_path.stem().string() + std::string(suffix));
    return p;
}

std::string csv_safe(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

}  // namespace

RunResult simulate(const ModelParams& model, const RampProtocol& protocol, const IntegratorSettings& settings,
                   bool use_oracle) {
    model.validate();
    settings.validate();
    const auto start = std::chrono::steady_clock::now();
    RunResult out;
    out.gamma = protocol.kind() == RampProtocol::Kind::triangular ? protocol.gamma() : kNaN;
    const auto samples = static_cast<std::size_t>(settings.sample_count);
    out.rows.reserve(samples);

    if (use_oracle) {
        const oracle::FullSpaceModel fm{model.n_qubits, model.fock_cut, model.qubit_freq, model.field_freq};
        auto traj = oracle::full_evolve(fm, protocol, settings, [&](const SamplePoint& sp, const oracle::FullSpaceState& s) {
            record_sample(out, sp, model.n_qubits, guarded(sp, [&] { return oracle::full_measure(s); }));
        });
        out.summary = std::move(traj.summary);
    } else {
        const BasisPtr basis = build_basis(model);
        auto traj = evolve(initial_state(basis), protocol, settings, [&](const SamplePoint& sp, const StateVector& s) {
            record_sample(out, sp, model.n_qubits, guarded(sp, [&] { return measure(s); }));
        });
        out.summary = std::move(traj.summary);
    }
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

RunResult simulate(const RunConfig& config, bool use_oracle) {
    config.validate();
    return simulate(config.model, config.protocol(), config.integrator, use_oracle);
}

std::vector<std::pair<std::string, std::string>> run_metadata(const RunConfig& config, const RunResult& result) {
    std::vector<std::pair<std::string, std::string>> meta;
    meta.emplace_back("version", DICKE_VERSION);
    const auto flat = nlohmann::json::parse(dump_config(config)).flatten();
    for (const auto& [key, value] : flat.items()) {
        std::string k = key.substr(1);
        std::replace(k.begin(), k.end(), '/', '.');
        meta.emplace_back(k, value.is_string() ? value.get<std::string>() : value.dump());
    }
    meta.emplace_back("isa", std::string(kernels::isa_name(kernels::active().isa)));
    meta.emplace_back("step_used", format_number(result.summary.step_used));
    meta.emplace_back("steps", std::to_string(result.summary.steps));
    meta.emplace_back("rejected_steps", std::to_string(result.summary.rejected_steps));
    meta.emplace_back("max_norm_drift", format_number(result.summary.max_norm_drift));
    meta.emplace_back("renormalized", result.summary.renormalized ? "true" : "false");
    meta.emplace_back("monogamy_flags", std::to_string(result.monogamy_flags));
    meta.emplace_back("wall_time_s", format_number(result.wall_seconds));
    return meta;
}

void write_run(const fs::path& record_path, const RunConfig& config, const RunResult& result) {
    RecordFile file{run_metadata(config, result), result.rows};
    {
        auto os = open_out(record_path);
        write_records(os, file);
    }
    std::vector<double> times, lambdas;
    for (const auto& r : result.rows) {
        times.push_back(r.t);
        lambdas.push_back(r.lambda);
    }
    if (config.outputs.populations) {
        auto q = open_out(sibling(record_path, "_populations_qubit.csv"));
        write_vector_rows(q, "k", times, lambdas, result.qubit_populations);
        auto b = open_out(sibling(record_path, "_populations_boson.csv"));
        write_vector_rows(b, "n", times, lambdas, result.boson_populations);
    }
    if (config.outputs.schmidt_full) {
        auto s = open_out(sibling(record_path, "_schmidt_spectrum.csv"));
        write_vector_rows(s, "s", times, lambdas, result.spectra);
    }
}

RunResult run_single(const RunConfig& config, const fs::path& out_dir, bool use_oracle) {
    RunResult result = simulate(config, use_oracle);
    write_run(out_dir / config.outputs.record_csv, config, result);
    return result;
}

std::size_t SweepOutcome::failures() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.result; }));
}

std::string gamma_tag(double gamma) { return "gamma_" + format_number(gamma); }

SweepOutcome run_sweep(const RunConfig& config, unsigned threads, const std::optional<fs::path>& out_dir) {
    config.validate();
    if (!config.sweep) throw std::invalid_argument("sweep grid missing from config");
    const std::vector<double> gammas = config.sweep->values();

    SweepOutcome outcome;
    outcome.rows.resize(gammas.size());
    for (std::size_t i = 0; i < gammas.size(); ++i) outcome.rows[i].gamma = gammas[i];
    {
        const RampProtocol p = config.protocol_for_gamma(gammas.front());
        for (double t : sample_times(p, config.integrator.sample_count)) outcome.lambdas.push_back(p.lambda_at(t));
    }

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(gammas.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < outcome.rows.size();) {
            SweepRow& row = outcome.rows[i];
            RunConfig cfg = config;
            cfg.gamma = row.gamma;
            cfg.velocity.reset();
            cfg.outputs.record_csv = gamma_tag(row.gamma) + ".csv";
            try {
                RunResult r = simulate(cfg.model, cfg.protocol(), cfg.integrator);
                if (out_dir) write_run(*out_dir / cfg.outputs.record_csv, cfg, r);
                row.result = std::move(r);
            } catch (const std::exception& e) {
                row.cause = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return outcome;
}

SweepMatrix sweep_matrix(const SweepOutcome& sweep, std::string_view column) {
    const std::size_t col = column_index(column);
    SweepMatrix m;
    m.lambdas = sweep.lambdas;
    for (const SweepRow& row : sweep.rows) {
        m.gammas.push_back(row.gamma);
        std::vector<double> v(sweep.lambdas.size(), kNaN);
        if (row.result) {
            for (std::size_t j = 0; j < v.size() && j < row.result->rows.size(); ++j) v[j] = dicke::column(row.result->rows[j], col);
        }
        m.values.push_back(std::move(v));
    }
    return m;
}

namespace {

void write_matrix_header(std::ostream& os, std::string_view observable, const std::vector<double>& lambdas,
                         bool with_index) {
    os << "# observable: " << observable << '\n';
    os << "gamma,status,cause" << (with_index ? ",index" : "");
    for (std::size_t j = 0; j < lambdas.size(); ++j) os << ',' << j;
    os << '\n' << "lambda,," << (with_index ? "," : "");
    for (double l : lambdas) os << ',' << format_number(l);
    os << '\n';
}

void write_row_prefix(std::ostream& os, const SweepRow& row) {
    os << format_number(row.gamma) << ',' << (row.result ? "ok" : "missing") << ',' << csv_safe(row.cause);
}

void write_population_matrix(const fs::path& path, std::string_view name, const SweepOutcome& sweep, bool qubit) {
    auto os = open_out(path);
    write_matrix_header(os, name, sweep.lambdas, true);
    for (const SweepRow& row : sweep.rows) {
        if (!row.result) {
            write_row_prefix(os, row);
            os << ",";
            for (std::size_t j = 0; j < sweep.lambdas.size(); ++j) os << ",nan";
            os << '\n';
            continue;
        }
        const auto& pops = qubit ? row.result->qubit_populations : row.result->boson_populations;
        const std::size_t width = pops.empty() ? 0 : pops.front().size();
        for (std::size_t k = 0; k < width; ++k) {
            write_row_prefix(os, row);
            os << ',' << k;
            for (const auto& p : pops) os << ',' << format_number(p[k]);
            os << '\n';
        }
    }
}

}  // namespace

void write_sweep_matrices(const fs::path& out_dir, const RunConfig& config, const SweepOutcome& sweep) {
    static constexpr std::array<std::pair<std::string_view, std::string_view>, 3> kMatrices{{
        {"schmidt_gap", "matrix_schmidt_gap"},
        {"one_minus_xi_b2", "matrix_boson_squeezing"},
        {"spin_concurrence", "matrix_spin_concurrence"},
    }};
    for (const auto& [column, stem] : kMatrices) {
        const SweepMatrix m = sweep_matrix(sweep, column);
        auto os = open_out(out_dir / (std::string(stem) + ".csv"));
        write_matrix_header(os, column, m.lambdas, false);
        for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
            write_row_prefix(os, sweep.rows[i]);
            for (double v : m.values[i]) os << ',' << format_number(v);
            os << '\n';
        }
        if (!config.outputs.heatmap_svg.empty()) {
            fs::path svg = config.outputs.heatmap_svg;
            if (svg.is_relative()) svg = out_dir / svg;
            svg.replace_filename(svg.stem().string() + "_" + std::string(column) + ".svg");
            auto s = open_out(svg);
            write_heatmap_svg(s, m, column);
        }
    }
    write_population_matrix(out_dir / "matrix_populations_qubit.csv", "populations_qubit", sweep, true);
    write_population_matrix(out_dir / "matrix_populations_boson.csv", "populations_boson", sweep, false);
}

GapClosure gap_closure(double gamma, const std::vector<RecordRow>& rows, double gap_threshold) {
    if (rows.empty()) throw std::invalid_argument("gap closure needs a non-empty record");
    GapClosure g;
    g.gamma = gamma;
    const auto turn = static_cast<std::size_t>(
        std::max_element(rows.begin(), rows.end(), [](const RecordRow& a, const RecordRow& b) { return a.lambda < b.lambda; }) -
        rows.begin());
    double best_boson = -std::numeric_limits<double>::infinity();
    double best_spin = -std::numeric_limits<double>::infinity();
    g.lambda_max_spin_squeeze = kNaN;
    for (std::size_t i = 0; i <= turn; ++i) {
        const RecordRow& r = rows[i];
        if (!g.lambda_close && r.schmidt_gap < gap_threshold) g.lambda_close = r.lambda;
        if (r.one_minus_xi_b2 > best_boson) {
            best_boson = r.one_minus_xi_b2;
            g.lambda_max_boson_squeeze = r.lambda;
        }
        if (!std::isnan(r.spin_concurrence) && r.spin_concurrence > best_spin) {
            best_spin = r.spin_concurrence;
            g.lambda_max_spin_squeeze = r.lambda;
        }
    }
    g.gap_at_turn = rows[turn].schmidt_gap;
    g.gap_at_end = rows.back().schmidt_gap;
    return g;
}

std::vector<GapClosure> gap_closure_scan(const SweepOutcome& sweep, double gap_threshold) {
    std::vector<GapClosure> out;
    for (const SweepRow& row : sweep.rows) {
        if (row.result) out.push_back(gap_closure(row.gamma, row.result->rows, gap_threshold));
    }
    return out;
}

std::vector<GapClosure> gap_closure_scan(const fs::path& sweep_dir, double gap_threshold) {
    std::vector<GapClosure> out;
    if (!fs::is_directory(sweep_dir)) throw std::invalid_argument("not a directory: " + sweep_dir.string());
    for (const auto& entry : fs::directory_iterator(sweep_dir)) {
        const std::string stem = entry.path().stem().string();
        if (!entry.is_regular_file() || !stem.starts_with("gamma_") || entry.path().extension() != ".csv") continue;
        try {
            (void)parse_number(std::string_view(stem).substr(6));
        } catch (const std::runtime_error&) {
            continue;  // sidecar file
        }
        std::ifstream in(entry.path());
        const RecordFile file = read_records(in);
        if (file.rows.empty()) continue;
        out.push_back(gap_closure(file.rows.front().gamma, file.rows, gap_threshold));
    }
    if (out.empty()) throw std::invalid_argument("no gamma_*.csv records in " + sweep_dir.string());
    std::sort(out.begin(), out.end(), [](const GapClosure& a, const GapClosure& b) { return a.gamma < b.gamma; });
    return out;
}

void write_gap_closure(std::ostream& os, const std::vector<GapClosure>& table) {
    os << "gamma,lambda_close,lambda_max_boson_squeeze,lambda_max_spin_squeeze,gap_at_turn,gap_at_end\n";
    for (const GapClosure& g : table) {
        os << format_number(g.gamma) << ',' << (g.lambda_close ? format_number(*g.lambda_close) : "open") << ','
           << format_number(g.lambda_max_boson_squeeze) << ',' << format_number(g.lambda_max_spin_squeeze) << ','
           << format_number(g.gap_at_turn) << ',' << format_number(g.gap_at_end) << '\n';
    }
}

double ConvergenceReport::worst_change() const {
    double worst = 0.0;
    for (const auto& s : steps)
        for (double c : s.max_change) worst = std::max(worst, c);
    return worst;
}

bool ConvergenceReport::passed(double boundary_limit) const {
    if (worst_change() > tolerance) return false;
    return std::all_of(peak_boundary.begin(), peak_boundary.end(), [&](double b) { return b < boundary_limit; });
}

ConvergenceReport compare_runs(const std::vector<int>& chis, const std::vector<RunResult>& runs, double tolerance) {
    if (chis.size() != runs.size()) throw std::invalid_argument("one run per chi expected");
    ConvergenceReport rep;
    rep.chis = chis;
    rep.tolerance = tolerance;
    for (const RunResult& r : runs) {
        double peak = 0.0;
        for (const auto& row : r.rows) peak = std::max(peak, row.boundary_population);
        rep.peak_boundary.push_back(peak);
    }
    for (std::size_t i = 1; i < runs.size(); ++i) {
        const auto& a = runs[i - 1].rows;
        const auto& b = runs[i].rows;
        if (a.size() != b.size()) throw std::invalid_argument("runs have different sample counts");
        ConvergenceStep step{chis[i - 1], chis[i], std::vector<double>(kConvergenceColumns.size(), 0.0)};
        for (std::size_t c = 0; c < kConvergenceColumns.size(); ++c) {
            const std::size_t col = column_index(kConvergenceColumns[c]);
            for (std::size_t j = 0; j < a.size(); ++j) {
                const double x = column(a[j], col), y = column(b[j], col);
                if (std::isnan(x) && std::isnan(y)) continue;
                const double d = std::abs(x - y);
                step.max_change[c] = std::max(step.max_change[c], std::isnan(d) ? std::numeric_limits<double>::infinity() : d);
            }
        }
        rep.steps.push_back(std::move(step));
    }
    return rep;
}

ConvergenceReport convergence_check(const RunConfig& config, const std::vector<int>& chis) {
    if (chis.size() < 2) throw std::invalid_argument("convergence check needs at least two chi values");
    if (!std::is_sorted(chis.begin(), chis.end()) || std::adjacent_find(chis.begin(), chis.end()) != chis.end()) {
        throw std::invalid_argument("chi values must be strictly ascending");
    }
    std::vector<RunResult> runs;
    for (int chi : chis) {
        RunConfig cfg = config;
        cfg.model.fock_cut = chi;
        runs.push_back(simulate(cfg));
    }
    return compare_runs(chis, runs, config.convergence_tolerance);
}

void write_convergence(std::ostream& os, const ConvergenceReport& rep) {
    os << "# tolerance: " << format_number(rep.tolerance) << '\n';
    os << "chi_from,chi_to,column,max_change,pass\n";
    for (const auto& s : rep.steps) {
        for (std::size_t c = 0; c < kConvergenceColumns.size(); ++c) {
            os << s.chi_from << ',' << s.chi_to << ',' << kConvergenceColumns[c] << ',' << format_number(s.max_change[c])
               << ',' << (s.max_change[c] <= rep.tolerance ? "pass" : "fail") << '\n';
        }
    }
    for (std::size_t i = 0; i < rep.chis.size(); ++i) {
        os << rep.chis[i] << ',' << rep.chis[i] << ",peak_boundary_population," << format_number(rep.peak_boundary[i])
           << ',' << (rep.peak_boundary[i] < kBoundaryLimit ? "pass" : "fail") << '\n';
    }
}

std::vector<LzsRow> lzs_table(const std::vector<double>& gammas, double gap) {
    std::vector<LzsRow> out;
    for (double g : gammas) {
        const double v = std::exp2(g);
        out.push_back({g, v, lzs::p_lz(gap, v), lzs::p_plus_averaged(gap, v)});
    }
    return out;
}

void write_lzs(std::ostream& os, const std::vector<LzsRow>& table) {
    os << "gamma,velocity,p_lz,p_plus_avg\n";
    for (const LzsRow& r : table) {
        os << format_number(r.gamma) << ',' << format_number(r.velocity) << ',' << format_number(r.p_lz) << ','
           << format_number(r.p_plus_avg) << '\n';
    }
}

}  // namespace dicke
