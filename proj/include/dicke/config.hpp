#pragma once
// Run configuration. Stored as a JSON document:
//
// {
//   "schema_version": 1,
//   "model":      {"n_qubits": 21, "qubit_freq": 1, "field_freq": 1, "fock_cut": 60, "sector": "parity_even"},
//   "ramp":       {"gamma": -6}                      (or {"velocity": 0.015625})
//   "integrator": {"method": "rk4_fixed", "step": 0, "tolerance": 1e-11, "renormalize": false,
//                  "sample_count": 400, "energy_shift": true},
//   "outputs":    {"record_csv": "records.csv", "populations": false, "schmidt_full": false,
//                  "heatmap_svg": ""},
//   "sweep":      {"gamma_min": -12, "gamma_max": 0, "gamma_step": 1},
//   "analysis":   {"gap_threshold": 1e-3, "convergence_tolerance": 1e-4}
// }
//
// Every section and key is optional; missing keys keep their defaults.
// Command-line flags are applied after the file, so they take precedence.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dicke/integrator.hpp"
#include "dicke/model.hpp"
#include "dicke/ramp.hpp"

namespace dicke {

inline constexpr int kSchemaVersion = 1;

struct SweepGrid {
    double gamma_min = -12.0;
    double gamma_max = 0.0;
    double gamma_step = 1.0;

    std::vector<double> values() const;
};

struct OutputOptions {
    std::string record_csv = "records.csv";
    bool populations = false;
    bool schmidt_full = false;
    std::string heatmap_svg;  // empty: no heatmap
};

struct RunConfig {
    ModelParams model{21, 1.0, 1.0, 60, Sector::parity_even};
    std::optional<double> gamma = -6.0;
    std::optional<double> velocity;
    IntegratorSettings integrator{};
    OutputOptions outputs{};
    std::optional<SweepGrid> sweep;
    double gap_threshold = 1e-3;
    double convergence_tolerance = 1e-4;

    // Throws std::invalid_argument.
    void validate() const;
    RampProtocol protocol() const;
    RampProtocol protocol_for_gamma(double g) const;
    double effective_gamma() const;
};

// Parse errors and schema violations throw std::invalid_argument.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);
std::string dump_config(const RunConfig& config);

}  // namespace dicke
