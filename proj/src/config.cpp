#include "dicke/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dicke {

using nlohmann::json;

std::vector<double> SweepGrid::values() const {
    if (!(gamma_step > 0.0)) throw std::invalid_argument("gamma_step must be > 0");
    if (gamma_max < gamma_min) throw std::invalid_argument("gamma_max must be >= gamma_min");
    std::vector<double> out;
    for (long i = 0;; ++i) {
        const double g = gamma_min + static_cast<double>(i) * gamma_step;
        if (g > gamma_max + 1e-9 * gamma_step) break;
        out.push_back(g);
    }
    return out;
}

void RunConfig::validate() const {
    model.validate();
    integrator.validate();
    if (gamma && velocity) throw std::invalid_argument("ramp takes either gamma or velocity, not both");
    if (!gamma && !velocity) throw std::invalid_argument("ramp needs gamma or velocity");
    if (sweep && sweep->values().empty()) throw std::invalid_argument("sweep grid is empty");
    if (!(gap_threshold > 0.0)) throw std::invalid_argument("gap_threshold must be > 0");
    if (!(convergence_tolerance > 0.0)) throw std::invalid_argument("convergence_tolerance must be > 0");
    if (outputs.record_csv.empty()) throw std::invalid_argument("outputs.record_csv must not be empty");
    (void)protocol();
}

RampProtocol RunConfig::protocol() const {
    if (velocity) return RampProtocol::triangular(*velocity);
    if (gamma) return RampProtocol::from_gamma(*gamma);
    throw std::invalid_argument("ramp needs gamma or velocity");
}

RampProtocol RunConfig::protocol_for_gamma(double g) const { return RampProtocol::from_gamma(g); }

double RunConfig::effective_gamma() const { return velocity ? std::log2(*velocity) : *gamma; }

namespace {

template <typename T>
void read_opt(const json& obj, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config key '") + key + "': " + e.what());
    }
}

const json& section(const json& root, const char* key) {
    static const json empty = json::object();
    if (!root.contains(key)) return empty;
    const json& s = root.at(key);
    if (!s.is_object()) throw std::invalid_argument(std::string("config section '") + key + "' must be an object");
    return s;
}

}  // namespace

namespace {

RunConfig parse_document(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw std::invalid_argument("config root must be an object");

    int version = kSchemaVersion;
    read_opt(root, "schema_version", version);
    if (version != kSchemaVersion) {
        throw std::invalid_argument("unsupported schema_version " + std::to_string(version));
    }

    RunConfig cfg;
    const json& model = section(root, "model");
    read_opt(model, "n_qubits", cfg.model.n_qubits);
    read_opt(model, "qubit_freq", cfg.model.qubit_freq);
    read_opt(model, "field_freq", cfg.model.field_freq);
    read_opt(model, "fock_cut", cfg.model.fock_cut);
    if (model.contains("sector")) cfg.model.sector = parse_sector(model.at("sector").get<std::string>());

    const json& ramp = section(root, "ramp");
    if (ramp.contains("velocity")) {
        cfg.gamma.reset();
        cfg.velocity = ramp.at("velocity").get<double>();
    }
    if (ramp.contains("gamma")) cfg.gamma = ramp.at("gamma").get<double>();

    const json& integ = section(root, "integrator");
    if (integ.contains("method")) cfg.integrator.method = parse_method(integ.at("method").get<std::string>());
    read_opt(integ, "step", cfg.integrator.step);
    read_opt(integ, "tolerance", cfg.integrator.tolerance);
    read_opt(integ, "renormalize", cfg.integrator.renormalize);
    read_opt(integ, "sample_count", cfg.integrator.sample_count);
    read_opt(integ, "energy_shift", cfg.integrator.energy_shift);

    const json& out = section(root, "outputs");
    read_opt(out, "record_csv", cfg.outputs.record_csv);
    read_opt(out, "populations", cfg.outputs.populations);
    read_opt(out, "schmidt_full", cfg.outputs.schmidt_full);
    if (out.contains("heatmap_svg") && !out.at("heatmap_svg").is_null()) {
        read_opt(out, "heatmap_svg", cfg.outputs.heatmap_svg);
    }

    if (root.contains("sweep") && !root.at("sweep").is_null()) {
        const json& sw = section(root, "sweep");
        SweepGrid grid;
        read_opt(sw, "gamma_min", grid.gamma_min);
        read_opt(sw, "gamma_max", grid.gamma_max);
        read_opt(sw, "gamma_step", grid.gamma_step);
        cfg.sweep = grid;
    }

    const json& analysis = section(root, "analysis");
    read_opt(analysis, "gap_threshold", cfg.gap_threshold);
    read_opt(analysis, "convergence_tolerance", cfg.convergence_tolerance);

    cfg.validate();
    return cfg;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    try {
        return parse_document(json_text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string dump_config(const RunConfig& cfg) {
    json root;
    root["schema_version"] = kSchemaVersion;
    root["model"] = {{"n_qubits", cfg.model.n_qubits},
                     {"qubit_freq", cfg.model.qubit_freq},
                     {"field_freq", cfg.model.field_freq},
                     {"fock_cut", cfg.model.fock_cut},
                     {"sector", std::string(sector_name(cfg.model.sector))}};
    if (cfg.velocity) {
        root["ramp"] = {{"velocity", *cfg.velocity}};
    } else {
        root["ramp"] = {{"gamma", cfg.gamma.value_or(0.0)}};
    }
    root["integrator"] = {{"method", std::string(method_name(cfg.integrator.method))},
                          {"step", cfg.integrator.step},
                          {"tolerance", cfg.integrator.tolerance},
                          {"renormalize", cfg.integrator.renormalize},
                          {"sample_count", cfg.integrator.sample_count},
                          {"energy_shift", cfg.integrator.energy_shift}};
    root["outputs"] = {{"record_csv", cfg.outputs.record_csv},
                       {"populations", cfg.outputs.populations},
                       {"schmidt_full", cfg.outputs.schmidt_full},
                       {"heatmap_svg", cfg.outputs.heatmap_svg}};
    if (cfg.sweep) {
        root["sweep"] = {{"gamma_min", cfg.sweep->gamma_min},
                         {"gamma_max", cfg.sweep->gamma_max},
                         {"gamma_step", cfg.sweep->gamma_step}};
    }
    root["analysis"] = {{"gap_threshold", cfg.gap_threshold}, {"convergence_tolerance", cfg.convergence_tolerance}};
    return root.dump();
}

}  // namespace dicke
