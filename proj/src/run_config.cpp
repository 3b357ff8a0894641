#include "becbell/run_config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "becbell/errors.hpp"
#include "becbell/node_model.hpp"

namespace becbell {
namespace {

using json = nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw StructuralError("config: " + path + ": " + what);
}

double require_number(const json& node, const std::string& path) {
    if (!node.is_number()) fail(path, "must be a number");
    return node.get<double>();
}

int require_int(const json& node, const std::string& path) {
    if (!node.is_number_integer()) fail(path, "must be an integer");
    return node.get<int>();
}

std::string require_string(const json& node, const std::string& path) {
    if (!node.is_string()) fail(path, "must be a string");
    return node.get<std::string>();
}

const json& require_object(const json& node, const std::string& path) {
    if (!node.is_object()) fail(path, "must be an object");
    return node;
}

void reject_unknown(const json& object, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    for (const auto& item : object.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) fail(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
    }
}

// Copies `overlay` keys over `base` (one level deep; values are scalars).
json merge(const json& base, const json& overlay) {
    json out = base;
    for (const auto& item : overlay.items()) out[item.key()] = item.value();
    return out;
}

struct KeySpec {
    const char* name;
    bool optional;  // omitted from the canonical form when not given
    double fallback;
};

constexpr std::array<KeySpec, 14> kNodeKeys = {{
    {"cavity_length_mm", false, 1.0},
    {"wavelength_nm", false, 1046.0},
    {"finesse", false, 1.15e5},
    {"kappa_per_s", true, 0.0},
    {"drive_amplitude_kappa", false, 3.0},
    {"drive_power_w", true, 0.0},
    {"detuning_omega_c", false, 1.0},
    {"detuning_per_s", true, 0.0},
    {"recoil_frequency_khz", false, 3.57},
    {"swave_frequency_recoil", false, 0.0},
    {"bec_damping_kappa", false, 1e-3},
    {"coupling_omega_b", false, 0.5},
    {"coupling_per_s", true, 0.0},
    {"condensate_temperature_uk", false, 0.1},
}};

constexpr std::array<KeySpec, 3> kFilterKeys = {{
    {"central_frequency_omega_b", false, -1.0},
    {"central_frequency_per_s", true, 0.0},
    {"epsilon", false, 8.0},
}};

// Materializes defaults <- both <- specific for one node or filter section,
// validating key names and value types along the way.
json expand_section(const json& section, const std::string& path, const char* which,
                    const auto& keys) {
    json given;
    if (section.contains("both")) given = require_object(section["both"], path + ".both");
    if (section.contains(which)) {
        given = merge(given, require_object(section[which], path + "." + which));
    }
    json out = json::object();
    for (const auto& key : keys) {
        const std::string key_path = path + "." + which + "." + key.name;
        if (given.contains(key.name)) {
            out[key.name] = require_number(given[key.name], key_path);
        } else if (!key.optional) {
            out[key.name] = key.fallback;
        }
    }
    return out;
}

void check_section_keys(const json& section, const std::string& path, const auto& keys) {
    reject_unknown(section, path, {"both", "a", "b"});
    for (const char* sub : {"both", "a", "b"}) {
        if (!section.contains(sub)) continue;
        const json& inner = require_object(section[sub], path + "." + sub);
        for (const auto& item : inner.items()) {
            bool known = false;
            for (const auto& key : keys) {
                if (item.key() == key.name) {
                    known = true;
                    break;
                }
            }
            if (!known) fail(path + "." + sub + "." + item.key(), "unknown key");
        }
    }
}

NodeParams resolve_node(const json& node) {
    NodeParams params;
    params.cavity_length_m = node["cavity_length_mm"].get<double>() * 1e-3;
    params.wavelength_m = node["wavelength_nm"].get<double>() * 1e-9;
    params.finesse = node["finesse"].get<double>();
    if (node.contains("kappa_per_s")) params.kappa_per_s = node["kappa_per_s"].get<double>();
    params.drive_amplitude_kappa = node["drive_amplitude_kappa"].get<double>();
    if (node.contains("drive_power_w")) params.drive_power_w = node["drive_power_w"].get<double>();
    params.detuning_omega_c = node["detuning_omega_c"].get<double>();
    if (node.contains("detuning_per_s")) {
        params.detuning_per_s = node["detuning_per_s"].get<double>();
    }
    params.recoil_omega_per_s = 2.0 * kPi * 1e3 * node["recoil_frequency_khz"].get<double>();
    params.swave_frequency_recoil = node["swave_frequency_recoil"].get<double>();
    params.bec_damping_kappa = node["bec_damping_kappa"].get<double>();
    params.coupling_omega_b = node["coupling_omega_b"].get<double>();
    if (node.contains("coupling_per_s")) {
        params.coupling_per_s = node["coupling_per_s"].get<double>();
    }
    params.condensate_temperature_k = node["condensate_temperature_uk"].get<double>() * 1e-6;
    return params;
}

AxisSpec resolve_axis(const json& axis, const std::string& path) {
    require_object(axis, path);
    reject_unknown(axis, path, {"name", "min", "max", "count"});
    for (const char* key : {"name", "min", "max", "count"}) {
        if (!axis.contains(key)) fail(path, std::string("missing key ") + key);
    }
    AxisSpec spec;
    spec.axis = axis_from_name(require_string(axis["name"], path + ".name"));
    spec.min = require_number(axis["min"], path + ".min");
    spec.max = require_number(axis["max"], path + ".max");
    spec.count = require_int(axis["count"], path + ".count");
    if (spec.count < 1) fail(path + ".count", "must be positive");
    return spec;
}

RunConfig resolve(const json& doc) {
    require_object(doc, "config");
    reject_unknown(doc, "", {"nodes", "filters", "bell", "solver", "measures", "sweep"});

    const json nodes = doc.contains("nodes") ? require_object(doc["nodes"], "nodes")
                                             : json::object();
    check_section_keys(nodes, "nodes", kNodeKeys);
    const json filters = doc.contains("filters") ? require_object(doc["filters"], "filters")
                                                 : json::object();
    check_section_keys(filters, "filters", kFilterKeys);

    json bell = doc.contains("bell") ? require_object(doc["bell"], "bell") : json::object();
    reject_unknown(bell, "bell", {"transmissivity", "eta1", "eta2"});
    json solver = doc.contains("solver") ? require_object(doc["solver"], "solver") : json::object();
    reject_unknown(solver, "solver", {"tolerance", "diffusion_convention"});
    json measures = doc.contains("measures") ? require_object(doc["measures"], "measures")
                                             : json::object();
    reject_unknown(measures, "measures", {"measured_mode"});
    json sweep = doc.contains("sweep") ? require_object(doc["sweep"], "sweep") : json::object();
    reject_unknown(sweep, "sweep", {"axes", "outputs"});

    json canonical = json::object();
    canonical["nodes"] = json::object();
    canonical["nodes"]["a"] = expand_section(nodes, "nodes", "a", kNodeKeys);
    canonical["nodes"]["b"] = expand_section(nodes, "nodes", "b", kNodeKeys);
    canonical["filters"] = json::object();
    canonical["filters"]["a"] = expand_section(filters, "filters", "a", kFilterKeys);
    canonical["filters"]["b"] = expand_section(filters, "filters", "b", kFilterKeys);

    json bell_out = json::object();
    bell_out["transmissivity"] =
            bell.contains("transmissivity") ? require_number(bell["transmissivity"], "bell.transmissivity") : 0.5;
    bell_out["eta1"] = bell.contains("eta1") ? require_number(bell["eta1"], "bell.eta1") : 1.0;
    bell_out["eta2"] = bell.contains("eta2") ? require_number(bell["eta2"], "bell.eta2") : 1.0;
    canonical["bell"] = bell_out;

    json solver_out = json::object();
    solver_out["tolerance"] =
            solver.contains("tolerance") ? require_number(solver["tolerance"], "solver.tolerance") : 1e-8;
    std::string convention = "vacuum_half";
    if (solver.contains("diffusion_convention")) {
        convention = require_string(solver["diffusion_convention"], "solver.diffusion_convention");
        if (convention != "vacuum_half" && convention != "literal_double") {
            fail("solver.diffusion_convention", "must be vacuum_half or literal_double");
        }
    }
    solver_out["diffusion_convention"] = convention;
    canonical["solver"] = solver_out;

    json measures_out = json::object();
    int measured_mode = 1;
    if (measures.contains("measured_mode")) {
        measured_mode = require_int(measures["measured_mode"], "measures.measured_mode");
        if (measured_mode != 1 && measured_mode != 2) fail("measures.measured_mode", "must be 1 or 2");
    }
    measures_out["measured_mode"] = measured_mode;
    canonical["measures"] = measures_out;

    json sweep_out = json::object();
    json axes_out = json::array();
    RunConfig config;
    if (sweep.contains("axes")) {
        if (!sweep["axes"].is_array()) fail("sweep.axes", "must be an array");
        if (sweep["axes"].size() > 2) fail("sweep.axes", "at most two axes");
        int index = 0;
        for (const json& axis : sweep["axes"]) {
            const std::string path = "sweep.axes[" + std::to_string(index++) + "]";
            AxisSpec spec = resolve_axis(axis, path);
            json axis_out = json::object();
            axis_out["name"] = axis_name(spec.axis);
            axis_out["min"] = spec.min;
            axis_out["max"] = spec.max;
            axis_out["count"] = spec.count;
            axes_out.push_back(axis_out);
            config.sweep.axes.push_back(spec);
        }
    }
    sweep_out["axes"] = axes_out;

    json outputs_out = json::array();
    if (sweep.contains("outputs")) {
        if (!sweep["outputs"].is_array()) fail("sweep.outputs", "must be an array");
        for (const json& entry : sweep["outputs"]) {
            const std::string name = require_string(entry, "sweep.outputs");
            if (name != "discord" && name != "log_negativity") {
                fail("sweep.outputs", "unknown output " + name);
            }
            for (const auto& seen : config.outputs) {
                if (seen == name) fail("sweep.outputs", "duplicate output " + name);
            }
            config.outputs.push_back(name);
            outputs_out.push_back(name);
        }
        if (config.outputs.empty()) fail("sweep.outputs", "must not be empty");
    } else {
        config.outputs = {"discord", "log_negativity"};
        outputs_out = {"discord", "log_negativity"};
    }
    sweep_out["outputs"] = outputs_out;
    canonical["sweep"] = sweep_out;

    PipelineConfig& base = config.sweep.base;
    base.node_a = resolve_node(canonical["nodes"]["a"]);
    base.node_b = resolve_node(canonical["nodes"]["b"]);
    const json& fa = canonical["filters"]["a"];
    const json& fb = canonical["filters"]["b"];
    base.filter_center_a_omega_b = fa["central_frequency_omega_b"].get<double>();
    base.filter_center_b_omega_b = fb["central_frequency_omega_b"].get<double>();
    if (fa.contains("central_frequency_per_s")) {
        base.filter_center_a_per_s = fa["central_frequency_per_s"].get<double>();
    }
    if (fb.contains("central_frequency_per_s")) {
        base.filter_center_b_per_s = fb["central_frequency_per_s"].get<double>();
    }
    base.epsilon_a = fa["epsilon"].get<double>();
    base.epsilon_b = fb["epsilon"].get<double>();
    base.bell.transmissivity = bell_out["transmissivity"].get<double>();
    base.bell.eta1 = bell_out["eta1"].get<double>();
    base.bell.eta2 = bell_out["eta2"].get<double>();
    base.solver_tol = solver_out["tolerance"].get<double>();
    base.convention = convention == "vacuum_half" ? DiffusionConvention::vacuum_half
                                                  : DiffusionConvention::literal_double;
    base.measured_mode = measured_mode;

    config.canonical = canonical.dump();
    return config;
}

json preset_document(const std::string& name) {
    auto axis = [](const char* axis_name, double min, double max, int count) {
        json out = json::object();
        out["name"] = axis_name;
        out["min"] = min;
        out["max"] = max;
        out["count"] = count;
        return out;
    };
    json doc = json::object();
    json axes = json::array();
    if (name == "fig2" || name == "fig6") {
        axes.push_back(axis("epsilon1", 0.5, 30.0, 50));
        axes.push_back(axis("epsilon2", 0.5, 30.0, 50));
        if (name == "fig6") doc["sweep"]["outputs"] = {"log_negativity"};
    } else if (name == "fig3") {
        axes.push_back(axis("eta", 1.0, 0.2, 9));
    } else if (name == "fig4") {
        axes.push_back(axis("omega1_ratio", -2.0, 0.0, 25));
        axes.push_back(axis("omega2_ratio", -2.0, 0.0, 25));
    } else if (name == "fig5") {
        axes.push_back(axis("swave_ratio", 0.0, 20.0, 20));
        // The collision axis must not drag the operating point along with
        // the rising Bogoliubov frequency: freeze detuning, coupling and
        // the filter centers at their collisionless absolute values.
        const DerivedNode base = derive_node(NodeParams{});
        doc["nodes"]["both"]["detuning_per_s"] = base.detuning;
        doc["nodes"]["both"]["coupling_per_s"] = base.coupling;
        doc["filters"]["both"]["central_frequency_per_s"] = -base.bogoliubov_freq;
    } else {
        throw StructuralError("unknown preset " + name + " (expected fig2..fig6)");
    }
    doc["sweep"]["axes"] = axes;
    return doc;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& error) {
        throw StructuralError(std::string("config: invalid JSON: ") + error.what());
    }
    return resolve(doc);
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StructuralError("config: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config(buffer.str());
}

RunConfig preset_config(const std::string& name) {
    return resolve(preset_document(name));
}

std::vector<std::string> preset_names() {
    return {"fig2", "fig3", "fig4", "fig5", "fig6"};
}

const char* axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::epsilon1: return "epsilon1";
        case SweepAxis::epsilon2: return "epsilon2";
        case SweepAxis::omega1_ratio: return "omega1_ratio";
        case SweepAxis::omega2_ratio: return "omega2_ratio";
        case SweepAxis::eta: return "eta";
        case SweepAxis::swave_ratio: return "swave_ratio";
        case SweepAxis::transmissivity: return "transmissivity";
        case SweepAxis::coupling_ratio: return "coupling_ratio";
        case SweepAxis::drive_ratio: return "drive_ratio";
    }
    throw StructuralError("unknown sweep axis value");
}

SweepAxis axis_from_name(const std::string& name) {
    for (SweepAxis axis : {SweepAxis::epsilon1, SweepAxis::epsilon2, SweepAxis::omega1_ratio,
                           SweepAxis::omega2_ratio, SweepAxis::eta, SweepAxis::swave_ratio,
                           SweepAxis::transmissivity, SweepAxis::coupling_ratio,
                           SweepAxis::drive_ratio}) {
        if (name == axis_name(axis)) return axis;
    }
    throw StructuralError("config: unknown axis name " + name);
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

std::uint64_t config_hash(const RunConfig& config) {
    return fnv1a64(config.canonical);
}

}  // namespace becbell
