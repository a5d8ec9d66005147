#include "phasemom/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "phasemom/errors.hpp"

namespace phasemom {

using nlohmann::json;

namespace {

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw FormatError("config: unknown key '" + it.key() + "' in " + where);
}

} // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw FormatError("config: cannot open " + path);
    json j;
    try {
        is >> j;
    } catch (const json::parse_error& e) {
        throw FormatError("config: parse error in " + path + ": " + e.what());
    }
    require_keys(j, {"config_version", "states", "n_samples", "seed", "phase_scheme",
                     "k_max", "n_max", "kernel_n_max", "window", "phase_grid_size"},
                 "top level");
    RunConfig c;
    c.version = j.at("config_version").get<int>();
    if (c.version != 1) throw FormatError("config: unsupported config_version");
    for (const auto& js : j.at("states")) {
        require_keys(js, {"label", "alpha_mag", "alpha_phase_rad", "squeeze_r",
                          "squeeze_angle_rad"},
                     "state entry");
        StateConfig s;
        s.label = js.at("label").get<std::string>();
        s.alpha_mag = js.at("alpha_mag").get<double>();
        s.alpha_phase_rad = js.value("alpha_phase_rad", 0.0);
        s.squeeze_r = js.value("squeeze_r", 0.0);
        s.squeeze_angle_rad = js.value("squeeze_angle_rad", 0.0);
        c.states.push_back(std::move(s));
    }
    c.n_samples = j.value("n_samples", std::uint64_t(100000));
    c.seed = j.value("seed", std::uint64_t(1));
    const std::string scheme = j.value("phase_scheme", std::string("uniform-random"));
    if (scheme == "uniform-random")
        c.phase_scheme = PhaseScheme::UniformRandom;
    else if (scheme == "swept-128")
        c.phase_scheme = PhaseScheme::Swept128;
    else
        throw FormatError("config: phase_scheme must be uniform-random or swept-128");
    c.k_max = j.value("k_max", 20);
    c.n_max = j.value("n_max", 0);
    c.kernel_n_max = j.value("kernel_n_max", 256);
    const std::string window = j.value("window", std::string("none"));
    if (window == "none")
        c.window = Window::None;
    else if (window == "cesaro")
        c.window = Window::Cesaro;
    else
        throw FormatError("config: window must be none or cesaro");
    c.phase_grid_size = j.value("phase_grid_size", 512);
    if (c.states.empty()) throw FormatError("config: at least one state required");
    if (c.k_max < 1) throw FormatError("config: k_max must be >= 1");
    return c;
}

void save_config(const RunConfig& c, const std::string& path) {
    json j;
    j["config_version"] = c.version;
    j["n_samples"] = c.n_samples;
    j["seed"] = c.seed;
    j["phase_scheme"] =
        c.phase_scheme == PhaseScheme::UniformRandom ? "uniform-random" : "swept-128";
    j["k_max"] = c.k_max;
    j["n_max"] = c.n_max;
    j["kernel_n_max"] = c.kernel_n_max;
    j["window"] = c.window == Window::None ? "none" : "cesaro";
    j["phase_grid_size"] = c.phase_grid_size;
    j["states"] = json::array();
    for (const auto& s : c.states) {
        json js;
        js["label"] = s.label;
        js["alpha_mag"] = s.alpha_mag;
        js["alpha_phase_rad"] = s.alpha_phase_rad;
        js["squeeze_r"] = s.squeeze_r;
        js["squeeze_angle_rad"] = s.squeeze_angle_rad;
        j["states"].push_back(js);
    }
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw FormatError("config: cannot open " + path + " for writing");
    os << j.dump(2) << "\n";
}

RunConfig default_config() {
    constexpr double kDeg = 3.14159265358979323846 / 180.0;
    RunConfig c;
    c.states = {
        {"A", 2.0, 0.0, 0.0, 0.0},
        {"B", 1.2, 0.0, 0.0, 0.0},
        {"C", 2.0, 0.0, 0.3, 0.0},
        {"D", 1.5, 0.0, 0.25, 0.0},
        {"E", 2.0, 0.0, 0.3, 90.0 * kDeg},
        {"F", 1.5, 0.0, 0.25, 90.0 * kDeg},
        {"G", 0.0, 0.0, 0.5, 0.0},
        {"H", 2.0, 0.0, 0.3, 48.0 * kDeg},
    };
    return c;
}

} // namespace phasemom
