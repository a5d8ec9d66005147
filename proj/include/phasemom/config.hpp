#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phasemom/phasestats.hpp"
#include "phasemom/sampler.hpp"
#include "phasemom/states.hpp"

namespace phasemom {

struct StateConfig {
    std::string label;
    double alpha_mag = 0.0;
    double alpha_phase_rad = 0.0;
    double squeeze_r = 0.0;
    double squeeze_angle_rad = 0.0;

    GaussianStateSpec spec() const {
        return GaussianStateSpec::make(alpha_mag, alpha_phase_rad, squeeze_r,
                                       squeeze_angle_rad);
    }
};

/// Everything a run needs; a run is reproducible from (config, seed) alone.
struct RunConfig {
    int version = 1;
    std::vector<StateConfig> states;
    std::uint64_t n_samples = 100000;
    std::uint64_t seed = 1;
    PhaseScheme phase_scheme = PhaseScheme::UniformRandom;
    int k_max = 20;
    int n_max = 0; // Fock truncation; 0 = adaptive per state
    int kernel_n_max = 256;
    Window window = Window::None;
    int phase_grid_size = 512;
};

/// Strict parser: versioned JSON, unknown keys rejected, units in key names.
RunConfig load_config(const std::string& path);
void save_config(const RunConfig& config, const std::string& path);

/// Built-in roster modeled on the measured state families: two coherent,
/// two amplitude-squeezed, two phase-squeezed, squeezed vacuum, 48-degree
/// squeezed state.
RunConfig default_config();

} // namespace phasemom
