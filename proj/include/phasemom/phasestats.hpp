#pragma once

#include <string>
#include <vector>

#include "phasemom/sampler.hpp"
#include "phasemom/states.hpp"

namespace phasemom {

enum class Window {
    None,   // raw truncated Fourier sum
    Cesaro, // w_k = 1 - k/(k_max+1)
};

/// Canonical phase distribution synthesized from exponential moments:
///   P(phi) = (2 pi)^{-1} [1 + 2 sum_k w_k Re(e^{-i k phi} Psi_k)].
/// Negative excursions are permitted (truncation artifacts) and reported.
struct PhaseDistribution {
    std::vector<double> grid;   // phi in [-pi, pi)
    std::vector<double> values;
    int k_max = 0;
    Window window = Window::None;

    /// Riemann integral over the period (exact for the Fourier sum).
    double integral() const;
    double min_value() const;
    /// Circular variance 1 - |integral e^{i phi} P dphi|.
    double circular_variance() const;
    /// Indices of strict local maxima on the periodic grid.
    std::vector<std::size_t> local_maxima() const;
};

PhaseDistribution synthesize_phase_distribution(const std::vector<MomentEstimate>& moments,
                                                int grid_size, Window window = Window::None);

/// Exact-synthesis convenience: moments from the density-matrix oracle.
PhaseDistribution oracle_phase_distribution(const FockDensityMatrix& rho, int k_max,
                                            int grid_size, Window window = Window::None);

/// Mean phase, phase uncertainty, number uncertainty and the uncertainty
/// product Delta n * tan(Delta phi) with first-order error propagation.
struct PhaseStatistics {
    double mean_phase = 0.0;        // arg Psi_1, branch (-pi, pi]
    double phase_uncertainty = 0.0; // arccos min(|Psi_1|, 1), in [0, pi/2]
    double n_mean = 0.0;
    double n_uncertainty = 0.0;
    double product = 0.0;
    double product_error = 0.0;
    bool degenerate_variance = false; // <n^2> - <n>^2 clamped at zero
    bool product_unbounded = false;   // Delta phi within 1e-6 of pi/2
};

PhaseStatistics phase_statistics(const MomentEstimate& psi_1, const MomentEstimate& n_mean,
                                 const MomentEstimate& n_second);

struct UncertaintyRow {
    std::string label;
    PhaseStatistics stats;
    bool violates_bound = false; // product < 1/2 - 3 product_error
};

struct UncertaintyReport {
    std::vector<UncertaintyRow> rows;
    int violation_count = 0;

    /// Aligned plain-text table.
    std::string to_text() const;
    /// One key=value record per state.
    std::string to_structured_text() const;
};

UncertaintyReport uncertainty_report(const std::vector<PhaseStatistics>& stats,
                                     const std::vector<std::string>& labels);

/// Two-column (phi, P) text for plotting.
std::string phase_distribution_table(const PhaseDistribution& dist);

} // namespace phasemom
