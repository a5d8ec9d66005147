#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "phasemom/kernels.hpp"
#include "phasemom/states.hpp"

namespace phasemom {

enum class PhaseScheme : std::uint8_t {
    UniformRandom = 0,
    Swept128 = 1,
};

/// Raw homodyne samples (theta_i, x_i) in calibrated units (vacuum variance 1/2).
struct HomodyneRecord {
    std::vector<double> thetas;
    std::vector<double> xs;
    std::uint64_t seed = 0;
    PhaseScheme scheme = PhaseScheme::UniformRandom;
    std::string state_descriptor;

    std::size_t size() const { return thetas.size(); }
};

/// Number of phase intervals used by the swept scheme and by histograms.
inline constexpr int kPhaseBins = 128;
inline constexpr int kAmplitudeBins = 256;

// Generation is partitioned into independently seeded 64k-sample chunks
// keyed by (seed, chunk index), so the record is reproducible regardless of
// how chunks are scheduled. Swept mode assigns samples to the 128 phase
// intervals in contiguous blocks with phases at interval centers.
HomodyneRecord generate_records(const GaussianStateSpec& state, std::uint64_t n_samples,
                                PhaseScheme scheme, std::uint64_t seed,
                                std::string state_descriptor = {});

// Fock path: x by inverse CDF on a dense grid. Phases are drawn from 4096
// equispaced values in the random scheme; exact for all estimated moments
// (phase content |m| < 4096 averages to zero on that set).
HomodyneRecord generate_records(const FockState& state, std::uint64_t n_samples,
                                PhaseScheme scheme, std::uint64_t seed,
                                std::string state_descriptor = {});

/// 128 x 256 binned form with vacuum calibration.
struct QuadratureHistogram {
    double x_lo = 0.0;
    double x_hi = 0.0;
    double vacuum_scale = 1.0; // multiply raw x by this to get calibrated units
    std::vector<std::uint64_t> counts; // kPhaseBins * kAmplitudeBins, row-major by phase
    std::uint64_t total = 0;
    std::vector<int> empty_phase_bins; // warning, not an error
    std::uint64_t clipped = 0;         // samples clamped into edge bins

    std::uint64_t at(int phase_bin, int amp_bin) const {
        return counts[static_cast<std::size_t>(phase_bin) * kAmplitudeBins + amp_bin];
    }
    double phase_center(int j) const;
    double amp_center(int b) const; // calibrated units
};

/// Bins a record using a vacuum reference for absolute amplitude calibration:
/// vacuum_scale = 1 / sqrt(2 Var(vacuum x)), so the scaled vacuum has
/// variance 1/2. The amplitude range covers max |x| of both records plus one
/// bin of margin.
QuadratureHistogram histogram_records(const HomodyneRecord& record,
                                      const HomodyneRecord& vacuum_record);

/// One estimated moment with its statistical error: componentwise standard
/// errors of the mean, reported as the larger of the two.
struct MomentEstimate {
    int k = 0;
    std::complex<double> value;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
};

/// Psi_k estimates for k = 1..k_max as the empirical mean of
/// e^{i k theta} F_k(x) (random scheme) or its per-interval Riemann form
/// (swept scheme). Psi_0 == 1 by construction and is not estimated.
std::vector<MomentEstimate> estimate_exponential_moments(const HomodyneRecord& record,
                                                         int k_max,
                                                         const std::vector<KernelTable>& kernels);

/// Histogram path: double Riemann sum over bins with multinomial bin errors.
std::vector<MomentEstimate> estimate_exponential_moments(const QuadratureHistogram& hist,
                                                         int k_max,
                                                         const std::vector<KernelTable>& kernels);

struct NumberMomentEstimates {
    MomentEstimate mean;          // k field = 1
    MomentEstimate second_moment; // k field = 2
};

NumberMomentEstimates estimate_number_moments(const HomodyneRecord& record);
NumberMomentEstimates estimate_number_moments(const QuadratureHistogram& hist);

/// Midpoint-rule bias bound for histogram-path estimates of order k
/// (documented second-order binning term).
double histogram_binning_bias(const QuadratureHistogram& hist, int k,
                              const KernelTable& kernel);

// ---- record and histogram files ----

/// Binary record file, magic "HREC".
void write_record(const HomodyneRecord& record, const std::string& path);
HomodyneRecord read_record(const std::string& path);

/// Structured-text histogram file; round-trips bit-exactly (hexfloat header).
void write_histogram(const QuadratureHistogram& hist, const std::string& path);
QuadratureHistogram read_histogram(const std::string& path);

} // namespace phasemom
