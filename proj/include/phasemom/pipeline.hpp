#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "phasemom/config.hpp"
#include "phasemom/kernels.hpp"
#include "phasemom/sampler.hpp"

namespace phasemom {

// CLI pipeline stages. All artifacts live under one output directory:
//   records/<label>.hrec      simulated homodyne records (+ vacuum.hrec)
//   kernels/pkt1_*.bin        kernel table cache
//   moments/<label>.moments.txt, <label>.number.txt
//   phase/<label>.pphi.txt    synthesized P(phi) tables
//   report.txt, report_records.txt
// cmd_estimate falls back to records/<label>.qhist (histogram format) when a
// record file is absent, so externally reduced data can enter the pipeline.

struct MomentsFile {
    std::string label;
    std::vector<MomentEstimate> moments;        // k = 1..k_max
    MomentEstimate n_mean;                      // order 1
    MomentEstimate n_second;                    // order 2
};

void cmd_simulate(const RunConfig& config, const std::filesystem::path& out_dir);

/// Loads cached kernel tables or builds and caches them (atomic rename).
std::vector<KernelTable> ensure_kernels(const RunConfig& config,
                                        const std::filesystem::path& out_dir);

void cmd_estimate(const RunConfig& config, const std::filesystem::path& out_dir);

/// Returns the number of flagged invariant violations (nonzero exit).
int cmd_report(const RunConfig& config, const std::filesystem::path& out_dir);

// moments file round trip (hexfloat, lossless)
void write_moments_file(const MomentsFile& m, const std::filesystem::path& path);
MomentsFile read_moments_file(const std::filesystem::path& path);

/// Effective Fock truncation for kernels/grids: config.n_max, or the largest
/// adaptive cutoff over the configured states.
int effective_state_cutoff(const RunConfig& config);

} // namespace phasemom
