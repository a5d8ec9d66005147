#include "phasemom/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include "phasemom/errors.hpp"
#include "phasemom/phasestats.hpp"

namespace phasemom {

namespace fs = std::filesystem;

namespace {

std::string describe(const StateConfig& s) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%s alpha_mag=%.6g alpha_phase_rad=%.6g squeeze_r=%.6g squeeze_angle_rad=%.6g",
                  s.label.c_str(), s.alpha_mag, s.alpha_phase_rad, s.squeeze_r,
                  s.squeeze_angle_rad);
    return buf;
}

std::uint64_t label_seed(std::uint64_t base, const std::string& label) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return base ^ h;
}

} // namespace

int effective_state_cutoff(const RunConfig& config) {
    if (config.n_max > 0) return config.n_max;
    int n = 16;
    for (const auto& s : config.states)
        n = std::max(n, adaptive_fock_cutoff(s.spec()));
    return n;
}

void cmd_simulate(const RunConfig& config, const fs::path& out_dir) {
    const fs::path rec_dir = out_dir / "records";
    fs::create_directories(rec_dir);

    std::vector<std::future<void>> futs;
    for (const auto& s : config.states) {
        futs.push_back(std::async(std::launch::async, [&config, s, rec_dir] {
            const auto rec =
                generate_records(s.spec(), config.n_samples, config.phase_scheme,
                                 label_seed(config.seed, s.label), describe(s));
            write_record(rec, (rec_dir / (s.label + ".hrec")).string());
        }));
    }
    // vacuum reference is always produced: the calibration dependency
    futs.push_back(std::async(std::launch::async, [&config, rec_dir] {
        const auto vac = generate_records(GaussianStateSpec{}, config.n_samples,
                                          config.phase_scheme,
                                          label_seed(config.seed, "vacuum"), "vacuum");
        write_record(vac, (rec_dir / "vacuum.hrec").string());
    }));
    for (auto& f : futs) f.get();
}

std::vector<KernelTable> ensure_kernels(const RunConfig& config, const fs::path& out_dir) {
    const fs::path ker_dir = out_dir / "kernels";
    fs::create_directories(ker_dir);
    const int n_state = effective_state_cutoff(config);
    const KernelGridSpec grid = default_grid_for_states(n_state);

    std::vector<KernelTable> tables;
    std::vector<int> missing;
    tables.reserve(static_cast<std::size_t>(config.k_max));
    for (int k = 1; k <= config.k_max; ++k) {
        const fs::path p = ker_dir / kernel_cache_name(k, config.kernel_n_max, grid);
        if (fs::exists(p)) {
            tables.push_back(load_kernel_table(p.string()));
        } else {
            missing.push_back(k);
        }
    }
    if (!missing.empty()) {
        // one shared pass builds all orders; cache each via atomic rename
        auto built = build_phase_kernels(config.k_max, config.kernel_n_max, grid);
        for (auto& t : built) {
            const fs::path p = ker_dir / kernel_cache_name(t.k, config.kernel_n_max, grid);
            if (!fs::exists(p)) {
                const fs::path tmp = p.string() + ".tmp";
                save_kernel_table(t, tmp.string());
                fs::rename(tmp, p);
            }
        }
        tables = std::move(built);
    }
    return tables;
}

void write_moments_file(const MomentsFile& m, const fs::path& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw FormatError("moments file: cannot open " + path.string());
    os << "phase-moments v1 label=" << m.label << "\n";
    char buf[200];
    for (const auto& e : m.moments) {
        std::snprintf(buf, sizeof(buf), "k=%d re=%a im=%a err=%a n=%llu\n", e.k,
                      e.value.real(), e.value.imag(), e.std_error,
                      static_cast<unsigned long long>(e.n_samples));
        os << buf;
    }
    std::snprintf(buf, sizeof(buf), "number order=1 value=%a err=%a n=%llu\n",
                  m.n_mean.value.real(), m.n_mean.std_error,
                  static_cast<unsigned long long>(m.n_mean.n_samples));
    os << buf;
    std::snprintf(buf, sizeof(buf), "number order=2 value=%a err=%a n=%llu\n",
                  m.n_second.value.real(), m.n_second.std_error,
                  static_cast<unsigned long long>(m.n_second.n_samples));
    os << buf;
}

MomentsFile read_moments_file(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw FormatError("moments file: cannot open " + path.string());
    std::string line;
    std::getline(is, line);
    const std::string prefix = "phase-moments v1 label=";
    if (line.rfind(prefix, 0) != 0)
        throw FormatError("moments file: bad header in " + path.string());
    MomentsFile m;
    m.label = line.substr(prefix.size());
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line.rfind("k=", 0) == 0) {
            MomentEstimate e;
            double re = 0, im = 0, err = 0;
            unsigned long long n = 0;
            if (std::sscanf(line.c_str(), "k=%d re=%la im=%la err=%la n=%llu", &e.k, &re,
                            &im, &err, &n) != 5)
                throw FormatError("moments file: bad moment line: " + line);
            e.value = {re, im};
            e.std_error = err;
            e.n_samples = n;
            m.moments.push_back(e);
        } else if (line.rfind("number order=", 0) == 0) {
            int order = 0;
            double v = 0, err = 0;
            unsigned long long n = 0;
            if (std::sscanf(line.c_str(), "number order=%d value=%la err=%la n=%llu",
                            &order, &v, &err, &n) != 4)
                throw FormatError("moments file: bad number line: " + line);
            MomentEstimate e;
            e.k = order;
            e.value = v;
            e.std_error = err;
            e.n_samples = n;
            (order == 1 ? m.n_mean : m.n_second) = e;
        } else {
            throw FormatError("moments file: unexpected line: " + line);
        }
    }
    return m;
}

void cmd_estimate(const RunConfig& config, const fs::path& out_dir) {
    const fs::path rec_dir = out_dir / "records";
    const fs::path mom_dir = out_dir / "moments";
    fs::create_directories(mom_dir);
    const auto tables = ensure_kernels(config, out_dir);

    std::vector<std::future<void>> futs;
    for (const auto& s : config.states) {
        futs.push_back(std::async(std::launch::async, [&config, &tables, s, rec_dir, mom_dir] {
            MomentsFile m;
            m.label = s.label;
            const fs::path hrec = rec_dir / (s.label + ".hrec");
            const fs::path qhist = rec_dir / (s.label + ".qhist");
            if (fs::exists(hrec)) {
                const auto rec = read_record(hrec.string());
                m.moments = estimate_exponential_moments(rec, config.k_max, tables);
                const auto nm = estimate_number_moments(rec);
                m.n_mean = nm.mean;
                m.n_second = nm.second_moment;
            } else if (fs::exists(qhist)) {
                const auto hist = read_histogram(qhist.string());
                m.moments = estimate_exponential_moments(hist, config.k_max, tables);
                const auto nm = estimate_number_moments(hist);
                m.n_mean = nm.mean;
                m.n_second = nm.second_moment;
            } else {
                throw FormatError("estimate: no record or histogram for state " + s.label +
                                  " under " + rec_dir.string());
            }
            write_moments_file(m, mom_dir / (s.label + ".moments.txt"));
        }));
    }
    for (auto& f : futs) f.get();
}

int cmd_report(const RunConfig& config, const fs::path& out_dir) {
    const fs::path mom_dir = out_dir / "moments";
    const fs::path phase_dir = out_dir / "phase";
    fs::create_directories(phase_dir);

    std::vector<PhaseStatistics> stats;
    std::vector<std::string> labels;
    int violations = 0;
    for (const auto& s : config.states) {
        const auto m = read_moments_file(mom_dir / (s.label + ".moments.txt"));
        const auto dist =
            synthesize_phase_distribution(m.moments, config.phase_grid_size, config.window);
        std::ofstream os(phase_dir / (s.label + ".pphi.txt"), std::ios::trunc);
        os << phase_distribution_table(dist);
        if (std::abs(dist.integral() - 1.0) > 1e-8) ++violations;
        stats.push_back(phase_statistics(m.moments.at(0), m.n_mean, m.n_second));
        labels.push_back(s.label);
    }
    const auto rep = uncertainty_report(stats, labels);
    violations += rep.violation_count;
    {
        std::ofstream os(out_dir / "report.txt", std::ios::trunc);
        os << rep.to_text();
    }
    {
        std::ofstream os(out_dir / "report_records.txt", std::ios::trunc);
        os << rep.to_structured_text();
    }
    return violations;
}

} // namespace phasemom
