#include "phasemom/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <atomic>
#include <future>
#include <thread>
#include <random>

#include "phasemom/errors.hpp"
#include "phasemom/oscillator.hpp"

namespace phasemom {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;
constexpr std::uint64_t kChunk = 1 << 16;
constexpr int kFockPhaseSlots = 4096;

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::mt19937_64 chunk_rng(std::uint64_t seed, std::uint64_t chunk_index) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(chunk_index + 1)));
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller; fixed two draws per call keeps the stream layout stable.
double standard_normal(std::mt19937_64& rng) {
    const double u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(kTwoPi * u2);
}

double swept_phase(std::uint64_t i, std::uint64_t n) {
    // contiguous blocks over 128 intervals, phase at the interval center
    const std::uint64_t j = (i * kPhaseBins) / n;
    return (static_cast<double>(j) + 0.5) * kTwoPi / kPhaseBins;
}

template <typename Body>
void run_chunks(std::uint64_t n, const Body& body) {
    const std::uint64_t n_chunks = (n + kChunk - 1) / kChunk;
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::future<void>> futs;
    std::uint64_t c = 0;
    while (c < n_chunks) {
        futs.clear();
        for (unsigned w = 0; w < workers && c < n_chunks; ++w, ++c) {
            const std::uint64_t begin = c * kChunk;
            const std::uint64_t end = std::min(n, begin + kChunk);
            futs.push_back(std::async(std::launch::async, [&body, c, begin, end] {
                body(c, begin, end);
            }));
        }
        for (auto& f : futs) f.get();
    }
}

} // namespace

HomodyneRecord generate_records(const GaussianStateSpec& state, std::uint64_t n_samples,
                                PhaseScheme scheme, std::uint64_t seed,
                                std::string state_descriptor) {
    if (n_samples < 1) throw DomainError("generate_records: n_samples must be >= 1");
    HomodyneRecord rec;
    rec.seed = seed;
    rec.scheme = scheme;
    rec.state_descriptor = std::move(state_descriptor);
    rec.thetas.resize(n_samples);
    rec.xs.resize(n_samples);

    run_chunks(n_samples, [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
        auto rng = chunk_rng(seed, chunk);
        for (std::uint64_t i = begin; i < end; ++i) {
            double theta;
            if (scheme == PhaseScheme::Swept128) {
                theta = swept_phase(i, n_samples);
            } else {
                theta = kTwoPi * uniform01(rng);
            }
            const double z = standard_normal(rng);
            rec.thetas[i] = theta;
            rec.xs[i] = state.quadrature_mean(theta) +
                        std::sqrt(state.quadrature_variance(theta)) * z;
        }
    });
    return rec;
}

HomodyneRecord generate_records(const FockState& state, std::uint64_t n_samples,
                                PhaseScheme scheme, std::uint64_t seed,
                                std::string state_descriptor) {
    if (n_samples < 1) throw DomainError("generate_records: n_samples must be >= 1");
    HomodyneRecord rec;
    rec.seed = seed;
    rec.scheme = scheme;
    rec.state_descriptor = std::move(state_descriptor);
    rec.thetas.resize(n_samples);
    rec.xs.resize(n_samples);

    // phase slots: 128 centers (swept) or 4096 equispaced values (random)
    const int slots = scheme == PhaseScheme::Swept128 ? kPhaseBins : kFockPhaseSlots;
    std::vector<double> slot_phase(static_cast<std::size_t>(slots));
    for (int s = 0; s < slots; ++s)
        slot_phase[static_cast<std::size_t>(s)] =
            scheme == PhaseScheme::Swept128 ? (s + 0.5) * kTwoPi / kPhaseBins
                                            : s * kTwoPi / kFockPhaseSlots;

    // inverse-CDF grid wide enough for the truncated state
    const double x_max = std::sqrt(2.0 * state.n_max() + 1.0) + 5.0;
    const double dx = 1e-3;
    const std::size_t nx = static_cast<std::size_t>(std::ceil(2.0 * x_max / dx)) + 1;

    // pass 1: slot assignment per sample
    std::vector<std::uint32_t> slot_of(n_samples);
    run_chunks(n_samples, [&](std::uint64_t chunk, std::uint64_t begin, std::uint64_t end) {
        auto rng = chunk_rng(seed, chunk);
        for (std::uint64_t i = begin; i < end; ++i) {
            if (scheme == PhaseScheme::Swept128) {
                slot_of[i] = static_cast<std::uint32_t>((i * kPhaseBins) / n_samples);
            } else {
                slot_of[i] = static_cast<std::uint32_t>(rng() % kFockPhaseSlots);
            }
            rec.thetas[i] = slot_phase[slot_of[i]];
        }
    });

    // pass 2: group samples by slot, build each slot's CDF once
    std::vector<std::vector<std::uint64_t>> groups(static_cast<std::size_t>(slots));
    for (std::uint64_t i = 0; i < n_samples; ++i)
        groups[slot_of[i]].push_back(i);

    std::vector<std::uint32_t> occupied;
    for (int s = 0; s < slots; ++s)
        if (!groups[static_cast<std::size_t>(s)].empty())
            occupied.push_back(static_cast<std::uint32_t>(s));

    std::atomic<std::size_t> next{0};
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::future<void>> futs;
    for (unsigned w = 0; w < workers; ++w) {
        futs.push_back(std::async(std::launch::async, [&] {
            std::vector<double> cdf(nx);
            for (;;) {
                const std::size_t idx = next.fetch_add(1);
                if (idx >= occupied.size()) break;
                const std::uint32_t s = occupied[idx];
                const double theta = slot_phase[s];
                // trapezoid CDF of p(x | theta) on the dense grid
                double prev = quadrature_pdf(state, theta, -x_max);
                cdf[0] = 0.0;
                for (std::size_t g = 1; g < nx; ++g) {
                    const double x = -x_max + dx * static_cast<double>(g);
                    const double cur = quadrature_pdf(state, theta, x);
                    cdf[g] = cdf[g - 1] + 0.5 * dx * (prev + cur);
                    prev = cur;
                }
                const double norm = cdf[nx - 1];
                for (const std::uint64_t i : groups[s]) {
                    // per-sample uniform drawn from a stream keyed by the
                    // sample index, independent of grouping order
                    auto rng = chunk_rng(seed ^ 0x5ca1ab1eULL, i);
                    const double u = uniform01(rng) * norm;
                    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
                    std::size_t g = static_cast<std::size_t>(it - cdf.begin());
                    if (g == 0) g = 1;
                    const double c0 = cdf[g - 1], c1 = cdf[g];
                    const double frac = c1 > c0 ? (u - c0) / (c1 - c0) : 0.5;
                    rec.xs[i] = -x_max + dx * (static_cast<double>(g - 1) + frac);
                }
            }
        }));
    }
    for (auto& f : futs) f.get();
    return rec;
}

double QuadratureHistogram::phase_center(int j) const {
    return (j + 0.5) * kTwoPi / kPhaseBins;
}

double QuadratureHistogram::amp_center(int b) const {
    const double w = (x_hi - x_lo) / kAmplitudeBins;
    return x_lo + (b + 0.5) * w;
}

QuadratureHistogram histogram_records(const HomodyneRecord& record,
                                      const HomodyneRecord& vacuum_record) {
    if (record.size() == 0 || vacuum_record.size() == 0)
        throw DomainError("histogram_records: empty record");

    double vac_mean = 0.0;
    for (double x : vacuum_record.xs) vac_mean += x;
    vac_mean /= static_cast<double>(vacuum_record.size());
    double vac_var = 0.0;
    for (double x : vacuum_record.xs) vac_var += (x - vac_mean) * (x - vac_mean);
    vac_var /= static_cast<double>(vacuum_record.size());

    QuadratureHistogram h;
    h.vacuum_scale = 1.0 / std::sqrt(2.0 * vac_var);

    double max_abs = 0.0;
    for (double x : record.xs) max_abs = std::max(max_abs, std::abs(x * h.vacuum_scale));
    for (double x : vacuum_record.xs) max_abs = std::max(max_abs, std::abs(x * h.vacuum_scale));
    const double margin = 2.0 * max_abs / kAmplitudeBins; // one bin each side
    h.x_hi = max_abs + margin;
    h.x_lo = -h.x_hi;

    h.counts.assign(static_cast<std::size_t>(kPhaseBins) * kAmplitudeBins, 0);
    const double bin_w = (h.x_hi - h.x_lo) / kAmplitudeBins;
    for (std::size_t i = 0; i < record.size(); ++i) {
        int j = static_cast<int>(record.thetas[i] / (kTwoPi / kPhaseBins));
        j = std::clamp(j, 0, kPhaseBins - 1);
        const double xc = record.xs[i] * h.vacuum_scale;
        int b = static_cast<int>((xc - h.x_lo) / bin_w);
        if (b < 0 || b >= kAmplitudeBins) {
            b = std::clamp(b, 0, kAmplitudeBins - 1);
            ++h.clipped;
        }
        ++h.counts[static_cast<std::size_t>(j) * kAmplitudeBins + b];
    }
    h.total = record.size();
    for (int j = 0; j < kPhaseBins; ++j) {
        std::uint64_t nj = 0;
        for (int b = 0; b < kAmplitudeBins; ++b) nj += h.at(j, b);
        if (nj == 0) h.empty_phase_bins.push_back(j);
    }
    return h;
}

namespace {

void require_phase_coverage(const HomodyneRecord& record) {
    std::vector<std::uint64_t> occupancy(kPhaseBins, 0);
    for (double th : record.thetas) {
        int j = static_cast<int>(th / (kTwoPi / kPhaseBins));
        j = std::clamp(j, 0, kPhaseBins - 1);
        ++occupancy[static_cast<std::size_t>(j)];
    }
    for (int j = 0; j < kPhaseBins; ++j)
        if (occupancy[static_cast<std::size_t>(j)] == 0)
            throw PhaseCoverageError("record does not cover the full phase period (interval " +
                                     std::to_string(j) + " empty)");
}

const KernelTable& kernel_for(const std::vector<KernelTable>& kernels, int k) {
    for (const auto& t : kernels)
        if (t.k == k) return t;
    throw MissingKernel("no kernel table for k = " + std::to_string(k));
}

} // namespace

std::vector<MomentEstimate> estimate_exponential_moments(const HomodyneRecord& record,
                                                         int k_max,
                                                         const std::vector<KernelTable>& kernels) {
    if (record.size() == 0) throw DomainError("estimate_exponential_moments: empty record");
    if (k_max < 1) throw DomainError("estimate_exponential_moments: k_max must be >= 1");
    for (int k = 1; k <= k_max; ++k) kernel_for(kernels, k); // MissingKernel early
    require_phase_coverage(record);

    const std::uint64_t n = record.size();
    std::vector<MomentEstimate> out;
    out.reserve(static_cast<std::size_t>(k_max));

    if (record.scheme == PhaseScheme::UniformRandom) {
        for (int k = 1; k <= k_max; ++k) {
            const auto& tab = kernel_for(kernels, k);
            double sr = 0.0, si = 0.0, srr = 0.0, sii = 0.0;
            for (std::uint64_t i = 0; i < n; ++i) {
                const double f = tab.evaluate(record.xs[i]);
                const double re = f * std::cos(k * record.thetas[i]);
                const double im = f * std::sin(k * record.thetas[i]);
                sr += re;
                si += im;
                srr += re * re;
                sii += im * im;
            }
            const double nr = static_cast<double>(n);
            const double mr = sr / nr, mi = si / nr;
            const double vr = std::max(0.0, srr / nr - mr * mr);
            const double vi = std::max(0.0, sii / nr - mi * mi);
            MomentEstimate e;
            e.k = k;
            e.value = {mr, mi};
            e.std_error = std::sqrt(std::max(vr, vi) / nr);
            e.n_samples = n;
            out.push_back(e);
        }
        return out;
    }

    // swept scheme: Riemann form, (1/128) sum_j e^{ik theta_j} mean_j F(x)
    std::vector<std::vector<std::uint64_t>> groups(kPhaseBins);
    for (std::uint64_t i = 0; i < n; ++i) {
        int j = static_cast<int>(record.thetas[i] / (kTwoPi / kPhaseBins));
        j = std::clamp(j, 0, kPhaseBins - 1);
        groups[static_cast<std::size_t>(j)].push_back(i);
    }
    for (int k = 1; k <= k_max; ++k) {
        const auto& tab = kernel_for(kernels, k);
        std::complex<double> acc = 0.0;
        double var_r = 0.0, var_i = 0.0;
        for (int j = 0; j < kPhaseBins; ++j) {
            const auto& g = groups[static_cast<std::size_t>(j)];
            const double nj = static_cast<double>(g.size());
            double s = 0.0, ss = 0.0;
            for (const std::uint64_t i : g) {
                const double f = tab.evaluate(record.xs[i]);
                s += f;
                ss += f * f;
            }
            const double mean_f = s / nj;
            const double var_f = std::max(0.0, ss / nj - mean_f * mean_f);
            const double theta = (j + 0.5) * kTwoPi / kPhaseBins;
            const double c = std::cos(k * theta), si_ = std::sin(k * theta);
            acc += std::complex<double>(c, si_) * mean_f;
            var_r += c * c * var_f / nj;
            var_i += si_ * si_ * var_f / nj;
        }
        MomentEstimate e;
        e.k = k;
        e.value = acc / static_cast<double>(kPhaseBins);
        e.std_error = std::sqrt(std::max(var_r, var_i)) / kPhaseBins;
        e.n_samples = n;
        out.push_back(e);
    }
    return out;
}

std::vector<MomentEstimate> estimate_exponential_moments(const QuadratureHistogram& hist,
                                                         int k_max,
                                                         const std::vector<KernelTable>& kernels) {
    if (hist.total == 0) throw DomainError("estimate_exponential_moments: empty histogram");
    if (!hist.empty_phase_bins.empty())
        throw PhaseCoverageError("histogram has " + std::to_string(hist.empty_phase_bins.size()) +
                                 " empty phase bins");
    for (int k = 1; k <= k_max; ++k) kernel_for(kernels, k);

    std::vector<MomentEstimate> out;
    for (int k = 1; k <= k_max; ++k) {
        const auto& tab = kernel_for(kernels, k);
        std::complex<double> acc = 0.0;
        double var_r = 0.0, var_i = 0.0;
        for (int j = 0; j < kPhaseBins; ++j) {
            double nj = 0.0;
            for (int b = 0; b < kAmplitudeBins; ++b) nj += static_cast<double>(hist.at(j, b));
            double s = 0.0, ss = 0.0;
            for (int b = 0; b < kAmplitudeBins; ++b) {
                const double cnt = static_cast<double>(hist.at(j, b));
                if (cnt == 0.0) continue;
                const double f = tab.evaluate(hist.amp_center(b));
                s += cnt * f;
                ss += cnt * f * f;
            }
            const double mean_f = s / nj;
            const double var_f = std::max(0.0, ss / nj - mean_f * mean_f);
            const double theta = hist.phase_center(j);
            const double c = std::cos(k * theta), si_ = std::sin(k * theta);
            acc += std::complex<double>(c, si_) * mean_f;
            var_r += c * c * var_f / nj;
            var_i += si_ * si_ * var_f / nj;
        }
        MomentEstimate e;
        e.k = k;
        e.value = acc / static_cast<double>(kPhaseBins);
        e.std_error = std::sqrt(std::max(var_r, var_i)) / kPhaseBins;
        e.n_samples = hist.total;
        out.push_back(e);
    }
    return out;
}

NumberMomentEstimates estimate_number_moments(const HomodyneRecord& record) {
    if (record.size() == 0) throw DomainError("estimate_number_moments: empty record");
    require_phase_coverage(record);
    const std::uint64_t n = record.size();

    auto finish = [n](int order, double s, double ss) {
        const double nr = static_cast<double>(n);
        const double m = s / nr;
        const double v = std::max(0.0, ss / nr - m * m);
        MomentEstimate e;
        e.k = order;
        e.value = m;
        e.std_error = std::sqrt(v / nr);
        e.n_samples = n;
        return e;
    };

    if (record.scheme == PhaseScheme::UniformRandom) {
        double s1 = 0.0, ss1 = 0.0, s2 = 0.0, ss2 = 0.0;
        for (double x : record.xs) {
            const double g1 = number_kernel(1, x);
            const double g2 = number_kernel(2, x);
            s1 += g1;
            ss1 += g1 * g1;
            s2 += g2;
            ss2 += g2 * g2;
        }
        return {finish(1, s1, ss1), finish(2, s2, ss2)};
    }

    // swept: equal-weight phase intervals
    std::vector<double> s1(kPhaseBins, 0.0), ss1(kPhaseBins, 0.0);
    std::vector<double> s2(kPhaseBins, 0.0), ss2(kPhaseBins, 0.0);
    std::vector<double> nj(kPhaseBins, 0.0);
    for (std::uint64_t i = 0; i < record.size(); ++i) {
        int j = static_cast<int>(record.thetas[i] / (kTwoPi / kPhaseBins));
        j = std::clamp(j, 0, kPhaseBins - 1);
        const double g1 = number_kernel(1, record.xs[i]);
        const double g2 = number_kernel(2, record.xs[i]);
        s1[static_cast<std::size_t>(j)] += g1;
        ss1[static_cast<std::size_t>(j)] += g1 * g1;
        s2[static_cast<std::size_t>(j)] += g2;
        ss2[static_cast<std::size_t>(j)] += g2 * g2;
        nj[static_cast<std::size_t>(j)] += 1.0;
    }
    auto riemann = [&](int order, const std::vector<double>& s, const std::vector<double>& ss) {
        double mean = 0.0, var = 0.0;
        for (int j = 0; j < kPhaseBins; ++j) {
            const double mj = s[static_cast<std::size_t>(j)] / nj[static_cast<std::size_t>(j)];
            const double vj = std::max(0.0, ss[static_cast<std::size_t>(j)] / nj[static_cast<std::size_t>(j)] - mj * mj);
            mean += mj;
            var += vj / nj[static_cast<std::size_t>(j)];
        }
        MomentEstimate e;
        e.k = order;
        e.value = mean / kPhaseBins;
        e.std_error = std::sqrt(var) / kPhaseBins;
        e.n_samples = record.size();
        return e;
    };
    return {riemann(1, s1, ss1), riemann(2, s2, ss2)};
}

NumberMomentEstimates estimate_number_moments(const QuadratureHistogram& hist) {
    if (hist.total == 0) throw DomainError("estimate_number_moments: empty histogram");
    if (!hist.empty_phase_bins.empty())
        throw PhaseCoverageError("histogram has empty phase bins");
    auto riemann = [&](int order) {
        double mean = 0.0, var = 0.0;
        for (int j = 0; j < kPhaseBins; ++j) {
            double nj = 0.0, s = 0.0, ss = 0.0;
            for (int b = 0; b < kAmplitudeBins; ++b) {
                const double cnt = static_cast<double>(hist.at(j, b));
                if (cnt == 0.0) continue;
                const double g = number_kernel(order, hist.amp_center(b));
                nj += cnt;
                s += cnt * g;
                ss += cnt * g * g;
            }
            const double mj = s / nj;
            const double vj = std::max(0.0, ss / nj - mj * mj);
            mean += mj;
            var += vj / nj;
        }
        MomentEstimate e;
        e.k = order;
        e.value = mean / kPhaseBins;
        e.std_error = std::sqrt(var) / kPhaseBins;
        e.n_samples = hist.total;
        return e;
    };
    return {riemann(1), riemann(2)};
}

double histogram_binning_bias(const QuadratureHistogram& hist, int k,
                              const KernelTable& kernel) {
    const double dth = kTwoPi / kPhaseBins;
    const double dx = (hist.x_hi - hist.x_lo) / kAmplitudeBins;
    // |Psi| <= 1; phase term (k dtheta)^2 / 24, amplitude term from the
    // occupancy-weighted second difference of F
    double curv = 0.0;
    double total = 0.0;
    for (int j = 0; j < kPhaseBins; ++j) {
        for (int b = 1; b + 1 < kAmplitudeBins; ++b) {
            const double cnt = static_cast<double>(hist.at(j, b));
            if (cnt == 0.0) continue;
            const double x = hist.amp_center(b);
            const double f2 = kernel.evaluate(x + dx) - 2.0 * kernel.evaluate(x) +
                              kernel.evaluate(x - dx);
            curv += cnt * std::abs(f2) / (dx * dx);
            total += cnt;
        }
    }
    const double amp_term = total > 0.0 ? (dx * dx / 24.0) * (curv / total) : 0.0;
    const double phase_term = (k * dth) * (k * dth) / 24.0;
    return amp_term + phase_term;
}

// ---- files ----

namespace {

constexpr char kRecordMagic[4] = {'H', 'R', 'E', 'C'};
constexpr std::uint32_t kRecordVersion = 1;

template <typename T>
void put(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw FormatError("record file: truncated");
    return v;
}

} // namespace

void write_record(const HomodyneRecord& record, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw FormatError("record file: cannot open " + path + " for writing");
    os.write(kRecordMagic, 4);
    put(os, kRecordVersion);
    put(os, static_cast<std::uint64_t>(record.size()));
    put(os, record.seed);
    put(os, static_cast<std::uint8_t>(record.scheme));
    put(os, static_cast<std::uint32_t>(record.state_descriptor.size()));
    os.write(record.state_descriptor.data(),
             static_cast<std::streamsize>(record.state_descriptor.size()));
    for (std::size_t i = 0; i < record.size(); ++i) {
        put(os, record.thetas[i]);
        put(os, record.xs[i]);
    }
    if (!os) throw FormatError("record file: write failed for " + path);
}

HomodyneRecord read_record(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("record file: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kRecordMagic, 4) != 0)
        throw FormatError("record file: bad magic in " + path);
    if (get<std::uint32_t>(is) != kRecordVersion)
        throw FormatError("record file: unsupported version in " + path);
    HomodyneRecord rec;
    const auto n = get<std::uint64_t>(is);
    rec.seed = get<std::uint64_t>(is);
    rec.scheme = static_cast<PhaseScheme>(get<std::uint8_t>(is));
    const auto len = get<std::uint32_t>(is);
    rec.state_descriptor.resize(len);
    is.read(rec.state_descriptor.data(), len);
    rec.thetas.resize(n);
    rec.xs.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        rec.thetas[i] = get<double>(is);
        rec.xs[i] = get<double>(is);
    }
    return rec;
}

void write_histogram(const QuadratureHistogram& hist, const std::string& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw FormatError("histogram file: cannot open " + path + " for writing");
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "quadrature-histogram v1\nphase_bins=%d\namplitude_bins=%d\n"
                  "x_lo=%a\nx_hi=%a\nvacuum_scale=%a\ntotal=%llu\nclipped=%llu\n",
                  kPhaseBins, kAmplitudeBins, hist.x_lo, hist.x_hi, hist.vacuum_scale,
                  static_cast<unsigned long long>(hist.total),
                  static_cast<unsigned long long>(hist.clipped));
    os << buf;
    for (int j = 0; j < kPhaseBins; ++j) {
        for (int b = 0; b < kAmplitudeBins; ++b) {
            if (b) os << ' ';
            os << hist.at(j, b);
        }
        os << '\n';
    }
    if (!os) throw FormatError("histogram file: write failed for " + path);
}

QuadratureHistogram read_histogram(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw FormatError("histogram file: cannot open " + path);
    std::string header;
    std::getline(is, header);
    if (header != "quadrature-histogram v1")
        throw FormatError("histogram file: bad header in " + path);
    auto read_kv = [&is, &path](const char* key) -> std::string {
        std::string line;
        std::getline(is, line);
        const auto eq = line.find('=');
        if (eq == std::string::npos || line.substr(0, eq) != key)
            throw FormatError("histogram file: expected " + std::string(key) + " in " + path);
        return line.substr(eq + 1);
    };
    if (std::stoi(read_kv("phase_bins")) != kPhaseBins)
        throw FormatError("histogram file: unexpected phase_bins");
    if (std::stoi(read_kv("amplitude_bins")) != kAmplitudeBins)
        throw FormatError("histogram file: unexpected amplitude_bins");
    QuadratureHistogram h;
    h.x_lo = std::strtod(read_kv("x_lo").c_str(), nullptr);
    h.x_hi = std::strtod(read_kv("x_hi").c_str(), nullptr);
    h.vacuum_scale = std::strtod(read_kv("vacuum_scale").c_str(), nullptr);
    h.total = std::stoull(read_kv("total"));
    h.clipped = std::stoull(read_kv("clipped"));
    h.counts.resize(static_cast<std::size_t>(kPhaseBins) * kAmplitudeBins);
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        if (!(is >> h.counts[i])) throw FormatError("histogram file: truncated counts");
    }
    for (int j = 0; j < kPhaseBins; ++j) {
        std::uint64_t nj = 0;
        for (int b = 0; b < kAmplitudeBins; ++b) nj += h.at(j, b);
        if (nj == 0) h.empty_phase_bins.push_back(j);
    }
    return h;
}

} // namespace phasemom
