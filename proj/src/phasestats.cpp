#include "phasemom/phasestats.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "phasemom/errors.hpp"

namespace phasemom {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kUnboundedMargin = 1e-6;

} // namespace

double PhaseDistribution::integral() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * kTwoPi / static_cast<double>(values.size());
}

double PhaseDistribution::min_value() const {
    double m = values.empty() ? 0.0 : values[0];
    for (double v : values) m = std::min(m, v);
    return m;
}

double PhaseDistribution::circular_variance() const {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        re += values[i] * std::cos(grid[i]);
        im += values[i] * std::sin(grid[i]);
    }
    const double w = kTwoPi / static_cast<double>(values.size());
    return 1.0 - std::hypot(re * w, im * w);
}

std::vector<std::size_t> PhaseDistribution::local_maxima() const {
    std::vector<std::size_t> out;
    const std::size_t n = values.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double prev = values[(i + n - 1) % n];
        const double next = values[(i + 1) % n];
        if (values[i] > prev && values[i] > next) out.push_back(i);
    }
    return out;
}

PhaseDistribution synthesize_phase_distribution(const std::vector<MomentEstimate>& moments,
                                                int grid_size, Window window) {
    const int k_max = static_cast<int>(moments.size());
    if (grid_size < 4 * k_max)
        throw GridTooCoarse("synthesize_phase_distribution: grid_size " +
                            std::to_string(grid_size) + " < 4 k_max = " +
                            std::to_string(4 * k_max));
    for (int k = 1; k <= k_max; ++k)
        if (moments[static_cast<std::size_t>(k - 1)].k != k)
            throw DomainError("synthesize_phase_distribution: moments must be k = 1..k_max in order");

    PhaseDistribution d;
    d.k_max = k_max;
    d.window = window;
    d.grid.resize(static_cast<std::size_t>(grid_size));
    d.values.resize(static_cast<std::size_t>(grid_size));
    for (int i = 0; i < grid_size; ++i) {
        const double phi = -kPi + kTwoPi * i / grid_size;
        double s = 1.0;
        for (int k = 1; k <= k_max; ++k) {
            const double w =
                window == Window::Cesaro ? 1.0 - double(k) / (k_max + 1) : 1.0;
            const auto v = moments[static_cast<std::size_t>(k - 1)].value;
            s += 2.0 * w * (v.real() * std::cos(k * phi) + v.imag() * std::sin(k * phi));
        }
        d.grid[static_cast<std::size_t>(i)] = phi;
        d.values[static_cast<std::size_t>(i)] = s / kTwoPi;
    }
    return d;
}

PhaseDistribution oracle_phase_distribution(const FockDensityMatrix& rho, int k_max,
                                            int grid_size, Window window) {
    std::vector<MomentEstimate> moments;
    moments.reserve(static_cast<std::size_t>(k_max));
    for (int k = 1; k <= k_max; ++k) {
        MomentEstimate e;
        e.k = k;
        e.value = oracle_exponential_moment(rho, k);
        moments.push_back(e);
    }
    return synthesize_phase_distribution(moments, grid_size, window);
}

PhaseStatistics phase_statistics(const MomentEstimate& psi_1, const MomentEstimate& n_mean,
                                 const MomentEstimate& n_second) {
    PhaseStatistics s;
    const double mag = std::min(std::abs(psi_1.value), 1.0);
    s.mean_phase = std::abs(psi_1.value) > 0.0 ? std::arg(psi_1.value) : 0.0;
    s.phase_uncertainty = std::acos(mag);
    s.n_mean = n_mean.value.real();

    double var_n = n_second.value.real() - s.n_mean * s.n_mean;
    if (var_n < 0.0) {
        var_n = 0.0;
        s.degenerate_variance = true;
    }
    s.n_uncertainty = std::sqrt(var_n);

    // first-order propagation; the variance estimate combines the two number
    // moments without their covariance. At a clamped (zero) variance the
    // linearization of the square root breaks down; sqrt(sigma_var) bounds
    // the scale Delta n can take within one sigma of the variance.
    const double sigma_mag = psi_1.std_error;
    const double sigma_var_n = std::sqrt(n_second.std_error * n_second.std_error +
                                         4.0 * s.n_mean * s.n_mean *
                                             n_mean.std_error * n_mean.std_error);
    const double sigma_dn = s.n_uncertainty > 0.5 * std::sqrt(sigma_var_n)
                                ? sigma_var_n / (2.0 * s.n_uncertainty)
                                : std::sqrt(sigma_var_n);

    if (s.phase_uncertainty >= kPi / 2.0 - kUnboundedMargin) {
        s.product_unbounded = true;
        s.product = std::numeric_limits<double>::infinity();
        s.product_error = std::numeric_limits<double>::infinity();
        return s;
    }
    const double t = std::tan(s.phase_uncertainty);
    s.product = s.n_uncertainty * t;
    // dphi/d|Psi_1| = -1/sqrt(1-|Psi_1|^2); d(tan)/dphi = sec^2
    const double sec2 = 1.0 + t * t;
    const double denom = std::sqrt(std::max(1e-300, 1.0 - mag * mag));
    const double sigma_tan = sec2 * sigma_mag / denom;
    s.product_error = std::hypot(t * sigma_dn, s.n_uncertainty * sigma_tan);
    return s;
}

UncertaintyReport uncertainty_report(const std::vector<PhaseStatistics>& stats,
                                     const std::vector<std::string>& labels) {
    if (stats.empty()) throw DomainError("uncertainty_report: empty input");
    if (stats.size() != labels.size())
        throw DomainError("uncertainty_report: labels/stats size mismatch");
    UncertaintyReport rep;
    for (std::size_t i = 0; i < stats.size(); ++i) {
        UncertaintyRow row;
        row.label = labels[i];
        row.stats = stats[i];
        row.violates_bound = !stats[i].product_unbounded &&
                             stats[i].product < 0.5 - 3.0 * stats[i].product_error;
        if (row.violates_bound) ++rep.violation_count;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

namespace {

std::string product_cell(const PhaseStatistics& s) {
    if (s.product_unbounded) return ">= unbounded (dphi ~ pi/2)";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f +- %.4f", s.product, s.product_error);
    return buf;
}

} // namespace

std::string UncertaintyReport::to_text() const {
    std::ostringstream os;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-10s %10s %10s %10s %10s  %-26s %s\n", "state",
                  "mean_phase", "dphi", "n_mean", "dn", "dn*tan(dphi)", "flags");
    os << buf;
    for (const auto& row : rows) {
        const auto& s = row.stats;
        std::string flags;
        if (row.violates_bound) flags += " BOUND-VIOLATION";
        if (s.degenerate_variance) flags += " DEGENERATE-VARIANCE";
        if (s.n_uncertainty * s.n_uncertainty < s.n_mean && s.n_mean > 0.0)
            flags += " sub-poissonian";
        std::snprintf(buf, sizeof(buf), "%-10s %10.5f %10.5f %10.5f %10.5f  %-26s%s\n",
                      row.label.c_str(), s.mean_phase, s.phase_uncertainty, s.n_mean,
                      s.n_uncertainty, product_cell(s).c_str(), flags.c_str());
        os << buf;
    }
    os << "bound violations: " << violation_count << "\n";
    return os.str();
}

std::string UncertaintyReport::to_structured_text() const {
    std::ostringstream os;
    for (const auto& row : rows) {
        const auto& s = row.stats;
        os << "state=" << row.label << " mean_phase_rad=" << s.mean_phase
           << " phase_uncertainty_rad=" << s.phase_uncertainty << " n_mean=" << s.n_mean
           << " n_uncertainty=" << s.n_uncertainty << " product="
           << (s.product_unbounded ? std::string("unbounded") : std::to_string(s.product))
           << " product_error="
           << (s.product_unbounded ? std::string("unbounded") : std::to_string(s.product_error))
           << " degenerate_variance=" << (s.degenerate_variance ? 1 : 0)
           << " violates_bound=" << (row.violates_bound ? 1 : 0) << "\n";
    }
    return os.str();
}

std::string phase_distribution_table(const PhaseDistribution& dist) {
    std::ostringstream os;
    char buf[80];
    for (std::size_t i = 0; i < dist.grid.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%+.10f %+.12e\n", dist.grid[i], dist.values[i]);
        os << buf;
    }
    return os.str();
}

} // namespace phasemom
