#include "phasemom/states.hpp"

#include <cmath>

#include "phasemom/errors.hpp"
#include "phasemom/oscillator.hpp"

namespace phasemom {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

double reduce_2pi(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r;
}

} // namespace

GaussianStateSpec GaussianStateSpec::make(double alpha_mag, double alpha_phase,
                                          double squeeze_r, double squeeze_angle) {
    if (alpha_mag < 0.0) throw DomainError("GaussianStateSpec: alpha_mag < 0");
    if (squeeze_r < 0.0) throw DomainError("GaussianStateSpec: squeeze_r < 0");
    GaussianStateSpec s;
    s.alpha_mag = alpha_mag;
    s.alpha_phase = reduce_2pi(alpha_phase);
    s.squeeze_r = squeeze_r;
    s.squeeze_angle = reduce_2pi(squeeze_angle);
    return s;
}

complexd GaussianStateSpec::alpha() const {
    return std::polar(alpha_mag, alpha_phase);
}

double GaussianStateSpec::quadrature_mean(double theta) const {
    return std::sqrt(2.0) * alpha_mag * std::cos(theta - alpha_phase);
}

double GaussianStateSpec::quadrature_variance(double theta) const {
    const double c = std::cos(theta - squeeze_angle);
    const double s = std::sin(theta - squeeze_angle);
    return 0.5 * (std::exp(-2.0 * squeeze_r) * c * c + std::exp(2.0 * squeeze_r) * s * s);
}

FockState::FockState(std::vector<complexd> amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.empty()) throw DomainError("FockState: empty amplitude vector");
}

double FockState::norm_squared() const {
    double s = 0.0;
    for (const auto& c : amps_) s += std::norm(c);
    return s;
}

FockDensityMatrix::FockDensityMatrix(int n_max, std::vector<complexd> row_major)
    : dim_(n_max + 1), rho_(std::move(row_major)) {
    if (dim_ <= 0 || rho_.size() != static_cast<std::size_t>(dim_) * dim_)
        throw DomainError("FockDensityMatrix: bad dimensions");
}

double FockDensityMatrix::trace() const {
    double t = 0.0;
    for (int n = 0; n < dim_; ++n) t += at(n, n).real();
    return t;
}

FockState gaussian_to_fock(const GaussianStateSpec& spec, int n_max, double eps) {
    if (n_max < 0) throw DomainError("gaussian_to_fock: n_max < 0");
    // c_{n+1} = (gamma c_n - nu sqrt(n) c_{n-1}) / sqrt(n+1),
    // nu = e^{2i angle} tanh r, gamma = alpha + conj(alpha) nu,
    // c_0 = sech(r)^{1/2} exp(-|alpha|^2/2 - conj(alpha)^2 nu / 2).
    const complexd alpha = spec.alpha();
    const complexd nu = std::polar(std::tanh(spec.squeeze_r), 2.0 * spec.squeeze_angle);
    const complexd gamma = alpha + std::conj(alpha) * nu;
    std::vector<complexd> c(static_cast<std::size_t>(n_max) + 1);
    c[0] = std::sqrt(1.0 / std::cosh(spec.squeeze_r)) *
           std::exp(-0.5 * std::norm(alpha) - 0.5 * std::conj(alpha) * std::conj(alpha) * nu);
    if (n_max >= 1) c[1] = gamma * c[0];
    for (int n = 1; n < n_max; ++n)
        c[n + 1] = (gamma * c[n] - nu * std::sqrt(double(n)) * c[n - 1]) /
                   std::sqrt(double(n) + 1.0);
    FockState state(std::move(c));
    const double deficit = 1.0 - state.norm_squared();
    if (deficit > eps)
        throw TruncationError("gaussian_to_fock: norm deficit " + std::to_string(deficit) +
                              " at n_max = " + std::to_string(n_max) +
                              "; raise n_max or the truncation budget");
    return state;
}

int adaptive_fock_cutoff(const GaussianStateSpec& spec, double eps) {
    int n = 16;
    while (n < kFockTruncationCap) {
        try {
            gaussian_to_fock(spec, n, eps);
            break;
        } catch (const TruncationError&) {
            n *= 2;
        }
    }
    if (n > kFockTruncationCap) n = kFockTruncationCap;
    gaussian_to_fock(spec, n, eps); // throws if even the cap cannot hold it
    // binary search down to the smallest adequate cutoff
    int lo = n / 2, hi = n;
    while (lo + 1 < hi) {
        const int mid = (lo + hi) / 2;
        try {
            gaussian_to_fock(spec, mid, eps);
            hi = mid;
        } catch (const TruncationError&) {
            lo = mid;
        }
    }
    return hi;
}

FockDensityMatrix fock_density(const FockState& state) {
    const int dim = state.n_max() + 1;
    std::vector<complexd> rho(static_cast<std::size_t>(dim) * dim);
    for (int m = 0; m < dim; ++m)
        for (int n = 0; n < dim; ++n)
            rho[static_cast<std::size_t>(m) * dim + n] =
                state.amplitude(m) * std::conj(state.amplitude(n));
    return FockDensityMatrix(dim - 1, std::move(rho));
}

double quadrature_pdf(const GaussianStateSpec& spec, double theta, double x) {
    const double mu = spec.quadrature_mean(theta);
    const double var = spec.quadrature_variance(theta);
    const double d = x - mu;
    return std::exp(-d * d / (2.0 * var)) / std::sqrt(kTwoPi * var);
}

double quadrature_pdf(const FockState& state, double theta, double x) {
    const std::vector<double> psi = regular_wavefunctions(state.n_max(), x);
    complexd amp = 0.0;
    for (int n = 0; n <= state.n_max(); ++n)
        amp += state.amplitude(n) * std::polar(1.0, -n * theta) * psi[static_cast<std::size_t>(n)];
    return std::norm(amp);
}

complexd oracle_exponential_moment(const FockDensityMatrix& rho, int k) {
    if (k < 1) throw DomainError("oracle_exponential_moment: k must be >= 1");
    complexd s = 0.0;
    for (int n = 0; n + k <= rho.n_max(); ++n) s += rho.at(n + k, n);
    return s;
}

NumberMoments oracle_number_moments(const FockDensityMatrix& rho) {
    NumberMoments m;
    for (int n = 0; n <= rho.n_max(); ++n) {
        const double p = rho.at(n, n).real();
        m.mean += n * p;
        m.second_moment += double(n) * n * p;
    }
    return m;
}

std::vector<complexd> oracle_exponential_moments(const FockDensityMatrix& rho, int k_max) {
    std::vector<complexd> out;
    out.reserve(static_cast<std::size_t>(k_max));
    for (int k = 1; k <= k_max; ++k) out.push_back(oracle_exponential_moment(rho, k));
    return out;
}

} // namespace phasemom
