#pragma once

#include <complex>
#include <string>
#include <vector>

namespace phasemom {

using complexd = std::complex<double>;

/// Default truncation budget: 1 - sum |c_n|^2 must stay below this.
inline constexpr double kTruncationEpsilon = 1e-10;

/// Hard cap for the adaptive Fock truncation.
inline constexpr int kFockTruncationCap = 512;

// Pure single-mode Gaussian state |alpha, zeta> = D(alpha) S(zeta) |0> with
//   alpha = alpha_mag e^{i alpha_phase},  zeta = squeeze_r e^{2i squeeze_angle},
//   S(zeta) = exp[(conj(zeta) a^2 - zeta a^dag^2)/2].
// squeeze_angle is the quadrature angle of minimum variance. A state
// "squeezed at a phase angle of delta" is encoded as
// squeeze_angle - alpha_phase = delta.
struct GaussianStateSpec {
    double alpha_mag = 0.0;
    double alpha_phase = 0.0;   // radians, reduced to [0, 2pi)
    double squeeze_r = 0.0;
    double squeeze_angle = 0.0; // radians, reduced to [0, 2pi)

    /// Validates magnitudes and reduces phases modulo 2pi.
    static GaussianStateSpec make(double alpha_mag, double alpha_phase,
                                  double squeeze_r, double squeeze_angle);

    bool is_coherent() const { return squeeze_r == 0.0; }
    bool is_squeezed_vacuum() const { return alpha_mag == 0.0 && squeeze_r > 0.0; }

    complexd alpha() const;
    /// Quadrature mean at local-oscillator phase theta: sqrt(2)|alpha|cos(theta - alpha_phase).
    double quadrature_mean(double theta) const;
    /// Quadrature variance at theta:
    /// (e^{-2r} cos^2(theta - squeeze_angle) + e^{2r} sin^2(theta - squeeze_angle))/2.
    double quadrature_variance(double theta) const;
};

/// Truncated number-basis amplitudes of a pure state.
class FockState {
public:
    FockState() = default;
    explicit FockState(std::vector<complexd> amplitudes);

    int n_max() const { return static_cast<int>(amps_.size()) - 1; }
    const std::vector<complexd>& amplitudes() const { return amps_; }
    complexd amplitude(int n) const { return amps_[static_cast<std::size_t>(n)]; }
    double norm_squared() const;

private:
    std::vector<complexd> amps_;
};

/// Hermitian, positive (by construction) density matrix in the number basis.
class FockDensityMatrix {
public:
    FockDensityMatrix() = default;
    FockDensityMatrix(int n_max, std::vector<complexd> row_major);

    int n_max() const { return dim_ - 1; }
    int dim() const { return dim_; }
    complexd at(int m, int n) const {
        return rho_[static_cast<std::size_t>(m) * dim_ + n];
    }
    double trace() const;

private:
    int dim_ = 0;
    std::vector<complexd> rho_;
};

/// Number-basis amplitudes of |alpha, zeta> at truncation n_max; throws
/// TruncationError when the norm deficit exceeds eps.
FockState gaussian_to_fock(const GaussianStateSpec& spec, int n_max,
                           double eps = kTruncationEpsilon);

/// Smallest truncation meeting eps, capped at kFockTruncationCap.
int adaptive_fock_cutoff(const GaussianStateSpec& spec, double eps = kTruncationEpsilon);

/// rho_{mn} = c_m conj(c_n).
FockDensityMatrix fock_density(const FockState& state);

/// p(x, theta) = <x,theta| rho |x,theta>, closed Gaussian form.
double quadrature_pdf(const GaussianStateSpec& spec, double theta, double x);

/// p(x, theta) = |sum_n c_n e^{-i n theta} psi_n(x)|^2.
double quadrature_pdf(const FockState& state, double theta, double x);

/// Psi_k = <E^k> = sum_n rho_{n+k,n} for k >= 1 (E|n> = |n-1>).
/// Psi_{-k} is the caller's duty via conjugation. |result| <= 1.
complexd oracle_exponential_moment(const FockDensityMatrix& rho, int k);

struct NumberMoments {
    double mean = 0.0;          // <n>
    double second_moment = 0.0; // <n^2>
};

NumberMoments oracle_number_moments(const FockDensityMatrix& rho);

/// Exact exponential moments k = 1..k_max as a flat vector (index k-1).
std::vector<complexd> oracle_exponential_moments(const FockDensityMatrix& rho, int k_max);

} // namespace phasemom
