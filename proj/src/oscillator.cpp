#include "phasemom/oscillator.hpp"

#include <cmath>
#include <cstdlib>

#include "phasemom/errors.hpp"

namespace phasemom {

namespace {

constexpr double kWronskian = 2.0;
constexpr double kPi = 3.14159265358979323846;

// Numerov step for y'' = q(x) y with uniform step h.
inline double numerov_next(double h2_12, double qm, double qc, double qp,
                           double ym, double yc) {
    return (2.0 * (1.0 + 5.0 * h2_12 * qc) * yc - (1.0 - h2_12 * qm) * ym) /
           (1.0 - h2_12 * qp);
}

// First step from x = 0 by the parity power series of y'' = (x^2 - E) y:
// coefficients obey (j+2)(j+1) c_{j+2} = c_{j-2} - E c_j. Either y0 or d0
// is exactly zero by parity.
inline double series_first_step(double h, double E, double y0, double d0) {
    if (y0 == 0.0) { // odd solution
        const double a3 = -E / 6.0;
        const double a5 = (1.0 - E * a3) / 20.0;
        const double a7 = (a3 - E * a5) / 42.0;
        const double a9 = (a5 - E * a7) / 72.0;
        const double h2 = h * h;
        return d0 * h * (1.0 + h2 * (a3 + h2 * (a5 + h2 * (a7 + h2 * a9))));
    }
    const double b2 = -E / 2.0;
    const double b4 = (1.0 - E * b2) / 12.0;
    const double b6 = (b2 - E * b4) / 30.0;
    const double b8 = (b4 - E * b6) / 56.0;
    const double h2 = h * h;
    return y0 * (1.0 + h2 * (b2 + h2 * (b4 + h2 * (b6 + h2 * b8))));
}

// Derivative on a uniform grid for y'' = q y, O(h^4):
//   y'(2h + h^3 q/3) = (y_{i+1} - y_{i-1}) - (h^3/3) q' y,   q' = 2x.
inline double compact_derivative(double h, double x, double q, double ym,
                                 double yc, double yp) {
    return ((yp - ym) - (h * h * h / 3.0) * (2.0 * x) * yc) /
           (2.0 * h + h * h * h * q / 3.0);
}

struct ParityStart {
    double value;
    double slope;
};

// phi_n(0), phi_n'(0) from parity and the Wronskian against psi_n.
ParityStart irregular_start(int n) {
    if (n % 2 == 0) {
        const double p0 = regular_wavefunction(n, 0.0);
        return {0.0, kWronskian / p0};
    }
    const double d0 = regular_wavefunction_derivative(n, 0.0);
    return {-kWronskian / d0, 0.0};
}

} // namespace

double regular_wavefunction(int n, double x) {
    if (n < 0) throw DomainError("regular_wavefunction: n must be >= 0");
    double p0 = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
    if (n == 0) return p0;
    double p1 = std::sqrt(2.0) * x * p0;
    for (int m = 1; m < n; ++m) {
        const double p2 = std::sqrt(2.0 / (m + 1)) * x * p1 -
                          std::sqrt(double(m) / (m + 1)) * p0;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

std::vector<double> regular_wavefunctions(int n_max, double x) {
    if (n_max < 0) throw DomainError("regular_wavefunctions: n_max must be >= 0");
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
    out[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
    if (n_max >= 1) out[1] = std::sqrt(2.0) * x * out[0];
    for (int m = 1; m < n_max; ++m)
        out[m + 1] = std::sqrt(2.0 / (m + 1)) * x * out[m] -
                     std::sqrt(double(m) / (m + 1)) * out[m - 1];
    return out;
}

double regular_wavefunction_derivative(int n, double x) {
    if (n == 0) return -x * regular_wavefunction(0, x);
    return std::sqrt(2.0 * n) * regular_wavefunction(n - 1, x) -
           x * regular_wavefunction(n, x);
}

IrregularPoint irregular_wavefunction_with_derivative(int n, double x) {
    if (n < 0) throw DomainError("irregular_wavefunction: n must be >= 0");
    const double ax = std::abs(x);
    const double E = 2.0 * n + 1.0;
    const ParityStart s = irregular_start(n);
    if (ax == 0.0) return {s.value, s.slope};

    // Integrate on [0, ax + h] with a step subdividing ax exactly; the extra
    // point past ax completes the derivative stencil there.
    const double target_h = 5e-4;
    const std::size_t steps = std::max<std::size_t>(8, std::llround(std::ceil(ax / target_h)));
    const double h = ax / static_cast<double>(steps);
    const double h2_12 = h * h / 12.0;
    auto q_at = [E](double t) { return t * t - E; };

    // ya, yb, yc = values at x_{i-1}, x_i, x_{i+1}
    double ya = s.value;
    double yb = series_first_step(h, E, s.value, s.slope);
    double yc = numerov_next(h2_12, q_at(0.0), q_at(h), q_at(2.0 * h), ya, yb);
    double next_check = 1.0;
    for (std::size_t i = 1; i < steps; ++i) {
        const double xi = h * static_cast<double>(i); // yb sits at xi, yc at xi + h
        if (xi >= next_check) {
            const double phid = compact_derivative(h, xi, q_at(xi), ya, yb, yc);
            const double w = regular_wavefunction(n, xi) * phid -
                             regular_wavefunction_derivative(n, xi) * yb;
            const double drift = std::abs(w / kWronskian - 1.0);
            if (drift > 1e-6)
                throw NumericalInstability("irregular_wavefunction: Wronskian drift " +
                                           std::to_string(drift) + " at x = " + std::to_string(xi));
            const double scale = kWronskian / w;
            ya *= scale;
            yb *= scale;
            yc *= scale;
            next_check += 1.0;
        }
        const double xn = xi + h;
        const double yd = numerov_next(h2_12, q_at(xn - h), q_at(xn), q_at(xn + h), yb, yc);
        ya = yb;
        yb = yc;
        yc = yd;
    }
    // yb now sits at ax, with ya and yc flanking it.
    double value = yb;
    double deriv = compact_derivative(h, ax, q_at(ax), ya, yb, yc);

    if (x < 0.0) {
        const double parity = (n % 2 == 0) ? -1.0 : 1.0;
        value *= parity;
        deriv *= -parity;
    }
    return {value, deriv};
}

double irregular_wavefunction(int n, double x) {
    return irregular_wavefunction_with_derivative(n, x).value;
}

double pattern_function(int m, int n, double x) {
    if (m < 0 || n < 0) throw DomainError("pattern_function: indices must be >= 0");
    const IrregularPoint ph = irregular_wavefunction_with_derivative(n, x);
    return regular_wavefunction_derivative(m, x) * ph.value +
           regular_wavefunction(m, x) * ph.derivative;
}

namespace detail {

void irregular_on_grid(int n, double step, std::size_t count,
                       std::vector<double>& values, std::vector<double>& derivs) {
    values.resize(count);
    derivs.resize(count);
    const double E = 2.0 * n + 1.0;
    const ParityStart s = irregular_start(n);
    const double h = step;
    const double h2_12 = h * h / 12.0;
    auto q_at = [E, h](std::size_t i) {
        const double t = h * static_cast<double>(i);
        return t * t - E;
    };
    values[0] = s.value;
    if (count == 1) {
        derivs[0] = s.slope;
        return;
    }
    values[1] = series_first_step(h, E, s.value, s.slope);
    for (std::size_t i = 1; i + 1 < count; ++i)
        values[i + 1] = numerov_next(h2_12, q_at(i - 1), q_at(i), q_at(i + 1),
                                     values[i - 1], values[i]);
    derivs[0] = s.slope;
    for (std::size_t i = 1; i + 1 < count; ++i) {
        const double xi = h * static_cast<double>(i);
        derivs[i] = compact_derivative(h, xi, q_at(i), values[i - 1], values[i], values[i + 1]);
    }
    // one-sided end value; callers keep a trim margin so this is never used
    derivs[count - 1] = derivs[count - 2];
}

void regular_row0(double step, std::size_t count, std::vector<double>& out) {
    out.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double x = step * static_cast<double>(i);
        out[i] = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
    }
}

void regular_row1(double step, std::size_t count, const std::vector<double>& row0,
                  std::vector<double>& out) {
    out.resize(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = std::sqrt(2.0) * step * static_cast<double>(i) * row0[i];
}

void regular_next(int n_prev, double step, std::size_t count,
                  const std::vector<double>& prev, const std::vector<double>& prev2,
                  std::vector<double>& out) {
    out.resize(count);
    const double a = std::sqrt(2.0 / (n_prev + 1));
    const double b = std::sqrt(double(n_prev) / (n_prev + 1));
    for (std::size_t i = 0; i < count; ++i)
        out[i] = a * step * static_cast<double>(i) * prev[i] - b * prev2[i];
}

} // namespace detail

} // namespace phasemom
