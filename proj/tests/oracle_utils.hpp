// Test-only oracles, independent of the library's computation paths.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "phasemom/states.hpp"

namespace oracle {

using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;

inline MatC annihilation(int dim) {
    MatC a = MatC::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

/// D(alpha) S(zeta) |0> by matrix exponentials of the truncated generators.
inline std::vector<std::complex<double>> displaced_squeezed_expm(
    std::complex<double> alpha, double r, double squeeze_angle, int n_max) {
    const int dim = n_max + 1;
    const MatC a = annihilation(dim);
    const MatC ad = a.adjoint();
    const std::complex<double> zeta = std::polar(r, 2.0 * squeeze_angle);
    const MatC S = (0.5 * (std::conj(zeta) * (a * a) - zeta * (ad * ad))).exp();
    const MatC D = (alpha * ad - std::conj(alpha) * a).exp();
    VecC v = VecC::Zero(dim);
    v(0) = 1.0;
    v = D * (S * v);
    return {v.data(), v.data() + dim};
}

/// Brute-force Psi_k = sum_n c_{n+k} conj(c_n).
inline std::complex<double> exp_moment(const std::vector<std::complex<double>>& c, int k) {
    std::complex<double> s = 0.0;
    for (std::size_t n = 0; n + static_cast<std::size_t>(k) < c.size(); ++n)
        s += c[n + static_cast<std::size_t>(k)] * std::conj(c[n]);
    return s;
}

/// Simpson integration of f over [a, b] with n panels (n even).
template <typename F>
double simpson(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

} // namespace oracle
