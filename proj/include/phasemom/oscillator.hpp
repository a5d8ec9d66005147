#pragma once

#include <utility>
#include <vector>

namespace phasemom {

// Oscillator eigenfunctions in the vacuum-variance-1/2 convention:
//   psi_n(x) = (2^n n! sqrt(pi))^{-1/2} H_n(x) e^{-x^2/2},  <x^2>_vac = 1/2.
//
// The irregular companion phi_n is the second solution of
//   y'' + (2n + 1 - x^2) y = 0
// with parity phi_n(-x) = (-1)^{n+1} phi_n(x) and Wronskian
//   psi_n phi_n' - psi_n' phi_n = 2,
// the normalization that makes the pattern functions below biorthogonal to
// the quadrature projectors with unit weight.

/// psi_n(x) by the stable three-term recurrence.
double regular_wavefunction(int n, double x);

/// psi_n(x) for n = 0..n_max at one point.
std::vector<double> regular_wavefunctions(int n_max, double x);

/// d/dx psi_n(x) = sqrt(2n) psi_{n-1}(x) - x psi_n(x).
double regular_wavefunction_derivative(int n, double x);

struct IrregularPoint {
    double value = 0.0;
    double derivative = 0.0;
};

/// phi_n(x) with its derivative, by outward Numerov integration from the
/// parity-determined data at x = 0, Wronskian-renormalized every unit
/// interval. Throws NumericalInstability if the Wronskian drifts by more
/// than 1e-6 between renormalizations.
IrregularPoint irregular_wavefunction_with_derivative(int n, double x);

/// phi_n(x).
double irregular_wavefunction(int n, double x);

/// Pattern function f_{mn}(x) = d/dx [psi_m(x) phi_n(x)].
/// Satisfies  integral dtheta/(2pi) dx e^{i(m-n)theta} f_{mn}(x)
/// p_{|a><b|}(x,theta) = delta_{ma} delta_{nb}.
double pattern_function(int m, int n, double x);

namespace detail {

// Batched evaluation on a uniform grid x_i = i*step, i = 0..count-1, used by
// the kernel builder. phi values and derivatives for one n over the whole
// positive half-grid in a single Numerov sweep.
void irregular_on_grid(int n, double step, std::size_t count,
                       std::vector<double>& values, std::vector<double>& derivs);

// psi_n on the same positive half-grid, rolled upward in n by the caller.
void regular_row0(double step, std::size_t count, std::vector<double>& out);
void regular_row1(double step, std::size_t count, const std::vector<double>& row0,
                  std::vector<double>& out);
void regular_next(int n_prev, double step, std::size_t count,
                  const std::vector<double>& prev, const std::vector<double>& prev2,
                  std::vector<double>& out);

} // namespace detail

} // namespace phasemom
