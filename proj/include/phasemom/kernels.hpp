#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phasemom/oscillator.hpp"

namespace phasemom {

// Sampling kernel for the k-th exponential phase moment:
//   Psi_k = integral dtheta dx K_k(x, theta) p(x, theta),
//   K_k(x, theta) = e^{i k theta} F_k(x) / (2 pi).
// F_k is the windowed pattern-function sum
//   F_k(x) = sum_n w(n) f_{n,n+k}(x),
// with w == 1 for n <= n_max/2 and a smooth taper to zero at n_max, made
// parity-clean and with the moment-free polynomial gauge span
// {x^j : j < k, j == k mod 2} projected out (those monomials have zero
// overlap with every psi_a psi_{a+k}, so the projection cannot bias any
// estimate). The table is exact on the moment functionals,
//   integral F_k psi_a psi_{a+k} dx = 1,  a <= n_max/2,
// which is the property every estimator relies on.

/// Uniform symmetric grid: x_i = (i - half) * step, half = points/2.
struct KernelGridSpec {
    double x_cut = 13.0;  // rounded to a step multiple internally
    double step = 1e-3;

    std::size_t half_points() const;
    std::size_t points() const { return 2 * half_points() + 1; }
    double x_at(std::size_t i) const {
        return (static_cast<double>(i) - static_cast<double>(half_points())) * step;
    }
    bool operator==(const KernelGridSpec&) const = default;
};

/// Grid covering the classically allowed region of states truncated at
/// n_state: x_cut = max(6, sqrt(2 n_state + 1) + 4), step 1e-3.
KernelGridSpec default_grid_for_states(int n_state);

struct KernelOptions {
    double f_bound = 32.0;          // cap on max |F_k|
    double moment_tol = 1e-4;       // max_a |integral F psi_a psi_{a+k} - 1|
    double doubling_tol = 5e-2;     // sup-norm doubling delta over the core
    bool run_doubling_check = true; // costs a second windowed sum
};

struct KernelTable {
    int k = 0;
    int n_max_used = 0;
    KernelGridSpec grid;
    std::vector<double> values;

    // Constant continuation beyond the grid; for odd k the two sides are
    // opposite by parity. tail_left = F(-x_cut), tail_right = F(+x_cut).
    double tail_left = 0.0;
    double tail_right = 0.0;

    // Convergence diagnostics stored by the builder.
    double doubling_delta = 0.0; // sup |F^(n_max) - F^(2 n_max)| over |x| <= core
    double moment_deviation = 0.0;

    /// Linear interpolation on the grid, tail constants beyond it.
    double evaluate(double x) const;
    double max_abs() const;
};

/// Builds tables for k = 1..k_max in one pass (shared irregular sweeps).
std::vector<KernelTable> build_phase_kernels(int k_max, int n_max,
                                             const KernelGridSpec& grid,
                                             const KernelOptions& opts = {});

/// Single-order convenience wrapper.
KernelTable phase_moment_kernel(int k, int n_max, const KernelGridSpec& grid,
                                const KernelOptions& opts = {});

/// Kernels for direct sampling of photon-number moments under a uniform
/// phase average: order 1 -> x^2 - 1/2 (<n>), order 2 -> (2/3)x^4 - x^2 (<n^2>).
double number_kernel(int order, double x);

// ---- binary cache ("PKT1", little-endian) ----

void save_kernel_table(const KernelTable& table, const std::string& path);
KernelTable load_kernel_table(const std::string& path);

/// Cache file name key: order, series length, grid, format version.
std::string kernel_cache_name(int k, int n_max, const KernelGridSpec& grid);

} // namespace phasemom
