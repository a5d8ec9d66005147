#include <doctest.h>

#include <cmath>

#include "phasemom/errors.hpp"
#include "phasemom/oscillator.hpp"

using namespace phasemom;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("regular wavefunction ground state and parity") {
    CHECK(regular_wavefunction(0, 0.0) == doctest::Approx(std::pow(kPi, -0.25)).epsilon(1e-14));
    CHECK(regular_wavefunction(1, 0.0) == doctest::Approx(0.0));
    // psi_10(1.3) against a frozen high-precision series evaluation
    CHECK(regular_wavefunction(10, 1.3) ==
          doctest::Approx(-0.34999147167891236).epsilon(1e-10));
}

TEST_CASE("regular wavefunctions are L2-normalized") {
    for (int n : {0, 1, 5, 17, 40}) {
        const double h = 1e-3;
        double s = 0.0;
        const double x_hi = std::sqrt(2.0 * n + 1.0) + 8.0;
        for (double x = -x_hi; x <= x_hi; x += h) {
            const double p = regular_wavefunction(n, x);
            s += p * p * h;
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("regular wavefunction derivative matches finite differences") {
    const double h = 1e-5;
    for (int n : {0, 1, 3, 12}) {
        for (double x : {-2.3, 0.4, 1.7}) {
            const double fd =
                (regular_wavefunction(n, x + h) - regular_wavefunction(n, x - h)) / (2 * h);
            CHECK(regular_wavefunction_derivative(n, x) == doctest::Approx(fd).epsilon(1e-7));
        }
    }
}

TEST_CASE("irregular wavefunction: Wronskian is x-independent for n = 0..5") {
    for (int n = 0; n <= 5; ++n) {
        for (double x : {-4.9, -2.1, -0.3, 0.7, 1.9, 3.3, 5.0}) {
            const auto ph = irregular_wavefunction_with_derivative(n, x);
            const double w = regular_wavefunction(n, x) * ph.derivative -
                             regular_wavefunction_derivative(n, x) * ph.value;
            CHECK(w == doctest::Approx(2.0).epsilon(1e-8));
        }
    }
}

TEST_CASE("irregular wavefunction: parity phi_n(-x) = (-1)^{n+1} phi_n(x)") {
    for (int n = 0; n <= 5; ++n) {
        for (double x : {0.6, 1.4, 3.8}) {
            const double sign = (n % 2 == 0) ? -1.0 : 1.0;
            CHECK(irregular_wavefunction(n, -x) ==
                  doctest::Approx(sign * irregular_wavefunction(n, x)).epsilon(1e-10));
        }
    }
}

TEST_CASE("irregular wavefunction: phi_0 closed form via Dawson integral") {
    // phi_0(x) = 2 pi^{1/4} e^{-x^2/2} integral_0^x e^{t^2} dt; pinned at x = 1
    CHECK(irregular_wavefunction(0, 1.0) ==
          doctest::Approx(2.3621700391160744).epsilon(1e-9));
}

TEST_CASE("pattern function f_{01} matches finite differences of psi_0 phi_1") {
    const double x = 0.7;
    auto prod = [](double t) {
        return regular_wavefunction(0, t) * irregular_wavefunction(1, t);
    };
    // raw central difference at step 1e-5 carries the evaluator's ~1e-12
    // point noise amplified to ~1e-7; Richardson over steps 1e-4 and 2e-4
    // removes the h^2 truncation with far less noise amplification
    const double fd5 = (prod(x + 1e-5) - prod(x - 1e-5)) / 2e-5;
    CHECK(pattern_function(0, 1, x) == doctest::Approx(fd5).epsilon(5e-7));
    auto central = [&](double h) { return (prod(x + h) - prod(x - h)) / (2 * h); };
    const double richardson = (4.0 * central(1e-4) - central(2e-4)) / 3.0;
    CHECK(pattern_function(0, 1, x) == doctest::Approx(richardson).epsilon(1e-8));
}

TEST_CASE("pattern function index order: symmetric for adjacent indices, "
          "polynomial gauge beyond") {
    for (double x : {0.35, 1.1, 2.6}) {
        CHECK(pattern_function(0, 1, x) ==
              doctest::Approx(pattern_function(1, 0, x)).epsilon(1e-9));
        CHECK(pattern_function(3, 4, x) ==
              doctest::Approx(pattern_function(4, 3, x)).epsilon(1e-9));
    }
    // |m - n| = 2: the two orders differ by an x-independent constant, which
    // has zero overlap with every psi_a psi_{a+2} and so extracts identical
    // moments
    const double d1 = pattern_function(0, 2, 0.35) - pattern_function(2, 0, 0.35);
    const double d2 = pattern_function(0, 2, 1.6) - pattern_function(2, 0, 1.6);
    CHECK(d1 == doctest::Approx(d2).epsilon(1e-8));
    CHECK(d1 == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("pattern function biorthogonality for indices <= 6") {
    // integral f_{mn} psi_a psi_b dx = delta_{ma} delta_{nb} on each diagonal
    // m - n = a - b; the theta integral handles cross-diagonal terms.
    // Full symmetric grid assembled by parity from one batched sweep per n.
    const double h = 1e-3, x_hi = 9.0;
    const int top = 6;
    const std::size_t half = static_cast<std::size_t>(x_hi / h) + 1;
    const std::size_t nx = 2 * half - 1;
    auto mirror = [half, nx](const std::vector<double>& pos, double parity) {
        std::vector<double> full(nx);
        for (std::size_t i = 0; i < half; ++i) {
            full[half - 1 + i] = pos[i];
            full[half - 1 - i] = parity * pos[i];
        }
        return full;
    };
    std::vector<std::vector<double>> psi(top + 1), psid(top + 1), phi(top + 1), phid(top + 1);
    for (int n = 0; n <= top; ++n) {
        std::vector<double> pv(half), pd(half), iv, id;
        for (std::size_t i = 0; i < half; ++i) {
            const double x = h * static_cast<double>(i);
            pv[i] = regular_wavefunction(n, x);
            pd[i] = regular_wavefunction_derivative(n, x);
        }
        detail::irregular_on_grid(n, h, half, iv, id);
        const double sp = (n % 2 == 0) ? 1.0 : -1.0;
        psi[static_cast<std::size_t>(n)] = mirror(pv, sp);
        psid[static_cast<std::size_t>(n)] = mirror(pd, -sp);
        phi[static_cast<std::size_t>(n)] = mirror(iv, -sp);
        phid[static_cast<std::size_t>(n)] = mirror(id, sp);
    }
    for (int m = 0; m <= top; ++m) {
        for (int n = 0; n <= top; ++n) {
            for (int a = 0; a <= top; ++a) {
                const int b = a - (m - n);
                if (b < 0 || b > top) continue;
                double s = 0.0;
                for (std::size_t i = 1; i + 1 < nx; ++i) {
                    const double f = psid[static_cast<std::size_t>(m)][i] *
                                         phi[static_cast<std::size_t>(n)][i] +
                                     psi[static_cast<std::size_t>(m)][i] *
                                         phid[static_cast<std::size_t>(n)][i];
                    s += f * psi[static_cast<std::size_t>(a)][i] *
                         psi[static_cast<std::size_t>(b)][i];
                }
                s *= h;
                const double want = (a == m && b == n) ? 1.0 : 0.0;
                INFO("m=", m, " n=", n, " a=", a, " b=", b);
                CHECK(std::abs(s - want) < 1e-6);
            }
        }
    }
}

TEST_CASE("negative indices are rejected") {
    CHECK_THROWS_AS(regular_wavefunction(-1, 0.0), DomainError);
    CHECK_THROWS_AS(irregular_wavefunction(-2, 0.0), DomainError);
    CHECK_THROWS_AS(pattern_function(-1, 0, 0.0), DomainError);
}
